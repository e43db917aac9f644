/*
 * Copyright 2026 The coagfrag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coagfrag/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "coagfrag/error.hpp"

namespace coagfrag {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod_sum = fc * kWgk[7];
  double gauss_sum = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double s = f(center - dx) + f(center + dx);
    kronrod_sum += kWgk[j] * s;
    if (j % 2 == 1) gauss_sum += kWg[j / 2] * s;
  }
  return {a, b, kronrod_sum * half,
          std::abs((kronrod_sum - gauss_sum) * half)};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_panels < 16) {
    throw DomainError("quadrature max_panels must be at least 16");
  }
}

QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     const std::vector<double>& breaks,
                                     const QuadratureConfig& cfg) {
  cfg.validate();
  if (breaks.size() < 2 || breaks.front() == breaks.back()) return {};
  const double a = breaks.front(), b = breaks.back();

  std::priority_queue<Panel> queue;
  double total = 0.0, total_error = 0.0;
  int panels = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = kronrod(f, breaks[i], breaks[i + 1]);
    total += p.value;
    total_error += p.error;
    queue.push(p);
    ++panels;
  }

  auto converged = [&] {
    return total_error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  };
  while (!converged()) {
    if (panels >= cfg.max_panels) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b
          << "]: achieved error " << total_error << " with " << panels
          << " panels";
      throw NumericError(msg.str(), total_error);
    }
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in floating point.
      std::ostringstream msg;
      msg << "quadrature panel collapsed near " << mid
          << ": achieved error " << total_error;
      throw NumericError(msg.str(), total_error);
    }
    const Panel left = kronrod(f, worst.a, mid);
    const Panel right = kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  // Recompute the sums to shed accumulated cancellation.
  double value = 0.0, error = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  return {value, error, panels};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg,
                           int initial_panels) {
  cfg.validate();
  if (a == b) return {};
  initial_panels = std::clamp(initial_panels, 1, cfg.max_panels);
  std::vector<double> breaks(initial_panels + 1);
  for (int i = 0; i <= initial_panels; ++i) {
    breaks[i] = a + (b - a) * static_cast<double>(i) / initial_panels;
  }
  breaks.back() = b;
  return integrate_piecewise(f, breaks, cfg);
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f,
                                       double a, const QuadratureConfig& cfg) {
  auto mapped = [&](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double x = a + s / one_minus;
    const double v = f(x) / (one_minus * one_minus);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, cfg);
}

}  // namespace coagfrag
