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

#include "coagfrag/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "coagfrag/error.hpp"

namespace coagfrag {

namespace {

constexpr double kPi = std::numbers::pi;
// Beyond this value of A0 * z the leading Laplace term is accurate to about
// 1e-8 relative, while quadrature suffers from cancellation in A - A0.
constexpr double kAsymptoticZ = 1e8;

// log A as a function of the distance v from one of the endpoints, to keep
// full relative precision near u = pi.
double log_a_near_zero(double alpha, double u) {
  const double b = 1.0 - alpha;
  return (alpha * std::log(std::sin(alpha * u)) +
          b * std::log(std::sin(b * u)) - std::log(std::sin(u))) /
         b;
}

double log_a_near_pi(double alpha, double v) {
  const double b = 1.0 - alpha;
  return (alpha * std::log(std::sin(alpha * (kPi - v))) +
          b * std::log(std::sin(b * (kPi - v))) - std::log(std::sin(v))) /
         b;
}

// Breakpoints 0, h/8, h/4, ..., doubling until `end`.
std::vector<double> geometric_breaks(double h, double end) {
  h = std::min(h, end);
  std::vector<double> breaks{0.0};
  for (double x = h / 8.0; x < end; x *= 2.0) breaks.push_back(x);
  breaks.push_back(end);
  return breaks;
}

struct Halves {
  std::vector<double> low, high;
};

// Integration panels for integrands of the form phi(A(u)) exp(-(A - A0) z):
// near u = 0 the exponent varies on the scale 1/sqrt(A0 z), near u = pi the
// integrand lives where A ~ 1/z.
Halves zolotarev_breaks(double alpha, double a0, double z) {
  const double h0 = 1.0 / std::sqrt(std::max(a0 * z, 1e-300));
  const double hpi = std::sin(alpha * kPi) * std::pow(z, 1.0 - alpha);
  return {geometric_breaks(std::max(h0, 1e-12), kPi / 2),
          geometric_breaks(std::max(hpi, 1e-300), kPi / 2)};
}

void require_positive(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    std::ostringstream msg;
    msg << what << " requires a positive finite argument, got " << t;
    throw DomainError(msg.str());
  }
}

// Gamma(a, x) for any real a and x >= 1 by the Lentz continued fraction.
double upper_gamma_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x)) * h;
}

// Leading terms of the convergent large-t expansion
// f(t) = (1/pi) sum_k (-1)^(k+1) Gamma(k alpha + 1)/k! sin(k pi alpha) t^(-k alpha - 1),
// returned as the k-th term's coefficient times t^(-k alpha); with
// t^alpha > 1e7 four terms are exact to double precision.
constexpr double kSeriesTAlpha = 1e7;

double large_t_log_density(double alpha, double t) {
  const double x = std::pow(t, -alpha);
  double sum = 0.0, xk = 1.0, fact = 1.0;
  for (int k = 1; k <= 4; ++k) {
    xk *= x;
    fact *= k;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * std::tgamma(k * alpha + 1.0) / fact *
           std::sin(k * kPi * alpha) * xk;
  }
  return std::log(sum / kPi) - std::log(t);
}

double large_t_survival(double alpha, double t) {
  const double x = std::pow(t, -alpha);
  double sum = 0.0, xk = 1.0, fact = 1.0;
  for (int k = 1; k <= 4; ++k) {
    xk *= x;
    fact *= k;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * std::tgamma(k * alpha) / fact * std::sin(k * kPi * alpha) *
           xk;
  }
  return sum / kPi;
}

}  // namespace

StableIndex::StableIndex(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "stable index must lie strictly inside (0, 1), got " << alpha;
    throw DomainError(msg.str());
  }
}

double gg_laplace_exponent(StableIndex alpha, double omega) {
  if (!(omega >= 0.0)) {
    throw DomainError("gg_laplace_exponent requires omega >= 0");
  }
  return std::expm1(alpha.value() * std::log1p(omega));
}

double zolotarev_a0(StableIndex alpha) {
  const double a = alpha.value();
  return std::pow(a, a / (1.0 - a)) * (1.0 - a);
}

double zolotarev_a(StableIndex alpha, double u) {
  const double a = alpha.value();
  if (u <= 1e-150) return zolotarev_a0(alpha);
  if (u <= kPi / 2) return std::exp(log_a_near_zero(a, u));
  return std::exp(log_a_near_pi(a, kPi - u));
}

double stable_log_density(StableIndex alpha, double t,
                          const QuadratureConfig& cfg) {
  require_positive(t, "stable_density");
  const double a = alpha.value();
  const double b = 1.0 - a;
  if (a * std::log(t) > std::log(kSeriesTAlpha)) {
    return large_t_log_density(a, t);
  }
  const double a0 = zolotarev_a0(alpha);
  const double z = std::exp(-(a / b) * std::log(t));
  if (!std::isfinite(a0 * z)) return -std::numeric_limits<double>::infinity();
  if (a0 * z > kAsymptoticZ) {
    // Laplace method: log A(u) = log A0 + alpha u^2 / 2 + O(u^4).
    return std::log(a / b) - std::log(t) / b - a0 * z +
           std::log(a0 * std::sqrt(kPi / (2.0 * a0 * a * z)) / kPi);
  }
  const auto br = zolotarev_breaks(a, a0, z);

  auto integrand = [&](double log_a) {
    const double av = std::exp(log_a);
    return std::exp(log_a - std::max(av - a0, 0.0) * z);
  };
  const double low =
      integrate_piecewise(
          [&](double u) {
            return u <= 0.0 ? a0 : integrand(log_a_near_zero(a, u));
          },
          br.low, cfg)
          .value;
  const double high =
      integrate_piecewise(
          [&](double v) {
            return v <= 0.0 ? 0.0 : integrand(log_a_near_pi(a, v));
          },
          br.high, cfg)
          .value;
  return std::log(a / b) - std::log(t) / b - a0 * z +
         std::log((low + high) / kPi);
}

double stable_density(StableIndex alpha, double t,
                      const QuadratureConfig& cfg) {
  return std::exp(stable_log_density(alpha, t, cfg));
}

double stable_cdf(StableIndex alpha, double t, const QuadratureConfig& cfg) {
  require_positive(t, "stable_cdf");
  const double a = alpha.value();
  const double b = 1.0 - a;
  if (a * std::log(t) > std::log(kSeriesTAlpha)) {
    return 1.0 - large_t_survival(a, t);
  }
  const double a0 = zolotarev_a0(alpha);
  const double z = std::exp(-(a / b) * std::log(t));
  if (!std::isfinite(a0 * z)) return 0.0;
  if (a0 * z > kAsymptoticZ) {
    return std::exp(-a0 * z) * std::sqrt(kPi / (2.0 * a0 * a * z)) / kPi;
  }
  const auto br = zolotarev_breaks(a, a0, z);
  auto integrand = [&](double log_a) {
    return std::exp(-std::max(std::exp(log_a) - a0, 0.0) * z);
  };
  const double low =
      integrate_piecewise(
          [&](double u) {
            return u <= 0.0 ? 1.0 : integrand(log_a_near_zero(a, u));
          },
          br.low, cfg)
          .value;
  const double high =
      integrate_piecewise(
          [&](double v) {
            return v <= 0.0 ? 0.0 : integrand(log_a_near_pi(a, v));
          },
          br.high, cfg)
          .value;
  return std::exp(-a0 * z) * (low + high) / kPi;
}

double gg_levy_tail(StableIndex alpha, double x) {
  require_positive(x, "gg_levy_tail");
  const double a = alpha.value();
  if (x < 1.0) {
    return std::exp(-a * std::log(x) - x) / std::tgamma(1.0 - a) -
           boost::math::gamma_q(1.0 - a, x);
  }
  return a / std::tgamma(1.0 - a) * upper_gamma_cf(-a, x);
}

double gg_levy_tail_inverse(StableIndex alpha, double level,
                            double upper_hint, double rel_tol) {
  require_positive(level, "gg_levy_tail_inverse");
  const double a = alpha.value();
  const double g1 = std::tgamma(1.0 - a);
  const double log_level = std::log(level);

  // The stable tail dominates, so its inverse bounds the root from above.
  double hi = stable_levy_tail_inverse(alpha, level);
  if (upper_hint > 0.0) hi = std::min(hi, upper_hint);
  double lo = hi;
  int halvings = 0;
  while (gg_levy_tail(alpha, lo) < level) {
    hi = lo;
    lo *= 0.5;
    if (++halvings > 4000 || lo == 0.0) {
      std::ostringstream msg;
      msg << "gg_levy_tail_inverse could not bracket level " << level;
      throw NumericError(msg.str(), lo);
    }
  }
  if (lo == hi) return lo;

  // Newton on log tail against log x, falling back to bisection whenever the
  // step leaves the bracket.
  double ylo = std::log(lo), yhi = std::log(hi);
  double y = 0.5 * (ylo + yhi);
  for (int it = 0; it < 200; ++it) {
    const double x = std::exp(y);
    const double tail = gg_levy_tail(alpha, x);
    const double f = std::log(tail) - log_level;
    if (f > 0.0) ylo = y; else yhi = y;
    const double slope = -a / g1 * std::exp(-a * y - x) / tail;
    double next = y - f / slope;
    if (!(next > ylo && next < yhi)) next = 0.5 * (ylo + yhi);
    if (std::abs(next - y) <= rel_tol || yhi - ylo <= rel_tol) {
      return std::exp(next);
    }
    y = next;
  }
  throw NumericError("gg_levy_tail_inverse did not converge", yhi - ylo);
}

double gg_small_jump_mean(StableIndex alpha, double cutoff) {
  if (!(cutoff > 0.0)) return 0.0;
  const double a = alpha.value();
  return a * boost::math::gamma_p(1.0 - a, cutoff);
}

double gg_small_jump_second_moment(StableIndex alpha, double cutoff) {
  if (!(cutoff > 0.0)) return 0.0;
  const double a = alpha.value();
  return a * (1.0 - a) * boost::math::gamma_p(2.0 - a, cutoff);
}

double stable_levy_tail(StableIndex alpha, double x) {
  require_positive(x, "stable_levy_tail");
  const double a = alpha.value();
  return std::exp(-a * std::log(x)) / std::tgamma(1.0 - a);
}

double stable_levy_tail_inverse(StableIndex alpha, double level) {
  require_positive(level, "stable_levy_tail_inverse");
  const double a = alpha.value();
  return std::exp(-std::log(std::tgamma(1.0 - a) * level) / a);
}

double stable_small_jump_mean(StableIndex alpha, double cutoff) {
  if (!(cutoff > 0.0)) return 0.0;
  const double a = alpha.value();
  return a * std::pow(cutoff, 1.0 - a) / std::tgamma(2.0 - a);
}

double stable_small_jump_second_moment(StableIndex alpha, double cutoff) {
  if (!(cutoff > 0.0)) return 0.0;
  const double a = alpha.value();
  return a * std::pow(cutoff, 2.0 - a) / ((2.0 - a) * std::tgamma(1.0 - a));
}

StableDensityTable::StableDensityTable(StableIndex alpha, double step)
    : alpha_(alpha.value()), a0_(zolotarev_a0(alpha)), step_(step) {
  const double b = 1.0 - alpha_;
  const double span = std::log(1e6);
  w_lo_ = -(b / alpha_) * span;
  const double w_hi = span / alpha_;
  const int n = static_cast<int>(std::ceil((w_hi - w_lo_) / step_)) + 1;
  g_.resize(n);
  int best = 0;
  double best_log_f = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double w = w_lo_ + i * step_;
    const double t = std::exp(w);
    const double log_f = stable_log_density(alpha, t);
    g_[i] = log_f + a0_ * std::exp(-(alpha_ / b) * w);
    if (log_f > best_log_f) {
      best_log_f = log_f;
      best = i;
    }
  }
  // Golden-section refinement of the mode in t.
  double lo = std::exp(w_lo_ + std::max(best - 1, 0) * step_);
  double hi = std::exp(w_lo_ + std::min(best + 1, n - 1) * step_);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = log_density(x1), f2 = log_density(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = log_density(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = log_density(x1);
    }
  }
  mode_ = 0.5 * (lo + hi);
}

const StableDensityTable& StableDensityTable::get(StableIndex alpha) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<StableDensityTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[alpha.value()];
  if (!slot) slot = std::make_unique<StableDensityTable>(alpha);
  return *slot;
}

double StableDensityTable::smooth_part(double w) const {
  const int n = static_cast<int>(g_.size());
  const double pos = (w - w_lo_) / step_;
  if (pos <= 0.0) return g_[0] + pos * (g_[1] - g_[0]);
  if (pos >= n - 1) {
    return g_[n - 1] + (pos - (n - 1)) * (g_[n - 1] - g_[n - 2]);
  }
  const int i = static_cast<int>(pos);
  const double s = pos - i;
  const double p1 = g_[i], p2 = g_[i + 1];
  const double p0 = i > 0 ? g_[i - 1] : 2 * p1 - p2;
  const double p3 = i + 2 < n ? g_[i + 2] : 2 * p2 - p1;
  // Catmull-Rom.
  return p1 + 0.5 * s *
                  (p2 - p0 +
                   s * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                        s * (3 * (p1 - p2) + p3 - p0)));
}

double StableDensityTable::log_density(double t) const {
  if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
  const double w = std::log(t);
  return smooth_part(w) - a0_ * std::exp(-(alpha_ / (1.0 - alpha_)) * w);
}

}  // namespace coagfrag
