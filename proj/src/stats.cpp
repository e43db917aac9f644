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

#include "coagfrag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "coagfrag/error.hpp"

namespace coagfrag {

double kolmogorov_pvalue(double d, double n_eff) {
  const double sn = std::sqrt(n_eff);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test needs two samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return {d, kolmogorov_pvalue(d, na * nb / (na + nb))};
}

KsResult ks_one_sample(std::vector<double> a,
                       const std::function<double(double)>& cdf) {
  if (a.empty()) throw DomainError("KS test needs a sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, kolmogorov_pvalue(d, n)};
}

double chisq_survival(double x, int dof) {
  if (dof <= 0) return 1.0;
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

namespace {

// Pools rows (each a vector of per-sample counts) until every row's smallest
// expected count reaches min_expected. Rows are merged from the rarest up.
std::vector<std::vector<double>> pool_rows(
    std::vector<std::vector<double>> rows,
    const std::function<double(const std::vector<double>&)>& min_exp,
    double min_expected) {
  std::sort(rows.begin(), rows.end(), [&](const auto& x, const auto& y) {
    return min_exp(x) > min_exp(y);
  });
  while (rows.size() > 1 && min_exp(rows.back()) < min_expected) {
    auto last = rows.back();
    rows.pop_back();
    for (std::size_t s = 0; s < last.size(); ++s) rows.back()[s] += last[s];
    std::sort(rows.begin(), rows.end(), [&](const auto& x, const auto& y) {
      return min_exp(x) > min_exp(y);
    });
  }
  return rows;
}

}  // namespace

ChiSquareResult chisq_homogeneity(const std::map<std::int64_t, double>& a,
                                  const std::map<std::int64_t, double>& b,
                                  double min_expected) {
  double na = 0.0, nb = 0.0;
  std::map<std::int64_t, std::vector<double>> joined;
  for (const auto& [k, c] : a) {
    joined[k].resize(2, 0.0);
    joined[k][0] += c;
    na += c;
  }
  for (const auto& [k, c] : b) {
    joined[k].resize(2, 0.0);
    joined[k][1] += c;
    nb += c;
  }
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw DomainError("chi-square homogeneity needs two nonempty samples");
  }
  const double n = na + nb;
  auto min_exp = [&](const std::vector<double>& r) {
    const double tot = r[0] + r[1];
    return std::min(tot * na / n, tot * nb / n);
  };
  std::vector<std::vector<double>> rows;
  for (auto& [k, r] : joined) rows.push_back(r);
  rows = pool_rows(std::move(rows), min_exp, min_expected);

  ChiSquareResult res;
  res.bins = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    const double tot = r[0] + r[1];
    const double ea = tot * na / n, eb = tot * nb / n;
    res.statistic += (r[0] - ea) * (r[0] - ea) / ea + (r[1] - eb) * (r[1] - eb) / eb;
  }
  res.dof = res.bins - 1;
  res.p_value = chisq_survival(res.statistic, res.dof);
  return res;
}

ChiSquareResult chisq_goodness(const std::vector<double>& counts,
                               const std::vector<double>& probs,
                               double min_expected) {
  if (counts.size() != probs.size() || counts.empty()) {
    throw DomainError("chi-square goodness needs matching nonempty inputs");
  }
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    rows.push_back({counts[i], probs[i] * n});
  }
  rows = pool_rows(
      std::move(rows), [](const std::vector<double>& r) { return r[1]; },
      min_expected);
  ChiSquareResult res;
  res.bins = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    if (r[1] > 0.0) res.statistic += (r[0] - r[1]) * (r[0] - r[1]) / r[1];
  }
  res.dof = res.bins - 1;
  res.p_value = chisq_survival(res.statistic, res.dof);
  return res;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double bootstrap_se(const std::vector<double>& v,
                    const std::function<double(const std::vector<double>&)>& fn,
                    int resamples, Rng& rng) {
  if (v.empty() || resamples < 2) return 0.0;
  std::vector<double> stats;
  stats.reserve(resamples);
  std::vector<double> buf(v.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& x : buf) x = v[rng.below(v.size())];
    stats.push_back(fn(buf));
  }
  return std::sqrt(variance(stats));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw DomainError("correlation needs paired samples of size >= 3");
  }
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> residuals(const std::vector<double>& x,
                              const std::vector<double>& z) {
  const double mx = mean(x), mz = mean(z);
  double sxz = 0.0, szz = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxz += (x[i] - mx) * (z[i] - mz);
    szz += (z[i] - mz) * (z[i] - mz);
  }
  const double slope = szz > 0.0 ? sxz / szz : 0.0;
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    r[i] = x[i] - mx - slope * (z[i] - mz);
  }
  return r;
}

}  // namespace

double partial_correlation(const std::vector<double>& x,
                           const std::vector<double>& y,
                           const std::vector<double>& z) {
  if (x.size() != z.size() || y.size() != z.size()) {
    throw DomainError("partial correlation needs equal-length inputs");
  }
  return pearson(residuals(x, z), residuals(y, z));
}

double normal_two_sided_p(double z) {
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace coagfrag
