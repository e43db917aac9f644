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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "coagfrag/rng.hpp"

namespace coagfrag {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Exact two-sample Kolmogorov-Smirnov statistic by sorted merge (ties are
/// stepped over together) with the asymptotic Kolmogorov p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> a,
                       const std::function<double(double)>& cdf);

/// P(K > sqrt(n_eff) D) with Stephens' small-sample correction.
double kolmogorov_pvalue(double d, double n_eff);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;
};

/// Two-sample homogeneity test over categorical counts. Categories whose
/// expected count falls below min_expected in either sample are pooled.
ChiSquareResult chisq_homogeneity(const std::map<std::int64_t, double>& a,
                                  const std::map<std::int64_t, double>& b,
                                  double min_expected = 5.0);

/// Goodness of fit of counts against known probabilities, with the same
/// pooling rule.
ChiSquareResult chisq_goodness(const std::vector<double>& counts,
                               const std::vector<double>& probs,
                               double min_expected = 5.0);

double chisq_survival(double x, int dof);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);

/// Standard error of fn(sample) from nonparametric bootstrap resamples.
double bootstrap_se(const std::vector<double>& v,
                    const std::function<double(const std::vector<double>&)>& fn,
                    int resamples, Rng& rng);

double pearson(const std::vector<double>& x, const std::vector<double>& y);
/// Correlation of the residuals of x and y after least-squares regression
/// on z.
double partial_correlation(const std::vector<double>& x,
                           const std::vector<double>& y,
                           const std::vector<double>& z);

/// Two-sided normal p-value of a z-score.
double normal_two_sided_p(double z);

}  // namespace coagfrag
