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

#include <vector>

#include "coagfrag/quadrature.hpp"

namespace coagfrag {

/// Stability index strictly inside (0, 1). Implicitly constructible from a
/// double so that numeric literals can be passed directly; the constructor
/// throws DomainError at or beyond the endpoints.
class StableIndex {
 public:
  StableIndex(double alpha);  // NOLINT(google-explicit-constructor)
  double value() const { return alpha_; }
  operator double() const { return alpha_; }  // NOLINT

 private:
  double alpha_;
};

/// (1 + omega)^alpha - 1.
double gg_laplace_exponent(StableIndex alpha, double omega);

/// Zolotarev function A(u) on (0, pi) and its limit at u = 0. The positive
/// stable law is (A(U)/W)^((1-alpha)/alpha) with U uniform on (0, pi) and W
/// standard exponential.
double zolotarev_a(StableIndex alpha, double u);
double zolotarev_a0(StableIndex alpha);

/// Density of the positive stable law with Laplace transform exp(-omega^alpha).
double stable_density(StableIndex alpha, double t,
                      const QuadratureConfig& cfg = {});
/// log of stable_density, finite far into the left tail where the density
/// itself underflows.
double stable_log_density(StableIndex alpha, double t,
                          const QuadratureConfig& cfg = {});
double stable_cdf(StableIndex alpha, double t,
                  const QuadratureConfig& cfg = {});

/// Tail of the generalized gamma Levy measure
/// alpha / Gamma(1 - alpha) * u^(-alpha - 1) * exp(-u).
double gg_levy_tail(StableIndex alpha, double x);

/// Solves gg_levy_tail(alpha, x) = level. `upper_hint` is an optional known
/// upper bound on the root (the previous jump when inverting an increasing
/// sequence of levels).
double gg_levy_tail_inverse(StableIndex alpha, double level,
                            double upper_hint = 0.0, double rel_tol = 1e-12);

/// First and second moments of the generalized gamma Levy measure restricted
/// to (0, cutoff), per unit time.
double gg_small_jump_mean(StableIndex alpha, double cutoff);
double gg_small_jump_second_moment(StableIndex alpha, double cutoff);

/// Same quantities for the stable Levy measure alpha/Gamma(1-alpha) u^(-alpha-1).
double stable_levy_tail(StableIndex alpha, double x);
double stable_levy_tail_inverse(StableIndex alpha, double level);
double stable_small_jump_mean(StableIndex alpha, double cutoff);
double stable_small_jump_second_moment(StableIndex alpha, double cutoff);

/// Tabulated log stable density for repeated evaluation inside samplers.
/// Stores log f(e^w) + A0 * z(w) on a uniform grid in w = log t, where
/// z = t^(-alpha/(1-alpha)); that sum is smooth and close to linear in both
/// tails, so cubic interpolation inside and linear extrapolation outside the
/// grid stay accurate.
class StableDensityTable {
 public:
  explicit StableDensityTable(StableIndex alpha, double step = 0.02);

  /// Shared instance per alpha, built on first use. Thread-safe.
  static const StableDensityTable& get(StableIndex alpha);

  double log_density(double t) const;
  double alpha() const { return alpha_; }
  /// Mode of the density, located on the grid and refined by golden section.
  double mode() const { return mode_; }

 private:
  double smooth_part(double w) const;

  double alpha_;
  double a0_;
  double w_lo_, step_;
  std::vector<double> g_;
  double mode_ = 0.0;
};

}  // namespace coagfrag
