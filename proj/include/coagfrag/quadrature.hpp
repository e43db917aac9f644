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

#include <functional>
#include <vector>

namespace coagfrag {

/// Tolerances for adaptive quadrature. Integration stops once the estimated
/// error is below max(abs_tol, rel_tol * |integral|).
struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_panels = 2000;

  /// Throws DomainError unless tolerances are positive and max_panels >= 16.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature on a finite interval. The panel
/// with the largest error estimate is bisected until the tolerance is met.
/// Throws NumericError carrying the achieved error if max_panels is reached.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg = {},
                           int initial_panels = 16);

/// Same as integrate, with the initial panels given by sorted breakpoints.
/// Used when the caller knows where the integrand varies on small scales.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     const std::vector<double>& breaks,
                                     const QuadratureConfig& cfg = {});

/// Integral over [a, inf) through the map x = a + s / (1 - s).
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f,
                                       double a,
                                       const QuadratureConfig& cfg = {});

}  // namespace coagfrag
