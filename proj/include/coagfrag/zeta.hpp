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

#include <string>
#include <utility>
#include <vector>

#include "coagfrag/rng.hpp"

namespace coagfrag {

/// Law of the nonnegative mixing variable zeta. An optional independent
/// Gamma(gamma_shift) summand expresses laws such as gamma(1/alpha) + zeta.
struct ZetaSpec {
  enum class Kind { zero, constant, gamma, empirical };

  Kind kind = Kind::zero;
  /// Constant value b, or gamma shape.
  double param = 0.0;
  /// (value, weight) pairs for the empirical kind.
  std::vector<std::pair<double, double>> table;
  double gamma_shift = 0.0;

  static ZetaSpec zero() { return {}; }
  static ZetaSpec constant(double b);
  static ZetaSpec gamma(double shape);
  static ZetaSpec empirical(std::vector<std::pair<double, double>> table);

  /// This law plus an independent Gamma(shape) variable.
  ZetaSpec plus_gamma(double shape) const;

  /// True when every draw is exactly zero.
  bool is_zero() const;
  /// Throws ConfigError on an invalid specification.
  void validate() const;

  /// Textual form: "zero", "const:B", "gamma:K", "empirical:v/w,v/w,...",
  /// each optionally followed by "+gamma:K". "const:0" parses as zero.
  std::string to_string() const;
  static ZetaSpec parse(const std::string& text);

  friend bool operator==(const ZetaSpec&, const ZetaSpec&) = default;
};

double sample_zeta(const ZetaSpec& zeta, Rng& rng);

/// log E[exp(zeta - c * zeta^p)] for c > 0, p > 1. Available in closed form
/// for the zero, constant, gamma and empirical kinds without a shift.
double log_expect_exp_zeta_minus_power(const ZetaSpec& zeta, double c,
                                       double p);

}  // namespace coagfrag
