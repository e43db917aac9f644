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

#include <cmath>

#include "doctest.h"

#include "coagfrag/error.hpp"
#include "coagfrag/quadrature.hpp"
#include "coagfrag/rng.hpp"
#include "coagfrag/zeta.hpp"

using namespace coagfrag;

TEST_CASE("parse and print") {
  CHECK(ZetaSpec::parse("zero") == ZetaSpec::zero());
  CHECK(ZetaSpec::parse("const:0") == ZetaSpec::zero());
  CHECK(ZetaSpec::parse("const:1.5") == ZetaSpec::constant(1.5));
  CHECK(ZetaSpec::parse("gamma:2") == ZetaSpec::gamma(2.0));
  CHECK(ZetaSpec::parse("gamma:2+gamma:0.5") == ZetaSpec::gamma(2.0).plus_gamma(0.5));
  const ZetaSpec e = ZetaSpec::parse("empirical:0/0.25,2/0.75");
  CHECK(e.kind == ZetaSpec::Kind::empirical);
  CHECK(e.table.size() == 2);
  for (const char* text : {"zero", "const:2.5", "gamma:0.3", "empirical:1/0.5,3/0.5",
                           "const:1+gamma:2"}) {
    const ZetaSpec z = ZetaSpec::parse(text);
    CHECK(ZetaSpec::parse(z.to_string()) == z);
  }
}

TEST_CASE("invalid specifications") {
  CHECK_THROWS_AS(ZetaSpec::parse("const:-1"), ConfigError);
  CHECK_THROWS_AS(ZetaSpec::parse("gamma:0"), ConfigError);
  CHECK_THROWS_AS(ZetaSpec::parse("poisson:1"), ConfigError);
  CHECK_THROWS_AS(ZetaSpec::parse("empirical:1/0.3"), ConfigError);
  CHECK_THROWS_AS(ZetaSpec::parse("const:abc"), ConfigError);
  CHECK_THROWS_AS(ZetaSpec::zero().plus_gamma(0.0), ConfigError);
}

TEST_CASE("zero detection") {
  CHECK(ZetaSpec::zero().is_zero());
  CHECK_FALSE(ZetaSpec::zero().plus_gamma(1.0).is_zero());
  CHECK_FALSE(ZetaSpec::constant(1.0).is_zero());
}

TEST_CASE("sample moments") {
  Rng rng(11, 0);
  const int n = 100000;
  double sg = 0.0, se = 0.0, ss = 0.0;
  const ZetaSpec g = ZetaSpec::gamma(2.0);
  const ZetaSpec e = ZetaSpec::parse("empirical:1/0.25,3/0.75");
  const ZetaSpec s = ZetaSpec::constant(1.0).plus_gamma(0.5);
  for (int i = 0; i < n; ++i) {
    sg += sample_zeta(g, rng);
    se += sample_zeta(e, rng);
    ss += sample_zeta(s, rng);
  }
  CHECK(std::abs(sg / n - 2.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(se / n - 2.5) < 5.0 * std::sqrt(0.75 / n));
  CHECK(std::abs(ss / n - 1.5) < 5.0 * std::sqrt(0.5 / n));
  CHECK(sample_zeta(ZetaSpec::constant(4.0), rng) == 4.0);
  CHECK(sample_zeta(ZetaSpec::zero(), rng) == 0.0);
}

TEST_CASE("exponential moment closed forms") {
  const double c = 0.7, p = 1.0 / 0.3;
  CHECK(log_expect_exp_zeta_minus_power(ZetaSpec::zero(), c, p) == 0.0);
  CHECK(log_expect_exp_zeta_minus_power(ZetaSpec::constant(1.3), c, p) ==
        doctest::Approx(1.3 - c * std::pow(1.3, p)));

  // E[exp(Z - c Z^p)] for Z ~ Gamma(k) by quadrature.
  for (double k : {0.5, 2.0, 6.0}) {
    CAPTURE(k);
    auto integrand = [&](double y) {
      return std::exp((k - 1.0) * std::log(y) - c * std::pow(y, p) - std::lgamma(k));
    };
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-14;
    cfg.rel_tol = 1e-12;
    const double q = integrate_piecewise(integrand, {0.0, 0.5, 1.0, 2.0, 4.0, 12.0}, cfg).value;
    CHECK(log_expect_exp_zeta_minus_power(ZetaSpec::gamma(k), c, p) ==
          doctest::Approx(std::log(q)).epsilon(1e-9));
  }

  const ZetaSpec e = ZetaSpec::parse("empirical:0.5/0.4,2/0.6");
  const double direct = 0.4 * std::exp(0.5 - c * std::pow(0.5, p)) +
                        0.6 * std::exp(2.0 - c * std::pow(2.0, p));
  CHECK(log_expect_exp_zeta_minus_power(e, c, p) == doctest::Approx(std::log(direct)));
  CHECK_THROWS_AS(
      log_expect_exp_zeta_minus_power(ZetaSpec::gamma(1.0).plus_gamma(1.0), c, p),
      ConfigError);
}
