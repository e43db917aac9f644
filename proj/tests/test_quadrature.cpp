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

using namespace coagfrag;

TEST_CASE("smooth integrands") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(x); }, -1.0, 2.0).value ==
        doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("endpoint singularity converges") {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.error < 1e-7);
}

TEST_CASE("piecewise breaks and infinite range") {
  auto kink = [](double x) { return std::abs(x - 0.3); };
  const auto r = integrate_piecewise(kink, {0.0, 0.3, 1.0});
  CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-13));
  const auto inf = integrate_to_infinity([](double x) { return std::exp(-x); }, 1.0);
  CHECK(inf.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("budget exhaustion is a numeric error") {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-15;
  cfg.rel_tol = 1e-15;
  cfg.max_panels = 16;
  auto osc = [](double x) { return std::sin(200.0 * x * x); };
  CHECK_THROWS_AS(integrate(osc, 0.0, 10.0, cfg), NumericError);
  try {
    integrate(osc, 0.0, 10.0, cfg);
  } catch (const NumericError& e) {
    CHECK(e.achieved() > 0.0);
  }
}

TEST_CASE("invalid configuration") {
  QuadratureConfig cfg;
  cfg.abs_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.max_panels = 3;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}
