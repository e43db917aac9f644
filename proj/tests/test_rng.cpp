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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"

#include "coagfrag/rng.hpp"
#include "coagfrag/stats.hpp"

using namespace coagfrag;

TEST_CASE("philox known answers") {
  using B = std::array<std::uint32_t, 4>;
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) ==
        B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}) ==
        B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}) ==
        B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams replay and separate") {
  Rng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);

  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const SeedStream s = derive_stream({5, 9}, t);
    seen.insert({s.seed, s.stream_id});
  }
  CHECK(seen.size() == 100);
  CHECK(derive_stream({5, 9}, 1) == derive_stream({5, 9}, 1));
}

TEST_CASE("uniform stays inside the open interval") {
  Rng rng(1, 0);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("below is uniform on its range") {
  Rng rng(2, 0);
  std::vector<double> counts(7, 0.0);
  for (int i = 0; i < 70000; ++i) counts[rng.below(7)] += 1.0;
  const auto c = chisq_goodness(counts, std::vector<double>(7, 1.0 / 7.0));
  CHECK(c.p_value > 1e-3);
}

TEST_CASE("gamma variates follow the gamma CDF") {
  for (double shape : {0.05, 0.3, 1.0, 2.5, 40.0}) {
    CAPTURE(shape);
    Rng rng(3, static_cast<std::uint64_t>(shape * 100));
    std::vector<double> x(20000);
    for (auto& v : x) v = rng.gamma(shape);
    const auto ks = ks_one_sample(x, [&](double v) {
      return v <= 0.0 ? 0.0 : boost::math::gamma_p(shape, v);
    });
    CHECK(ks.p_value > 1e-3);
  }
}

TEST_CASE("log_gamma resolves tiny shapes") {
  Rng rng(4, 0);
  const double shape = 0.002;
  std::vector<double> x(20000);
  for (auto& v : x) v = rng.log_gamma(shape);
  // P(log G <= y) = P(G <= e^y), which is e^(k y) / Gamma(k + 1) to first
  // order once e^y is tiny.
  const auto ks = ks_one_sample(x, [&](double y) {
    if (y < -30.0) return std::exp(shape * y - std::lgamma(shape + 1.0));
    return boost::math::gamma_p(shape, std::exp(y));
  });
  CHECK(ks.p_value > 1e-3);
  CHECK(*std::min_element(x.begin(), x.end()) < -700.0);
}

TEST_CASE("beta variates follow the beta CDF") {
  for (auto [a, b] : {std::pair{0.5, 0.5}, {0.1, 3.0}, {4.0, 0.2}, {2.0, 5.0}}) {
    CAPTURE(a);
    CAPTURE(b);
    Rng rng(5, static_cast<std::uint64_t>(a * 10 + b));
    std::vector<double> x(20000);
    for (auto& v : x) v = rng.beta(a, b);
    const auto ks = ks_one_sample(x, [&](double v) {
      if (v <= 0.0) return 0.0;
      if (v >= 1.0) return 1.0;
      return boost::math::ibeta(a, b, v);
    });
    CHECK(ks.p_value > 1e-3);
  }
}

TEST_CASE("exponential and normal moments") {
  Rng rng(6, 0);
  const int n = 100000;
  double se = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    se += rng.exponential();
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(std::abs(se / n - 1.0) < 5.0 / std::sqrt(n));
  CHECK(std::abs(sn / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(sn2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}
