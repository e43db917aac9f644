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
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "coagfrag/duality_lab.hpp"
#include "coagfrag/error.hpp"
#include "coagfrag/parallel.hpp"
#include "coagfrag/samplers.hpp"
#include "coagfrag/stats.hpp"

using namespace coagfrag;

TEST_CASE("statistic names parse back") {
  for (const char* s : {"P1", "P2", "sizebiased_pick", "K50", "K7", "diversity", "bridge@0.25"}) {
    CHECK(Statistic::parse(s).name() == s);
  }
  CHECK(Statistic::parse("Kn(20)").n == 20);
  CHECK(Statistic::parse("bridge_value_at(0.3)").y == doctest::Approx(0.3));
  CHECK(Statistic::parse("K50").categorical());
  CHECK_THROWS_AS(Statistic::parse("P9"), ConfigError);
  CHECK_THROWS_AS(Statistic::parse("bridge@2"), ConfigError);
  CHECK(default_panel().size() == 4);
}

TEST_CASE("statistics on a fixed partition") {
  const MassPartition p = MassPartition::ranked({0.5, 0.3}, 0.2);
  Rng rng(91, 0);
  const StatisticContext ctx;
  CHECK(evaluate_statistic(Statistic::parse("P1"), p, ctx, rng) == 0.5);
  CHECK(evaluate_statistic(Statistic::parse("P2"), p, ctx, rng) == 0.3);
  const double k = evaluate_statistic(Statistic::parse("K10"), p, ctx, rng);
  CHECK(k >= 1.0);
  CHECK(k <= 10.0);
  // Mean bridge value is y.
  double s = 0.0;
  for (int i = 0; i < 20000; ++i) s += evaluate_statistic(Statistic::parse("bridge@0.3"), p, ctx, rng);
  CHECK(s / 20000 == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("diagram configuration errors") {
  DiagramConfig d;
  d.diagram_id = "pitman_pd";
  d.theta = 1.0;
  CHECK_THROWS_AS(d.validate(), ConfigError);  // delta missing
  for (double bad : {0.0, 1.0, 1.5}) {
    d.delta = bad;
    CHECK_THROWS_AS(d.validate(), ConfigError);
  }
  d.delta = 0.5;
  CHECK_NOTHROW(d.validate());
  d.theta = -0.3;  // needs theta > -alpha delta
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d.diagram_id = "nope";
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d = DiagramConfig{};
  d.diagram_id = "dgm_pd";
  d.theta = 0.5;
  d.direction = "sideways";
  CHECK_THROWS_AS(d.validate(), ConfigError);
  CHECK(list_diagrams().size() == 6);

  RunConfig run;
  run.n_replicas = 0;
  CHECK_THROWS_AS(run.validate(), ConfigError);
  ReplicateControl c;
  c.min_pass = 6;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("small diagram run produces one report per direction and statistic") {
  DiagramConfig d;
  d.diagram_id = "dgm_pd";
  d.alpha = 0.5;
  d.theta = 0.5;
  RunConfig run;
  run.n_replicas = 1500;
  run.n_atoms = 300;
  run.frag.n_child_atoms = 200;
  run.control.n_seeds = 2;
  run.control.min_pass = 1;
  const DualityReport r = run_duality(d, run);
  CHECK(r.tests.size() == 8);
  for (const auto& t : r.tests) {
    CHECK(t.replicates.size() == 2);
    CHECK(t.replicates[1].seed == t.replicates[0].seed + 1);
    CHECK(t.pass);
  }
  std::ostringstream csv;
  write_csv(csv, r.tests);
  std::string line;
  std::istringstream in(csv.str());
  std::getline(in, line);
  CHECK(line == "diagram_id,statistic,stat_value,p_value,pass,seed,N");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("dgm_pd,", 0) == 0);
  }
  CHECK(rows == 16);
  const Json j = to_json(r);
  CHECK(j["tests"].size() == 8);
}

TEST_CASE("broken fragmentation is detected") {
  DiagramConfig d;
  d.diagram_id = "dgm_pd";
  d.alpha = 0.5;
  d.theta = 0.5;
  d.variant = "broken_frag";
  d.direction = "frag";
  RunConfig run;
  run.n_replicas = 4000;
  run.n_atoms = 300;
  run.frag.n_child_atoms = 200;
  run.stats = {Statistic::parse("P1")};
  run.control.n_seeds = 2;
  run.control.min_pass = 1;
  const DualityReport r = run_duality(d, run);
  REQUIRE(r.tests.size() == 1);
  CHECK_FALSE(r.pass());
}

TEST_CASE("scalar sampler comparison") {
  ReplicateControl c;
  c.n_seeds = 3;
  c.min_pass = 2;
  const auto u = [](Rng& r) { return r.uniform(); };
  const auto shifted = [](Rng& r) { return 0.1 + r.uniform(); };
  CHECK(compare_scalar_samplers("u", u, u, 2000, c).pass);
  CHECK_FALSE(compare_scalar_samplers("u", u, shifted, 2000, c).pass);
}

TEST_CASE("Laplace closed form") {
  CHECK(laplace_closed_form(0.6, 0.5, 2.0, 0.3, 0.0, 0.0) == 0.0);
  // y = 1 collapses to the alpha delta exponent of 1 + w1 + w2.
  CHECK(laplace_closed_form(0.6, 0.5, 2.0, 1.0, 0.5, 1.5) ==
        doctest::Approx(2.0 * (std::pow(3.0, 0.3) - 1.0)));
  CHECK(laplace_closed_form(0.6, 0.5, 2.0, 0.0, 0.5, 1.5) ==
        doctest::Approx(2.0 * (std::pow(1.5, 0.3) - 1.0)));
  const TestReport r = check_laplace_identity(0.6, 0.5, 1.0, 0.4, 0.7, 1.3, 3000, 5);
  CHECK(r.method == "mc_z");
  CHECK(r.pass);
  CHECK(r.extra["closed_form"].get<double>() ==
        doctest::Approx(laplace_closed_form(0.6, 0.5, 1.0, 0.4, 0.7, 1.3)));
}

TEST_CASE("step functions") {
  const StepFunction g{{0.25}, {2.0, 0.5}};
  CHECK_NOTHROW(g.validate());
  CHECK(g(0.1) == 2.0);
  CHECK(g(0.5) == 0.5);
  CHECK(g.integral() == doctest::Approx(0.875));
  CHECK(g.power_mean(0.5) == doctest::Approx(0.25 * std::sqrt(3.0) + 0.75 * std::sqrt(1.5)));
  CHECK_THROWS((StepFunction{{0.5, 0.4}, {1.0, 1.0, 1.0}}).validate());
  CHECK_THROWS((StepFunction{{0.5}, {-1.0, 1.0}}).validate());

  // A constant integrand makes the moment deterministic.
  const StepFunction c{{}, {3.0}};
  const TestReport r = check_vershik_moment(0.6, 0.5, c, 200, 7, 100);
  CHECK(r.pass);
  CHECK(r.stat_value == doctest::Approx(std::pow(4.0, 0.3)));

  Rng rng(92, 0);
  const StepFunction s = StepFunction::random(4, 3.0, rng);
  CHECK(check_vershik_moment(0.6, 0.5, s, 2000, 8, 300).pass);
}

TEST_CASE("T1 given T2 with zero zeta is the delta-stable law") {
  const T1GivenT2Sampler sampler(0.6, 0.5, ZetaSpec::zero(), 1.3);
  CHECK(sampler.normalization() == doctest::Approx(1.0).epsilon(1e-4));
  Rng rng(93, 0);
  std::vector<double> x(10000);
  for (auto& v : x) v = sampler.sample(rng);
  CHECK(ks_one_sample(x, [](double t) {
          return t <= 0.0 ? 0.0 : std::erfc(0.5 / std::sqrt(t));
        }).p_value > 1e-3);
}

TEST_CASE("small transform checks pass") {
  ReplicateControl c;
  c.n_seeds = 2;
  c.min_pass = 1;
  CHECK(check_composition(0.6, 0.5, ZetaSpec::constant(1.0), 0.5, 3000, c).pass);
  CHECK(check_structural_beta(0.5, 3000, c).pass);
  CHECK(check_eppf_paintbox(0.5, 1.0, 4, 20000, 3, 300).pass);
}

TEST_CASE("thread cap and exception propagation") {
  setenv("COAGFRAG_THREADS", "1", 1);
  CHECK(thread_count() == 1);
  unsetenv("COAGFRAG_THREADS");
  CHECK(thread_count() >= 1);
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] = 1; });
  CHECK(std::accumulate(hit.begin(), hit.end(), 0) == 1000);
  CHECK_THROWS_AS(parallel_for(500, [](std::size_t i) {
                    if (i == 321) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
