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

// Acceptance runner. With no arguments every criterion runs; otherwise only
// the listed ones. Each sub-check prints an indented detail line and each
// criterion one PASS or FAIL line. The exit status is 1 if any criterion
// fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "coagfrag/duality_lab.hpp"
#include "coagfrag/partitions.hpp"
#include "coagfrag/quadrature.hpp"
#include "coagfrag/special_fn.hpp"

using namespace coagfrag;

namespace {

constexpr double kLevel = 0.01;

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void check(bool ok, const std::string& detail) {
    std::printf("  [%s] %s\n", ok ? "ok" : "FAILED", detail.c_str());
    std::fflush(stdout);
    pass_ = pass_ && ok;
  }

  void report(const TestReport& t, const std::string& label, bool want_pass = true) {
    int good = 0;
    for (const auto& r : t.replicates) good += r.pass;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s %s%s%s: %s median p=%.4g stat=%.6g, %d/%zu replicates pass, %.1fs%s",
                  label.c_str(), t.direction.c_str(), t.direction.empty() ? "" : ":",
                  t.statistic.c_str(), t.method.c_str(), t.p_value, t.stat_value, good,
                  t.replicates.size(), t.runtime_s, want_pass ? "" : " (expected to fail)");
    check(t.pass == want_pass, buf);
  }

  bool finish(int id) const {
    std::printf("%s criterion %d: %s\n", pass_ ? "PASS" : "FAIL", id, title_.c_str());
    std::fflush(stdout);
    return pass_;
  }

 private:
  std::string title_;
  bool pass_ = true;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0,
                double e = 0, double g = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d, e, g);
  return buf;
}

ReplicateControl control(std::uint64_t seed) {
  ReplicateControl c;
  c.seed = seed;
  c.n_seeds = 5;
  c.min_pass = 4;
  c.level = kLevel;
  return c;
}

bool laplace_grid() {
  Criterion c("Laplace transform identity on a 12-point grid, N = 2e5");
  struct Point { double alpha, delta, zeta, y, w1, w2; };
  const std::vector<Point> grid = {
      {0.5, 0.5, 1.0, 0.5, 0.5, 1.0},  {0.3, 0.7, 0.5, 0.25, 1.0, 1.0},
      {0.7, 0.3, 2.0, 0.75, 0.2, 2.0}, {0.6, 0.5, 1.0, 0.1, 2.0, 0.5},
      {0.2, 0.2, 3.0, 0.5, 1.0, 1.0},  {0.8, 0.8, 0.2, 0.9, 0.5, 0.5},
      {0.5, 0.9, 1.0, 0.3, 3.0, 0.1},  {0.9, 0.5, 1.0, 0.6, 0.1, 3.0},
      {0.4, 0.6, 5.0, 0.5, 0.05, 0.05}, {0.6, 0.4, 0.1, 0.4, 5.0, 5.0},
      {0.5, 0.5, 1.0, 0.95, 1.0, 1.0}, {0.5, 0.5, 1.0, 0.05, 1.0, 1.0}};
  std::uint64_t seed = 1000;
  for (const auto& p : grid) {
    const TestReport t =
        check_laplace_identity(p.alpha, p.delta, p.zeta, p.y, p.w1, p.w2, 200000, seed++);
    c.check(t.pass && t.runtime_s <= 60.0,
            fmt("alpha=%g delta=%g zeta=%g y=%g w=(%g,%g): ", p.alpha, p.delta, p.zeta, p.y,
                p.w1, p.w2) +
                fmt("estimate %.8g closed %.8g z=%.3g, %.1fs", t.stat_value,
                    t.extra["closed_form"].get<double>(), t.extra["z"].get<double>(),
                    t.runtime_s));
  }
  return c.finish(1);
}

bool vershik() {
  Criterion c("Vershik moment identity for random step functions, N = 2e5");
  Rng rng(2000, 0);
  std::uint64_t seed = 2100;
  for (auto [alpha, delta] : {std::pair{0.6, 0.5}, {0.7, 0.4}}) {
    for (int k = 0; k < 5; ++k) {
      const StepFunction g = StepFunction::random(2 + k, 3.0, rng);
      const TestReport t = check_vershik_moment(alpha, delta, g, 200000, seed++);
      c.check(t.pass, fmt("alpha=%g delta=%g, %g steps: estimate %.8g closed %.8g z=%.3g",
                          alpha, delta, g.levels.size(), t.stat_value,
                          t.extra["closed_form"].get<double>(), t.extra["z"].get<double>()));
    }
  }
  return c.finish(2);
}

bool composition() {
  Criterion c("bridge composition at y in {0.25, 0.5, 0.75}, N = 2e4 per channel");
  std::uint64_t seed = 3000;
  for (const auto& zeta : {ZetaSpec::constant(1.0), ZetaSpec::gamma(2.0), ZetaSpec::zero()}) {
    for (double y : {0.25, 0.5, 0.75}) {
      const TestReport t = check_composition(0.6, 0.5, zeta, y, 20000, control(seed));
      seed += 100;
      c.report(t, "zeta=" + zeta.to_string() + fmt(" y=%g", y));
    }
  }
  return c.finish(3);
}

DiagramConfig diagram(const std::string& id, double alpha, double delta, double theta,
                      ZetaSpec zeta, const std::string& variant = "",
                      const std::string& direction = "both") {
  DiagramConfig d;
  d.diagram_id = id;
  d.alpha = alpha;
  d.delta = delta;
  d.theta = theta;
  d.zeta = std::move(zeta);
  d.variant = variant;
  d.direction = direction;
  return d;
}

bool diagrams() {
  Criterion c("duality diagrams pass the statistic panel; negative controls fail");
  const double nan = std::nan("");
  const std::vector<DiagramConfig> good = {
      diagram("pitman_pd", 0.6, 0.5, 1.0, ZetaSpec::zero()),
      diagram("dgm_pd", 0.5, nan, 0.5, ZetaSpec::zero()),
      diagram("pitman_general", 0.6, 0.5, nan, ZetaSpec::constant(1.0)),
      diagram("dgm_general", 0.5, nan, nan, ZetaSpec::constant(1.0))};
  std::uint64_t seed = 4000;
  for (const auto& d : good) {
    RunConfig run;
    run.control = control(seed);
    seed += 100;
    const DualityReport r = run_duality(d, run);
    for (const auto& t : r.tests) c.report(t, d.diagram_id);
  }
  const std::vector<DiagramConfig> broken = {
      diagram("pitman_pd", 0.6, 0.5, 1.0, ZetaSpec::zero(), "broken_frag", "frag"),
      diagram("dgm_pd", 0.5, nan, 0.5, ZetaSpec::zero(), "broken_frag", "frag"),
      diagram("dgm_general", 0.5, nan, nan, ZetaSpec::constant(1.0), "independent_coag",
              "coag")};
  for (const auto& d : broken) {
    RunConfig run;
    run.control = control(seed);
    seed += 100;
    const DualityReport r = run_duality(d, run);
    int failing = 0;
    for (const auto& t : r.tests) failing += !t.pass;
    c.check(!r.pass(), d.diagram_id + " " + d.variant + ": " + std::to_string(failing) + "/" +
                           std::to_string(r.tests.size()) + " statistics fail (expected > 0)");
  }
  return c.finish(4);
}

bool three_step() {
  Criterion c("three-step scheme over partitions of [5], N = 2e5");
  const TestReport t = check_three_step(0.6, 0.5, ZetaSpec::constant(1.0), 5, 200000, 5000);
  c.report(t, "zeta=const:1");
  c.check(t.extra["observed_a"] == 52 && t.extra["observed_b"] == 52,
          fmt("set partitions of [5] observed: %g and %g of 52, %g bins after pooling",
              t.extra["observed_a"].get<double>(), t.extra["observed_b"].get<double>(),
              t.extra["bins"].get<double>()));
  const TestReport b = check_three_step_block_counts(0.6, 0.5, 1.0, 5, 200000, 5100);
  c.report(b, "block counts, zeta=gamma(theta/(alpha delta)), theta=1");
  return c.finish(5);
}

bool structural() {
  Criterion c("structural distribution against size-biased picks, N = 2e4 per channel");
  std::uint64_t seed = 6000;
  for (auto [alpha, zeta] : {std::pair{0.5, ZetaSpec::constant(1.0)},
                             {0.5, ZetaSpec::gamma(2.0)}, {0.7, ZetaSpec::zero()}}) {
    const TestReport t = check_structural(alpha, zeta, 20000, 2000, control(seed));
    seed += 100;
    c.report(t, fmt("alpha=%g ", alpha) + "zeta=" + zeta.to_string());
  }
  c.report(check_structural_beta(0.7, 20000, control(seed)), "alpha=0.7 zeta=zero vs Beta cdf");
  return c.finish(6);
}

bool eppf() {
  Criterion c("EPPF sums over set partitions and paint-box frequencies");
  for (auto [alpha, theta] : {std::pair{0.5, 1.0}, {0.3, -0.2}, {0.0, 2.0}, {0.8, 5.0}}) {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
      double s = 0.0;
      for (const auto& sp : enumerate_set_partitions(n)) s += eppf_pd(alpha, theta, sp.block_sizes);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    c.check(worst <= 1e-12, fmt("alpha=%g theta=%g: max |sum - 1| over n <= 8 is %.3g", alpha,
                                theta, worst));
  }
  std::uint64_t seed = 7000;
  for (auto [alpha, theta] : {std::pair{0.5, 1.0}, {0.3, -0.2}}) {
    const TestReport t = check_eppf_paintbox(alpha, theta, 5, 100000, seed++);
    c.report(t, fmt("paint-box alpha=%g theta=%g", alpha, theta));
  }
  return c.finish(7);
}

bool numeric_kernel() {
  Criterion c("stable density at alpha = 1/2 and Laplace transforms by quadrature");
  double worst = 0.0, worst_rel = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 0.05 * std::pow(400.0, i / 2000.0);
    const double exact = std::exp(-0.25 / t) / (2.0 * std::sqrt(M_PI) * std::pow(t, 1.5));
    const double err = std::abs(stable_density(0.5, t) - exact);
    worst = std::max(worst, err);
    worst_rel = std::max(worst_rel, err / exact);
  }
  c.check(worst <= 1e-8, fmt("max abs error %.3g (max rel %.3g) on [0.05, 20]", worst, worst_rel));

  double worst_lt = 0.0;
  for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
    for (double w : {0.1, 1.0, 10.0}) {
      // Substituting t = e^u keeps both tails on a short interval.
      auto f = [&](double u) {
        const double t = std::exp(u);
        return std::exp(-w * t) * stable_density(alpha, t) * t;
      };
      std::vector<double> breaks;
      for (double u = -40.0; u <= std::log(80.0 / w); u += 0.5) breaks.push_back(u);
      QuadratureConfig cfg;
      cfg.abs_tol = 1e-12;
      cfg.rel_tol = 1e-10;
      const double lt = integrate_piecewise(f, breaks, cfg).value;
      const double err = std::abs(lt - std::exp(-std::pow(w, alpha)));
      worst_lt = std::max(worst_lt, err);
      c.check(err <= 1e-5, fmt("alpha=%g w=%g: quadrature %.10g closed %.10g", alpha, w, lt,
                              std::exp(-std::pow(w, alpha))));
    }
  }
  for (double alpha : {0.3, 0.6}) {
    for (double w : {0.5, 4.0}) {
      // Generalized gamma exponent: int (1 - e^{-w x}) tail measure.
      auto g = [&](double u) {
        const double x = std::exp(u);
        return w * std::exp(-w * x) * gg_levy_tail(alpha, x) * x;
      };
      std::vector<double> breaks;
      for (double u = -40.0; u <= std::log(80.0 / w); u += 0.5) breaks.push_back(u);
      const double lt = integrate_piecewise(g, breaks).value;
      const double closed = std::pow(1.0 + w, alpha) - 1.0;
      c.check(std::abs(lt - closed) <= 1e-5,
              fmt("gg exponent alpha=%g w=%g: quadrature %.10g closed %.10g", alpha, w, lt, closed));
    }
  }
  return c.finish(8);
}

bool conditioned() {
  Criterion c("conditioned statements with 10% windows and >= 5e3 accepted samples");
  ConditioningConfig cc;
  cc.rel_halfwidth = 0.1;
  cc.n_samples = 5000;
  const ZetaSpec zeta = ZetaSpec::constant(1.0);
  auto enough = [&](const TestReport& t) {
    for (const auto& r : t.replicates) {
      if (r.n_a < 5000) return false;
    }
    return true;
  };
  const TestReport coag = check_conditional_coag(0.6, 0.5, zeta, cc, control(9000));
  c.report(coag, "conditional coagulation given T2");
  c.check(enough(coag), "conditional coagulation effective sample >= 5000 per replicate");
  const auto indep = check_conditional_independence(0.6, 0.5, zeta, cc, control(9100));
  for (const auto& t : indep) {
    c.report(t, "conditional independence given T1");
    if (t.statistic != "unconditioned_corr") {
      c.check(enough(t), t.statistic + " effective sample >= 5000 per replicate");
    }
  }
  return c.finish(9);
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<bool()>> criteria = {
      {1, laplace_grid}, {2, vershik},    {3, composition},
      {4, diagrams},     {5, three_step}, {6, structural},
      {7, eppf},         {8, numeric_kernel}, {9, conditioned}};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (const auto& [k, fn] : criteria) which.push_back(k);
  }
  bool ok = true;
  for (int k : which) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    ok = it->second() && ok;
    std::printf("  criterion %d took %.1fs\n", k,
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return ok ? 0 : 1;
}
