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

#include "coagfrag/duality_lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "coagfrag/error.hpp"
#include "coagfrag/parallel.hpp"
#include "coagfrag/quadrature.hpp"
#include "coagfrag/samplers.hpp"
#include "coagfrag/special_fn.hpp"
#include "coagfrag/stats.hpp"

namespace coagfrag {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

bool in_unit_open(double x) { return x > 0.0 && x < 1.0; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

// P(a) / (P(a) + P(b)) for positive a, b given in log form.
double log_ratio_share(double log_a, double log_b) {
  return 1.0 / (1.0 + std::exp(log_b - log_a));
}

}  // namespace

// ---------------------------------------------------------------------------
// Statistics

std::string Statistic::name() const {
  switch (kind) {
    case Kind::P1: return "P1";
    case Kind::P2: return "P2";
    case Kind::sizebiased_pick: return "sizebiased_pick";
    case Kind::Kn: return "K" + std::to_string(n);
    case Kind::diversity: return "diversity";
    case Kind::bridge_value_at: {
      std::ostringstream s;
      s << "bridge@" << y;
      return s.str();
    }
  }
  return "?";
}

Statistic Statistic::parse(const std::string& text) {
  Statistic st;
  auto number_after = [&](std::size_t pos) {
    std::string rest = text.substr(pos);
    if (!rest.empty() && rest.back() == ')') rest.pop_back();
    try {
      std::size_t used = 0;
      const double v = std::stod(rest, &used);
      if (used != rest.size()) throw ConfigError("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad statistic: " + text);
    }
  };
  if (text == "P1") {
    st.kind = Kind::P1;
  } else if (text == "P2") {
    st.kind = Kind::P2;
  } else if (text == "sizebiased_pick" || text == "sbp") {
    st.kind = Kind::sizebiased_pick;
  } else if (text == "diversity") {
    st.kind = Kind::diversity;
  } else if (text.rfind("Kn(", 0) == 0) {
    st.kind = Kind::Kn;
    st.n = static_cast<int>(number_after(3));
  } else if (text.size() > 1 && text[0] == 'K') {
    st.kind = Kind::Kn;
    st.n = static_cast<int>(number_after(1));
  } else if (text.rfind("bridge_value_at(", 0) == 0) {
    st.kind = Kind::bridge_value_at;
    st.y = number_after(16);
  } else if (text.rfind("bridge@", 0) == 0) {
    st.kind = Kind::bridge_value_at;
    st.y = number_after(7);
  } else {
    throw ConfigError("unknown statistic: " + text);
  }
  st.validate();
  return st;
}

void Statistic::validate() const {
  if (kind == Kind::Kn) require(n >= 2, "Kn needs n >= 2");
  if (kind == Kind::bridge_value_at) {
    require(in_unit_open(y), "bridge value needs y in (0, 1)");
  }
}

std::vector<Statistic> default_panel() {
  return {Statistic{Statistic::Kind::P1}, Statistic{Statistic::Kind::P2},
          Statistic{Statistic::Kind::sizebiased_pick},
          Statistic{Statistic::Kind::Kn, 50}};
}

double evaluate_statistic(const Statistic& st, const MassPartition& p,
                          const StatisticContext& ctx, Rng& rng) {
  switch (st.kind) {
    case Statistic::Kind::P1:
      return p.largest(0);
    case Statistic::Kind::P2:
      return p.largest(1);
    case Statistic::Kind::sizebiased_pick: {
      double u = rng.uniform() * (p.mass() + p.dust_bound);
      for (double f : p.freqs) {
        if (u < f) return f < ctx.censor_floor ? 0.0 : f;
        u -= f;
      }
      return 0.0;
    }
    case Statistic::Kind::Kn:
      return paintbox_from_mass(p, st.n, rng).k;
    case Statistic::Kind::diversity:
      return diversity_estimate(p, ctx.alpha).S;
    case Statistic::Kind::bridge_value_at: {
      double v = p.dust_bound * st.y;
      for (double f : p.freqs) {
        if (rng.uniform() <= st.y) v += f;
      }
      return v;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Reports

void ReplicateControl::validate() const {
  require(n_seeds >= 1, "need at least one seed replicate");
  require(min_pass >= 0 && min_pass <= n_seeds,
          "min_pass must lie in [0, n_seeds]");
  require(in_unit_open(level), "level must lie in (0, 1)");
}

void TestReport::finalize() {
  std::vector<double> st, pv;
  int passes = 0;
  for (const auto& r : replicates) {
    st.push_back(r.stat_value);
    pv.push_back(r.p_value);
    passes += r.pass ? 1 : 0;
  }
  stat_value = median(st);
  p_value = std::clamp(median(pv), 0.0, 1.0);
  pass = !skipped && !replicates.empty() && passes >= min_pass;
}

bool DualityReport::pass() const {
  return std::all_of(tests.begin(), tests.end(),
                     [](const TestReport& t) { return t.pass; });
}

Json to_json(const TestReport& r) {
  Json reps = Json::array();
  for (const auto& x : r.replicates) {
    reps.push_back({{"seed", x.seed},
                    {"stat_value", x.stat_value},
                    {"p_value", x.p_value},
                    {"pass", x.pass},
                    {"n_a", x.n_a},
                    {"n_b", x.n_b}});
  }
  Json j{{"diagram_id", r.diagram_id},
         {"direction", r.direction},
         {"statistic", r.statistic},
         {"method", r.method},
         {"stat_value", r.stat_value},
         {"p_value", r.p_value},
         {"level", r.level},
         {"min_pass", r.min_pass},
         {"pass", r.pass},
         {"skipped", r.skipped},
         {"runtime_s", r.runtime_s},
         {"replicates", reps}};
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

Json to_json(const DualityReport& r) {
  Json tests = Json::array();
  for (const auto& t : r.tests) tests.push_back(to_json(t));
  return Json{{"diagram_id", r.diagram_id},
              {"params", r.params},
              {"pass", r.pass()},
              {"tests", tests}};
}

void write_csv(std::ostream& out, const std::vector<TestReport>& reports) {
  out << "diagram_id,statistic,stat_value,p_value,pass,seed,N\n";
  for (const auto& r : reports) {
    std::string stat = r.statistic;
    if (!r.direction.empty()) stat = r.direction + ":" + stat;
    for (const auto& x : r.replicates) {
      out << r.diagram_id << ',' << stat << ',' << format_double(x.stat_value)
          << ',' << format_double(x.p_value) << ','
          << (x.pass ? "true" : "false") << ',' << x.seed << ','
          << std::max(x.n_a, x.n_b) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Diagrams

namespace {

const std::vector<std::string> kDiagrams = {"pitman_pd",   "dgm_pd",
                                            "pitman_general", "dgm_general",
                                            "coag_only",   "recursion"};

bool uses_delta(const std::string& id) {
  return id == "pitman_pd" || id == "pitman_general" || id == "coag_only";
}
bool uses_theta(const std::string& id) {
  return id == "pitman_pd" || id == "dgm_pd";
}

}  // namespace

std::vector<DiagramInfo> list_diagrams() {
  return {
      {"pitman_pd",
       "PD(alpha delta, theta) fragmented by PD(alpha, -alpha delta) rows "
       "against PD(alpha, theta); PD(alpha, theta) coagulated by a "
       "PD(delta, theta/alpha) bridge against PD(alpha delta, theta)",
       {"alpha", "delta", "theta"}},
      {"dgm_pd",
       "PD(alpha, theta) with one size-biased pick split by PD(alpha, "
       "1 - alpha) against PD(alpha, 1 + theta); PD(alpha, 1 + theta) merged "
       "by a Beta((1 - alpha)/alpha, (theta + alpha)/alpha) simple bridge "
       "against PD(alpha, theta)",
       {"alpha", "theta"}},
      {"pitman_general",
       "P_{alpha delta}(zeta) fragmented by PD(alpha, -alpha delta) rows "
       "against P_alpha(tau_delta(zeta)); the dependent composed coagulation "
       "against P_{alpha delta}(zeta)",
       {"alpha", "delta", "zeta"}},
      {"dgm_general",
       "P_alpha(zeta) with one pick split by PD(alpha, 1 - alpha) against "
       "P_alpha(gamma(1/alpha) + zeta); P_alpha(G + Z) merged by the simple "
       "bridge with weight B G/(G + Z) against P_alpha(zeta)",
       {"alpha", "zeta"}},
      {"coag_only",
       "coagulation direction of pitman_general only",
       {"alpha", "delta", "zeta"}},
      {"recursion",
       "P_alpha(gamma((n-1)/alpha) + zeta) and P_alpha(gamma(n/alpha) + zeta) "
       "linked by the same split and merge operators",
       {"alpha", "zeta", "recursion_n"}},
  };
}

void DiagramConfig::validate() const {
  require(std::find(kDiagrams.begin(), kDiagrams.end(), diagram_id) !=
              kDiagrams.end(),
          "unknown diagram: " + diagram_id);
  require(in_unit_open(alpha), "alpha must lie in (0, 1)");
  if (uses_delta(diagram_id)) {
    require(in_unit_open(delta),
            "diagram " + diagram_id + " requires delta in (0, 1)");
  }
  if (uses_theta(diagram_id)) {
    require(std::isfinite(theta), "diagram " + diagram_id + " requires theta");
    const double lo = diagram_id == "pitman_pd" ? -alpha * delta : -alpha;
    std::ostringstream msg;
    msg << "diagram " << diagram_id << " requires theta > " << lo;
    require(theta > lo, msg.str());
  } else {
    zeta.validate();
  }
  if (diagram_id == "recursion") {
    require(recursion_n >= 1, "recursion requires n >= 1");
  }
  require(variant.empty() || variant == "broken_frag" ||
              variant == "independent_coag",
          "unknown variant: " + variant);
  require(direction == "both" || direction == "frag" || direction == "coag",
          "direction must be both, frag or coag");
  if (variant == "independent_coag") {
    require(diagram_id == "dgm_general" || diagram_id == "recursion",
            "independent_coag applies to dgm_general and recursion only");
  }
  if (diagram_id == "coag_only") {
    require(direction != "frag", "coag_only has no frag direction");
    require(variant != "broken_frag", "coag_only has no frag direction");
  }
}

Json DiagramConfig::to_json() const {
  Json j{{"diagram_id", diagram_id}, {"alpha", alpha}, {"direction", direction}};
  if (uses_delta(diagram_id)) j["delta"] = delta;
  if (uses_theta(diagram_id)) {
    j["theta"] = theta;
  } else {
    j["zeta"] = zeta.to_string();
  }
  if (diagram_id == "recursion") j["recursion_n"] = recursion_n;
  if (!variant.empty()) j["variant"] = variant;
  return j;
}

void RunConfig::validate() const {
  require(n_replicas >= 10, "n_replicas must be at least 10");
  require(n_atoms >= 10, "n_atoms must be at least 10");
  require(!stats.empty(), "statistic panel is empty");
  for (const auto& s : stats) s.validate();
  control.validate();
  try {
    frag.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  require(censor_floor >= 0.0 && censor_floor < 1.0,
          "censor floor must lie in [0, 1)");
}

Json RunConfig::to_json() const {
  Json names = Json::array();
  for (const auto& s : stats) names.push_back(s.name());
  return Json{{"n_replicas", n_replicas},
              {"n_atoms", n_atoms},
              {"stats", names},
              {"seed", control.seed},
              {"n_seeds", control.n_seeds},
              {"min_pass", control.min_pass},
              {"level", control.level},
              {"frag_child_atoms", frag.n_child_atoms},
              {"frag_tail_policy",
               frag.tail_policy == FragConfig::TailPolicy::renormalize
                   ? "renormalize"
                   : "truncate_record"},
              {"frag_min_mass", frag.min_mass},
              {"censor_floor", censor_floor}};
}

namespace {

using PartitionSampler = std::function<MassPartition(Rng&)>;

struct Direction {
  std::string name;
  PartitionSampler a;  // operator applied to direct samples
  PartitionSampler b;  // direct samples of the terminal law
  double diversity_alpha;
  std::uint64_t stream_offset;
};

std::vector<Direction> build_directions(const DiagramConfig& d,
                                        const RunConfig& run) {
  const std::string& id = d.diagram_id;
  const double a = d.alpha;
  const double dl = d.delta;
  const double th = d.theta;
  const ZetaSpec zeta = d.zeta;
  const int n = run.n_atoms;
  const FragConfig frag = run.frag;
  const double shift = d.variant == "broken_frag" ? 1.0 : 0.0;
  const bool independent = d.variant == "independent_coag";
  const bool want_frag = d.direction != "coag" && id != "coag_only";
  const bool want_coag = d.direction != "frag";

  Direction fr{"frag", nullptr, nullptr, a, 0};
  Direction co{"coag", nullptr, nullptr, a, 2};

  if (id == "pitman_pd") {
    const double child = -a * dl + shift;
    fr.a = [=](Rng& rng) {
      return frag_all(sample_pd_series(a * dl, th, n, rng), a, child, frag, rng);
    };
    fr.b = [=](Rng& rng) { return sample_pd_series(a, th, n, rng); };
    co.a = [=](Rng& rng) {
      const MassPartition p = sample_pd_series(a, th, n, rng);
      const MassPartition q = sample_pd_series(dl, th / a, n, rng);
      return coag_interval(p, interval_partition(bridge_from_mass(q, rng)), rng);
    };
    co.b = [=](Rng& rng) { return sample_pd_series(a * dl, th, n, rng); };
    co.diversity_alpha = a * dl;
  } else if (id == "dgm_pd") {
    const double child = 1.0 - a + shift;
    fr.a = [=](Rng& rng) {
      return frag_picked(sample_pd_series(a, th, n, rng), a, child, frag, rng);
    };
    fr.b = [=](Rng& rng) { return sample_pd_series(a, 1.0 + th, n, rng); };
    co.a = [=](Rng& rng) {
      const MassPartition p = sample_pd_series(a, 1.0 + th, n, rng);
      return coag_simple(p, rng.beta((1.0 - a) / a, (th + a) / a), rng);
    };
    co.b = [=](Rng& rng) { return sample_pd_series(a, th, n, rng); };
  } else if (id == "pitman_general" || id == "coag_only") {
    const double child = -a * dl + shift;
    fr.a = [=](Rng& rng) {
      return frag_all(sample_pa_zeta(a * dl, zeta, n, rng), a, child, frag, rng);
    };
    fr.b = [=](Rng& rng) {
      const double z = sample_zeta(zeta, rng);
      const double time = z > 0.0 ? sample_tilted_stable(dl, z, rng) : 0.0;
      return sample_pa_time(a, time, n, rng).freqs;
    };
    co.a = [=](Rng& rng) {
      return coag_composed(a, dl, zeta, n, rng).output_freqs;
    };
    co.b = [=](Rng& rng) { return sample_pa_zeta(a * dl, zeta, n, rng); };
    co.diversity_alpha = a * dl;
  } else {
    // dgm_general is the recursion at n = 1.
    const int k = id == "recursion" ? d.recursion_n : 1;
    const ZetaSpec base = k > 1 ? zeta.plus_gamma((k - 1) / a) : zeta;
    const ZetaSpec top = zeta.plus_gamma(k / a);
    const double child = 1.0 - a + shift;
    fr.a = [=](Rng& rng) {
      return frag_picked(sample_pa_zeta(a, base, n, rng), a, child, frag, rng);
    };
    fr.b = [=](Rng& rng) { return sample_pa_zeta(a, top, n, rng); };
    co.a = [=](Rng& rng) {
      const double g = rng.gamma(k / a);
      const double z = sample_zeta(zeta, rng);
      const MassPartition p = sample_pa_time(a, g + z, n, rng).freqs;
      double gw = g, zw = z;
      if (independent) {
        gw = rng.gamma(k / a);
        zw = sample_zeta(zeta, rng);
      }
      const double b = rng.beta((1.0 - a) / a, (k - 1.0 + a) / a);
      return coag_simple(p, b * gw / (gw + zw), rng);
    };
    co.b = [=](Rng& rng) { return sample_pa_zeta(a, base, n, rng); };
  }

  std::vector<Direction> out;
  if (want_frag) out.push_back(fr);
  if (want_coag) out.push_back(co);
  return out;
}

std::vector<TestReport> run_direction(const std::string& diagram_id,
                                      const Direction& dir,
                                      const RunConfig& run) {
  const auto t0 = Clock::now();
  const std::size_t ns = run.stats.size();
  const std::size_t n = static_cast<std::size_t>(run.n_replicas);
  const StatisticContext ctx{dir.diversity_alpha, run.censor_floor};

  std::vector<TestReport> reports(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    reports[s].diagram_id = diagram_id;
    reports[s].direction = dir.name;
    reports[s].statistic = run.stats[s].name();
    reports[s].method = run.stats[s].categorical() ? "chisq" : "ks";
    reports[s].level = run.control.level;
    reports[s].min_pass = run.control.min_pass;
  }

  for (int r = 0; r < run.control.n_seeds; ++r) {
    const std::uint64_t seed = run.control.seed + static_cast<std::uint64_t>(r);
    std::vector<std::vector<double>> va(ns, std::vector<double>(n));
    std::vector<std::vector<double>> vb(ns, std::vector<double>(n));
    parallel_for(n, [&](std::size_t i) {
      Rng ra(seed, 4 * i + dir.stream_offset);
      const MassPartition pa = dir.a(ra);
      for (std::size_t s = 0; s < ns; ++s) {
        va[s][i] = evaluate_statistic(run.stats[s], pa, ctx, ra);
      }
      Rng rb(seed, 4 * i + dir.stream_offset + 1);
      const MassPartition pb = dir.b(rb);
      for (std::size_t s = 0; s < ns; ++s) {
        vb[s][i] = evaluate_statistic(run.stats[s], pb, ctx, rb);
      }
    });
    for (std::size_t s = 0; s < ns; ++s) {
      ReplicateResult rep;
      rep.seed = seed;
      rep.n_a = rep.n_b = n;
      if (run.stats[s].categorical()) {
        std::map<std::int64_t, double> ca, cb;
        for (double x : va[s]) ca[static_cast<std::int64_t>(x)] += 1.0;
        for (double x : vb[s]) cb[static_cast<std::int64_t>(x)] += 1.0;
        const ChiSquareResult c = chisq_homogeneity(ca, cb);
        rep.stat_value = c.statistic;
        rep.p_value = c.p_value;
      } else {
        const KsResult k = ks_two_sample(va[s], vb[s]);
        rep.stat_value = k.statistic;
        rep.p_value = k.p_value;
      }
      rep.pass = rep.p_value > run.control.level;
      reports[s].replicates.push_back(rep);
    }
  }
  const double elapsed = seconds_since(t0);
  for (auto& rep : reports) {
    rep.runtime_s = elapsed;
    rep.note = "runtime is shared by the statistics of this direction";
    rep.finalize();
  }
  return reports;
}

}  // namespace

DualityReport run_duality(const DiagramConfig& diagram, const RunConfig& run) {
  diagram.validate();
  run.validate();
  DualityReport report;
  report.diagram_id = diagram.diagram_id;
  report.params = {{"diagram", diagram.to_json()}, {"run", run.to_json()}};
  for (const Direction& dir : build_directions(diagram, run)) {
    for (auto& t : run_direction(diagram.diagram_id, dir, run)) {
      report.tests.push_back(std::move(t));
    }
  }
  return report;
}

DualityReport compare_partitions(const std::vector<MassPartition>& a,
                                 const std::vector<MassPartition>& b,
                                 const std::vector<Statistic>& stats,
                                 const StatisticContext& ctx, double level,
                                 std::uint64_t seed) {
  require(!a.empty() && !b.empty(), "both inputs need at least one partition");
  require(in_unit_open(level), "level must lie in (0, 1)");
  DualityReport report;
  report.diagram_id = "external";
  report.params = {{"n_a", a.size()}, {"n_b", b.size()}, {"seed", seed},
                   {"level", level}};
  for (const auto& st : stats) {
    st.validate();
    const auto t0 = Clock::now();
    std::vector<double> va(a.size()), vb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      Rng rng(seed, 2 * i);
      va[i] = evaluate_statistic(st, a[i], ctx, rng);
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
      Rng rng(seed, 2 * i + 1);
      vb[i] = evaluate_statistic(st, b[i], ctx, rng);
    }
    TestReport t;
    t.diagram_id = "external";
    t.statistic = st.name();
    t.level = level;
    t.min_pass = 1;
    ReplicateResult rep;
    rep.seed = seed;
    rep.n_a = a.size();
    rep.n_b = b.size();
    if (st.categorical()) {
      t.method = "chisq";
      std::map<std::int64_t, double> ca, cb;
      for (double x : va) ca[static_cast<std::int64_t>(x)] += 1.0;
      for (double x : vb) cb[static_cast<std::int64_t>(x)] += 1.0;
      const ChiSquareResult c = chisq_homogeneity(ca, cb);
      rep.stat_value = c.statistic;
      rep.p_value = c.p_value;
    } else {
      t.method = "ks";
      const KsResult k = ks_two_sample(va, vb);
      rep.stat_value = k.statistic;
      rep.p_value = k.p_value;
    }
    rep.pass = rep.p_value > level;
    t.replicates.push_back(rep);
    t.runtime_s = seconds_since(t0);
    t.finalize();
    report.tests.push_back(std::move(t));
  }
  return report;
}

TestReport compare_scalar_samplers(const std::string& name,
                                   const ScalarSampler& a,
                                   const ScalarSampler& b, int n,
                                   const ReplicateControl& control) {
  control.validate();
  require(n >= 10, "need at least 10 samples per channel");
  const auto t0 = Clock::now();
  TestReport t;
  t.statistic = name;
  t.method = "ks";
  t.level = control.level;
  t.min_pass = control.min_pass;
  const auto un = static_cast<std::size_t>(n);
  for (int r = 0; r < control.n_seeds; ++r) {
    const std::uint64_t seed = control.seed + static_cast<std::uint64_t>(r);
    std::vector<double> va(un), vb(un);
    parallel_for(un, [&](std::size_t i) {
      Rng ra(seed, 2 * i);
      va[i] = a(ra);
      Rng rb(seed, 2 * i + 1);
      vb[i] = b(rb);
    });
    const KsResult k = ks_two_sample(va, vb);
    t.replicates.push_back(
        {seed, k.statistic, k.p_value, k.p_value > control.level, un, un});
  }
  t.runtime_s = seconds_since(t0);
  t.finalize();
  return t;
}

// ---------------------------------------------------------------------------
// Transform identities

double laplace_closed_form(double alpha, double delta, double zeta, double y,
                           double omega1, double omega2) {
  const double inner = y * std::pow(1.0 + omega1 + omega2, alpha) +
                       (1.0 - y) * std::pow(1.0 + omega1, alpha);
  return zeta * (std::pow(inner, delta) - 1.0);
}

namespace {

TestReport mc_z_report(const std::string& name, double estimate,
                       double closed, double se) {
  TestReport t;
  t.statistic = name;
  t.method = "mc_z";
  t.min_pass = 1;
  const double diff = estimate - closed;
  // Rounding noise in the estimate sets a floor on the error scale.
  const double scale =
      std::hypot(se, 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(closed)));
  const double z = diff / scale;
  ReplicateResult rep;
  rep.stat_value = estimate;
  rep.p_value = std::isfinite(z) ? normal_two_sided_p(z) : 0.0;
  rep.pass = std::abs(z) <= 3.0;
  t.replicates.push_back(rep);
  t.extra = {{"closed_form", closed}, {"std_error", se}, {"z", z}};
  return t;
}

constexpr int kBootstrap = 200;

}  // namespace

TestReport check_laplace_identity(double alpha, double delta, double zeta_value,
                                  double y, double omega1, double omega2,
                                  int n_samples, std::uint64_t seed) {
  require(in_unit_open(alpha) && in_unit_open(delta),
          "alpha and delta must lie in (0, 1)");
  require(zeta_value > 0.0, "zeta must be positive");
  require(y >= 0.0 && y <= 1.0, "y must lie in [0, 1]");
  require(omega1 >= 0.0 && omega2 >= 0.0, "omegas must be nonnegative");
  require(n_samples >= 100, "need at least 100 samples");
  const auto t0 = Clock::now();
  const auto n = static_cast<std::size_t>(n_samples);
  std::vector<double> e(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng(seed, i);
    const double time = sample_tilted_stable(delta, zeta_value, rng);
    const double x1 = y > 0.0 ? sample_tilted_stable(alpha, time * y, rng) : 0.0;
    const double x2 =
        y < 1.0 ? sample_tilted_stable(alpha, time * (1.0 - y), rng) : 0.0;
    e[i] = std::exp(-omega1 * (x1 + x2) - omega2 * x1);
  });
  auto neg_log_mean = [](const std::vector<double>& v) {
    return -std::log(mean(v));
  };
  Rng brng(derive_stream(SeedStream{seed, 0}, 0xb0075u));
  const double se = bootstrap_se(e, neg_log_mean, kBootstrap, brng);
  TestReport t = mc_z_report(
      "laplace", neg_log_mean(e),
      laplace_closed_form(alpha, delta, zeta_value, y, omega1, omega2), se);
  t.replicates[0].seed = seed;
  t.replicates[0].n_a = n;
  t.extra["params"] = {{"alpha", alpha}, {"delta", delta}, {"zeta", zeta_value},
                       {"y", y},         {"omega1", omega1}, {"omega2", omega2}};
  t.runtime_s = seconds_since(t0);
  t.finalize();
  return t;
}

void StepFunction::validate() const {
  require(levels.size() == breakpoints.size() + 1,
          "step function needs one more level than breakpoints");
  double prev = 0.0;
  for (double b : breakpoints) {
    require(b > prev && b < 1.0, "breakpoints must increase inside (0, 1)");
    prev = b;
  }
  for (double l : levels) {
    require(l >= 0.0 && std::isfinite(l), "levels must be nonnegative");
  }
}

double StepFunction::operator()(double u) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), u);
  return levels[static_cast<std::size_t>(it - breakpoints.begin())];
}

double StepFunction::integral() const {
  double s = 0.0, left = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double right = i < breakpoints.size() ? breakpoints[i] : 1.0;
    s += (right - left) * levels[i];
    left = right;
  }
  return s;
}

double StepFunction::power_mean(double alpha) const {
  double s = 0.0, left = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double right = i < breakpoints.size() ? breakpoints[i] : 1.0;
    s += (right - left) * std::pow(1.0 + levels[i], alpha);
    left = right;
  }
  return s;
}

StepFunction StepFunction::random(int n_levels, double max_level, Rng& rng) {
  require(n_levels >= 1, "need at least one level");
  StepFunction g;
  for (int i = 0; i + 1 < n_levels; ++i) g.breakpoints.push_back(rng.uniform());
  std::sort(g.breakpoints.begin(), g.breakpoints.end());
  for (int i = 0; i < n_levels; ++i) g.levels.push_back(max_level * rng.uniform());
  return g;
}

TestReport check_vershik_moment(double alpha, double delta,
                                const StepFunction& g, int n_samples,
                                std::uint64_t seed, int n_atoms) {
  require(in_unit_open(alpha) && in_unit_open(delta),
          "alpha and delta must lie in (0, 1)");
  require(n_samples >= 100, "need at least 100 samples");
  g.validate();
  const auto t0 = Clock::now();
  const auto n = static_cast<std::size_t>(n_samples);
  const double ad = alpha * delta;
  const double dust_level = g.integral();
  std::vector<double> v(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng(seed, i);
    const MassPartition p = sample_pd_series(alpha, -ad, n_atoms, rng);
    double m = p.dust_bound * dust_level;
    for (double f : p.freqs) m += f * g(rng.uniform());
    v[i] = std::pow(1.0 + m, ad);
  });
  Rng brng(derive_stream(SeedStream{seed, 0}, 0xb0075u));
  const double se =
      bootstrap_se(v, [](const std::vector<double>& x) { return mean(x); },
                   kBootstrap, brng);
  TestReport t = mc_z_report("vershik", mean(v),
                             std::pow(g.power_mean(alpha), delta), se);
  t.replicates[0].seed = seed;
  t.replicates[0].n_a = n;
  t.extra["params"] = {{"alpha", alpha},
                       {"delta", delta},
                       {"breakpoints", g.breakpoints},
                       {"levels", g.levels}};
  t.runtime_s = seconds_since(t0);
  t.finalize();
  return t;
}

// ---------------------------------------------------------------------------
// Conditioned statements

double log_t1_given_t2(StableIndex alpha, StableIndex delta,
                       const ZetaSpec& zeta, double v, double s) {
  const double c = v * std::pow(s, 1.0 / alpha.value());
  return StableDensityTable::get(delta).log_density(s) +
         log_expect_exp_zeta_minus_power(zeta, c,
                                         1.0 / (alpha.value() * delta.value()));
}

T1GivenT2Sampler::T1GivenT2Sampler(StableIndex alpha, StableIndex delta,
                                   const ZetaSpec& zeta, double v, int grid)
    : alpha_(alpha), delta_(delta), zeta_(zeta), v_(v) {
  if (!(v > 0.0)) throw DomainError("T2 value must be positive");
  if (grid < 100) throw DomainError("grid needs at least 100 points");
  const double d = delta.value();
  const double lo = -((1.0 - d) / d) * std::log(1e6);
  const double hi = std::log(1e8) / d;
  w_.resize(static_cast<std::size_t>(grid));
  std::vector<double> logd(w_.size());
  log_max_ = -INFINITY;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    w_[i] = lo + (hi - lo) * static_cast<double>(i) / (grid - 1);
    logd[i] = log_t1_given_t2(alpha, delta, zeta, v, std::exp(w_[i])) + w_[i];
    log_max_ = std::max(log_max_, logd[i]);
  }
  if (!std::isfinite(log_max_)) {
    throw NumericError("T1 | T2 density has no finite values", log_max_);
  }
  cdf_.assign(w_.size(), 0.0);
  for (std::size_t i = 1; i < w_.size(); ++i) {
    const double f0 = std::exp(logd[i - 1] - log_max_);
    const double f1 = std::exp(logd[i] - log_max_);
    cdf_[i] = cdf_[i - 1] + 0.5 * (f0 + f1) * (w_[i] - w_[i - 1]);
  }
}

double T1GivenT2Sampler::sample(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const double span = cdf_[i] - cdf_[i - 1];
  const double frac = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.5;
  return std::exp(w_[i - 1] + frac * (w_[i] - w_[i - 1]));
}

double T1GivenT2Sampler::normalization() const {
  auto f = [&](double w) {
    const double l = log_t1_given_t2(alpha_, delta_, zeta_, v_, std::exp(w)) + w;
    return std::exp(l - log_max_);
  };
  std::vector<double> breaks;
  const std::size_t step = std::max<std::size_t>(1, w_.size() / 64);
  for (std::size_t i = 0; i < w_.size(); i += step) breaks.push_back(w_[i]);
  if (breaks.back() != w_.back()) breaks.push_back(w_.back());
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-8;
  return integrate_piecewise(f, breaks, cfg).value * std::exp(log_max_);
}

namespace {

struct JointDraw {
  double t1 = 0.0;
  double t2 = 0.0;
  double delta_p1 = 0.0;
  double input_p1 = 0.0;
};

JointDraw joint_draw(double alpha, double delta, const ZetaSpec& zeta,
                     int n_atoms, Rng& rng) {
  const JointCoagSample s = coag_composed(alpha, delta, zeta, n_atoms, rng);
  return {s.t1, s.t2, s.delta_freqs.largest(0), s.input_freqs.largest(0)};
}

struct Window {
  double lo = 0.0;
  double hi = INFINITY;
  double acceptance = 1.0;
};

// Center defaults to the pilot median of the conditioning variable.
Window resolve_window(double alpha, double delta, const ZetaSpec& zeta,
                      const ConditioningConfig& cc, std::uint64_t seed,
                      bool on_t2) {
  require(cc.pilot >= 100, "pilot run needs at least 100 draws");
  require(cc.n_samples >= 10, "need at least 10 accepted samples");
  require(cc.acceptance_floor > 0.0 && cc.acceptance_floor <= 1.0,
          "acceptance floor must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(cc.pilot);
  std::vector<double> x(n);
  const std::uint64_t pilot_base = std::uint64_t{1} << 40;
  parallel_for(n, [&](std::size_t i) {
    Rng rng(seed, pilot_base + i);
    const JointDraw j = joint_draw(alpha, delta, zeta, cc.n_atoms, rng);
    x[i] = on_t2 ? j.t2 : j.t1;
  });
  const double center = std::isnan(cc.center) ? median(x) : cc.center;
  const double half =
      std::isnan(cc.halfwidth) ? cc.rel_halfwidth * center : cc.halfwidth;
  require(center > 0.0 && half > 0.0, "window must have positive center and width");
  Window w{center - half, center + half, 0.0};
  for (double v : x) w.acceptance += (v >= w.lo && v <= w.hi) ? 1.0 : 0.0;
  w.acceptance /= static_cast<double>(n);
  std::ostringstream msg;
  msg << "window acceptance " << w.acceptance << " is below the floor "
      << cc.acceptance_floor;
  require(w.acceptance >= cc.acceptance_floor, msg.str());
  return w;
}

// Accepted draws in index order; the index gives the companion stream 2i+1.
std::vector<std::pair<std::size_t, JointDraw>> collect_window(
    double alpha, double delta, const ZetaSpec& zeta,
    const ConditioningConfig& cc, const Window& w, std::uint64_t seed,
    bool on_t2) {
  std::vector<std::pair<std::size_t, JointDraw>> out;
  const auto target = static_cast<std::size_t>(cc.n_samples);
  const auto max_draws =
      static_cast<std::size_t>(std::ceil(cc.n_samples / cc.acceptance_floor));
  std::size_t next = 0;
  while (out.size() < target && next < max_draws) {
    const double acc = std::max(w.acceptance, cc.acceptance_floor);
    const std::size_t batch = std::min(
        max_draws - next,
        static_cast<std::size_t>(1.1 * (target - out.size()) / acc) + 64);
    std::vector<JointDraw> draws(batch);
    parallel_for(batch, [&](std::size_t k) {
      Rng rng(seed, 2 * (next + k));
      draws[k] = joint_draw(alpha, delta, zeta, cc.n_atoms, rng);
    });
    for (std::size_t k = 0; k < batch && out.size() < target; ++k) {
      const double x = on_t2 ? draws[k].t2 : draws[k].t1;
      if (x >= w.lo && x <= w.hi) out.emplace_back(next + k, draws[k]);
    }
    next += batch;
  }
  return out;
}

}  // namespace

TestReport check_conditional_coag(double alpha, double delta,
                                  const ZetaSpec& zeta,
                                  const ConditioningConfig& cc,
                                  const ReplicateControl& control) {
  require(in_unit_open(alpha) && in_unit_open(delta),
          "alpha and delta must lie in (0, 1)");
  zeta.validate();
  control.validate();
  const auto t0 = Clock::now();
  TestReport t;
  t.diagram_id = "conditional_coag";
  t.statistic = "largest_interval|T2";
  t.method = "ks";
  t.level = control.level;
  t.min_pass = control.min_pass;
  const Window w = resolve_window(alpha, delta, zeta, cc, control.seed, true);
  t.extra = {{"window", {w.lo, w.hi}}, {"acceptance", w.acceptance},
             {"zeta", zeta.to_string()}, {"alpha", alpha}, {"delta", delta}};
  try {
    const T1GivenT2Sampler probe(alpha, delta, zeta, 0.5 * (w.lo + w.hi));
    t.extra["normalization_at_center"] = probe.normalization();
  } catch (const NumericError& e) {
    t.skipped = true;
    t.note = std::string("T1 | T2 normalization failed: ") + e.what();
    t.runtime_s = seconds_since(t0);
    t.finalize();
    return t;
  }
  for (int r = 0; r < control.n_seeds; ++r) {
    const std::uint64_t seed = control.seed + static_cast<std::uint64_t>(r);
    const auto acc = collect_window(alpha, delta, zeta, cc, w, seed, true);
    std::vector<double> va(acc.size()), vb(acc.size());
    parallel_for(acc.size(), [&](std::size_t k) {
      const auto& [idx, j] = acc[k];
      va[k] = j.delta_p1;
      Rng rng(seed, 2 * idx + 1);
      const double t1 = T1GivenT2Sampler(alpha, delta, zeta, j.t2).sample(rng);
      vb[k] = sample_pd_conditional_top(delta, t1, 1, rng).largest(0);
    });
    ReplicateResult rep{seed, 0.0, 0.0, false, va.size(), vb.size()};
    if (static_cast<int>(acc.size()) < cc.n_samples) {
      t.note = "fewer accepted samples than requested";
    }
    if (acc.size() >= 10) {
      const KsResult k = ks_two_sample(va, vb);
      rep.stat_value = k.statistic;
      rep.p_value = k.p_value;
      rep.pass = k.p_value > control.level;
    }
    t.replicates.push_back(rep);
  }
  t.runtime_s = seconds_since(t0);
  t.finalize();
  return t;
}

std::vector<TestReport> check_conditional_independence(
    double alpha, double delta, const ZetaSpec& zeta,
    const ConditioningConfig& cc, const ReplicateControl& control) {
  require(in_unit_open(alpha) && in_unit_open(delta),
          "alpha and delta must lie in (0, 1)");
  zeta.validate();
  control.validate();
  const auto t0 = Clock::now();
  const Window w = resolve_window(alpha, delta, zeta, cc, control.seed, false);
  const Json extra{{"window", {w.lo, w.hi}}, {"acceptance", w.acceptance},
                   {"zeta", zeta.to_string()}, {"alpha", alpha},
                   {"delta", delta}};

  auto make = [&](const std::string& stat, const std::string& method) {
    TestReport t;
    t.diagram_id = "conditional_independence";
    t.statistic = stat;
    t.method = method;
    t.level = control.level;
    t.min_pass = control.min_pass;
    t.extra = extra;
    return t;
  };
  TestReport law = make("delta_P1|T1", "ks");
  TestReport corr = make("partial_corr|T1", "corr");
  TestReport neg = make("unconditioned_corr", "corr");
  corr.note = "passes when |Fisher z| <= 3";
  neg.note = "negative control: passes when |Fisher z| > 3";

  for (int r = 0; r < control.n_seeds; ++r) {
    const std::uint64_t seed = control.seed + static_cast<std::uint64_t>(r);
    const auto acc = collect_window(alpha, delta, zeta, cc, w, seed, false);
    const std::size_t m = acc.size();
    std::vector<double> dp(m), ip(m), ls(m), vb(m);
    parallel_for(m, [&](std::size_t k) {
      const auto& [idx, j] = acc[k];
      dp[k] = j.delta_p1;
      ip[k] = j.input_p1;
      ls[k] = std::log(j.t1);
      Rng rng(seed, 2 * idx + 1);
      vb[k] = sample_pd_conditional_top(delta, j.t1, 1, rng).largest(0);
    });
    ReplicateResult rl{seed, 0.0, 0.0, false, m, m};
    ReplicateResult rc{seed, 0.0, 0.0, false, m, 0};
    if (m >= 10) {
      const KsResult k = ks_two_sample(dp, vb);
      rl.stat_value = k.statistic;
      rl.p_value = k.p_value;
      rl.pass = k.p_value > control.level;
      const double rho = partial_correlation(dp, ip, ls);
      const double z = std::atanh(rho) * std::sqrt(static_cast<double>(m) - 4.0);
      rc.stat_value = rho;
      rc.p_value = normal_two_sided_p(z);
      rc.pass = std::abs(z) <= 3.0;
    }
    law.replicates.push_back(rl);
    corr.replicates.push_back(rc);

    // Unconditioned: the first m draws of the same stream family, no window.
    const std::size_t u = static_cast<std::size_t>(cc.n_samples);
    std::vector<double> ud(u), ui(u);
    const std::uint64_t base = std::uint64_t{1} << 41;
    parallel_for(u, [&](std::size_t k) {
      Rng rng(seed, base + k);
      const JointDraw j = joint_draw(alpha, delta, zeta, cc.n_atoms, rng);
      ud[k] = j.delta_p1;
      ui[k] = j.input_p1;
    });
    const double rho = pearson(ud, ui);
    const double z = std::atanh(rho) * std::sqrt(static_cast<double>(u) - 3.0);
    neg.replicates.push_back(
        {seed, rho, normal_two_sided_p(z), std::abs(z) > 3.0, u, 0});
  }
  const double elapsed = seconds_since(t0);
  std::vector<TestReport> out{law, corr, neg};
  for (auto& t : out) {
    t.runtime_s = elapsed;
    t.finalize();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Composition, structural distribution, paint-box oracles

namespace {

// Q_{a, zeta}(y) for one zeta draw; z = 0 gives the stable bridge.
double bridge_at(double a, double z, double y, Rng& rng) {
  if (z <= 0.0) {
    const double la = std::log(y) / a + std::log(sample_stable(a, rng));
    const double lb = std::log1p(-y) / a + std::log(sample_stable(a, rng));
    return log_ratio_share(la, lb);
  }
  const double x1 = sample_tilted_stable(a, z * y, rng);
  const double x2 = sample_tilted_stable(a, z * (1.0 - y), rng);
  return x1 / (x1 + x2);
}

}  // namespace

TestReport check_composition(double alpha, double delta, const ZetaSpec& zeta,
                             double y, int n, const ReplicateControl& control) {
  require(in_unit_open(alpha) && in_unit_open(delta),
          "alpha and delta must lie in (0, 1)");
  require(in_unit_open(y), "y must lie in (0, 1)");
  zeta.validate();
  auto composed = [=](Rng& rng) {
    const double z = sample_zeta(zeta, rng);
    if (z <= 0.0) {
      const double x = bridge_at(delta, 0.0, y, rng);
      return bridge_at(alpha, 0.0, x, rng);
    }
    const double d1 = sample_tilted_stable(delta, z * y, rng);
    const double d2 = sample_tilted_stable(delta, z * (1.0 - y), rng);
    const double e1 = sample_tilted_stable(alpha, d1, rng);
    const double e2 = sample_tilted_stable(alpha, d2, rng);
    return e1 / (e1 + e2);
  };
  auto direct = [=](Rng& rng) {
    return bridge_at(alpha * delta, sample_zeta(zeta, rng), y, rng);
  };
  std::ostringstream name;
  name << "Q(" << y << ")";
  TestReport t = compare_scalar_samplers(name.str(), composed, direct, n, control);
  t.diagram_id = "composition";
  t.extra = {{"alpha", alpha}, {"delta", delta}, {"zeta", zeta.to_string()},
             {"y", y}};
  return t;
}

TestReport check_structural(double alpha, const ZetaSpec& zeta, int n,
                            int n_atoms, const ReplicateControl& control,
                            double censor_floor) {
  require(in_unit_open(alpha), "alpha must lie in (0, 1)");
  require(censor_floor >= 0.0 && censor_floor < 1.0,
          "censor floor must lie in [0, 1)");
  zeta.validate();
  auto structural = [=](Rng& rng) {
    const double x = structural_sample(alpha, zeta, rng);
    return x < censor_floor ? 0.0 : x;
  };
  // The pick ranges over dust too, as in the statistic panel.
  const Statistic pick{Statistic::Kind::sizebiased_pick};
  const StatisticContext ctx{alpha, censor_floor};
  auto picked = [=](Rng& rng) {
    return evaluate_statistic(pick, sample_pa_zeta(alpha, zeta, n_atoms, rng),
                              ctx, rng);
  };
  TestReport t =
      compare_scalar_samplers("sizebiased_pick", structural, picked, n, control);
  t.diagram_id = "structural";
  t.extra = {{"alpha", alpha},
             {"zeta", zeta.to_string()},
             {"n_atoms", n_atoms},
             {"censor_floor", censor_floor}};
  return t;
}

TestReport check_structural_beta(double alpha, int n,
                                 const ReplicateControl& control) {
  require(in_unit_open(alpha), "alpha must lie in (0, 1)");
  require(n >= 10, "need at least 10 samples");
  control.validate();
  const auto t0 = Clock::now();
  TestReport t;
  t.diagram_id = "structural";
  t.statistic = "beta_cdf";
  t.method = "ks_one_sample";
  t.level = control.level;
  t.min_pass = control.min_pass;
  const auto un = static_cast<std::size_t>(n);
  const ZetaSpec zero = ZetaSpec::zero();
  for (int r = 0; r < control.n_seeds; ++r) {
    const std::uint64_t seed = control.seed + static_cast<std::uint64_t>(r);
    std::vector<double> v(un);
    parallel_for(un, [&](std::size_t i) {
      Rng rng(seed, i);
      v[i] = structural_sample(alpha, zero, rng);
    });
    const KsResult k = ks_one_sample(v, [&](double x) {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(1.0 - alpha, alpha, x);
    });
    t.replicates.push_back(
        {seed, k.statistic, k.p_value, k.p_value > control.level, un, 0});
  }
  t.extra = {{"alpha", alpha}};
  t.runtime_s = seconds_since(t0);
  t.finalize();
  return t;
}

namespace {

std::int64_t partition_code(const SetPartition& sp) {
  std::int64_t code = 0;
  for (int i = sp.n - 1; i >= 0; --i) code = code * sp.n + sp.block_of[i];
  return code;
}

// Relabels by first appearance among the first m elements.
SetPartition restrict_partition(const SetPartition& sp, int m) {
  std::vector<int> labels(sp.block_of.begin(), sp.block_of.begin() + m);
  return SetPartition::from_labels(labels);
}

TestReport z_cells_report(const std::string& diagram_id,
                          const std::string& statistic,
                          const std::vector<std::string>& cells,
                          const std::vector<double>& counts,
                          const std::vector<double>& probs, double n,
                          std::uint64_t seed) {
  TestReport t;
  t.diagram_id = diagram_id;
  t.statistic = statistic;
  t.method = "mc_z";
  t.min_pass = 1;
  Json table = Json::array();
  double worst = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double p = probs[c];
    const double se = std::sqrt(p * (1.0 - p) / n);
    const double freq = counts[c] / n;
    const double z = se > 0.0 ? (freq - p) / se : (freq == p ? 0.0 : INFINITY);
    worst = std::max(worst, std::abs(z));
    table.push_back({{"cell", cells[c]}, {"oracle", p}, {"frequency", freq},
                     {"z", z}});
  }
  ReplicateResult rep;
  rep.seed = seed;
  rep.stat_value = worst;
  rep.p_value = std::isfinite(worst) ? std::min(1.0, cells.size() *
                                                         normal_two_sided_p(worst))
                                     : 0.0;
  rep.pass = worst <= 3.0;
  rep.n_a = static_cast<std::size_t>(n);
  t.replicates.push_back(rep);
  t.extra = {{"cells", table}};
  t.note = "stat_value is the largest |z|; p_value is Bonferroni over cells";
  return t;
}

std::string shape_name(const std::vector<int>& shape) {
  std::string s;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += '+';
    s += std::to_string(shape[i]);
  }
  return s;
}

}  // namespace

TestReport check_three_step(double alpha, double delta, const ZetaSpec& zeta,
                            int n, int n_replicas, std::uint64_t seed,
                            int n_atoms) {
  require(in_unit_open(alpha) && in_unit_open(delta),
          "alpha and delta must lie in (0, 1)");
  require(n >= 2 && n <= 8, "three-step check supports 2 <= n <= 8");
  require(n_replicas >= 100, "need at least 100 replicas");
  zeta.validate();
  const auto t0 = Clock::now();
  const auto un = static_cast<std::size_t>(n_replicas);
  std::vector<std::int64_t> ca(un), cb(un);
  parallel_for(un, [&](std::size_t i) {
    Rng ra(seed, 2 * i);
    ca[i] = partition_code(
        three_step_partition(alpha, delta, zeta, n, ra, n_atoms));
    Rng rb(seed, 2 * i + 1);
    cb[i] = partition_code(paintbox_from_mass(
        sample_pa_zeta(alpha * delta, zeta, n_atoms, rb), n, rb));
  });
  std::map<std::int64_t, double> ma, mb;
  for (auto c : ca) ma[c] += 1.0;
  for (auto c : cb) mb[c] += 1.0;
  const ChiSquareResult c = chisq_homogeneity(ma, mb);
  TestReport t;
  t.diagram_id = "three_step";
  std::ostringstream name;
  name << "set_partitions[" << n << "]";
  t.statistic = name.str();
  t.method = "chisq";
  t.min_pass = 1;
  t.replicates.push_back(
      {seed, c.statistic, c.p_value, c.p_value > t.level, un, un});
  t.extra = {{"alpha", alpha},   {"delta", delta},   {"zeta", zeta.to_string()},
             {"bins", c.bins},   {"dof", c.dof},
             {"observed_a", ma.size()}, {"observed_b", mb.size()}};
  t.runtime_s = seconds_since(t0);
  t.finalize();
  return t;
}

TestReport check_three_step_block_counts(double alpha, double delta,
                                         double theta, int n, int n_replicas,
                                         std::uint64_t seed, int n_atoms) {
  require(in_unit_open(alpha) && in_unit_open(delta),
          "alpha and delta must lie in (0, 1)");
  require(theta > 0.0, "block-count oracle needs theta > 0");
  require(n >= 2 && n <= 10, "block-count oracle supports 2 <= n <= 10");
  require(n_replicas >= 100, "need at least 100 replicas");
  const auto t0 = Clock::now();
  const double ad = alpha * delta;
  const ZetaSpec zeta = ZetaSpec::gamma(theta / ad);
  std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
  for (const auto& sp : enumerate_set_partitions(n)) {
    probs[static_cast<std::size_t>(sp.k - 1)] += eppf_pd(ad, theta, sp.block_sizes);
  }
  const auto un = static_cast<std::size_t>(n_replicas);
  std::vector<int> k(un);
  parallel_for(un, [&](std::size_t i) {
    Rng rng(seed, i);
    k[i] = three_step_partition(alpha, delta, zeta, n, rng, n_atoms).k;
  });
  std::vector<double> counts(probs.size(), 0.0);
  for (int x : k) counts[static_cast<std::size_t>(x - 1)] += 1.0;
  std::vector<std::string> cells;
  for (int j = 1; j <= n; ++j) cells.push_back("K=" + std::to_string(j));
  TestReport t = z_cells_report("three_step", "block_count", cells, counts,
                                probs, static_cast<double>(un), seed);
  t.extra["alpha"] = alpha;
  t.extra["delta"] = delta;
  t.extra["theta"] = theta;
  t.runtime_s = seconds_since(t0);
  t.finalize();
  return t;
}

TestReport check_eppf_paintbox(double alpha, double theta, int n_max,
                               int n_replicas, std::uint64_t seed,
                               int n_atoms) {
  require(alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0, 1)");
  require(theta > -alpha, "theta must exceed -alpha");
  require(n_max >= 2 && n_max <= 8, "paint-box oracle supports 2 <= n <= 8");
  require(n_replicas >= 100, "need at least 100 replicas");
  const auto t0 = Clock::now();
  const auto un = static_cast<std::size_t>(n_replicas);
  std::vector<SetPartition> draws(un);
  parallel_for(un, [&](std::size_t i) {
    Rng rng(seed, i);
    draws[i] = paintbox_from_mass(
        sample_pd_series(alpha, theta, n_atoms, rng), n_max, rng);
  });
  std::vector<std::string> cells;
  std::vector<double> counts, probs;
  for (int m = 2; m <= n_max; ++m) {
    std::map<std::vector<int>, double> oracle, seen;
    for (const auto& sp : enumerate_set_partitions(m)) {
      oracle[sp.shape()] += eppf_pd(alpha, theta, sp.block_sizes);
    }
    for (const auto& d : draws) seen[restrict_partition(d, m).shape()] += 1.0;
    for (const auto& [shape, p] : oracle) {
      cells.push_back("n=" + std::to_string(m) + ":" + shape_name(shape));
      probs.push_back(p);
      counts.push_back(seen.count(shape) ? seen[shape] : 0.0);
    }
  }
  TestReport t = z_cells_report("eppf", "paintbox_shapes", cells, counts, probs,
                                static_cast<double>(un), seed);
  t.extra["alpha"] = alpha;
  t.extra["theta"] = theta;
  t.runtime_s = seconds_since(t0);
  t.finalize();
  return t;
}

}  // namespace coagfrag
