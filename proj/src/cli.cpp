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

#include "coagfrag/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "CLI11.hpp"

#include "coagfrag/duality_lab.hpp"
#include "coagfrag/error.hpp"
#include "coagfrag/json_io.hpp"
#include "coagfrag/operators.hpp"
#include "coagfrag/samplers.hpp"
#include "coagfrag/special_fn.hpp"
#include "coagfrag/zeta.hpp"

#ifndef COAGFRAG_VERSION
#define COAGFRAG_VERSION "unknown"
#endif

namespace coagfrag {

const char* version_string() { return COAGFRAG_VERSION; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Options registered both as flags and as keys of an optional JSON config
// file. A flag given on the command line wins over the file.
class Settings {
 public:
  explicit Settings(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON file of option values");
  }

  template <class T>
  void bind(const std::string& key, T& var, const std::string& help) {
    CLI::Option* opt = nullptr;
    if constexpr (std::is_same_v<T, bool>) {
      opt = app_->add_flag("--" + key, var, help);
    } else {
      opt = app_->add_option("--" + key, var, help);
    }
    entries_.push_back({key, opt,
                        [&var, key](const Json& j) {
                          try {
                            var = j.get<T>();
                          } catch (const Json::exception&) {
                            throw ConfigError("config key '" + key +
                                              "' has the wrong type");
                          }
                        },
                        [&var] { return Json(var); }});
  }

  void apply_file() {
    if (config_path_.empty()) return;
    std::ifstream in(config_path_);
    if (!in) throw ConfigError("cannot open config file " + config_path_);
    Json file;
    try {
      file = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ConfigError("config file " + config_path_ + ": " + e.what());
    }
    if (!file.is_object()) throw ConfigError("config file must hold an object");
    for (const auto& [raw, value] : file.items()) {
      std::string key = raw;
      std::replace(key.begin(), key.end(), '_', '-');
      auto it = std::find_if(entries_.begin(), entries_.end(),
                             [&](const Entry& e) { return e.key == key; });
      if (it == entries_.end()) throw ConfigError("unknown config key: " + raw);
      if (it->opt->count() == 0) it->from_json(value);
    }
  }

  Json resolved() const {
    Json j = Json::object();
    for (const auto& e : entries_) j[e.key] = e.to_json();
    if (!config_path_.empty()) j["config"] = config_path_;
    return j;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* opt;
    std::function<void(const Json&)> from_json;
    std::function<Json()> to_json;
  };

  CLI::App* app_;
  std::string config_path_;
  std::vector<Entry> entries_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("bad number in " + what + ": " + item);
    }
  }
  return out;
}

// Writes to the named file, or to `fallback` for "-" or "".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

// ---------------------------------------------------------------------------
// sample

struct SampleOptions {
  std::string family = "pa_zeta";
  double alpha = 0.5;
  double delta = kNaN;
  double theta = kNaN;
  std::string zeta = "zero";
  double t = 1.0;
  double s1 = kNaN;
  int n = 100;
  int n_atoms = 2000;
  int n_points = 10;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string input;
};

const std::vector<std::string> kFamilies = {
    "pa_zeta",      "pd",        "pd_stickbreak", "pd_conditional",
    "three_step",   "paintbox",  "coag_composed", "frag_pitman",
    "frag_dgm",     "coag_simple", "structural"};

int cmd_sample(const SampleOptions& o, std::ostream& out_fallback) {
  if (std::find(kFamilies.begin(), kFamilies.end(), o.family) == kFamilies.end()) {
    throw ConfigError("unknown family: " + o.family);
  }
  if (o.n < 1) throw ConfigError("--n must be positive");
  if (o.n_atoms < 1) throw ConfigError("--n-atoms must be positive");
  const StableIndex alpha(o.alpha);
  const ZetaSpec zeta = ZetaSpec::parse(o.zeta);
  zeta.validate();
  auto need_delta = [&] {
    if (!(o.delta > 0.0 && o.delta < 1.0)) {
      throw ConfigError("family " + o.family + " requires --delta in (0, 1)");
    }
    return StableIndex(o.delta);
  };
  auto need_theta = [&] {
    if (!(o.theta > -o.alpha)) {
      throw ConfigError("family " + o.family + " requires --theta > -alpha");
    }
    return o.theta;
  };

  std::vector<MassPartition> inputs;
  if (!o.input.empty()) {
    std::ifstream in(o.input);
    if (!in) throw ConfigError("cannot open input file " + o.input);
    inputs = read_mass_partitions_jsonl(in);
  }
  const bool takes_input = o.family == "frag_pitman" || o.family == "frag_dgm" ||
                           o.family == "coag_simple";
  if (!inputs.empty() && !takes_input) {
    throw ConfigError("family " + o.family + " does not take --input");
  }
  const FragConfig frag{500, FragConfig::TailPolicy::renormalize, 1e-5};
  const int count = inputs.empty() ? o.n : static_cast<int>(inputs.size());

  // Validate family parameters before sampling.
  if (o.family == "pd" || o.family == "pd_stickbreak") need_theta();
  if (o.family == "three_step" || o.family == "coag_composed" ||
      o.family == "frag_pitman") {
    need_delta();
  }
  if (o.family == "pd_conditional" && !(o.t > 0.0)) {
    throw ConfigError("family pd_conditional requires --t > 0");
  }
  if (o.family == "three_step" || o.family == "paintbox") {
    if (o.n_points < 1) throw ConfigError("--n-points must be positive");
  }
  if (o.family == "coag_simple" && !inputs.empty() && std::isnan(o.s1)) {
    throw ConfigError("coag_simple on --input needs --s1");
  }
  if (!std::isnan(o.s1) && !(o.s1 >= 0.0 && o.s1 <= 1.0)) {
    throw ConfigError("--s1 must lie in [0, 1]");
  }

  Output sink(o.out, out_fallback);
  std::ostream& out = *sink;
  for (int i = 0; i < count; ++i) {
    Rng rng(o.seed, static_cast<std::uint64_t>(i));
    Json line;
    if (o.family == "pa_zeta") {
      line = to_json(sample_pa_zeta(alpha, zeta, o.n_atoms, rng));
    } else if (o.family == "pd") {
      line = to_json(sample_pd_series(o.alpha, need_theta(), o.n_atoms, rng));
    } else if (o.family == "pd_stickbreak") {
      line = to_json(sample_pd_stickbreak(o.alpha, need_theta(), o.n_atoms, rng));
    } else if (o.family == "pd_conditional") {
      line = to_json(sample_pd_conditional(alpha, o.t, o.n_atoms, rng));
    } else if (o.family == "three_step") {
      line = to_json(three_step_partition(alpha, need_delta(), zeta, o.n_points,
                                          rng, std::min(o.n_atoms, 200)));
    } else if (o.family == "paintbox") {
      line = to_json(paintbox_from_mass(
          sample_pa_zeta(alpha, zeta, o.n_atoms, rng), o.n_points, rng));
    } else if (o.family == "coag_composed") {
      const JointCoagSample s =
          coag_composed(alpha, need_delta(), zeta, o.n_atoms, rng);
      line = to_json(s.output_freqs);
      line["t1"] = s.t1;
      line["t2"] = s.t2;
      line["zeta"] = s.zeta_draw;
    } else if (o.family == "frag_pitman") {
      const StableIndex delta = need_delta();
      const MassPartition p =
          inputs.empty()
              ? sample_pa_zeta(o.alpha * o.delta, zeta, o.n_atoms, rng)
              : inputs[static_cast<std::size_t>(i)];
      line = to_json(frag_pitman(p, alpha, delta, frag, rng));
    } else if (o.family == "frag_dgm") {
      const MassPartition p = inputs.empty()
                                  ? sample_pa_zeta(alpha, zeta, o.n_atoms, rng)
                                  : inputs[static_cast<std::size_t>(i)];
      line = to_json(frag_dgm(p, alpha, frag, rng));
    } else if (o.family == "coag_simple") {
      if (!inputs.empty()) {
        line = to_json(coag_simple(inputs[static_cast<std::size_t>(i)], o.s1, rng));
      } else if (!std::isnan(o.s1)) {
        line = to_json(
            coag_simple(sample_pa_zeta(alpha, zeta, o.n_atoms, rng), o.s1, rng));
      } else {
        // Input P_alpha(G + Z) with the weight built from the same G and Z.
        const double g = rng.gamma(1.0 / o.alpha);
        const double z = sample_zeta(zeta, rng);
        const MassPartition p = sample_pa_time(alpha, g + z, o.n_atoms, rng).freqs;
        const double s1 = rng.beta((1.0 - o.alpha) / o.alpha, 1.0) * g / (g + z);
        line = to_json(coag_simple(p, s1, rng));
        line["s1"] = s1;
      }
    } else {
      line = Json{{"value", structural_sample(alpha, zeta, rng)}};
    }
    line["index"] = i;
    out << dump_json(line) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string diagram;
  std::string check;
  double alpha = 0.5;
  double delta = kNaN;
  double theta = kNaN;
  std::string zeta = "zero";
  int recursion_n = 2;
  std::string variant;
  std::string direction = "both";
  int n_replicas = 20000;
  int n_atoms = 2000;
  std::string stats = "P1,P2,sizebiased_pick,K50";
  double level = 0.01;
  int seeds = 5;
  int min_pass = 4;
  std::uint64_t seed = 1;
  std::string out;
  int frag_child_atoms = 500;
  std::string frag_tail_policy = "truncate_record";
  double frag_min_mass = 1e-5;
  double censor_floor = 1e-4;
  double y = 0.5;
  double omega1 = 0.5;
  double omega2 = 1.0;
  double zeta_value = 1.0;
  std::string levels = "0.5,2";
  std::string breakpoints = "0.4";
  double center = kNaN;
  double halfwidth = kNaN;
  double rel_halfwidth = 0.1;
  int n_samples = 200000;
  double acceptance_floor = 0.02;
  int n_points = 5;
  std::string input_a;
  std::string input_b;
};

const std::vector<std::string> kChecks = {
    "laplace",    "vershik",      "composition", "structural",
    "structural_beta", "three_step", "block_counts", "eppf",
    "conditional_coag", "conditional_independence"};

std::vector<Statistic> parse_panel(const std::string& s) {
  std::vector<Statistic> out;
  for (const auto& item : split(s, ',')) out.push_back(Statistic::parse(item));
  if (out.empty()) throw ConfigError("statistic panel is empty");
  return out;
}

std::vector<TestReport> run_check(const VerifyOptions& o) {
  if (std::find(kChecks.begin(), kChecks.end(), o.check) == kChecks.end()) {
    throw ConfigError("unknown check: " + o.check);
  }
  ReplicateControl rc{o.seed, o.seeds, o.min_pass, o.level};
  rc.validate();
  const ZetaSpec zeta = ZetaSpec::parse(o.zeta);
  zeta.validate();
  ConditioningConfig cc;
  cc.center = o.center;
  cc.halfwidth = o.halfwidth;
  cc.rel_halfwidth = o.rel_halfwidth;
  cc.n_samples = o.n_samples;
  cc.acceptance_floor = o.acceptance_floor;
  cc.n_atoms = std::min(o.n_atoms, 1000);

  if (o.check == "laplace") {
    return {check_laplace_identity(o.alpha, o.delta, o.zeta_value, o.y, o.omega1,
                                   o.omega2, o.n_samples, o.seed)};
  }
  if (o.check == "vershik") {
    StepFunction g{parse_doubles(o.breakpoints, "--breakpoints"),
                   parse_doubles(o.levels, "--levels")};
    return {check_vershik_moment(o.alpha, o.delta, g, o.n_samples, o.seed)};
  }
  if (o.check == "composition") {
    return {check_composition(o.alpha, o.delta, zeta, o.y, o.n_replicas, rc)};
  }
  if (o.check == "structural") {
    return {check_structural(o.alpha, zeta, o.n_replicas, o.n_atoms, rc, o.censor_floor)};
  }
  if (o.check == "structural_beta") {
    return {check_structural_beta(o.alpha, o.n_replicas, rc)};
  }
  if (o.check == "three_step") {
    return {check_three_step(o.alpha, o.delta, zeta, o.n_points, o.n_samples,
                             o.seed)};
  }
  if (o.check == "block_counts") {
    return {check_three_step_block_counts(o.alpha, o.delta, o.theta, o.n_points,
                                          o.n_samples, o.seed)};
  }
  if (o.check == "eppf") {
    return {check_eppf_paintbox(o.alpha, o.theta, o.n_points, o.n_samples,
                                o.seed)};
  }
  if (o.check == "conditional_coag") {
    return {check_conditional_coag(o.alpha, o.delta, zeta, cc, rc)};
  }
  return check_conditional_independence(o.alpha, o.delta, zeta, cc, rc);
}

std::vector<MassPartition> read_partitions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file " + path);
  auto parts = read_mass_partitions_jsonl(in);
  if (parts.empty()) throw ConfigError("no partitions in " + path);
  return parts;
}

int cmd_verify(const VerifyOptions& o, const Json& resolved, std::ostream& out) {
  const int modes = (!o.diagram.empty() ? 1 : 0) + (!o.check.empty() ? 1 : 0) +
                    (!o.input_a.empty() || !o.input_b.empty() ? 1 : 0);
  if (modes != 1) {
    throw ConfigError(
        "verify needs exactly one of --diagram, --check or --input-a/--input-b");
  }
  Json reports = Json::array();
  std::vector<TestReport> flat;
  auto add = [&](const DualityReport& r) {
    reports.push_back(to_json(r));
    flat.insert(flat.end(), r.tests.begin(), r.tests.end());
  };

  if (!o.diagram.empty()) {
    DiagramConfig d;
    d.diagram_id = o.diagram;
    d.alpha = o.alpha;
    d.delta = o.delta;
    d.theta = o.theta;
    d.zeta = ZetaSpec::parse(o.zeta);
    d.recursion_n = o.recursion_n;
    d.variant = o.variant;
    d.direction = o.direction;
    RunConfig run;
    run.n_replicas = o.n_replicas;
    run.n_atoms = o.n_atoms;
    run.stats = parse_panel(o.stats);
    run.control = {o.seed, o.seeds, o.min_pass, o.level};
    run.frag.n_child_atoms = o.frag_child_atoms;
    if (o.frag_tail_policy == "renormalize") {
      run.frag.tail_policy = FragConfig::TailPolicy::renormalize;
    } else if (o.frag_tail_policy != "truncate_record") {
      throw ConfigError("frag tail policy must be renormalize or truncate_record");
    }
    run.frag.min_mass = o.frag_min_mass;
    run.censor_floor = o.censor_floor;
    add(run_duality(d, run));
  } else if (!o.check.empty()) {
    DualityReport r;
    r.diagram_id = o.check;
    r.tests = run_check(o);
    add(r);
  } else {
    if (o.input_a.empty() || o.input_b.empty()) {
      throw ConfigError("external mode needs both --input-a and --input-b");
    }
    StatisticContext ctx{o.alpha, o.censor_floor};
    add(compare_partitions(read_partitions(o.input_a), read_partitions(o.input_b),
                           parse_panel(o.stats), ctx, o.level, o.seed));
  }

  bool pass = true;
  for (const auto& t : flat) pass = pass && t.pass;
  const Json doc{{"version", version_string()},
                 {"config", resolved},
                 {"pass", pass},
                 {"reports", reports}};
  if (o.out.empty() || o.out == "-") {
    out << dump_json(doc) << '\n';
  } else {
    Output json(o.out + ".json", out);
    *json << dump_json(doc) << '\n';
    Output csv(o.out + ".csv", out);
    write_csv(*csv, flat);
  }
  return pass ? kExitOk : kExitStatistical;
}

// ---------------------------------------------------------------------------
// density

struct DensityOptions {
  double alpha = 0.5;
  double delta = kNaN;
  std::string zeta = "zero";
  double s = 1.0;
  double v = 1.0;
  std::string grid = "0.05:20:100";
  bool log_grid = false;
  std::string out = "-";
};

double zeta_cdf(const ZetaSpec& z, double y) {
  if (z.gamma_shift > 0.0) return kNaN;
  switch (z.kind) {
    case ZetaSpec::Kind::zero: return y >= 0.0 ? 1.0 : 0.0;
    case ZetaSpec::Kind::constant: return y >= z.param ? 1.0 : 0.0;
    case ZetaSpec::Kind::gamma:
      return y <= 0.0 ? 0.0 : boost::math::gamma_p(z.param, y);
    case ZetaSpec::Kind::empirical: {
      double c = 0.0;
      for (const auto& [value, weight] : z.table) c += value <= y ? weight : 0.0;
      return c;
    }
  }
  return kNaN;
}

int cmd_density(const DensityOptions& o, std::ostream& out_fallback) {
  const StableIndex alpha(o.alpha);
  const ZetaSpec zeta = ZetaSpec::parse(o.zeta);
  zeta.validate();
  const auto parts = split(o.grid, ':');
  if (parts.size() != 3) throw ConfigError("--grid must be lo:hi:n");
  const auto lohi = parse_doubles(parts[0] + "," + parts[1], "--grid");
  int n = 0;
  try {
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("--grid point count must be an integer");
  }
  const double lo = lohi[0], hi = lohi[1];
  if (!(lo > 0.0 && hi > lo) || n < 2) {
    throw ConfigError("--grid needs 0 < lo < hi and n >= 2");
  }
  if (!(o.s > 0.0)) throw ConfigError("--s must be positive");
  const bool pkmix = !std::isnan(o.delta);
  if (pkmix && !(o.delta > 0.0 && o.delta < 1.0)) {
    throw ConfigError("--delta must lie in (0, 1)");
  }
  if (pkmix && !(o.v > 0.0)) throw ConfigError("--v must be positive");

  Output out(o.out, out_fallback);
  *out << "x,stable_density,stable_cdf,condzeta_weight,zeta_cdf,"
          "pkmix_unnormalized,error\n";
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    const double x = o.log_grid ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    double dens = kNaN, cdf = kNaN, pk = kNaN;
    std::string error;
    try {
      dens = stable_density(alpha, x);
      cdf = stable_cdf(alpha, x);
      if (pkmix) {
        pk = std::exp(log_t1_given_t2(alpha, StableIndex(o.delta), zeta, o.v, x));
      }
    } catch (const std::exception& e) {
      error = e.what();
      std::replace(error.begin(), error.end(), ',', ';');
    }
    const double weight = std::exp(-(o.s * std::pow(x, 1.0 / o.alpha) - x));
    *out << format_double(x) << ',' << format_double(dens) << ','
         << format_double(cdf) << ',' << format_double(weight) << ','
         << format_double(zeta_cdf(zeta, x)) << ',' << format_double(pk) << ','
         << error << '\n';
  }
  return kExitOk;
}

int cmd_list_diagrams(std::ostream& out) {
  for (const auto& d : list_diagrams()) {
    std::string params;
    for (const auto& p : d.parameters) params += (params.empty() ? "" : ",") + p;
    out << d.id << '\t' << params << '\t' << d.description << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Coagulation-fragmentation duality sampler and verifier",
               "coagfrag"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1);

  SampleOptions so;
  CLI::App* sample = app.add_subcommand("sample", "write samples as JSON lines");
  Settings ss(sample);
  ss.bind("family", so.family, "pa_zeta, pd, pd_stickbreak, pd_conditional, "
                               "three_step, paintbox, coag_composed, "
                               "frag_pitman, frag_dgm, coag_simple, structural");
  ss.bind("alpha", so.alpha, "stable index");
  ss.bind("delta", so.delta, "second stable index");
  ss.bind("theta", so.theta, "PD theta");
  ss.bind("zeta", so.zeta, "zeta law, e.g. zero, const:1, gamma:2");
  ss.bind("t", so.t, "conditioning value for pd_conditional");
  ss.bind("s1", so.s1, "simple bridge weight");
  ss.bind("n", so.n, "number of samples");
  ss.bind("n-atoms", so.n_atoms, "atoms per series");
  ss.bind("n-points", so.n_points, "points for partitions of [n]");
  ss.bind("seed", so.seed, "seed");
  ss.bind("out", so.out, "output path, - for stdout");
  ss.bind("input", so.input, "JSON-lines partitions to transform");

  VerifyOptions vo;
  CLI::App* verify = app.add_subcommand("verify", "run a diagram or identity check");
  Settings vs(verify);
  vs.bind("diagram", vo.diagram, "diagram id (see list-diagrams)");
  vs.bind("check", vo.check, "laplace, vershik, composition, structural, "
                             "structural_beta, three_step, block_counts, eppf, "
                             "conditional_coag, conditional_independence");
  vs.bind("alpha", vo.alpha, "stable index");
  vs.bind("delta", vo.delta, "second stable index");
  vs.bind("theta", vo.theta, "PD theta");
  vs.bind("zeta", vo.zeta, "zeta law");
  vs.bind("recursion-n", vo.recursion_n, "level of the recursion diagram");
  vs.bind("variant", vo.variant, "broken_frag or independent_coag");
  vs.bind("direction", vo.direction, "both, frag or coag");
  vs.bind("n-replicas", vo.n_replicas, "samples per channel");
  vs.bind("n-atoms", vo.n_atoms, "atoms per series");
  vs.bind("stats", vo.stats, "comma separated statistic panel");
  vs.bind("level", vo.level, "test level");
  vs.bind("seeds", vo.seeds, "seed replicates");
  vs.bind("min-pass", vo.min_pass, "replicates that must pass");
  vs.bind("seed", vo.seed, "base seed");
  vs.bind("out", vo.out, "output prefix for .json and .csv; empty for stdout");
  vs.bind("frag-child-atoms", vo.frag_child_atoms, "atoms per child row");
  vs.bind("frag-tail-policy", vo.frag_tail_policy,
          "renormalize or truncate_record");
  vs.bind("frag-min-mass", vo.frag_min_mass, "fragmentation resolution floor");
  vs.bind("censor-floor", vo.censor_floor, "size-biased picks below are 0");
  vs.bind("y", vo.y, "bridge argument");
  vs.bind("omega1", vo.omega1, "Laplace argument");
  vs.bind("omega2", vo.omega2, "Laplace argument");
  vs.bind("zeta-value", vo.zeta_value, "fixed zeta for the Laplace check");
  vs.bind("levels", vo.levels, "step function levels");
  vs.bind("breakpoints", vo.breakpoints, "step function breakpoints");
  vs.bind("center", vo.center, "conditioning window center");
  vs.bind("halfwidth", vo.halfwidth, "conditioning window half-width");
  vs.bind("rel-halfwidth", vo.rel_halfwidth, "relative half-width");
  vs.bind("n-samples", vo.n_samples, "samples for single-run checks");
  vs.bind("acceptance-floor", vo.acceptance_floor, "window acceptance floor");
  vs.bind("n-points", vo.n_points, "n for partitions of [n]");
  vs.bind("input-a", vo.input_a, "JSON-lines partitions, first sample");
  vs.bind("input-b", vo.input_b, "JSON-lines partitions, second sample");

  DensityOptions dopt;
  CLI::App* density = app.add_subcommand("density", "tabulate densities as CSV");
  Settings ds(density);
  ds.bind("alpha", dopt.alpha, "stable index");
  ds.bind("delta", dopt.delta, "index of T1 for the T1 | T2 density");
  ds.bind("zeta", dopt.zeta, "zeta law");
  ds.bind("s", dopt.s, "T value of the conditional zeta weight");
  ds.bind("v", dopt.v, "T2 value of the T1 | T2 density");
  ds.bind("grid", dopt.grid, "lo:hi:n");
  ds.bind("log-grid", dopt.log_grid, "geometric spacing");
  ds.bind("out", dopt.out, "output path, - for stdout");

  CLI::App* list = app.add_subcommand("list-diagrams", "list diagram ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sample->parsed()) {
      ss.apply_file();
      return cmd_sample(so, out);
    }
    if (verify->parsed()) {
      vs.apply_file();
      return cmd_verify(vo, vs.resolved(), out);
    }
    if (density->parsed()) {
      ds.apply_file();
      return cmd_density(dopt, out);
    }
    if (list->parsed()) return cmd_list_diagrams(out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}

}  // namespace coagfrag
