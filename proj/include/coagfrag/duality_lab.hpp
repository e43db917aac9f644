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

#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "coagfrag/json_io.hpp"
#include "coagfrag/operators.hpp"
#include "coagfrag/partitions.hpp"
#include "coagfrag/rng.hpp"
#include "coagfrag/zeta.hpp"

namespace coagfrag {

/// A scalar summary of a mass partition.
struct Statistic {
  enum class Kind { P1, P2, sizebiased_pick, Kn, diversity, bridge_value_at };

  Kind kind = Kind::P1;
  int n = 50;       // Kn
  double y = 0.5;   // bridge_value_at

  /// "P1", "P2", "sizebiased_pick", "K50", "diversity", "bridge@0.25".
  std::string name() const;
  static Statistic parse(const std::string& text);
  void validate() const;
  bool categorical() const { return kind == Kind::Kn; }
};

/// P1, P2, size-biased pick and K50.
std::vector<Statistic> default_panel();

struct StatisticContext {
  /// Index used by the diversity statistic.
  double alpha = 0.5;
  /// Size-biased picks below this are recorded as 0.
  double censor_floor = 1e-4;
};

/// Evaluates a statistic. Size-biased picks may land on dust (value 0);
/// paint-box draws send dust hits to singletons; bridge values spread dust
/// uniformly.
double evaluate_statistic(const Statistic& st, const MassPartition& p,
                          const StatisticContext& ctx, Rng& rng);

/// Seed replication: replicate r runs under seed + r; a test passes when its
/// p-value exceeds `level` on at least min_pass replicates.
struct ReplicateControl {
  std::uint64_t seed = 1;
  int n_seeds = 5;
  int min_pass = 4;
  double level = 0.01;

  void validate() const;
};

struct ReplicateResult {
  std::uint64_t seed = 0;
  double stat_value = 0.0;
  double p_value = 1.0;
  bool pass = false;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

struct TestReport {
  std::string diagram_id;
  std::string direction;
  std::string statistic;
  /// "ks", "ks_one_sample", "chisq", "mc_z" or "corr".
  std::string method;
  std::vector<ReplicateResult> replicates;
  double level = 0.01;
  int min_pass = 1;
  /// Median over replicates.
  double stat_value = 0.0;
  double p_value = 1.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
  double runtime_s = 0.0;
  Json extra = Json::object();

  /// Recomputes stat_value, p_value and pass from the replicates.
  void finalize();
};

struct DiagramConfig {
  /// pitman_pd, dgm_pd, pitman_general, dgm_general, coag_only, recursion.
  std::string diagram_id;
  double alpha = 0.5;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double theta = std::numeric_limits<double>::quiet_NaN();
  ZetaSpec zeta;
  int recursion_n = 2;
  /// "" for the correct operators; "broken_frag" swaps in a child law with
  /// theta shifted by +1; "independent_coag" (dgm_general and recursion)
  /// draws the coagulation weight independently of the input.
  std::string variant;
  /// "both", "frag" or "coag".
  std::string direction = "both";

  /// Throws ConfigError if the diagram is unknown or its parameters are
  /// missing or out of range.
  void validate() const;
  Json to_json() const;
};

struct RunConfig {
  int n_replicas = 20000;
  int n_atoms = 2000;
  std::vector<Statistic> stats = default_panel();
  ReplicateControl control;
  FragConfig frag{500, FragConfig::TailPolicy::truncate_record, 1e-5};
  double censor_floor = 1e-4;

  void validate() const;
  Json to_json() const;
};

struct DualityReport {
  std::string diagram_id;
  Json params;
  std::vector<TestReport> tests;

  bool pass() const;
};

struct DiagramInfo {
  std::string id;
  std::string description;
  std::vector<std::string> parameters;
};
std::vector<DiagramInfo> list_diagrams();

DualityReport run_duality(const DiagramConfig& diagram, const RunConfig& run);

/// Compares two samples of partitions (for instance ones read from files)
/// on a statistic panel, one replicate.
DualityReport compare_partitions(const std::vector<MassPartition>& a,
                                 const std::vector<MassPartition>& b,
                                 const std::vector<Statistic>& stats,
                                 const StatisticContext& ctx, double level,
                                 std::uint64_t seed);

/// Two-sample KS between scalar samplers, replicated under `control`.
/// Sample i of replicate r uses streams 2i and 2i+1 of seed + r.
using ScalarSampler = std::function<double(Rng&)>;
TestReport compare_scalar_samplers(const std::string& name,
                                   const ScalarSampler& a,
                                   const ScalarSampler& b, int n,
                                   const ReplicateControl& control);

/// zeta[(y(1 + w1 + w2)^alpha + (1 - y)(1 + w1)^alpha)^delta - 1].
double laplace_closed_form(double alpha, double delta, double zeta, double y,
                           double omega1, double omega2);

/// Monte Carlo -log E exp(-w1 tau_alpha(tau_delta(zeta)) -
/// w2 tau_alpha(tau_delta(zeta) y)) against the closed form; passes within
/// three bootstrap standard errors.
TestReport check_laplace_identity(double alpha, double delta, double zeta_value,
                                  double y, double omega1, double omega2,
                                  int n_samples, std::uint64_t seed);

/// Nonnegative step function on [0, 1]: levels[i] on
/// [breakpoints[i-1], breakpoints[i]).
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> levels;

  void validate() const;
  double operator()(double u) const;
  double integral() const;
  /// Sum of length_i (1 + level_i)^alpha.
  double power_mean(double alpha) const;
  /// levels drawn uniformly on [0, max_level), breakpoints uniform sorted.
  static StepFunction random(int n_levels, double max_level, Rng& rng);
};

/// E(1 + M)^(alpha delta) for M the integral of g against a
/// PD(alpha, -alpha delta) bridge, against (sum length_i
/// (1 + level_i)^alpha)^delta; passes within three bootstrap standard errors.
TestReport check_vershik_moment(double alpha, double delta,
                                const StepFunction& g, int n_samples,
                                std::uint64_t seed, int n_atoms = 500);

/// Unnormalized log density of T1 given T2 = v, on log s.
double log_t1_given_t2(StableIndex alpha, StableIndex delta,
                       const ZetaSpec& zeta, double v, double s);

/// Draws from the normalized T1 | T2 = v density tabulated on a log grid.
class T1GivenT2Sampler {
 public:
  T1GivenT2Sampler(StableIndex alpha, StableIndex delta, const ZetaSpec& zeta,
                   double v, int grid = 4000);
  double sample(Rng& rng) const;
  /// Normalizing constant of the density in s, by adaptive quadrature.
  /// Throws NumericError if it does not converge.
  double normalization() const;

 private:
  StableIndex alpha_, delta_;
  ZetaSpec zeta_;
  double v_;
  std::vector<double> w_;
  std::vector<double> cdf_;
  double log_max_ = 0.0;
};

struct ConditioningConfig {
  /// Window center; NaN means the median of a pilot run.
  double center = std::numeric_limits<double>::quiet_NaN();
  /// Relative half-width, used when halfwidth is NaN.
  double rel_halfwidth = 0.1;
  double halfwidth = std::numeric_limits<double>::quiet_NaN();
  /// Accepted samples per replicate.
  int n_samples = 5000;
  double acceptance_floor = 0.02;
  int n_atoms = 1000;
  int pilot = 4000;
};

/// Bins joint coag_composed samples on T2 and compares the largest interval
/// length against bridges whose T1 is drawn from its T2-conditional density
/// given each accepted sample's own T2.
TestReport check_conditional_coag(double alpha, double delta,
                                  const ZetaSpec& zeta,
                                  const ConditioningConfig& cc,
                                  const ReplicateControl& control);

/// Bins joint samples on T1. Returns three reports: the delta-side largest
/// frequency against PD(delta | T1) (KS), the within-bin partial correlation
/// of the two largest frequencies given log T1, and the unconditioned
/// correlation, which passes when it is detectably nonzero.
std::vector<TestReport> check_conditional_independence(
    double alpha, double delta, const ZetaSpec& zeta,
    const ConditioningConfig& cc, const ReplicateControl& control);

/// Q_{alpha, tau_delta(zeta)}(Q_{delta, zeta}(y)) against Q_{alpha delta,
/// zeta}(y).
TestReport check_composition(double alpha, double delta, const ZetaSpec& zeta,
                             double y, int n, const ReplicateControl& control);

/// structural_sample against size-biased picks from sample_pa_zeta, where a
/// pick may land on dust. Values below censor_floor are set to 0 in both
/// channels.
TestReport check_structural(double alpha, const ZetaSpec& zeta, int n,
                            int n_atoms, const ReplicateControl& control,
                            double censor_floor = 1e-4);
/// structural_sample with zeta = 0 against the Beta(1 - alpha, alpha) CDF.
TestReport check_structural_beta(double alpha, int n,
                                 const ReplicateControl& control);

/// Chi-square over set partitions of [n] between three_step_partition and a
/// paint-box of P_{alpha delta}(zeta).
TestReport check_three_step(double alpha, double delta, const ZetaSpec& zeta,
                            int n, int n_replicas, std::uint64_t seed,
                            int n_atoms = 200);

/// Block-count frequencies of three_step_partition with zeta =
/// gamma(theta / (alpha delta)) against PD(alpha delta, theta) EPPF
/// probabilities; passes when every count is within three standard errors.
TestReport check_three_step_block_counts(double alpha, double delta,
                                         double theta, int n, int n_replicas,
                                         std::uint64_t seed,
                                         int n_atoms = 200);

/// Paint-box frequencies of each block-size shape of [n], n = 2..n_max,
/// from PD(alpha, theta) bridges against the EPPF; passes when every shape is
/// within three standard errors.
TestReport check_eppf_paintbox(double alpha, double theta, int n_max,
                               int n_replicas, std::uint64_t seed,
                               int n_atoms = 500);

Json to_json(const TestReport& r);
Json to_json(const DualityReport& r);
/// Header plus one row per replicate of every report.
void write_csv(std::ostream& out, const std::vector<TestReport>& reports);

}  // namespace coagfrag
