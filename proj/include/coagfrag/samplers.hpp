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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coagfrag/partitions.hpp"
#include "coagfrag/rng.hpp"
#include "coagfrag/special_fn.hpp"
#include "coagfrag/zeta.hpp"

namespace coagfrag {

/// Positive stable variate with E exp(-w T) = exp(-w^alpha), by the Kanter
/// representation.
double sample_stable(StableIndex alpha, Rng& rng);

/// Marginal tau_alpha(t) of the generalized gamma subordinator:
/// E exp(-w X) = exp(-t((1 + w)^alpha - 1)). For t <= 2 a stable draw at time
/// t is accepted with probability exp(-x); for larger t the variable is split
/// into ceil(t) iid pieces, each drawn the same way.
double sample_tilted_stable(StableIndex alpha, double t, Rng& rng,
                            std::uint64_t max_tries = 10'000'000);

/// Largest jumps of a subordinator over [0, elapsed_time], in decreasing
/// order. Everything below `cutoff` is unsampled; its mass has mean
/// tail_mass_bound and standard deviation tail_sd.
struct JumpSeries {
  std::vector<double> jumps;
  double elapsed_time = 0.0;
  double cutoff = 0.0;
  double tail_mass_bound = 0.0;
  double tail_sd = 0.0;

  double sampled_mass() const;
  /// Sampled mass plus the expected unsampled mass.
  double total() const { return sampled_mass() + tail_mass_bound; }
};

enum class JumpMethod {
  /// Stable jumps from the closed-form stable tail inverse, each kept with
  /// probability exp(-x).
  thinning,
  /// Poisson arrivals mapped through gg_levy_tail_inverse.
  inverse_tail,
};

/// Stops after n_atoms jumps, or earlier once a jump falls below
/// min_rel times the mass already sampled (min_rel = 0 disables this).
JumpSeries sample_gg_jumps(StableIndex alpha, double time, int n_atoms,
                           Rng& rng, JumpMethod method = JumpMethod::thinning,
                           double min_rel = 0.0);
JumpSeries sample_stable_jumps(StableIndex alpha, double time, int n_atoms,
                               Rng& rng, double min_rel = 0.0);

/// Jumps divided by the series total; the expected unsampled mass becomes
/// dust.
MassPartition normalize_series(const JumpSeries& series);

/// One draw from P_alpha(zeta) together with the variables that produced it.
struct PaZetaDraw {
  MassPartition freqs;
  double zeta = 0.0;
  /// tau_alpha(zeta), or the stable total when zeta = 0.
  double total = 0.0;
  /// total / zeta^(1/alpha), or the stable total when zeta = 0.
  double T = 0.0;
  double tail_sd = 0.0;
};

/// Series for P_alpha at a known subordinator time; time 0 means PD(alpha, 0).
PaZetaDraw sample_pa_time(StableIndex alpha, double time, int n_atoms,
                          Rng& rng, double min_rel = 0.0);
PaZetaDraw sample_pa_zeta_draw(StableIndex alpha, const ZetaSpec& zeta,
                               int n_atoms, Rng& rng, double min_rel = 0.0);
MassPartition sample_pa_zeta(StableIndex alpha, const ZetaSpec& zeta,
                             int n_atoms, Rng& rng);

/// PD(alpha, theta) by stick-breaking with Beta(1 - alpha, theta + k alpha)
/// sticks, ranked; the unbroken remainder is recorded as dust.
MassPartition sample_pd_stickbreak(double alpha, double theta, int n_sticks,
                                   Rng& rng);

/// PD(alpha, theta) with accurately resolved small atoms: normalized jump
/// series for theta >= 0, and for -alpha < theta < 0 a Beta(1 - alpha,
/// theta + alpha) first pick followed by a scaled PD(alpha, theta + alpha).
/// alpha = 0 falls back to stick-breaking.
MassPartition sample_pd_series(double alpha, double theta, int n_atoms,
                               Rng& rng, double min_rel = 0.0);

/// Size-biased frequencies of PD(alpha | t), generated one at a time. The
/// first pick given total r has density proportional to
/// p^(-alpha) f_alpha((1 - p) r) on (0, 1); the rest are PD(alpha | (1 - p) r).
class ConditionalSizeBiased {
 public:
  ConditionalSizeBiased(StableIndex alpha, double t);

  /// Next frequency, as a fraction of the unit total.
  double next(Rng& rng);
  /// Unit mass not yet handed out.
  double remaining() const { return remaining_; }

 private:
  double draw_fraction(double r, Rng& rng);

  double alpha_;
  const StableDensityTable* table_;
  double total_;
  double remaining_ = 1.0;
};

MassPartition sample_pd_conditional(StableIndex alpha, double t, int n_freqs,
                                    Rng& rng);
/// Draws size-biased frequencies of PD(alpha | t) until the top k ranked
/// values are exact (the unsampled mass is below the k-th largest so far).
MassPartition sample_pd_conditional_top(StableIndex alpha, double t, int k,
                                        Rng& rng, int max_freqs = 100000);

struct SizeBiasedPick {
  std::size_t index = 0;
  double value = 0.0;
  MassPartition remainder;
};

/// Picks atom i with probability p_i / sum_j p_j (dust is not eligible).
SizeBiasedPick size_biased_pick(const MassPartition& p, Rng& rng);

struct DgmS1 {
  double s1 = 0.0;
  double zeta_draw = 0.0;
  double gamma_draw = 0.0;
};

/// s1 = B G / (G + Z), with B ~ Beta((1 - alpha)/alpha, 1),
/// G ~ Gamma(1/alpha) and Z ~ zeta.
DgmS1 sample_dgm_s1(StableIndex alpha, const ZetaSpec& zeta, Rng& rng);

}  // namespace coagfrag
