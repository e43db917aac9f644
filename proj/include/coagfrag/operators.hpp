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

#include "coagfrag/partitions.hpp"
#include "coagfrag/rng.hpp"
#include "coagfrag/samplers.hpp"
#include "coagfrag/special_fn.hpp"
#include "coagfrag/zeta.hpp"

namespace coagfrag {

/// One draw of the dependent bridge pair sharing a zeta draw and a tau_delta
/// path. input_freqs is the P_alpha(tau_delta(zeta)) partition, delta_freqs
/// the P_delta(zeta) partition whose bridge supplies the intervals.
struct JointCoagSample {
  MassPartition input_freqs;
  MassPartition delta_freqs;
  IntervalPartition intervals;
  MassPartition output_freqs;
  double t1 = 0.0;
  double t2 = 0.0;
  double zeta_draw = 0.0;
};

struct FragConfig {
  enum class TailPolicy { renormalize, truncate_record };

  int n_child_atoms = 500;
  TailPolicy tail_policy = TailPolicy::renormalize;
  /// Resolution floor in output mass. Child atoms are generated down to
  /// roughly this size; parents lighter than it are kept whole. 0 disables.
  double min_mass = 0.0;

  void validate() const;
};

/// Sums atom masses over the intervals their iid uniform locations fall
/// into. Atoms outside every interval stay separate. Dust is spread over the
/// intervals in proportion to their lengths; the share over gaps stays dust.
MassPartition coag_interval(const MassPartition& p, const IntervalPartition& iv,
                            Rng& rng);

JointCoagSample coag_composed(StableIndex alpha, StableIndex delta,
                              const ZetaSpec& zeta, int n_atoms, Rng& rng);

/// Merges the atoms with Bernoulli(s1) labels into one mass. A fraction s1
/// of the dust joins the merged mass.
MassPartition coag_simple(const MassPartition& p, double s1, Rng& rng);

/// Splits every atom by an independent PD(alpha, theta) row.
MassPartition frag_all(const MassPartition& p, StableIndex alpha, double theta,
                       const FragConfig& cfg, Rng& rng);
/// Splits one size-biased pick by a PD(alpha, theta) row. The pick ranges
/// over atoms and dust; picking dust leaves p unchanged.
MassPartition frag_picked(const MassPartition& p, StableIndex alpha,
                          double theta, const FragConfig& cfg, Rng& rng);

/// frag_all with theta = -alpha delta.
MassPartition frag_pitman(const MassPartition& p, StableIndex alpha,
                          StableIndex delta, const FragConfig& cfg, Rng& rng);

/// frag_picked with theta = 1 - alpha.
MassPartition frag_dgm(const MassPartition& p, StableIndex alpha,
                       const FragConfig& cfg, Rng& rng);

/// B (1 - Z^(1/alpha) / (Z + G)^(1/alpha)) with B ~ Beta(1 - alpha, alpha),
/// Z ~ zeta, G ~ Gamma(1).
double structural_sample(StableIndex alpha, const ZetaSpec& zeta, Rng& rng);

/// Partition of [n] from: T1 = tau_delta(zeta)/zeta^(1/delta); a paint-box
/// from the P_alpha series at time zeta^(1/delta) T1; merging its blocks by a
/// paint-box of PD(delta | T1).
SetPartition three_step_partition(StableIndex alpha, StableIndex delta,
                                  const ZetaSpec& zeta, int n, Rng& rng,
                                  int n_atoms = 200);

}  // namespace coagfrag
