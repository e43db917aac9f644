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

#include "coagfrag/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coagfrag/error.hpp"

namespace coagfrag {

void FragConfig::validate() const {
  if (n_child_atoms < 1) throw ConfigError("n_child_atoms must be >= 1");
  if (!(min_mass >= 0.0 && min_mass < 1.0)) {
    throw ConfigError("min_mass must lie in [0, 1)");
  }
}

MassPartition coag_interval(const MassPartition& p, const IntervalPartition& iv,
                            Rng& rng) {
  std::vector<Interval> sorted = iv.intervals;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.left < b.left; });
  std::vector<double> lefts;
  lefts.reserve(sorted.size());
  for (const auto& s : sorted) lefts.push_back(s.left);

  std::vector<double> merged(sorted.size(), 0.0);
  std::vector<double> loose;
  for (double f : p.freqs) {
    const double u = rng.uniform();
    auto it = std::upper_bound(lefts.begin(), lefts.end(), u);
    bool placed = false;
    if (it != lefts.begin()) {
      const auto j = static_cast<std::size_t>(it - lefts.begin() - 1);
      if (u < sorted[j].left + sorted[j].length) {
        merged[j] += f;
        placed = true;
      }
    }
    if (!placed) loose.push_back(f);
  }
  double covered = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    merged[j] += p.dust_bound * sorted[j].length;
    covered += sorted[j].length;
  }
  loose.insert(loose.end(), merged.begin(), merged.end());
  return MassPartition::ranked(
      std::move(loose), p.dust_bound * std::max(0.0, 1.0 - covered));
}

JointCoagSample coag_composed(StableIndex alpha, StableIndex delta,
                              const ZetaSpec& zeta, int n_atoms, Rng& rng) {
  JointCoagSample out;
  out.zeta_draw = sample_zeta(zeta, rng);
  const PaZetaDraw outer = sample_pa_time(delta, out.zeta_draw, n_atoms, rng);
  // The alpha series runs for the time tau_delta(zeta) of the delta path,
  // which is 0 when zeta is.
  const double time = out.zeta_draw > 0.0 ? outer.total : 0.0;
  const PaZetaDraw inner = sample_pa_time(alpha, time, n_atoms, rng);
  out.t1 = outer.T;
  out.t2 = inner.T;
  out.delta_freqs = outer.freqs;
  out.input_freqs = inner.freqs;
  out.intervals = interval_partition(bridge_from_mass(outer.freqs, rng));
  out.output_freqs = coag_interval(inner.freqs, out.intervals, rng);
  return out;
}

MassPartition coag_simple(const MassPartition& p, double s1, Rng& rng) {
  if (!(s1 >= 0.0 && s1 <= 1.0)) {
    throw DomainError("coag_simple weight must lie in [0, 1]");
  }
  std::vector<double> kept;
  kept.reserve(p.freqs.size() + 1);
  double merged = s1 * p.dust_bound;
  for (double f : p.freqs) {
    if (rng.uniform() < s1) merged += f;
    else kept.push_back(f);
  }
  kept.push_back(merged);
  return MassPartition::ranked(std::move(kept), (1.0 - s1) * p.dust_bound);
}

namespace {

// Appends parent * row to out and returns the child dust in output mass.
double append_child_row(double parent, const MassPartition& row,
                        const FragConfig& cfg, std::vector<double>& out) {
  if (cfg.tail_policy == FragConfig::TailPolicy::renormalize) {
    const double m = row.mass();
    for (double f : row.freqs) out.push_back(parent * f / m);
    return 0.0;
  }
  for (double f : row.freqs) out.push_back(parent * f);
  return parent * std::max(0.0, 1.0 - row.mass());
}

MassPartition child_row(double alpha, double theta, double parent,
                        const FragConfig& cfg, Rng& rng) {
  const double rel = cfg.min_mass > 0.0 ? cfg.min_mass / parent : 0.0;
  return sample_pd_series(alpha, theta, cfg.n_child_atoms, rng, rel);
}

}  // namespace

MassPartition frag_all(const MassPartition& p, StableIndex alpha, double theta,
                       const FragConfig& cfg, Rng& rng) {
  cfg.validate();
  if (!(theta > -alpha.value())) {
    throw DomainError("fragmentation requires theta > -alpha");
  }
  std::vector<double> out;
  out.reserve(p.freqs.size() * 4);
  double dust = p.dust_bound;
  for (double f : p.freqs) {
    if (f <= 0.0) continue;
    if (f < cfg.min_mass) {
      out.push_back(f);
      continue;
    }
    dust += append_child_row(f, child_row(alpha, theta, f, cfg, rng), cfg, out);
  }
  return MassPartition::ranked(std::move(out), dust);
}

MassPartition frag_pitman(const MassPartition& p, StableIndex alpha,
                          StableIndex delta, const FragConfig& cfg, Rng& rng) {
  return frag_all(p, alpha, -alpha.value() * delta.value(), cfg, rng);
}

MassPartition frag_picked(const MassPartition& p, StableIndex alpha,
                          double theta, const FragConfig& cfg, Rng& rng) {
  cfg.validate();
  if (!(theta > -alpha.value())) {
    throw DomainError("fragmentation requires theta > -alpha");
  }
  const double total = p.mass() + p.dust_bound;
  if (!(total > 0.0)) throw DomainError("fragmenting a zero-mass partition");
  double u = rng.uniform() * total;
  std::size_t idx = p.freqs.size();
  for (std::size_t i = 0; i < p.freqs.size(); ++i) {
    if (u < p.freqs[i]) {
      idx = i;
      break;
    }
    u -= p.freqs[i];
  }
  if (idx == p.freqs.size()) return p;  // landed on dust

  const double picked = p.freqs[idx];
  std::vector<double> out;
  out.reserve(p.freqs.size() + cfg.n_child_atoms);
  for (std::size_t i = 0; i < p.freqs.size(); ++i) {
    if (i != idx) out.push_back(p.freqs[i]);
  }
  double dust = p.dust_bound;
  if (picked < cfg.min_mass) {
    out.push_back(picked);
  } else {
    dust += append_child_row(
        picked, child_row(alpha, theta, picked, cfg, rng), cfg, out);
  }
  return MassPartition::ranked(std::move(out), dust);
}

MassPartition frag_dgm(const MassPartition& p, StableIndex alpha,
                       const FragConfig& cfg, Rng& rng) {
  return frag_picked(p, alpha, 1.0 - alpha.value(), cfg, rng);
}

double structural_sample(StableIndex alpha, const ZetaSpec& zeta, Rng& rng) {
  const double a = alpha.value();
  const double b = rng.beta(1.0 - a, a);
  const double z = sample_zeta(zeta, rng);
  const double g = rng.gamma(1.0);
  if (z <= 0.0) return b;
  return b * (1.0 - std::exp(std::log(z / (z + g)) / a));
}

SetPartition three_step_partition(StableIndex alpha, StableIndex delta,
                                  const ZetaSpec& zeta, int n, Rng& rng,
                                  int n_atoms) {
  if (n < 1) throw DomainError("three_step_partition requires n >= 1");
  // Step 1: T1 and the alpha-series time zeta^(1/delta) T1 = tau_delta(zeta).
  const double z = sample_zeta(zeta, rng);
  double t1, time;
  if (z <= 0.0) {
    t1 = sample_stable(delta, rng);
    time = 0.0;
  } else {
    time = sample_tilted_stable(delta, z, rng);
    t1 = std::exp(std::log(time) - std::log(z) / delta.value());
  }
  // Step 2: paint-box from the P_alpha(zeta^(1/delta) T1) series.
  const PaZetaDraw inner = sample_pa_time(alpha, time, n_atoms, rng);
  const SetPartition first = paintbox_from_mass(inner.freqs, n, rng);

  // Step 3: paint-box of the blocks from a lazily extended PD(delta | T1)
  // size-biased sequence.
  ConditionalSizeBiased seq(delta, t1);
  std::vector<double> cum;
  std::vector<int> block_label(first.k);
  int next_singleton = -1;
  for (int b = 0; b < first.k; ++b) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    while (it == cum.end() && seq.remaining() > 1e-15) {
      const double f = seq.next(rng);
      cum.push_back((cum.empty() ? 0.0 : cum.back()) + f);
      it = std::upper_bound(cum.begin(), cum.end(), u);
    }
    block_label[b] = it == cum.end() ? next_singleton--
                                     : static_cast<int>(it - cum.begin());
  }
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = block_label[first.block_of[i]];
  return SetPartition::from_labels(labels);
}

}  // namespace coagfrag
