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
#include <vector>

#include "coagfrag/rng.hpp"
#include "coagfrag/special_fn.hpp"

namespace coagfrag {

/// Ranked frequencies plus the mass not carried by any listed atom. The
/// unlisted mass ("dust") stands for a continuum of infinitesimal atoms, or
/// for truncated atoms below the resolution of a sampler.
struct MassPartition {
  std::vector<double> freqs;
  double dust_bound = 0.0;

  /// Sorts descending (stable, so ties keep their input order).
  static MassPartition ranked(std::vector<double> values,
                              double dust_bound = 0.0);

  double mass() const;
  std::size_t size() const { return freqs.size(); }
  double largest(std::size_t i = 0) const {
    return i < freqs.size() ? freqs[i] : 0.0;
  }
  /// Throws DomainError if unranked, negative, or carrying mass above 1.
  void validate() const;
};

struct BridgeAtom {
  double size = 0.0;
  double location = 0.0;
};

/// b(y) = dust * y + sum_i size_i 1(location_i <= y).
struct Bridge {
  std::vector<BridgeAtom> atoms;
  double dust = 0.0;

  double operator()(double y) const;
};

/// b(y) = (1 - s1) y + s1 1(u1 <= y).
struct SimpleBridge {
  double s1 = 0.0;
  double u1 = 0.0;

  double operator()(double y) const;
};

struct Interval {
  double left = 0.0;
  double length = 0.0;
};

/// Flat stretches of a bridge's inverse, in location order.
struct IntervalPartition {
  std::vector<Interval> intervals;

  double total_length() const;
};

/// Partition of {0, ..., n-1}. Block ids are assigned in order of first
/// appearance, so equal partitions have equal block_of vectors.
struct SetPartition {
  int n = 0;
  std::vector<int> block_of;
  std::vector<int> block_sizes;
  int k = 0;

  static SetPartition from_labels(const std::vector<int>& labels);
  /// Block sizes sorted descending; identifies the exchangeable class.
  std::vector<int> shape() const;

  friend bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.n == b.n && a.block_of == b.block_of;
  }
};

Bridge bridge_from_mass(const MassPartition& p, Rng& rng);
IntervalPartition interval_partition(const Bridge& b);

/// Classifies n iid uniforms by the atom of the bridge they fall into;
/// uniforms landing on the dust part become singletons.
SetPartition paintbox_partition(const Bridge& b, int n, Rng& rng);
/// Same law as paintbox_partition(bridge_from_mass(p)), without building the
/// bridge: each point picks atom i with probability p_i.
SetPartition paintbox_from_mass(const MassPartition& p, int n, Rng& rng);

/// Exchangeable partition probability function of PD(alpha, theta),
/// computed as a sequential seating product.
double eppf_pd(double alpha, double theta, const std::vector<int>& block_sizes);

/// All set partitions of {0, ..., n-1}, via restricted growth strings.
std::vector<SetPartition> enumerate_set_partitions(int n);

struct DiversityEstimate {
  double S = 0.0;  // alpha-diversity
  double T = 0.0;  // S^(-1/alpha)
};

/// Frequency form: averages i Gamma(1 - alpha) P_i^alpha over the last
/// decade of available indices. Needs at least `min_atoms` atoms.
DiversityEstimate diversity_estimate(const MassPartition& p, StableIndex alpha,
                                     std::size_t min_atoms = 100);
/// Partition form: K_n / n^alpha. Needs n >= min_n.
DiversityEstimate diversity_estimate(const SetPartition& sp, StableIndex alpha,
                                     int min_n = 1000);

/// iid Bernoulli(s1) labels.
std::vector<int> simple_bridge_labels(double s1, int n, Rng& rng);

}  // namespace coagfrag
