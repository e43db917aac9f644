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

#include "coagfrag/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "coagfrag/error.hpp"

namespace coagfrag {

MassPartition MassPartition::ranked(std::vector<double> values,
                                    double dust_bound) {
  std::stable_sort(values.begin(), values.end(), std::greater<>());
  while (!values.empty() && values.back() <= 0.0) values.pop_back();
  return {std::move(values), std::max(dust_bound, 0.0)};
}

double MassPartition::mass() const {
  return std::accumulate(freqs.begin(), freqs.end(), 0.0);
}

void MassPartition::validate() const {
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(freqs[i] >= 0.0)) throw DomainError("negative frequency");
    if (i > 0 && freqs[i] > freqs[i - 1]) {
      throw DomainError("frequencies are not ranked");
    }
  }
  if (!(dust_bound >= 0.0)) throw DomainError("negative dust bound");
  if (mass() > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "total mass " << mass() << " exceeds 1";
    throw DomainError(msg.str());
  }
}

double Bridge::operator()(double y) const {
  double v = dust * y;
  for (const auto& a : atoms) {
    if (a.location <= y) v += a.size;
  }
  return v;
}

double SimpleBridge::operator()(double y) const {
  return (1.0 - s1) * y + (u1 <= y ? s1 : 0.0);
}

double IntervalPartition::total_length() const {
  double s = 0.0;
  for (const auto& iv : intervals) s += iv.length;
  return s;
}

SetPartition SetPartition::from_labels(const std::vector<int>& labels) {
  SetPartition sp;
  sp.n = static_cast<int>(labels.size());
  sp.block_of.resize(labels.size());
  std::vector<std::pair<int, int>> seen;  // (label, block id)
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& e) { return e.first == labels[i]; });
    int id;
    if (it == seen.end()) {
      id = static_cast<int>(seen.size());
      seen.emplace_back(labels[i], id);
      sp.block_sizes.push_back(0);
    } else {
      id = it->second;
    }
    sp.block_of[i] = id;
    ++sp.block_sizes[id];
  }
  sp.k = static_cast<int>(sp.block_sizes.size());
  return sp;
}

std::vector<int> SetPartition::shape() const {
  std::vector<int> s = block_sizes;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

Bridge bridge_from_mass(const MassPartition& p, Rng& rng) {
  Bridge b;
  b.atoms.reserve(p.freqs.size());
  for (double f : p.freqs) b.atoms.push_back({f, rng.uniform()});
  b.dust = std::max(0.0, 1.0 - p.mass());
  return b;
}

IntervalPartition interval_partition(const Bridge& b) {
  std::vector<BridgeAtom> atoms = b.atoms;
  std::sort(atoms.begin(), atoms.end(),
            [](const BridgeAtom& x, const BridgeAtom& y) {
              return x.location < y.location;
            });
  IntervalPartition ip;
  ip.intervals.reserve(atoms.size());
  double left = 0.0;  // b(location-) accumulates atoms to the left
  for (const auto& a : atoms) {
    const double start = left + b.dust * a.location;
    ip.intervals.push_back({start, a.size});
    left += a.size;
  }
  return ip;
}

SetPartition paintbox_partition(const Bridge& b, int n, Rng& rng) {
  if (n < 1) throw DomainError("paintbox requires n >= 1");
  const IntervalPartition ip = interval_partition(b);
  std::vector<double> lefts;
  lefts.reserve(ip.intervals.size());
  for (const auto& iv : ip.intervals) lefts.push_back(iv.left);

  std::vector<int> labels(n);
  int next_singleton = -1;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    // Last interval starting at or before u.
    auto it = std::upper_bound(lefts.begin(), lefts.end(), u);
    int label = -1;
    if (it != lefts.begin()) {
      const auto j = static_cast<std::size_t>(it - lefts.begin() - 1);
      if (u < ip.intervals[j].left + ip.intervals[j].length) {
        label = static_cast<int>(j);
      }
    }
    labels[i] = label >= 0 ? label : next_singleton--;
  }
  return SetPartition::from_labels(labels);
}

SetPartition paintbox_from_mass(const MassPartition& p, int n, Rng& rng) {
  if (n < 1) throw DomainError("paintbox requires n >= 1");
  std::vector<double> cum(p.freqs.size());
  std::partial_sum(p.freqs.begin(), p.freqs.end(), cum.begin());
  std::vector<int> labels(n);
  int next_singleton = -1;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    labels[i] = (it == cum.end()) ? next_singleton--
                                  : static_cast<int>(it - cum.begin());
  }
  return SetPartition::from_labels(labels);
}

double eppf_pd(double alpha, double theta, const std::vector<int>& sizes) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(theta > -alpha)) {
    std::ostringstream msg;
    msg << "PD(" << alpha << ", " << theta
        << ") requires 0 <= alpha < 1 and theta > -alpha";
    throw DomainError(msg.str());
  }
  if (sizes.empty()) throw DomainError("EPPF needs at least one block");
  int n = 0;
  for (int s : sizes) {
    if (s < 1) throw DomainError("EPPF block sizes must be positive");
    n += s;
  }
  const int k = static_cast<int>(sizes.size());
  double p = 1.0;
  for (int i = 1; i < k; ++i) p *= theta + i * alpha;
  for (int m = 1; m < n; ++m) p /= theta + m;
  for (int s : sizes) {
    for (int j = 1; j < s; ++j) p *= j - alpha;
  }
  return p;
}

std::vector<SetPartition> enumerate_set_partitions(int n) {
  if (n < 1 || n > 12) throw DomainError("enumeration supports 1 <= n <= 12");
  std::vector<SetPartition> out;
  std::vector<int> rgs(n, 0), maxes(n, 0);
  while (true) {
    out.push_back(SetPartition::from_labels(rgs));
    // Next restricted growth string: rgs[i] <= 1 + max(rgs[0..i-1]).
    int i = n - 1;
    while (i > 0 && rgs[i] > maxes[i - 1]) --i;
    if (i == 0) break;
    ++rgs[i];
    maxes[i] = std::max(maxes[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      maxes[j] = maxes[i];
    }
  }
  return out;
}

DiversityEstimate diversity_estimate(const MassPartition& p, StableIndex alpha,
                                     std::size_t min_atoms) {
  p.validate();
  const std::size_t m = p.freqs.size();
  if (m < min_atoms || m == 0) {
    std::ostringstream msg;
    msg << "diversity estimate needs at least " << min_atoms
        << " atoms, got " << m;
    throw DomainError(msg.str());
  }
  const double a = alpha.value();
  const double g = std::tgamma(1.0 - a);
  const std::size_t first = m / 10 + 1;
  double sum = 0.0;
  for (std::size_t i = first; i <= m; ++i) {
    sum += static_cast<double>(i) * g * std::pow(p.freqs[i - 1], a);
  }
  const double S = sum / static_cast<double>(m - first + 1);
  return {S, std::pow(S, -1.0 / a)};
}

DiversityEstimate diversity_estimate(const SetPartition& sp, StableIndex alpha,
                                     int min_n) {
  if (sp.n < min_n) {
    std::ostringstream msg;
    msg << "diversity estimate needs n >= " << min_n << ", got " << sp.n;
    throw DomainError(msg.str());
  }
  const double S = sp.k / std::pow(static_cast<double>(sp.n), alpha.value());
  return {S, std::pow(S, -1.0 / alpha.value())};
}

std::vector<int> simple_bridge_labels(double s1, int n, Rng& rng) {
  if (!(s1 >= 0.0 && s1 <= 1.0)) {
    throw DomainError("simple bridge weight must lie in [0, 1]");
  }
  std::vector<int> labels(n);
  for (auto& l : labels) l = rng.uniform() < s1 ? 1 : 0;
  return labels;
}

}  // namespace coagfrag
