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

#include "coagfrag/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>

#include "coagfrag/error.hpp"

namespace coagfrag {

namespace {

// Below this subordinator time the exponential tilt changes jump sizes by
// less than time^(1/alpha), so the generalized gamma series is replaced by
// the stable one.
constexpr double kStableTime = 1e-12;

void require_series_args(double time, int n_atoms, const char* what) {
  if (!(time > 0.0) || !std::isfinite(time)) {
    std::ostringstream msg;
    msg << what << " requires a positive finite time, got " << time;
    throw DomainError(msg.str());
  }
  if (n_atoms < 1) {
    std::ostringstream msg;
    msg << what << " requires n_atoms >= 1, got " << n_atoms;
    throw DomainError(msg.str());
  }
}

void require_pd(double alpha, double theta) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(theta > -alpha) ||
      !std::isfinite(theta)) {
    std::ostringstream msg;
    msg << "PD(" << alpha << ", " << theta
        << ") requires 0 <= alpha < 1 and theta > -alpha";
    throw DomainError(msg.str());
  }
}

}  // namespace

double sample_stable(StableIndex alpha, Rng& rng) {
  const double a = alpha.value();
  const double u = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  return std::exp((1.0 - a) / a *
                  (std::log(zolotarev_a(alpha, u)) - std::log(w)));
}

double sample_tilted_stable(StableIndex alpha, double t, Rng& rng,
                            std::uint64_t max_tries) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    std::ostringstream msg;
    msg << "sample_tilted_stable requires t > 0, got " << t;
    throw DomainError(msg.str());
  }
  const int pieces = t <= 2.0 ? 1 : static_cast<int>(std::ceil(t));
  const double h = t / pieces;
  const double scale = std::pow(h, 1.0 / alpha.value());
  double sum = 0.0;
  std::uint64_t tries = 0;
  for (int i = 0; i < pieces; ++i) {
    while (true) {
      if (++tries > max_tries) {
        std::ostringstream msg;
        msg << "tilted stable rejection budget exhausted at t = " << t
            << " (expected acceptance " << std::exp(-h) << " per piece)";
        throw NumericError(msg.str(), std::exp(-h));
      }
      const double x = scale * sample_stable(alpha, rng);
      if (rng.uniform() < std::exp(-x)) {
        sum += x;
        break;
      }
    }
  }
  return sum;
}

double JumpSeries::sampled_mass() const {
  return std::accumulate(jumps.begin(), jumps.end(), 0.0);
}

JumpSeries sample_gg_jumps(StableIndex alpha, double time, int n_atoms,
                           Rng& rng, JumpMethod method, double min_rel) {
  require_series_args(time, n_atoms, "sample_gg_jumps");
  const double a = alpha.value();
  const double g1 = std::tgamma(1.0 - a);
  JumpSeries s;
  s.elapsed_time = time;
  s.jumps.reserve(n_atoms);
  double arrival = 0.0, sum = 0.0, x = 0.0;

  if (method == JumpMethod::thinning) {
    while (static_cast<int>(s.jumps.size()) < n_atoms) {
      arrival += rng.exponential();
      x = std::exp(-std::log(g1 * arrival / time) / a);
      if (!s.jumps.empty() && x < min_rel * sum) break;
      const double u = rng.uniform();
      if (u < 1.0 - x || u < std::exp(-x)) {
        s.jumps.push_back(x);
        sum += x;
      }
    }
  } else {
    double prev = 0.0;
    while (static_cast<int>(s.jumps.size()) < n_atoms) {
      arrival += rng.exponential();
      x = gg_levy_tail_inverse(alpha, arrival / time, prev);
      if (!s.jumps.empty() && x < min_rel * sum) break;
      s.jumps.push_back(x);
      sum += x;
      prev = x;
    }
  }
  s.cutoff = x;
  s.tail_mass_bound = time * gg_small_jump_mean(alpha, x);
  s.tail_sd = std::sqrt(time * gg_small_jump_second_moment(alpha, x));
  return s;
}

JumpSeries sample_stable_jumps(StableIndex alpha, double time, int n_atoms,
                               Rng& rng, double min_rel) {
  require_series_args(time, n_atoms, "sample_stable_jumps");
  const double a = alpha.value();
  const double g1 = std::tgamma(1.0 - a);
  JumpSeries s;
  s.elapsed_time = time;
  s.jumps.reserve(n_atoms);
  double arrival = 0.0, sum = 0.0, x = 0.0;
  while (static_cast<int>(s.jumps.size()) < n_atoms) {
    arrival += rng.exponential();
    x = std::exp(-std::log(g1 * arrival / time) / a);
    if (!s.jumps.empty() && x < min_rel * sum) break;
    s.jumps.push_back(x);
    sum += x;
  }
  s.cutoff = x;
  s.tail_mass_bound = time * stable_small_jump_mean(alpha, x);
  s.tail_sd = std::sqrt(time * stable_small_jump_second_moment(alpha, x));
  return s;
}

MassPartition normalize_series(const JumpSeries& series) {
  const double total = series.total();
  MassPartition p;
  p.freqs.reserve(series.jumps.size());
  for (double j : series.jumps) p.freqs.push_back(j / total);
  p.dust_bound = series.tail_mass_bound / total;
  return p;
}

PaZetaDraw sample_pa_time(StableIndex alpha, double time, int n_atoms,
                          Rng& rng, double min_rel) {
  PaZetaDraw d;
  d.zeta = time;
  if (time < kStableTime) {
    const JumpSeries s = sample_stable_jumps(alpha, 1.0, n_atoms, rng, min_rel);
    d.freqs = normalize_series(s);
    d.T = s.total();
    d.total = time > 0.0 ? std::pow(time, 1.0 / alpha.value()) * d.T : d.T;
    d.tail_sd = s.tail_sd / s.total();
    return d;
  }
  const JumpSeries s = sample_gg_jumps(alpha, time, n_atoms, rng,
                                       JumpMethod::thinning, min_rel);
  d.freqs = normalize_series(s);
  d.total = s.total();
  d.T = std::exp(std::log(d.total) - std::log(time) / alpha.value());
  d.tail_sd = s.tail_sd / d.total;
  return d;
}

PaZetaDraw sample_pa_zeta_draw(StableIndex alpha, const ZetaSpec& zeta,
                               int n_atoms, Rng& rng, double min_rel) {
  const double z = sample_zeta(zeta, rng);
  return sample_pa_time(alpha, z, n_atoms, rng, min_rel);
}

MassPartition sample_pa_zeta(StableIndex alpha, const ZetaSpec& zeta,
                             int n_atoms, Rng& rng) {
  return sample_pa_zeta_draw(alpha, zeta, n_atoms, rng).freqs;
}

MassPartition sample_pd_stickbreak(double alpha, double theta, int n_sticks,
                                   Rng& rng) {
  require_pd(alpha, theta);
  if (n_sticks < 1) throw DomainError("stick-breaking needs n_sticks >= 1");
  std::vector<double> values;
  values.reserve(n_sticks);
  double log_rest = 0.0;
  for (int k = 1; k <= n_sticks; ++k) {
    const double v = rng.beta(1.0 - alpha, theta + k * alpha);
    values.push_back(std::exp(log_rest) * v);
    log_rest += std::log1p(-v);
  }
  return MassPartition::ranked(std::move(values), std::exp(log_rest));
}

MassPartition sample_pd_series(double alpha, double theta, int n_atoms,
                               Rng& rng, double min_rel) {
  require_pd(alpha, theta);
  if (n_atoms < 1) throw DomainError("sample_pd_series needs n_atoms >= 1");
  if (alpha == 0.0) return sample_pd_stickbreak(0.0, theta, n_atoms, rng);
  if (theta > 0.0) {
    return sample_pa_time(alpha, rng.gamma(theta / alpha), n_atoms, rng,
                          min_rel)
        .freqs;
  }
  if (theta == 0.0) return sample_pa_time(alpha, 0.0, n_atoms, rng, min_rel).freqs;

  // Remove the first size-biased pick; the rest is PD(alpha, theta + alpha).
  const double w = rng.beta(1.0 - alpha, theta + alpha);
  const double scale = 1.0 - w;
  if (n_atoms == 1) return MassPartition::ranked({w}, scale);
  const double rel = scale > 0.0 ? min_rel / scale : 0.0;
  MassPartition rest = sample_pd_series(alpha, theta + alpha, n_atoms - 1,
                                        rng, rel);
  std::vector<double> values;
  values.reserve(rest.freqs.size() + 1);
  values.push_back(w);
  for (double f : rest.freqs) values.push_back(scale * f);
  return MassPartition::ranked(std::move(values), scale * rest.dust_bound);
}

ConditionalSizeBiased::ConditionalSizeBiased(StableIndex alpha, double t)
    : alpha_(alpha.value()),
      table_(&StableDensityTable::get(alpha)),
      total_(t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    std::ostringstream msg;
    msg << "PD(alpha | t) requires t > 0, got " << t;
    throw DomainError(msg.str());
  }
}

double ConditionalSizeBiased::next(Rng& rng) {
  const double p = draw_fraction(total_ * remaining_, rng);
  const double f = remaining_ * p;
  remaining_ *= 1.0 - p;
  return f;
}

// Draws p from p^(-alpha) f((1 - p) r) on (0, 1). With v = p^(1 - alpha) the
// density becomes h(v) = f(r (1 - v^(1/(1-alpha)))) / f(r) on (0, 1), which is
// bounded and unimodal; it is sampled exactly by rejection from a
// piecewise-constant envelope built on cells split at the mode.
double ConditionalSizeBiased::draw_fraction(double r, Rng& rng) {
  const double b = 1.0 - alpha_;
  const double log_fr = table_->log_density(r);
  auto h = [&](double v) {
    if (v <= 0.0) return 1.0;
    if (v >= 1.0) return 0.0;
    const double y = r * (1.0 - std::pow(v, 1.0 / b));
    if (!(y > 0.0)) return 0.0;
    return std::exp(table_->log_density(y) - log_fr);
  };

  const double y_mode = table_->mode();
  const double v_mode = r > y_mode ? std::pow(1.0 - y_mode / r, b) : 0.0;

  struct Cell {
    double a, b, ha, hb;
    double env() const { return std::max(ha, hb); }
    double excess() const { return (std::max(ha, hb) - std::min(ha, hb)) * (b - a); }
    bool operator<(const Cell& o) const { return excess() < o.excess(); }
  };
  std::vector<double> breaks;
  for (int i = 0; i <= 16; ++i) breaks.push_back(i / 16.0);
  if (v_mode > 0.0 && v_mode < 1.0) breaks.push_back(v_mode);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::priority_queue<Cell> cells;
  std::vector<double> hv(breaks.size());
  for (std::size_t i = 0; i < breaks.size(); ++i) hv[i] = h(breaks[i]);
  double env_mass = 0.0, low_mass = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Cell c{breaks[i], breaks[i + 1], hv[i], hv[i + 1]};
    env_mass += c.env() * (c.b - c.a);
    low_mass += std::min(c.ha, c.hb) * (c.b - c.a);
    cells.push(c);
  }
  constexpr double kTargetAcceptance = 0.8;
  constexpr std::size_t kMaxCells = 400;
  while (low_mass < kTargetAcceptance * env_mass && cells.size() < kMaxCells) {
    const Cell c = cells.top();
    cells.pop();
    const double m = 0.5 * (c.a + c.b);
    const double hm = h(m);
    const Cell left{c.a, m, c.ha, hm}, right{m, c.b, hm, c.hb};
    env_mass += left.env() * (m - c.a) + right.env() * (c.b - m) -
                c.env() * (c.b - c.a);
    low_mass += std::min(left.ha, left.hb) * (m - c.a) +
                std::min(right.ha, right.hb) * (c.b - m) -
                std::min(c.ha, c.hb) * (c.b - c.a);
    cells.push(left);
    cells.push(right);
  }

  std::vector<Cell> list;
  list.reserve(cells.size());
  while (!cells.empty()) {
    list.push_back(cells.top());
    cells.pop();
  }
  std::vector<double> cum(list.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    acc += list[i].env() * (list[i].b - list[i].a);
    cum[i] = acc;
  }
  for (int tries = 0; tries < 1'000'000; ++tries) {
    const double pick = rng.uniform() * acc;
    const auto idx = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin());
    const Cell& c = list[std::min(idx, list.size() - 1)];
    const double v = c.a + rng.uniform() * (c.b - c.a);
    if (rng.uniform() * c.env() < h(v)) return std::pow(v, 1.0 / b);
  }
  throw NumericError("PD(alpha | t) rejection sampler made no progress",
                     low_mass / env_mass);
}

MassPartition sample_pd_conditional(StableIndex alpha, double t, int n_freqs,
                                    Rng& rng) {
  if (n_freqs < 1) throw DomainError("sample_pd_conditional needs n_freqs >= 1");
  ConditionalSizeBiased seq(alpha, t);
  std::vector<double> values;
  values.reserve(n_freqs);
  for (int i = 0; i < n_freqs && seq.remaining() > 1e-15; ++i) {
    values.push_back(seq.next(rng));
  }
  return MassPartition::ranked(std::move(values), seq.remaining());
}

MassPartition sample_pd_conditional_top(StableIndex alpha, double t, int k,
                                        Rng& rng, int max_freqs) {
  if (k < 1) throw DomainError("sample_pd_conditional_top needs k >= 1");
  ConditionalSizeBiased seq(alpha, t);
  std::vector<double> values;
  std::vector<double> top;  // descending, at most k entries
  for (int i = 0; i < max_freqs; ++i) {
    const double f = seq.next(rng);
    values.push_back(f);
    top.insert(std::upper_bound(top.begin(), top.end(), f, std::greater<>()), f);
    if (static_cast<int>(top.size()) > k) top.pop_back();
    if (static_cast<int>(top.size()) == k && seq.remaining() < top.back()) break;
  }
  return MassPartition::ranked(std::move(values), seq.remaining());
}

SizeBiasedPick size_biased_pick(const MassPartition& p, Rng& rng) {
  const double total = p.mass();
  if (!(total > 0.0)) throw DomainError("size-biased pick from zero mass");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t idx = p.freqs.size() - 1;
  for (std::size_t i = 0; i < p.freqs.size(); ++i) {
    acc += p.freqs[i];
    if (u < acc) {
      idx = i;
      break;
    }
  }
  SizeBiasedPick out;
  out.index = idx;
  out.value = p.freqs[idx];
  out.remainder.freqs = p.freqs;
  out.remainder.freqs.erase(out.remainder.freqs.begin() +
                            static_cast<std::ptrdiff_t>(idx));
  out.remainder.dust_bound = p.dust_bound;
  return out;
}

DgmS1 sample_dgm_s1(StableIndex alpha, const ZetaSpec& zeta, Rng& rng) {
  const double a = alpha.value();
  // Beta(c, 1) is U^(1/c); exact even when c is tiny and the draw underflows.
  const double b = std::exp(std::log(rng.uniform()) * a / (1.0 - a));
  DgmS1 out;
  out.gamma_draw = rng.gamma(1.0 / a);
  out.zeta_draw = sample_zeta(zeta, rng);
  out.s1 = b * out.gamma_draw / (out.gamma_draw + out.zeta_draw);
  return out;
}

}  // namespace coagfrag
