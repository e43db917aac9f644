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

#include <array>
#include <cstdint>
#include <limits>

namespace coagfrag {

/// Identifies one reproducible random stream. Distinct stream ids under the
/// same seed are independent; identical pairs replay identical sequences.
struct SeedStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedStream&, const SeedStream&) = default;
};

/// Philox4x32-10 counter-based generator. The key is the seed, the upper
/// half of the counter is the stream id and the lower half counts blocks,
/// so any stream can be opened directly without stepping through others.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  explicit Philox4x32(SeedStream s);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
};

/// Random source handed to every sampler. Wraps a Philox stream and provides
/// the primitive variates the samplers are built from.
class Rng {
 public:
  using result_type = Philox4x32::result_type;

  explicit Rng(SeedStream s) : stream_(s), engine_(s) {}
  Rng(std::uint64_t seed, std::uint64_t stream_id)
      : Rng(SeedStream{seed, stream_id}) {}

  static constexpr result_type min() { return Philox4x32::min(); }
  static constexpr result_type max() { return Philox4x32::max(); }
  result_type operator()() { return engine_(); }

  SeedStream stream() const { return stream_; }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double exponential();
  double normal();
  /// Gamma(shape, scale 1).
  double gamma(double shape);
  /// log of a Gamma(shape) variate; accurate for shapes near zero where the
  /// variate itself underflows.
  double log_gamma(double shape);
  /// Beta(a, b) via a ratio of gammas evaluated in log space.
  double beta(double a, double b);
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform index in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  SeedStream stream_;
  Philox4x32 engine_;
};

/// Deterministic child stream, used to give sub-experiments their own ids.
SeedStream derive_stream(SeedStream parent, std::uint64_t tag);

}  // namespace coagfrag
