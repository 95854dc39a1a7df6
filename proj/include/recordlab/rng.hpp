// Copyright 2026 The recordlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace recordlab {

/// Counter-based random stream (Philox4x32-10).
///
/// The output sequence is a pure function of (seed, stream_id): the seed is
/// the Philox key and the stream id occupies the upper half of the 128-bit
/// counter. Trials use their trial index as stream id, so results never
/// depend on how trials are distributed over workers.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept {
    if (lane_ == 4) {
      refill();
    }
    const std::uint64_t hi = block_[lane_];
    const std::uint64_t lo = block_[lane_ + 1];
    lane_ += 2;
    return (hi << 32) | lo;
  }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential(1) by inverse transform.
  double exponential() noexcept { return -std::log(uniform()); }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int lane_ = 4;
};

/// Raw Philox4x32-10 bijection, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64-style mixing of a base seed with experiment tags. Used to give
/// every (experiment, n, a, pipeline) cell its own key.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept;

// Variates. All draw only from the supplied stream.

double standard_normal(RngStream& rng) noexcept;

/// Gamma(shape, 1); shape > 0 (Marsaglia-Tsang, boosted for shape < 1).
double gamma_variate(RngStream& rng, double shape) noexcept;

/// Poisson(mean) for mean >= 0; inversion for small means, PTRS otherwise.
std::uint64_t poisson_variate(RngStream& rng, double mean) noexcept;

/// Number of failures before the first success, success probability p in (0, 1].
std::uint64_t geometric_failures(RngStream& rng, double p) noexcept;

}  // namespace recordlab
