// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace refute {

/// Philox4x32-10 counter-based block function (Salmon et al. 2011).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// 64-bit FNV-1a followed by a splitmix64 finalizer.
std::uint64_t hash64(std::string_view bytes, std::uint64_t seed = 0) noexcept;
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Identifies one independent random stream. The master seed becomes the
/// Philox key; `stream` and `substream` occupy the counter so that any
/// (stream, substream) pair is reproducible without touching its neighbours.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint32_t substream = 0;
};

class RandomStream {
 public:
  explicit RandomStream(StreamKey key) noexcept;
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0) noexcept
      : RandomStream(StreamKey{seed, stream, substream}) {}

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller.
  double normal() noexcept;
  /// Uniform integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Poisson draw by inversion; falls back to a rounded normal for lambda > 500.
  std::uint64_t poisson(double lambda) noexcept;

  template <class T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace refute
