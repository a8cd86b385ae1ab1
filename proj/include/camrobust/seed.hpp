// Copyright 2026 The camrobust Authors. All Rights Reserved.
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

#include <cmath>
#include <cstdint>
#include <string_view>

namespace camrobust {

// Per-task seed: 64-bit FNV-1a over the byte string
//   u64le(global_seed) 0x1F image_id 0x1F factor 0x1F decimal(severity)
// The byte layout is fixed, so seeds are stable across platforms and runs.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view image_id,
                          std::string_view factor, int severity);

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t state = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: draw i of a stream is a pure function of
// (key, i), so parallel loops can index draws by sample position and get
// the same field regardless of scheduling. split() derives independent
// child streams for the separate random components of one operator.
//
// Distributions are implemented here rather than with <random> because the
// standard library's distributions are implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(mix64(key)) {}

  CounterRng split(std::uint64_t tag) const {
    return CounterRng(key_ ^ mix64(tag + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix64(key_ ^ mix64(counter));
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform in (0,1]; safe as a log() argument.
  double uniform_open0(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller over draws 2i and 2i+1.
  double normal(std::uint64_t i) const {
    const double u1 = uniform_open0(2 * i);
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Poisson(lambda) by CDF inversion on one uniform draw.
  int poisson(std::uint64_t counter, double lambda) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Sequential cursor over a CounterRng for procedural placement code.
class RngStream {
 public:
  explicit RngStream(CounterRng rng) : rng_(rng) {}

  double uniform() { return rng_.uniform(next_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng_.bits(next_++) % span);
  }
  double normal() {
    const double u1 = rng_.uniform_open0(next_++);
    const double u2 = rng_.uniform(next_++);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::uint64_t position() const { return next_; }

 private:
  CounterRng rng_;
  std::uint64_t next_ = 0;
};

}  // namespace camrobust
