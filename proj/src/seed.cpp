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

#include "camrobust/seed.hpp"

#include <algorithm>
#include <string>

namespace camrobust {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view image_id,
                          std::string_view factor, int severity) {
  char le[8];
  for (int i = 0; i < 8; ++i) {
    le[i] = static_cast<char>((global_seed >> (8 * i)) & 0xFF);
  }
  constexpr std::string_view kSep("\x1f", 1);
  std::uint64_t h = fnv1a64(std::string_view(le, 8));
  h = fnv1a64(kSep, h);
  h = fnv1a64(image_id, h);
  h = fnv1a64(kSep, h);
  h = fnv1a64(factor, h);
  h = fnv1a64(kSep, h);
  h = fnv1a64(std::to_string(severity), h);
  return h;
}

int CounterRng::poisson(std::uint64_t counter, double lambda) const {
  if (!(lambda > 0.0)) return 0;
  if (lambda > 500.0) {
    // exp(-lambda) underflows; the normal approximation is accurate here.
    const double u1 = uniform_open0(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    return std::max(0, static_cast<int>(std::lround(lambda + std::sqrt(lambda) * z)));
  }
  const double u = uniform(counter);
  int k = 0;
  double p = std::exp(-lambda);
  double cdf = p;
  while (u >= cdf) {
    ++k;
    p *= lambda / k;
    cdf += p;
    if (p < 1e-300 && k > lambda) break;
  }
  return k;
}

}  // namespace camrobust
