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

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "camrobust/degrade.hpp"

namespace camrobust {

// ---------------------------------------------------------------------------
// Sensor noise

double noise_level(NoiseKind kind, int severity) {
  check_severity(severity);
  const int i = severity - 1;
  switch (kind) {
    case NoiseKind::kGaussian:
      return kGaussianSigma[i];
    case NoiseKind::kUniform:
      return kUniformSigma255[i] / 255.0;
    case NoiseKind::kImpulse:
      return kImpulseFraction[i];
    case NoiseKind::kPoisson:
      return kPoissonLambda[i];
  }
  throw CatalogError("unknown noise kind");
}

double additive_noise_sample(NoiseKind kind, double level, const CounterRng& rng,
                             std::uint64_t i) {
  switch (kind) {
    case NoiseKind::kGaussian:
      return level * rng.normal(i);
    case NoiseKind::kUniform: {
      // Zero-mean uniform with standard deviation `level`.
      const double a = level * std::sqrt(3.0);
      return a * (2.0 * rng.uniform(i) - 1.0);
    }
    case NoiseKind::kPoisson:
      return rng.poisson(i, level) / 255.0;
    case NoiseKind::kImpulse:
      break;
  }
  throw ValidationError("impulse noise is not additive");
}

ImageBuffer add_noise_level(const ImageBuffer& img, NoiseKind kind, double level,
                            std::uint64_t seed) {
  if (!(level >= 0.0) || !std::isfinite(level)) {
    throw ValidationError("noise level must be finite and >= 0");
  }
  if (kind == NoiseKind::kImpulse && level > 1.0) {
    throw ValidationError("impulse fraction must lie in [0, 1]");
  }
  ImageBuffer out = img;
  const int c = img.channels();
  auto dst = out.data();
  const CounterRng rng = CounterRng(seed).split(7);
  if (kind == NoiseKind::kImpulse) {
    const CounterRng salt = rng.split(1);
    const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto u = static_cast<std::uint64_t>(i);
      if (rng.uniform(u) >= level) continue;
      const float v = salt.uniform(u) < 0.5 ? 0.0f : 1.0f;
      for (int ch = 0; ch < c; ++ch) dst[static_cast<std::size_t>(i) * c + ch] = v;
    }
    return out;
  }
  const auto n = static_cast<std::ptrdiff_t>(img.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dst[i] = static_cast<float>(
        dst[i] + additive_noise_sample(kind, level, rng, static_cast<std::uint64_t>(i)));
  }
  out.clip();
  return out;
}

ImageBuffer add_noise(const ImageBuffer& img, NoiseKind kind, int severity,
                      std::uint64_t seed) {
  return add_noise_level(img, kind, noise_level(kind, severity), seed);
}

// ---------------------------------------------------------------------------
// Blur

SparseKernel defocus_kernel(double radius, double alias_blur) {
  if (!(radius > 0.0)) throw ValidationError("defocus radius must be > 0");
  if (!(alias_blur > 0.0)) throw ValidationError("defocus alias blur must be > 0");
  const int half = radius <= 8.0 ? 8 : static_cast<int>(std::ceil(radius));
  const int size = 2 * half + 1;
  std::vector<double> disk(static_cast<std::size_t>(size) * size, 0.0);
  double total = 0.0;
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x) {
      if (x * x + y * y <= radius * radius) {
        disk[static_cast<std::size_t>(y + half) * size + x + half] = 1.0;
        total += 1.0;
      }
    }
  }
  // Smooth the aliased edge with a small Gaussian (reflect-101 borders).
  const int g = radius <= 8.0 ? 1 : 2;
  const auto gk = gaussian_kernel_1d(alias_blur, g);
  GridD d(size, size);
  for (std::size_t i = 0; i < d.size(); ++i) d.values[i] = disk[i] / total;
  const GridD smooth = kernels::reference::convolve_separable(d, gk, gk);
  double sum = 0.0;
  for (double v : smooth.values) sum += v;
  std::vector<double> dense(smooth.values.size());
  for (std::size_t i = 0; i < dense.size(); ++i) dense[i] = smooth.values[i] / sum;
  return SparseKernel::from_dense(half, dense);
}

SparseKernel motion_kernel(double length, double sigma, double angle_deg) {
  if (!(length >= 1.0)) throw ValidationError("motion length must be >= 1");
  if (!(sigma > 0.0)) throw ValidationError("motion sigma must be > 0");
  const int taps = static_cast<int>(std::lround(length));
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double ux = std::cos(a), uy = std::sin(a);
  // Trailing exposure: the weight decays with distance behind the pixel.
  std::map<std::pair<int, int>, double> merged;
  double total = 0.0;
  for (int i = 0; i < taps; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
    const int dx = static_cast<int>(std::lround(i * ux));
    const int dy = static_cast<int>(std::lround(i * uy));
    merged[{dy, dx}] += w;
    total += w;
  }
  SparseKernel k;
  for (const auto& [pos, w] : merged) k.taps.push_back({pos.second, pos.first, w / total});
  return k;
}

double motion_angle_deg(std::uint64_t seed) {
  return -45.0 + 90.0 * CounterRng(seed).split(6).uniform(0);
}

ImageBuffer blur(const ImageBuffer& img, BlurKind kind, int severity,
                 std::uint64_t seed) {
  check_severity(severity);
  const int i = severity - 1;
  const SparseKernel k =
      kind == BlurKind::kDefocus
          ? defocus_kernel(kDefocus[i].radius, kDefocus[i].alias_blur)
          : motion_kernel(kMotion[i].length, kMotion[i].sigma, motion_angle_deg(seed));
  ImageBuffer out = kernels::convolve(img, k);
  out.clip();
  return out;
}

}  // namespace camrobust
