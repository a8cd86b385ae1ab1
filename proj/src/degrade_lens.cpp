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
#include <array>
#include <cmath>
#include <vector>

#include "camrobust/degrade.hpp"

namespace camrobust {

namespace {

double smoothstep(double edge0, double edge1, double x) {
  const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

// Bilinear sample with clamped coordinates.
double sample(const ImageBuffer& img, double x, double y, int ch) {
  x = std::clamp(x, 0.0, img.width() - 1.0);
  y = std::clamp(y, 0.0, img.height() - 1.0);
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0, fy = y - y0;
  const double top = img.at(x0, y0, ch) * (1.0 - fx) + img.at(x1, y0, ch) * fx;
  const double bottom = img.at(x0, y1, ch) * (1.0 - fx) + img.at(x1, y1, ch) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mud

MudParams mud_params(int severity) {
  check_severity(severity);
  return MudParams{kMudKernel[severity - 1], 0.7, 2.0};
}

Grid<float> mud_mask(int width, int height, const MudParams& params,
                     std::uint64_t seed) {
  if (params.kernel_size < 1) throw ValidationError("mud kernel size must be >= 1");
  // Low-pass filtered white noise: the correlation length grows with the
  // kernel, so a fixed threshold yields fewer, larger blobs.
  const double sigma = params.kernel_size / 2.0;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const auto g = gaussian_kernel_1d(sigma, radius);
  double energy = 0.0;
  for (double v : g) energy += v * v;
  const double field_std = energy;  // sqrt of the 2-D energy, which is energy^2

  const CounterRng rng = CounterRng(seed).split(4);
  GridD noise(width, height);
  const auto n = static_cast<std::ptrdiff_t>(noise.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) noise.values[i] = rng.normal(static_cast<std::uint64_t>(i));
  const GridD field = kernels::convolve_separable(noise, g, g);

  Grid<std::uint8_t> blobs(width, height, 0);
  const double cut = params.threshold * field_std;
  for (std::size_t i = 0; i < field.size(); ++i) blobs.values[i] = field.values[i] > cut;

  // Dilate by a disk of diameter kernel_size with a two-pixel soft edge.
  const GridD dist2 = kernels::squared_distance_to(blobs);
  const double r = params.kernel_size / 2.0;
  Grid<float> mask(width, height, 0.0f);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double d = std::sqrt(dist2.values[i]);
    mask.values[i] = static_cast<float>(std::clamp((r + 1.0 - d) / 2.0, 0.0, 1.0));
  }
  return mask;
}

ImageBuffer composite_mud(const ImageBuffer& img, const Grid<float>& mask,
                          double intensity) {
  if (mask.width != img.width() || mask.height != img.height()) {
    throw DimensionError("mud mask size does not match the image");
  }
  ImageBuffer out = img;
  const int c = img.channels();
  auto dst = out.data();
  const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double m = intensity * mask.values[i];
    if (m == 0.0) continue;
    for (int ch = 0; ch < c; ++ch) {
      float& v = dst[static_cast<std::size_t>(i) * c + ch];
      const double mud = c == 1 ? kMudColor[1] : kMudColor[ch];
      v = static_cast<float>((1.0 - m) * v + m * mud);
    }
  }
  out.clip();
  return out;
}

ImageBuffer mud_occlusion(const ImageBuffer& img, const MudParams& params,
                          std::uint64_t seed) {
  return composite_mud(img, mud_mask(img.width(), img.height(), params, seed),
                       params.intensity);
}

ImageBuffer mud_occlusion(const ImageBuffer& img, int severity, std::uint64_t seed) {
  return mud_occlusion(img, mud_params(severity), seed);
}

// ---------------------------------------------------------------------------
// Droplets

DropletParams droplet_params(int severity) {
  check_severity(severity);
  DropletParams p;
  p.count = std::array{5, 9, 14}[severity - 1];
  return p;
}

std::vector<Droplet> place_droplets(int width, int height,
                                    const DropletParams& params,
                                    std::uint64_t seed) {
  RngStream rng(CounterRng(seed).split(5));
  std::vector<Droplet> drops;
  for (int k = 0; k < params.count; ++k) {
    Droplet d{};
    d.cx = rng.uniform(0.0, static_cast<double>(width));
    d.cy = rng.uniform(0.0, static_cast<double>(height));
    d.ry = std::max(2.0, height * rng.uniform(params.radius_min, params.radius_max));
    d.rx = d.ry * rng.uniform(0.75, 1.1);
    drops.push_back(d);
  }
  return drops;
}

ImageBuffer lens_droplets(const ImageBuffer& img, const DropletParams& params,
                          std::uint64_t seed) {
  if (!(params.magnification > 0.0)) throw ValidationError("magnification must be > 0");
  const int w = img.width(), h = img.height(), c = img.channels();
  const auto drops = place_droplets(w, h, params, seed);

  // Out-of-focus source the droplets refract.
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * params.blur_sigma)));
  const auto g = gaussian_kernel_1d(params.blur_sigma, radius);
  ImageBuffer blurred(w, h, c);
  for (int ch = 0; ch < c; ++ch) {
    const GridD b = kernels::convolve_separable(channel_grid(img, ch), g, g);
    for (std::size_t i = 0; i < b.size(); ++i) {
      blurred.data()[i * c + ch] = static_cast<float>(b.values[i]);
    }
  }

  ImageBuffer out = img;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (const Droplet& d : drops) {
      if (y < d.cy - d.ry - 1 || y > d.cy + d.ry + 1) continue;
      const int x0 = std::max(0, static_cast<int>(std::floor(d.cx - d.rx - 1)));
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(d.cx + d.rx + 1)));
      for (int x = x0; x <= x1; ++x) {
        const double ox = x - d.cx, oy = y - d.cy;
        const double rho = std::sqrt((ox / d.rx) * (ox / d.rx) + (oy / d.ry) * (oy / d.ry));
        if (rho >= 1.0) continue;
        // A thin lens inverts and magnifies the scene behind it.
        const double sx = d.cx + ox / params.magnification;
        const double sy = d.cy - oy / params.magnification;
        const double rim = 1.0 - params.rim_darkening * smoothstep(0.7, 1.0, rho);
        const double alpha = 1.0 - smoothstep(0.85, 1.0, rho);
        for (int ch = 0; ch < c; ++ch) {
          float& v = out.at(x, y, ch);
          const double refracted = sample(blurred, sx, sy, ch) * rim;
          v = static_cast<float>(alpha * refracted + (1.0 - alpha) * v);
        }
      }
    }
  }
  out.clip();
  return out;
}

ImageBuffer lens_droplets(const ImageBuffer& img, int severity, std::uint64_t seed) {
  return lens_droplets(img, droplet_params(severity), seed);
}

}  // namespace camrobust
