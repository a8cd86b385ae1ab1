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
#include <numbers>
#include <vector>

#include "camrobust/degrade.hpp"

namespace camrobust {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double smoothstep(double edge0, double edge1, double x) {
  const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

double transmission(double beta, float depth) {
  if (beta == 0.0) return 1.0;  // also covers depth = +inf
  return std::exp(-beta * static_cast<double>(depth));
}

void check_depth(const ImageBuffer& img, const DepthMap& depth) {
  if (!depth.matches(img)) {
    throw DimensionError("depth map size does not match the image");
  }
}

void scatter_in_place(ImageBuffer& img, const DepthMap& depth,
                      const ScatterParams& params) {
  if (params.beta < 0.0) throw ValidationError("attenuation beta must be >= 0");
  const int c = img.channels();
  auto dst = img.data();
  auto d = depth.data();
  const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double t = transmission(params.beta, d[i]);
    for (int ch = 0; ch < c; ++ch) {
      float& v = dst[static_cast<std::size_t>(i) * c + ch];
      const double a = c == 1 ? params.airlight[1] : params.airlight[ch];
      v = static_cast<float>(v * t + a * (1.0 - t));
    }
  }
}

struct Streak {
  double cx, cy;   // center
  double dx, dy;   // unit direction
  double half_length;
  double sigma;    // cross-profile std dev
  double strength; // opacity multiplier
  int x0, x1, y0, y1;
};

struct Flake {
  double cx, cy;
  double ca, sa;       // rotation of the major axis
  double major, minor; // semi-axes
  double opacity;
  int y0, y1, x0, x1;
};

}  // namespace

ImageBuffer apply_scattering(const ImageBuffer& img, const DepthMap& depth,
                             const ScatterParams& params) {
  check_depth(img, depth);
  ImageBuffer out = img;
  scatter_in_place(out, depth, params);
  out.clip();
  return out;
}

ImageBuffer fog(const ImageBuffer& img, const DepthMap& depth, int severity) {
  check_severity(severity);
  return apply_scattering(img, depth, ScatterParams{kFogBeta[severity - 1], kFogAirlight});
}

double visibility_from_beta(double beta) {
  if (!(beta > 0.0)) throw ValidationError("visibility requires beta > 0");
  return std::log(20.0) / beta;
}

// ---------------------------------------------------------------------------
// Rain

RainParams rain_params(int severity) {
  check_severity(severity);
  RainParams p;
  p.rate = kRainRate[severity - 1];
  p.veil_beta = 0.001 * p.rate / 50.0;
  return p;
}

int rain_streak_count(double rate, int width, int height) {
  if (rate <= 0.0) return 0;
  return static_cast<int>(
      std::lround(kRainStreakDensity * rate * width * static_cast<double>(height) / 1e6));
}

double rain_streak_length(double rate) { return rate / 10.0; }

ImageBuffer rain(const ImageBuffer& img, const DepthMap& depth,
                 const RainParams& params, std::uint64_t seed) {
  check_depth(img, depth);
  const int w = img.width(), h = img.height(), c = img.channels();
  const int count = rain_streak_count(params.rate, w, h);
  const double length = rain_streak_length(params.rate);

  RngStream rng(CounterRng(seed).split(2));
  const double wind = rng.uniform(-10.0, 10.0);
  std::vector<Streak> streaks;
  streaks.reserve(count);
  for (int k = 0; k < count; ++k) {
    Streak s{};
    s.cx = rng.uniform(0.0, static_cast<double>(w));
    s.cy = rng.uniform(0.0, static_cast<double>(h));
    const double angle = (wind + 2.0 * rng.normal()) * kDegToRad;
    s.dx = std::sin(angle);
    s.dy = std::cos(angle);
    s.half_length = 0.5 * length * rng.uniform(0.7, 1.3);
    s.sigma = 0.5 * rng.uniform_int(1, 3);
    s.strength = rng.uniform(0.6, 1.0);
    const double ext = s.half_length + 3.0 * s.sigma + 1.0;
    s.x0 = std::max(0, static_cast<int>(std::floor(s.cx - ext)));
    s.x1 = std::min(w - 1, static_cast<int>(std::ceil(s.cx + ext)));
    s.y0 = std::max(0, static_cast<int>(std::floor(s.cy - ext)));
    s.y1 = std::min(h - 1, static_cast<int>(std::ceil(s.cy + ext)));
    streaks.push_back(s);
  }

  ImageBuffer out = img;
  auto dst = out.data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (const Streak& s : streaks) {
      if (y < s.y0 || y > s.y1) continue;
      for (int x = s.x0; x <= s.x1; ++x) {
        const double px = x + 0.5 - s.cx, py = y + 0.5 - s.cy;
        const double along = px * s.dx + py * s.dy;
        const double across = -px * s.dy + py * s.dx;
        // Soft ends over one pixel.
        const double ends = std::clamp(s.half_length + 0.5 - std::abs(along), 0.0, 1.0);
        if (ends <= 0.0) continue;
        const double profile = std::exp(-across * across / (2.0 * s.sigma * s.sigma));
        const double a = params.opacity * s.strength * ends * profile;
        if (a < 1e-4) continue;
        for (int ch = 0; ch < c; ++ch) {
          float& v = dst[(static_cast<std::size_t>(y) * w + x) * c + ch];
          const double col = c == 1 ? params.color[1] : params.color[ch];
          v = static_cast<float>(v + a * (col - v));
        }
      }
    }
  }
  scatter_in_place(out, depth, ScatterParams{params.veil_beta, params.color});
  out.clip();
  return out;
}

ImageBuffer rain(const ImageBuffer& img, const DepthMap& depth, int severity,
                 std::uint64_t seed) {
  return rain(img, depth, rain_params(severity), seed);
}

// ---------------------------------------------------------------------------
// Snow

SnowMaskParams snow_mask_params(int severity) {
  check_severity(severity);
  switch (severity) {
    case 1:
      return {FlakeSize::kSmall, 4000.0, 0.5, 1.5, 1.0, 1.0};
    case 2:
      return {FlakeSize::kMedium, 2500.0, 1.0, 3.0, 1.5, 1.0};
    default:
      return {FlakeSize::kLarge, 1500.0, 2.0, 5.0, 2.5, 1.0};
  }
}

SnowMask snow_mask(int width, int height, const SnowMaskParams& params,
                   std::uint64_t seed) {
  if (width <= 0 || height <= 0) throw DimensionError("snow mask size must be positive");
  if (params.density < 0.0) throw ValidationError("snow density must be >= 0");
  SnowMask mask;
  mask.size = params.size;
  mask.z = Grid<float>(width, height, 0.0f);
  const int count = static_cast<int>(std::lround(
      params.density * params.flakes_per_mpx * width * static_cast<double>(height) / 1e6));
  mask.flake_count = count;

  RngStream rng(CounterRng(seed).split(3));
  mask.direction_deg = rng.uniform(-20.0, 20.0);
  std::vector<Flake> flakes;
  flakes.reserve(count);
  for (int k = 0; k < count; ++k) {
    Flake f{};
    f.cx = rng.uniform(0.0, static_cast<double>(width));
    f.cy = rng.uniform(0.0, static_cast<double>(height));
    const double dir = (mask.direction_deg + 3.0 * rng.normal()) * kDegToRad;
    // Major axis along the fall direction (image y grows downwards).
    f.ca = std::sin(dir);
    f.sa = std::cos(dir);
    // Half a pixel of extra radius keeps sub-pixel flakes visible.
    f.minor = rng.uniform(params.radius_min, params.radius_max) + 0.5;
    f.major = f.minor * params.elongation;
    f.opacity = rng.uniform(0.5, 1.0);
    const double ext = f.major + 1.0;
    f.x0 = std::max(0, static_cast<int>(std::floor(f.cx - ext)));
    f.x1 = std::min(width - 1, static_cast<int>(std::ceil(f.cx + ext)));
    f.y0 = std::max(0, static_cast<int>(std::floor(f.cy - ext)));
    f.y1 = std::min(height - 1, static_cast<int>(std::ceil(f.cy + ext)));
    flakes.push_back(f);
  }

#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (const Flake& f : flakes) {
      if (y < f.y0 || y > f.y1) continue;
      for (int x = f.x0; x <= f.x1; ++x) {
        const double px = x + 0.5 - f.cx, py = y + 0.5 - f.cy;
        const double u = (px * f.ca + py * f.sa) / f.major;
        const double v = (-px * f.sa + py * f.ca) / f.minor;
        const double rho = std::sqrt(u * u + v * v);
        if (rho >= 1.0) continue;
        const double m = f.opacity * (1.0 - smoothstep(0.5, 1.0, rho));
        float& z = mask.z(x, y);
        // Over-compositing of independent flakes.
        z = static_cast<float>(1.0 - (1.0 - z) * (1.0 - m));
      }
    }
  }
  return mask;
}

SnowMask snow_mask(int width, int height, int severity, std::uint64_t seed) {
  return snow_mask(width, height, snow_mask_params(severity), seed);
}

ImageBuffer composite_snow(const ImageBuffer& img, const DepthMap& depth,
                           const Grid<float>& z, const ScatterParams& veil) {
  check_depth(img, depth);
  if (z.width != img.width() || z.height != img.height()) {
    throw DimensionError("snow mask size does not match the image");
  }
  ImageBuffer out = img;
  const int c = img.channels();
  auto dst = out.data();
  const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double zi = z.values[i];
    for (int ch = 0; ch < c; ++ch) {
      float& v = dst[static_cast<std::size_t>(i) * c + ch];
      const double a = c == 1 ? veil.airlight[1] : veil.airlight[ch];
      v = static_cast<float>(zi * a + v * (1.0 - zi));
    }
  }
  scatter_in_place(out, depth, veil);
  out.clip();
  return out;
}

ImageBuffer snow(const ImageBuffer& img, const DepthMap& depth,
                 const SnowMaskParams& mask, double beta, std::uint64_t seed) {
  check_depth(img, depth);
  const SnowMask z = snow_mask(img.width(), img.height(), mask, seed);
  return composite_snow(img, depth, z.z, ScatterParams{beta, kSnowAirlight});
}

ImageBuffer snow(const ImageBuffer& img, const DepthMap& depth, int severity,
                 std::uint64_t seed) {
  check_severity(severity);
  return snow(img, depth, snow_mask_params(severity), kSnowBeta[severity - 1], seed);
}

}  // namespace camrobust
