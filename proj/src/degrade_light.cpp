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
#include <numbers>
#include <vector>

#include "camrobust/degrade.hpp"

namespace camrobust {

namespace {

constexpr double kHighlightKeep = 0.8;

double luma_at(std::span<const float> px, int channels) {
  if (channels == 1) return px[0];
  return kLumaR * px[0] + kLumaG * px[1] + kLumaB * px[2];
}

struct LightSource {
  double x, y;
  double angle;  // streak orientation, radians
  std::array<double, 3> color;
};

}  // namespace

LightCurveParams lowlight_params(int severity) {
  check_severity(severity);
  constexpr std::array<double, 3> alpha{-0.15, -0.25, -0.35};
  return {alpha[severity - 1], 8, 0.95};
}

ImageBuffer darken_lowlight(const ImageBuffer& img, const LightCurveParams& params) {
  if (!(params.alpha < 0.0 && params.alpha > -1.0)) {
    throw ValidationError("light curve alpha must lie in (-1, 0)");
  }
  if (params.iterations < 1) throw ValidationError("light curve needs >= 1 iteration");
  ImageBuffer out = img;
  const int c = img.channels();
  const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());
  auto src = img.data();
  auto dst = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto px = src.subspan(static_cast<std::size_t>(i) * c, c);
    const bool highlight = luma_at(px, c) > params.highlight_threshold;
    for (int ch = 0; ch < c; ++ch) {
      const double orig = px[ch];
      double v = orig;
      for (int k = 0; k < params.iterations; ++k) v += params.alpha * v * (1.0 - v);
      if (highlight) v += kHighlightKeep * (orig - v);
      dst[static_cast<std::size_t>(i) * c + ch] = static_cast<float>(v);
    }
  }
  out.clip();
  return out;
}

ImageBuffer darken_lowlight(const ImageBuffer& img, int severity) {
  return darken_lowlight(img, lowlight_params(severity));
}

GlareParams nightlight_params(int severity) {
  check_severity(severity);
  const int i = severity - 1;
  GlareParams g;
  g.curve = LightCurveParams{std::array{-0.10, -0.15, -0.20}[i], 8, 0.95};
  g.sources = std::array{6, 10, 14}[i];
  g.halo_sigma = std::array{5.0, 6.0, 7.0}[i];
  g.halo_gain = std::array{0.5, 0.6, 0.7}[i];
  g.streak_length = std::array{30.0, 40.0, 50.0}[i];
  g.streak_gain = 0.3;
  g.core_radius = 2.0;
  return g;
}

ImageBuffer synth_nightlight(const ImageBuffer& img, const GlareParams& params,
                             std::uint64_t seed) {
  ImageBuffer out = darken_lowlight(img, params.curve);
  if (params.sources <= 0) return out;

  const int w = img.width(), h = img.height(), c = img.channels();
  const double scale = h / 512.0;
  const double sigma = std::max(1.0, params.halo_sigma * scale);
  const double streak_len = std::max(2.0, params.streak_length * scale);
  const double core_r = std::max(1.0, params.core_radius * scale);
  constexpr double kStreakHalfWidth = 0.8;

  // Candidate lamp positions: the brightest 1% of the clean image.
  std::vector<float> luma(img.pixel_count());
  for (std::size_t i = 0; i < luma.size(); ++i) {
    luma[i] = static_cast<float>(luma_at(img.data().subspan(i * c, c), c));
  }
  std::vector<float> sorted = luma;
  const std::size_t k99 = sorted.size() - 1 - sorted.size() / 100;
  std::nth_element(sorted.begin(), sorted.begin() + k99, sorted.end());
  const float bright = sorted[k99];
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < luma.size(); ++i) {
    if (luma[i] >= bright) candidates.push_back(i);
  }

  RngStream rng(CounterRng(seed).split(1));
  std::vector<LightSource> sources;
  const int from_bright = (params.sources + 1) / 2;
  for (int s = 0; s < params.sources; ++s) {
    LightSource src{};
    if (s < from_bright && !candidates.empty()) {
      const std::size_t pick =
          candidates[rng.uniform_int(0, static_cast<int>(candidates.size()) - 1)];
      src.x = static_cast<double>(pick % w);
      src.y = static_cast<double>(pick / w);
    } else {
      // Street lamps and headlights sit in a band around the horizon.
      src.x = rng.uniform(0.0, w - 1.0);
      src.y = rng.uniform(0.35 * h, 0.6 * h);
    }
    src.angle = rng.uniform(0.0, std::numbers::pi / 2.0);
    src.color = rng.uniform() < 0.5 ? std::array{1.0, 0.85, 0.6}
                                    : std::array{0.9, 0.95, 1.0};
    sources.push_back(src);
  }

  const double reach = std::max(3.0 * sigma, 2.0 * streak_len);
  auto dst = out.data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (const LightSource& src : sources) {
      if (std::abs(y - src.y) > reach) continue;
      const int x0 = std::max(0, static_cast<int>(std::floor(src.x - reach)));
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(src.x + reach)));
      const double ca = std::cos(src.angle), sa = std::sin(src.angle);
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - src.x, dy = y - src.y;
        const double r2 = dx * dx + dy * dy;
        double glow = params.halo_gain * std::exp(-r2 / (2.0 * sigma * sigma));
        // Two perpendicular lines through the source give the four rays.
        const double u = dx * ca + dy * sa;
        const double v = -dx * sa + dy * ca;
        glow += params.streak_gain *
                (std::exp(-std::abs(u) / streak_len) *
                     std::exp(-v * v / (2.0 * kStreakHalfWidth * kStreakHalfWidth)) +
                 std::exp(-std::abs(v) / streak_len) *
                     std::exp(-u * u / (2.0 * kStreakHalfWidth * kStreakHalfWidth)));
        if (r2 <= core_r * core_r) glow += 2.0;
        for (int ch = 0; ch < c; ++ch) {
          const double tint = c == 1 ? 1.0 : src.color[ch];
          float& v_out = dst[(static_cast<std::size_t>(y) * w + x) * c + ch];
          v_out = static_cast<float>(v_out + glow * tint);
        }
      }
    }
  }
  // Cores saturate in every channel, independent of the tint.
  for (const LightSource& src : sources) {
    const int cx = static_cast<int>(std::lround(src.x));
    const int cy = static_cast<int>(std::lround(src.y));
    const int r = static_cast<int>(std::floor(core_r));
    for (int y = std::max(0, cy - r); y <= std::min(h - 1, cy + r); ++y) {
      for (int x = std::max(0, cx - r); x <= std::min(w - 1, cx + r); ++x) {
        if ((x - src.x) * (x - src.x) + (y - src.y) * (y - src.y) > core_r * core_r) {
          continue;
        }
        for (int ch = 0; ch < c; ++ch) out.at(x, y, ch) = 1.0f;
      }
    }
  }
  out.clip();
  return out;
}

ImageBuffer synth_nightlight(const ImageBuffer& img, int severity, std::uint64_t seed) {
  return synth_nightlight(img, nightlight_params(severity), seed);
}

ImageBuffer synth_extremelight(const ImageBuffer& img, int severity,
                               std::uint64_t seed) {
  return darken_lowlight(synth_nightlight(img, severity, seed), severity);
}

ImageBuffer brighten_stronglight(const ImageBuffer& img, double shift) {
  ImageBuffer out = img;
  const int c = img.channels();
  auto dst = out.data();
  const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    float* px = dst.data() + static_cast<std::size_t>(i) * c;
    if (c == 1) {
      px[0] = static_cast<float>(std::clamp(px[0] + shift, 0.0, 1.0));
      continue;
    }
    // HSV keeps hue and saturation when V is scaled; V = max channel.
    const double v = std::max({px[0], px[1], px[2]});
    const double v_new = std::clamp(v + shift, 0.0, 1.0);
    if (v > 0.0) {
      const double gain = v_new / v;
      for (int ch = 0; ch < 3; ++ch) px[ch] = static_cast<float>(px[ch] * gain);
    } else {
      for (int ch = 0; ch < 3; ++ch) px[ch] = static_cast<float>(v_new);
    }
  }
  out.clip();
  return out;
}

ImageBuffer brighten_stronglight(const ImageBuffer& img, int severity) {
  check_severity(severity);
  return brighten_stronglight(img, 0.1 + 0.2 * (severity - 1));
}

}  // namespace camrobust
