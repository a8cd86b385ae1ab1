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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "camrobust/image.hpp"
#include "camrobust/kernels.hpp"
#include "camrobust/seed.hpp"

namespace camrobust {

// ---------------------------------------------------------------------------
// Catalog

enum class Factor {
  kLowLight,
  kNightLight,
  kExtremeLight,
  kStrongLight,
  kRain,
  kFog,
  kSnow,
  kMud,
  kDroplets,
  kJpeg,
  kSharpen,
  kNoDemosaic,
  kNoBayer,
  kGaussian,
  kUniform,
  kImpulse,
  kPoisson,
  kDefocus,
  kMotion,
};

inline constexpr int kFactorCount = 19;
inline constexpr int kSeverityLevels = 3;

struct FactorInfo {
  Factor factor;
  std::string_view name;
  // Cause category: 1 light, 2 weather, 3 optic obstruction, 4 ISP,
  // 5 sensor noise, 6 blur.
  int category_id;
  std::string_view category;
  bool needs_depth;
  // Procedural stand-in for a learned or externally rendered model.
  bool surrogate;
  // Level on the scale of the library/table the factor is specified against,
  // indexed by severity-1.
  std::array<double, 3> native_levels;
  std::string_view native_unit;
};

std::span<const FactorInfo> factor_catalog();
const FactorInfo& factor_info(Factor factor);
// Throws CatalogError for names outside the catalog.
Factor parse_factor(std::string_view name);

using ParamMap = std::map<std::string, double>;

struct DegradationSpec {
  Factor factor = Factor::kGaussian;
  int severity = 1;
  std::uint64_t seed = 0;
  // Keys must be parameters of the factor (see resolve_parameters).
  ParamMap overrides;
};

// Throws CatalogError unless severity is in {1,2,3}.
void check_severity(int severity);

// Severity defaults with overrides applied. Unknown override keys raise
// CatalogError. The returned map fully determines the operator output
// together with the seed.
ParamMap resolve_parameters(const DegradationSpec& spec);

// Spec of one corpus task: seed from derive_seed. The motion direction is
// drawn from the image's severity-0 seed, so the three motion severities of
// an image share one direction and differ only in blur extent.
DegradationSpec task_spec(std::uint64_t global_seed, std::string_view image_id,
                          Factor factor, int severity);

// Runs the factor operator selected by spec. Weather factors (fog, rain,
// snow) require a depth map: ValidationError when it is missing,
// DimensionError when its size differs from the image.
ImageBuffer apply_degradation(const ImageBuffer& img, const DepthMap* depth,
                              const DegradationSpec& spec);

// ---------------------------------------------------------------------------
// Light

struct LightCurveParams {
  double alpha = -0.25;  // in (-1, 0)
  int iterations = 8;
  double highlight_threshold = 0.95;
};

LightCurveParams lowlight_params(int severity);

// Iterated I <- I + alpha*I*(1-I); pixels with luma above the threshold keep
// 80% of their original value.
ImageBuffer darken_lowlight(const ImageBuffer& img, const LightCurveParams& params);
ImageBuffer darken_lowlight(const ImageBuffer& img, int severity);

struct GlareParams {
  LightCurveParams curve;
  int sources = 8;
  double halo_sigma = 6.0;   // pixels, at 512 rows
  double halo_gain = 0.6;
  double streak_length = 40.0;  // pixels, at 512 rows
  double streak_gain = 0.35;
  double core_radius = 2.0;  // pixels; cores saturate
};

GlareParams nightlight_params(int severity);

// Reduced-strength darkening plus additive halos, 4-ray streaks and
// saturated cores around light sources drawn from the brightest pixels and
// from street-level positions.
ImageBuffer synth_nightlight(const ImageBuffer& img, const GlareParams& params,
                             std::uint64_t seed);
ImageBuffer synth_nightlight(const ImageBuffer& img, int severity,
                             std::uint64_t seed);

ImageBuffer synth_extremelight(const ImageBuffer& img, int severity,
                               std::uint64_t seed);

// HSV value channel shifted by `shift`, then clipped.
ImageBuffer brighten_stronglight(const ImageBuffer& img, double shift);
ImageBuffer brighten_stronglight(const ImageBuffer& img, int severity);

// ---------------------------------------------------------------------------
// Weather

struct ScatterParams {
  double beta = 0.0;  // 1/m
  std::array<float, 3> airlight{0.9f, 0.9f, 0.9f};
};

inline constexpr std::array<double, 3> kFogBeta{0.005, 0.01, 0.02};
inline constexpr std::array<float, 3> kFogAirlight{0.9f, 0.9f, 0.9f};

// out = I*t + A*(1-t), t = exp(-beta*d); beta = 0 leaves I untouched even
// at infinite depth.
ImageBuffer apply_scattering(const ImageBuffer& img, const DepthMap& depth,
                             const ScatterParams& params);
ImageBuffer fog(const ImageBuffer& img, const DepthMap& depth, int severity);

// Koschmieder visibility ln(20)/beta. Throws ValidationError for beta <= 0.
double visibility_from_beta(double beta);

struct RainParams {
  double rate = 50.0;        // mm/hr
  double veil_beta = 0.001;  // 1/m
  double opacity = 0.7;
  std::array<float, 3> color{0.9f, 0.9f, 0.9f};
};

inline constexpr std::array<double, 3> kRainRate{50.0, 100.0, 200.0};
// Streaks per (mm/hr * megapixel).
inline constexpr double kRainStreakDensity = 2.5;

RainParams rain_params(int severity);
int rain_streak_count(double rate, int width, int height);
double rain_streak_length(double rate);

ImageBuffer rain(const ImageBuffer& img, const DepthMap& depth,
                 const RainParams& params, std::uint64_t seed);
ImageBuffer rain(const ImageBuffer& img, const DepthMap& depth, int severity,
                 std::uint64_t seed);

enum class FlakeSize { kSmall = 1, kMedium = 2, kLarge = 3 };

struct SnowMaskParams {
  FlakeSize size = FlakeSize::kSmall;
  double flakes_per_mpx = 4000.0;
  double radius_min = 0.5;
  double radius_max = 1.5;
  double elongation = 1.0;  // major/minor axis ratio along the fall direction
  double density = 1.0;     // multiplier on the flake count
};

SnowMaskParams snow_mask_params(int severity);

struct SnowMask {
  Grid<float> z;  // opacity in [0,1]
  int flake_count = 0;
  FlakeSize size = FlakeSize::kSmall;
  double direction_deg = 0.0;  // fall direction from vertical
};

SnowMask snow_mask(int width, int height, const SnowMaskParams& params,
                   std::uint64_t seed);
SnowMask snow_mask(int width, int height, int severity, std::uint64_t seed);

inline constexpr std::array<double, 3> kSnowBeta{0.002, 0.006, 0.012};
inline constexpr std::array<float, 3> kSnowAirlight{0.94f, 0.96f, 1.00f};

// I2 = z*A + I*(1-z), then I2' = I2*t + A*(1-t).
ImageBuffer composite_snow(const ImageBuffer& img, const DepthMap& depth,
                           const Grid<float>& z, const ScatterParams& veil);
ImageBuffer snow(const ImageBuffer& img, const DepthMap& depth,
                 const SnowMaskParams& mask, double beta, std::uint64_t seed);
ImageBuffer snow(const ImageBuffer& img, const DepthMap& depth, int severity,
                 std::uint64_t seed);

// ---------------------------------------------------------------------------
// Optic obstruction

struct MudParams {
  int kernel_size = 12;
  double intensity = 0.7;
  double threshold = 2.0;  // in standard deviations of the filtered noise
};

inline constexpr std::array<int, 3> kMudKernel{12, 24, 36};
inline constexpr std::array<float, 3> kMudColor{0.33f, 0.25f, 0.16f};

MudParams mud_params(int severity);
Grid<float> mud_mask(int width, int height, const MudParams& params,
                     std::uint64_t seed);
ImageBuffer composite_mud(const ImageBuffer& img, const Grid<float>& mask,
                          double intensity);
ImageBuffer mud_occlusion(const ImageBuffer& img, const MudParams& params,
                          std::uint64_t seed);
ImageBuffer mud_occlusion(const ImageBuffer& img, int severity, std::uint64_t seed);

struct DropletParams {
  int count = 6;
  double radius_min = 0.04;  // fraction of image height
  double radius_max = 0.09;
  double magnification = 1.3;
  double blur_sigma = 2.0;
  double rim_darkening = 0.35;
};

DropletParams droplet_params(int severity);

struct Droplet {
  double cx, cy, rx, ry;
};

std::vector<Droplet> place_droplets(int width, int height,
                                    const DropletParams& params,
                                    std::uint64_t seed);
ImageBuffer lens_droplets(const ImageBuffer& img, const DropletParams& params,
                          std::uint64_t seed);
ImageBuffer lens_droplets(const ImageBuffer& img, int severity, std::uint64_t seed);

// ---------------------------------------------------------------------------
// ISP

inline constexpr std::array<int, 3> kJpegQuality{80, 50, 20};

ImageBuffer jpeg_cycle_quality(const ImageBuffer& img, int quality);
ImageBuffer jpeg_cycle(const ImageBuffer& img, int severity);

inline constexpr std::array<double, 3> kSharpenAlpha{0.25, 0.5, 0.75};

// 3x3 kernel [-1 -1 -1; -1 8+lightness -1; -1 -1 -1].
SparseKernel sharpen_kernel(double lightness);
ImageBuffer oversharpen(const ImageBuffer& img, double alpha, double lightness = 1.0);
ImageBuffer oversharpen(const ImageBuffer& img, int severity);

// RGGB: (even,even)=R, (even,odd)/(odd,even)=G, (odd,odd)=B; the other two
// channels are zeroed.
ImageBuffer no_demosaic(const ImageBuffer& img);
// Luma replicated into three channels.
ImageBuffer no_bayer(const ImageBuffer& img);

// ---------------------------------------------------------------------------
// Sensor noise

enum class NoiseKind { kGaussian, kUniform, kImpulse, kPoisson };

inline constexpr std::array<double, 3> kGaussianSigma{0.08, 0.18, 0.38};
inline constexpr std::array<double, 3> kUniformSigma255{25.0, 50.0, 75.0};
inline constexpr std::array<double, 3> kImpulseFraction{0.03, 0.09, 0.27};
inline constexpr std::array<double, 3> kPoissonLambda{5.0, 10.0, 15.0};

// sigma (gaussian, uniform; [0,1] scale), fraction (impulse), lambda (poisson).
double noise_level(NoiseKind kind, int severity);

// Pre-clip additive noise for sample index i (gaussian/uniform/poisson).
double additive_noise_sample(NoiseKind kind, double level, const CounterRng& rng,
                             std::uint64_t i);

ImageBuffer add_noise_level(const ImageBuffer& img, NoiseKind kind, double level,
                            std::uint64_t seed);
ImageBuffer add_noise(const ImageBuffer& img, NoiseKind kind, int severity,
                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Blur

enum class BlurKind { kDefocus, kMotion };

struct DefocusParams {
  double radius;
  double alias_blur;
};
struct MotionParams {
  double length;
  double sigma;
};

inline constexpr std::array<DefocusParams, 3> kDefocus{{{3, 0.1}, {6, 0.5}, {10, 0.5}}};
inline constexpr std::array<MotionParams, 3> kMotion{{{10, 3}, {15, 8}, {20, 15}}};

// Normalized aliased disk smoothed by a small Gaussian.
SparseKernel defocus_kernel(double radius, double alias_blur);
// Normalized one-sided line of Gaussian-weighted taps along angle_deg.
SparseKernel motion_kernel(double length, double sigma, double angle_deg);
double motion_angle_deg(std::uint64_t seed);

ImageBuffer blur(const ImageBuffer& img, BlurKind kind, int severity,
                 std::uint64_t seed);

}  // namespace camrobust
