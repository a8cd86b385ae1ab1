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

#include <gtest/gtest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "camrobust/degrade.hpp"
#include "camrobust/iqa.hpp"
#include "test_support.hpp"

namespace camrobust {
namespace {

using testing::natural;
using testing::random_image;

double mean_luma(const ImageBuffer& img) {
  const ImageBuffer l = to_luma(img);
  double s = 0.0;
  for (float v : l.data()) s += v;
  return s / static_cast<double>(l.size());
}

double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, static_cast<double>(std::abs(a.data()[i] - b.data()[i])));
  }
  return m;
}

// Mean central-difference gradient magnitude of luma, interior only.
double gradient_energy(const ImageBuffer& img) {
  const ImageBuffer l = to_luma(img);
  double s = 0.0;
  for (int y = 1; y + 1 < l.height(); ++y) {
    for (int x = 1; x + 1 < l.width(); ++x) {
      const double gx = l.at(x + 1, y, 0) - l.at(x - 1, y, 0);
      const double gy = l.at(x, y + 1, 0) - l.at(x, y - 1, 0);
      s += std::hypot(gx, gy);
    }
  }
  return s / ((l.width() - 2.0) * (l.height() - 2.0));
}

DepthMap ramp_depth(int w, int h) {
  DepthMap d(w, h, 1.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) d.at(x, y) = 5.0f + 3.0f * static_cast<float>(h - y);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Catalog

TEST(Catalog, NineteenFactorsInSixCategories) {
  const auto cat = factor_catalog();
  ASSERT_EQ(cat.size(), 19u);
  std::set<int> categories;
  std::set<std::string_view> names;
  for (const auto& f : cat) {
    categories.insert(f.category_id);
    names.insert(f.name);
    EXPECT_EQ(parse_factor(f.name), f.factor);
    EXPECT_EQ(&factor_info(f.factor), &f);
  }
  EXPECT_EQ(categories, (std::set<int>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(names.size(), 19u);
}

TEST(Catalog, DepthOnlyForWeather) {
  for (const auto& f : factor_catalog()) {
    const bool weather = f.factor == Factor::kFog || f.factor == Factor::kRain ||
                         f.factor == Factor::kSnow;
    EXPECT_EQ(f.needs_depth, weather) << f.name;
  }
}

TEST(Catalog, RejectsUnknownNamesAndSeverities) {
  EXPECT_THROW(parse_factor("hail"), CatalogError);
  EXPECT_THROW(check_severity(0), CatalogError);
  EXPECT_THROW(check_severity(4), CatalogError);
  EXPECT_THROW(resolve_parameters({Factor::kFog, 2, 0, {{"gamma", 1.0}}}), CatalogError);
}

TEST(Catalog, TaskSpecSharesMotionDirection) {
  const DegradationSpec a = task_spec(3, "img", Factor::kMotion, 1);
  const DegradationSpec c = task_spec(3, "img", Factor::kMotion, 3);
  EXPECT_EQ(a.seed, derive_seed(3, "img", "motion", 1));
  EXPECT_NE(a.seed, c.seed);
  EXPECT_EQ(a.overrides.at("angle"), c.overrides.at("angle"));
  EXPECT_EQ(a.overrides.at("angle"), motion_angle_deg(derive_seed(3, "img", "motion", 0)));
  EXPECT_TRUE(task_spec(3, "img", Factor::kFog, 2).overrides.empty());
}

TEST(Catalog, OverridesReplaceDefaults) {
  const ParamMap p = resolve_parameters({Factor::kJpeg, 1, 0, {{"quality", 33}}});
  EXPECT_DOUBLE_EQ(p.at("quality"), 33.0);
  EXPECT_DOUBLE_EQ(resolve_parameters({Factor::kJpeg, 3, 0, {}}).at("quality"), 20.0);
}

TEST(Catalog, EveryFactorPreservesShapeAndRange) {
  const ImageBuffer img = random_image(48, 40, 3, 21);
  const DepthMap depth = ramp_depth(48, 40);
  for (const auto& f : factor_catalog()) {
    for (int s = 1; s <= 3; ++s) {
      const ImageBuffer out = apply_degradation(img, &depth, {f.factor, s, 99, {}});
      EXPECT_TRUE(out.same_shape(img)) << f.name;
      for (float v : out.data()) {
        ASSERT_TRUE(v >= 0.0f && v <= 1.0f) << f.name << " s" << s;
      }
    }
  }
}

TEST(Catalog, WeatherWithoutDepthIsAnError) {
  const ImageBuffer img(16, 16, 3, 0.5f);
  EXPECT_THROW(apply_degradation(img, nullptr, {Factor::kFog, 1, 0, {}}), ValidationError);
  const DepthMap wrong(8, 8, 1.0f);
  EXPECT_THROW(apply_degradation(img, &wrong, {Factor::kSnow, 1, 0, {}}), DimensionError);
}

TEST(Determinism, RepeatedCallsAreBitIdentical) {
  const ImageBuffer img = random_image(40, 32, 3, 22);
  const DepthMap depth = ramp_depth(40, 32);
  for (const auto& f : factor_catalog()) {
    const DegradationSpec spec{f.factor, 2, 1234, {}};
    EXPECT_EQ(apply_degradation(img, &depth, spec), apply_degradation(img, &depth, spec))
        << f.name;
  }
}

TEST(Determinism, ThreadCountDoesNotChangeOutput) {
  const ImageBuffer img = random_image(64, 48, 3, 23);
  const DepthMap depth = ramp_depth(64, 48);
  const int saved = omp_get_max_threads();
  for (const auto& f : factor_catalog()) {
    const DegradationSpec spec{f.factor, 3, 77, {}};
    omp_set_num_threads(1);
    const ImageBuffer one = apply_degradation(img, &depth, spec);
    omp_set_num_threads(4);
    const ImageBuffer four = apply_degradation(img, &depth, spec);
    EXPECT_EQ(one, four) << f.name;
  }
  omp_set_num_threads(saved);
}

TEST(Determinism, SeedChangesStochasticFactors) {
  const ImageBuffer img = random_image(40, 32, 3, 24);
  EXPECT_NE(add_noise(img, NoiseKind::kGaussian, 1, 1), add_noise(img, NoiseKind::kGaussian, 1, 2));
  EXPECT_NE(mud_occlusion(img, 1, 1), mud_occlusion(img, 1, 2));
}

// ---------------------------------------------------------------------------
// Light

TEST(LowLight, EndpointsAreFixed) {
  ImageBuffer img(2, 1, 3);
  for (int c = 0; c < 3; ++c) img.at(1, 0, c) = 1.0f;
  for (int s = 1; s <= 3; ++s) {
    const ImageBuffer out = darken_lowlight(img, s);
    EXPECT_EQ(out.at(0, 0, 0), 0.0f);
    EXPECT_GE(out.at(1, 0, 0), 0.96f);
  }
}

TEST(LowLight, ScalarRecurrence) {
  LightCurveParams p;
  p.alpha = -0.35;
  p.iterations = 8;
  double v = 0.5;
  for (int i = 0; i < 8; ++i) v += p.alpha * v * (1.0 - v);
  const ImageBuffer out = darken_lowlight(ImageBuffer(3, 3, 3, 0.5f), p);
  EXPECT_NEAR(out.at(1, 1, 0), v, 1e-6);
}

TEST(LowLight, DarkerWithSeverity) {
  const ImageBuffer img = natural("coffee");
  EXPECT_GT(mean_luma(darken_lowlight(img, 1)), mean_luma(darken_lowlight(img, 2)));
  EXPECT_GT(mean_luma(darken_lowlight(img, 2)), mean_luma(darken_lowlight(img, 3)));
}

TEST(NightLight, SaturatedCoresAndOrdering) {
  const ImageBuffer img = natural("chelsea");
  for (int s = 1; s <= 3; ++s) {
    const ImageBuffer night = synth_nightlight(img, s, 5);
    const int k = nightlight_params(s).sources;
    int saturated = 0;
    for (int y = 0; y < night.height(); ++y) {
      for (int x = 0; x < night.width(); ++x) {
        if (night.at(x, y, 0) == 1.0f && night.at(x, y, 1) == 1.0f && night.at(x, y, 2) == 1.0f) {
          ++saturated;
        }
      }
    }
    EXPECT_GE(saturated, k);
    const ImageBuffer extreme = synth_extremelight(img, s, 5);
    EXPECT_LT(mean_luma(night), mean_luma(img));
    EXPECT_LE(mean_luma(extreme), mean_luma(night));
    EXPECT_EQ(extreme, darken_lowlight(night, s));
  }
}

TEST(StrongLight, ShiftsValueChannel) {
  const ImageBuffer out = brighten_stronglight(ImageBuffer(4, 4, 3, 0.0f), 3);
  for (float v : out.data()) EXPECT_NEAR(v, 0.5f, 1e-6);
  const ImageBuffer sat = brighten_stronglight(ImageBuffer(2, 2, 3, 1.0f), 2);
  for (float v : sat.data()) EXPECT_EQ(v, 1.0f);
  const ImageBuffer img = natural("rocket");
  EXPECT_LT(mean_luma(brighten_stronglight(img, 1)), mean_luma(brighten_stronglight(img, 2)));
  EXPECT_LT(mean_luma(brighten_stronglight(img, 2)), mean_luma(brighten_stronglight(img, 3)));
}

// ---------------------------------------------------------------------------
// Weather

TEST(Fog, VisibilityFixedPoints) {
  EXPECT_NEAR(visibility_from_beta(0.005), 599.1, 0.05);
  EXPECT_NEAR(visibility_from_beta(0.01), 299.6, 0.05);
  EXPECT_NEAR(visibility_from_beta(0.02), 149.8, 0.05);
  EXPECT_THROW(visibility_from_beta(0.0), ValidationError);
  EXPECT_THROW(visibility_from_beta(-1.0), ValidationError);
}

TEST(Fog, ZeroBetaIsIdentityEvenAtInfinity) {
  const ImageBuffer img = random_image(32, 32, 3, 31);
  DepthMap depth = ramp_depth(32, 32);
  depth.at(0, 0) = std::numeric_limits<float>::infinity();
  EXPECT_EQ(apply_scattering(img, depth, {0.0, kFogAirlight}), img);
}

TEST(Fog, FarDepthConvergesToAirlight) {
  const ImageBuffer img = random_image(32, 32, 3, 32);
  const DepthMap far(32, 32, std::numeric_limits<float>::infinity());
  const ImageBuffer out = fog(img, far, 1);
  for (float v : out.data()) EXPECT_NEAR(v, 0.9f, 1e-6);
}

TEST(Fog, MatchesClosedForm) {
  const ImageBuffer img = random_image(8, 8, 3, 33);
  const DepthMap depth = ramp_depth(8, 8);
  const ImageBuffer out = fog(img, depth, 2);
  for (int y = 0; y < 8; ++y) {
    const double t = std::exp(-0.01 * depth.at(0, y));
    for (int x = 0; x < 8; ++x) {
      EXPECT_NEAR(out.at(x, y, 1), img.at(x, y, 1) * t + 0.9 * (1.0 - t), 1e-6);
    }
  }
}

TEST(Rain, ZeroRateIsIdentity) {
  const ImageBuffer img = random_image(48, 32, 3, 34);
  const DepthMap depth = ramp_depth(48, 32);
  EXPECT_EQ(apply_degradation(img, &depth, {Factor::kRain, 2, 9, {{"rate", 0.0}, {"beta", 0.0}}}),
            img);
  RainParams p;
  p.rate = 0.0;
  p.veil_beta = 0.0;
  EXPECT_EQ(rain(img, depth, p, 9), img);
}

TEST(Rain, StreakCountScalesWithRate) {
  for (int w : {640, 1024, 2048}) {
    const int a = rain_streak_count(50, w, 512);
    const int b = rain_streak_count(100, w, 512);
    EXPECT_NEAR(b, 2 * a, 1);
  }
  EXPECT_LT(rain_streak_length(50), rain_streak_length(200));
}

TEST(Snow, EmptyMaskAndZeroBetaIsIdentity) {
  const ImageBuffer img = random_image(32, 32, 3, 35);
  const DepthMap depth = ramp_depth(32, 32);
  const Grid<float> zero(32, 32, 0.0f);
  EXPECT_EQ(composite_snow(img, depth, zero, {0.0, kSnowAirlight}), img);
  EXPECT_EQ(apply_degradation(img, &depth,
                              {Factor::kSnow, 3, 4, {{"beta", 0.0}, {"density", 0.0}}}),
            img);
}

TEST(Snow, FullMaskGivesAirlight) {
  const ImageBuffer img = random_image(16, 16, 3, 36);
  const DepthMap depth = ramp_depth(16, 16);
  const ImageBuffer out = composite_snow(img, depth, Grid<float>(16, 16, 1.0f),
                                         {0.0, kSnowAirlight});
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.at(x, y, c), kSnowAirlight[c], 1e-6);
    }
  }
}

TEST(Snow, MaskCoverageGrowsWithSeverity) {
  double prev = 0.0;
  for (int s = 1; s <= 3; ++s) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const SnowMask m = snow_mask(96, 64, s, seed);
      double sum = 0.0;
      for (float z : m.z.values) {
        ASSERT_GE(z, 0.0f);
        ASSERT_LE(z, 1.0f);
        sum += z;
      }
      total += sum / m.z.values.size();
    }
    EXPECT_GT(total, prev) << "severity " << s;
    prev = total;
  }
}

// ---------------------------------------------------------------------------
// Optic obstruction

TEST(Mud, BlendArithmetic) {
  const ImageBuffer img = random_image(8, 8, 3, 41);
  const ImageBuffer out = composite_mud(img, Grid<float>(8, 8, 1.0f), 0.7);
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(out.at(3, 3, c), 0.3 * img.at(3, 3, c) + 0.7 * kMudColor[c], 1e-6);
  }
  EXPECT_EQ(composite_mud(img, Grid<float>(8, 8, 0.0f), 0.7), img);
}

TEST(Mud, CoverageGrowsWithSeverity) {
  double prev = 0.0;
  for (int s = 1; s <= 3; ++s) {
    double covered = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Grid<float> m = mud_mask(128, 64, mud_params(s), seed);
      for (float v : m.values) covered += v > 0.0f;
    }
    EXPECT_GT(covered, prev) << "severity " << s;
    prev = covered;
  }
}

TEST(Droplets, OutsideUnchangedInsideAltered) {
  const ImageBuffer img = natural("astronaut");
  for (int s = 1; s <= 3; ++s) {
    const auto params = droplet_params(s);
    const auto drops = place_droplets(img.width(), img.height(), params, 8);
    EXPECT_EQ(static_cast<int>(drops.size()), params.count);
    const ImageBuffer out = lens_droplets(img, params, 8);
    double inside_diff = 0.0;
    int inside = 0;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        bool in = false;
        for (const auto& d : drops) {
          const double u = (x - d.cx) / d.rx, v = (y - d.cy) / d.ry;
          in |= u * u + v * v < 1.0;
        }
        for (int c = 0; c < 3; ++c) {
          const double diff = std::abs(out.at(x, y, c) - img.at(x, y, c));
          if (in) {
            inside_diff += diff;
          } else {
            ASSERT_EQ(diff, 0.0) << x << "," << y;
          }
        }
        inside += in;
      }
    }
    ASSERT_GT(inside, 0);
    EXPECT_GT(inside_diff / inside, 0.0);
  }
  EXPECT_LT(droplet_params(1).count, droplet_params(2).count);
  EXPECT_LT(droplet_params(2).count, droplet_params(3).count);
}

// ---------------------------------------------------------------------------
// ISP

TEST(Jpeg, QualityOrderingAndShape) {
  const ImageBuffer img = natural("motorcycle");
  double prev = kPsnrCap + 1.0;
  for (int s = 1; s <= 3; ++s) {
    const ImageBuffer out = jpeg_cycle(img, s);
    EXPECT_TRUE(out.same_shape(img));
    const double p = psnr(img, out);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

// Energy of the luma spectrum at the 8-pixel block harmonics minus the
// clean image's, measured by direct DFT along rows and columns.
double block_grid_energy(const ImageBuffer& img) {
  const ImageBuffer l = to_luma(img);
  double e = 0.0;
  const int n = l.width();
  for (int k = n / 8; k < n; k += n / 8) {
    for (int y = 0; y < l.height(); ++y) {
      // Row-wise horizontal differences pick up block edges.
      double re = 0.0, im = 0.0;
      for (int x = 1; x < n; ++x) {
        const double d = std::abs(l.at(x, y, 0) - l.at(x - 1, y, 0));
        re += d * std::cos(2.0 * M_PI * k * x / n);
        im -= d * std::sin(2.0 * M_PI * k * x / n);
      }
      e += re * re + im * im;
    }
  }
  return e;
}

TEST(Jpeg, BlockArtifactsGrowWithSeverity) {
  const ImageBuffer img = natural("coffee");
  const double e1 = block_grid_energy(jpeg_cycle(img, 1));
  const double e3 = block_grid_energy(jpeg_cycle(img, 3));
  EXPECT_GT(e3, e1);
}

TEST(Sharpen, IdentityCasesAndEdgeGain) {
  const ImageBuffer img = natural("camera");
  EXPECT_EQ(oversharpen(img, 0.0), img);
  const ImageBuffer flat(16, 16, 3, 0.4f);
  for (double a : {0.25, 0.75}) {
    EXPECT_LT(max_abs_diff(oversharpen(flat, a), flat), 1e-6);
  }
  EXPECT_LT(gradient_energy(oversharpen(img, 1)), gradient_energy(oversharpen(img, 2)));
  EXPECT_LT(gradient_energy(oversharpen(img, 2)), gradient_energy(oversharpen(img, 3)));
  EXPECT_THROW(oversharpen(img, 1.5), ValidationError);
}

TEST(NoDemosaic, RggbLayout) {
  const ImageBuffer img = random_image(6, 4, 3, 42);
  const ImageBuffer out = no_demosaic(img);
  int r = 0, g = 0, b = 0;
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) {
      const int keep = (y % 2) + (x % 2);
      for (int c = 0; c < 3; ++c) {
        EXPECT_EQ(out.at(x, y, c), c == keep ? img.at(x, y, c) : 0.0f);
      }
      r += keep == 0;
      g += keep == 1;
      b += keep == 2;
    }
  }
  EXPECT_EQ(g, 12);
  EXPECT_EQ(r, 6);
  EXPECT_EQ(b, 6);
  // Channel sum is the single-plane mosaic.
  EXPECT_EQ(out.at(1, 0, 0) + out.at(1, 0, 1) + out.at(1, 0, 2), img.at(1, 0, 1));
  EXPECT_NO_THROW(no_demosaic(random_image(5, 3, 3, 1)));
}

TEST(NoBayer, LumaWeights) {
  ImageBuffer img(3, 1, 3);
  for (int c = 0; c < 3; ++c) img.at(0, 0, c) = 1.0f;
  img.at(2, 0, 1) = 1.0f;
  const ImageBuffer out = no_bayer(img);
  EXPECT_NEAR(out.at(0, 0, 0), 0.2989 + 0.5870 + 0.1140, 1e-6);
  EXPECT_EQ(out.at(1, 0, 2), 0.0f);
  EXPECT_NEAR(out.at(2, 0, 1), 0.5870, 1e-7);
}

// ---------------------------------------------------------------------------
// Noise

TEST(Noise, GaussianAndUniformStdMatchConfig) {
  for (NoiseKind kind : {NoiseKind::kGaussian, NoiseKind::kUniform}) {
    for (int s = 1; s <= 3; ++s) {
      const double level = noise_level(kind, s);
      const CounterRng rng(1000 + s);
      const std::uint64_t n = 512ULL * 512 * 3;
      double sum = 0.0, sq = 0.0;
      for (std::uint64_t i = 0; i < n; ++i) {
        const double e = additive_noise_sample(kind, level, rng, i);
        sum += e;
        sq += e * e;
      }
      const double m = sum / n;
      EXPECT_NEAR(std::sqrt(sq / n - m * m), level, 0.02 * level);
    }
  }
}

TEST(Noise, ImpulseFraction) {
  const ImageBuffer gray(512, 512, 3, 0.5f);
  for (int s = 1; s <= 3; ++s) {
    const ImageBuffer out = add_noise(gray, NoiseKind::kImpulse, s, 17);
    std::size_t hit = 0;
    for (int y = 0; y < 512; ++y) {
      for (int x = 0; x < 512; ++x) {
        const float v = out.at(x, y, 0);
        hit += v == 0.0f || v == 1.0f;
      }
    }
    EXPECT_NEAR(static_cast<double>(hit) / (512.0 * 512.0), kImpulseFraction[s - 1], 0.01);
  }
}

TEST(Noise, PoissonMeanShift) {
  const ImageBuffer gray(128, 128, 3, 0.5f);
  const ImageBuffer out = add_noise(gray, NoiseKind::kPoisson, 3, 3);
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += out.data()[i] - 0.5;
  EXPECT_NEAR(s / out.size(), 15.0 / 255.0, 0.002);
}

TEST(Noise, FixedSeedReproduces) {
  const ImageBuffer img = random_image(32, 32, 3, 43);
  for (NoiseKind k : {NoiseKind::kGaussian, NoiseKind::kUniform, NoiseKind::kImpulse,
                      NoiseKind::kPoisson}) {
    EXPECT_EQ(add_noise(img, k, 2, 5), add_noise(img, k, 2, 5));
  }
}

// ---------------------------------------------------------------------------
// Blur

double kernel_sum(const SparseKernel& k) {
  double s = 0.0;
  for (const auto& t : k.taps) s += t.weight;
  return s;
}

TEST(Blur, KernelsAreNormalized) {
  for (const auto& p : kDefocus) EXPECT_NEAR(kernel_sum(defocus_kernel(p.radius, p.alias_blur)), 1.0, 1e-9);
  for (const auto& p : kMotion) {
    for (double a : {-45.0, 0.0, 17.0, 45.0}) {
      EXPECT_NEAR(kernel_sum(motion_kernel(p.length, p.sigma, a)), 1.0, 1e-9);
    }
  }
}

TEST(Blur, MotionAngleInRange) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const double a = motion_angle_deg(seed);
    EXPECT_GE(a, -45.0);
    EXPECT_LE(a, 45.0);
  }
}

TEST(Blur, ConstantImageUnchanged) {
  const ImageBuffer flat(40, 40, 3, 0.6f);
  for (BlurKind k : {BlurKind::kDefocus, BlurKind::kMotion}) {
    EXPECT_LT(max_abs_diff(blur(flat, k, 3, 1), flat), 1e-6);
  }
}

TEST(Blur, GradientsFallWithSeverity) {
  const ImageBuffer img = natural("brick");
  for (BlurKind k : {BlurKind::kDefocus, BlurKind::kMotion}) {
    const double g1 = gradient_energy(blur(img, k, 1, 6));
    const double g2 = gradient_energy(blur(img, k, 2, 6));
    const double g3 = gradient_energy(blur(img, k, 3, 6));
    EXPECT_GT(g1, g2);
    EXPECT_GT(g2, g3);
  }
}

// ---------------------------------------------------------------------------
// Severity ordering on the bundled images

TEST(Severity, PsnrDecreasesForGradedFactors) {
  const Factor graded[] = {Factor::kGaussian, Factor::kUniform, Factor::kImpulse,
                           Factor::kPoisson,  Factor::kDefocus, Factor::kMotion,
                           Factor::kJpeg,     Factor::kFog,     Factor::kSnow,
                           Factor::kRain};
  for (const auto& stem : {"astronaut", "grass"}) {
    const ImageBuffer img = natural(stem);
    const DepthMap depth = testing::natural_depth(stem);
    for (Factor f : graded) {
      const std::string name(factor_info(f).name);
      double prev = kPsnrCap + 1.0;
      for (int s = 1; s <= 3; ++s) {
        const double p = psnr(img, apply_degradation(img, &depth, task_spec(0, stem, f, s)));
        EXPECT_LT(p, prev) << stem << " " << name << " s" << s;
        prev = p;
      }
    }
  }
}

}  // namespace
}  // namespace camrobust
