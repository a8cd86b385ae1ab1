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

#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "camrobust/error.hpp"
#include "camrobust/io.hpp"
#include "camrobust/kernels.hpp"
#include "camrobust/seed.hpp"
#include "test_support.hpp"

namespace camrobust {
namespace {

using testing::random_image;
using testing::scratch_dir;

// ---------------------------------------------------------------------------
// ImageBuffer

TEST(ImageBuffer, RejectsBadShapes) {
  EXPECT_THROW(ImageBuffer(0, 4, 3), DimensionError);
  EXPECT_THROW(ImageBuffer(4, 4, 2), DimensionError);
  EXPECT_THROW(ImageBuffer(2, 2, 1, std::vector<float>(3)), DimensionError);
}

TEST(ImageBuffer, ClipMapsNanToZero) {
  ImageBuffer img(2, 1, 1, std::vector<float>{std::numeric_limits<float>::quiet_NaN(), 1.5f});
  img.clip();
  EXPECT_EQ(img.at(0, 0, 0), 0.0f);
  EXPECT_EQ(img.at(1, 0, 0), 1.0f);
}

TEST(ImageBuffer, LumaWeights) {
  ImageBuffer img(1, 1, 3, std::vector<float>{1.0f, 0.0f, 0.0f});
  EXPECT_NEAR(to_luma(img).at(0, 0, 0), 0.2989f, 1e-7);
}

TEST(Quantize, RoundsHalfUpAndClamps) {
  EXPECT_EQ(quantize(-0.1f), 0);
  EXPECT_EQ(quantize(2.0f), 255);
  EXPECT_EQ(quantize(0.5f), 128);  // 127.5 rounds up
  EXPECT_EQ(quantize(1.0f / 255.0f), 1);
}

// ---------------------------------------------------------------------------
// Codecs

TEST(Png, RoundTripIsExactOnQuantizedData) {
  ImageBuffer img = random_image(17, 9, 3, 1);
  for (float& v : img.data()) v = quantize(v) / 255.0f;
  const ImageBuffer back = decode_image(encode_png(img));
  EXPECT_EQ(back, img);
}

TEST(Png, GrayStaysSingleChannel) {
  const ImageBuffer img = random_image(8, 8, 1, 2);
  EXPECT_EQ(decode_image(encode_png(img)).channels(), 1);
}

TEST(Png, EncodingIsDeterministic) {
  const ImageBuffer img = random_image(32, 16, 3, 3);
  EXPECT_EQ(encode_png(img), encode_png(img));
}

TEST(Jpeg, LowerQualityLosesMore) {
  const ImageBuffer img = testing::natural("astronaut");
  auto err = [&](int q) {
    const ImageBuffer d = decode_image(encode_jpeg(img, q));
    double s = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
      s += std::abs(img.data()[i] - d.data()[i]);
    }
    return s;
  };
  EXPECT_LT(err(90), err(50));
  EXPECT_LT(err(50), err(10));
}

TEST(Decode, RejectsGarbage) {
  const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5};
  EXPECT_THROW(decode_image(junk), DecodeError);
}

TEST(Sha256, KnownVector) {
  const std::string abc = "abc";
  EXPECT_EQ(sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size())),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// ---------------------------------------------------------------------------
// Depth

TEST(Depth, ScalesStoredUnits) {
  const std::vector<std::uint16_t> raw{100, 200, 300, 400};
  DepthIngestOptions o;
  o.scale = 0.01;
  const DepthMap d = depth_from_raw(2, 2, raw, o);
  EXPECT_FLOAT_EQ(d.at(0, 0), 1.0f);
  EXPECT_FLOAT_EQ(d.at(1, 1), 4.0f);
}

TEST(Depth, DisparityNeedsBaseline) {
  const std::vector<std::uint16_t> raw{10, 20, 30, 40};
  DepthIngestOptions o;
  o.mode = DepthMode::kDisparity;
  EXPECT_THROW(depth_from_raw(2, 2, raw, o), ValidationError);
  o.baseline_focal = 100.0;
  const DepthMap d = depth_from_raw(2, 2, raw, o);
  EXPECT_FLOAT_EQ(d.at(0, 0), 10.0f);
  EXPECT_FLOAT_EQ(d.at(1, 1), 2.5f);
}

TEST(Depth, HolesAreFilledFromNeighbours) {
  std::vector<float> d(25, 5.0f);
  d[12] = 0.0f;
  fill_depth_holes(5, 5, d);
  EXPECT_FLOAT_EQ(d[12], 5.0f);
}

TEST(Depth, LargeHoleFillsWithFiniteValues) {
  std::vector<float> d(100, 0.0f);
  for (int i = 0; i < 10; ++i) d[i] = 3.0f;
  fill_depth_holes(10, 10, d);
  for (float v : d) EXPECT_FLOAT_EQ(v, 3.0f);
}

TEST(Depth, InfiniteSkyIsKept) {
  std::vector<float> d(9, std::numeric_limits<float>::infinity());
  d[4] = 0.0f;
  fill_depth_holes(3, 3, d);
  EXPECT_TRUE(std::isinf(d[4]));
}

TEST(Depth, AllInvalidIsAnError) {
  std::vector<float> d(9, 0.0f);
  EXPECT_THROW(fill_depth_holes(3, 3, d), ValidationError);
}

TEST(Depth, Gray16RoundTrip) {
  const auto dir = scratch_dir("gray16");
  std::vector<std::uint16_t> raw(12);
  std::iota(raw.begin(), raw.end(), 1000);
  save_gray16(dir / "d.png", 4, 3, raw);
  const DepthMap d = load_depth(dir / "d.png");
  EXPECT_FLOAT_EQ(d.at(3, 2), 1011.0f);
}

// ---------------------------------------------------------------------------
// Panoptic IO

TEST(PanopticMap, ValidatesSegments) {
  EXPECT_THROW(PanopticMap(2, 1, {1, 2}, {{1, 1, false}}), ValidationError);
  EXPECT_THROW(PanopticMap(2, 1, {1, 1}, {{1, 1, false}, {1, 2, false}}), ValidationError);
  EXPECT_THROW(PanopticMap(2, 1, {0, 0}, {{0, 1, false}}), ValidationError);
  const PanopticMap m(2, 1, {1, 1}, {{1, 3, false}, {7, 4, false}});
  EXPECT_EQ(m.segments().size(), 1u);  // empty segment dropped
}

TEST(PanopticIo, RoundTrip) {
  const auto dir = scratch_dir("panoptic_io");
  const PanopticMap m(3, 2, {0, 70000, 70000, 5, 5, 0}, {{70000, 2, true}, {5, 9, false}});
  save_panoptic(m, dir / "a.png", dir / "a.json");
  EXPECT_EQ(load_panoptic(dir / "a.png", dir / "a.json"), m);
}

// ---------------------------------------------------------------------------
// Seeds and counter RNG

// Straight FNV-1a over the concatenated byte string.
std::uint64_t fnv_oracle(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

TEST(Seed, MatchesByteLayout) {
  const std::uint64_t g = 0x0102030405060708ULL;
  std::string bytes(8, '\0');
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((g >> (8 * i)) & 0xFF);
  bytes += "\x1f" "frankfurt_000001" "\x1f" "fog" "\x1f" "3";
  EXPECT_EQ(derive_seed(g, "frankfurt_000001", "fog", 3), fnv_oracle(bytes));
}

TEST(Seed, FieldsAreSeparated) {
  EXPECT_NE(derive_seed(1, "ab", "c", 1), derive_seed(1, "a", "bc", 1));
  EXPECT_NE(derive_seed(1, "a", "fog", 1), derive_seed(1, "a", "fog", 2));
}

TEST(CounterRng, DrawsArePureFunctionsOfCounter) {
  const CounterRng a(42), b(42);
  EXPECT_EQ(a.bits(17), b.bits(17));
  EXPECT_NE(a.bits(17), a.bits(18));
  EXPECT_NE(a.split(1).bits(0), a.split(2).bits(0));
}

TEST(CounterRng, NormalMoments) {
  const CounterRng r(7);
  const int n = 200000;
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal(i);
    s += z;
    ss += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(ss / n, 1.0, 0.015);
}

TEST(CounterRng, PoissonMoments) {
  const CounterRng r(9);
  for (double lambda : {5.0, 15.0, 800.0}) {
    const int n = 100000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = r.poisson(i, lambda);
      s += k;
      ss += k * k;
    }
    const double m = s / n;
    EXPECT_NEAR(m, lambda, 0.02 * lambda);
    EXPECT_NEAR(ss / n - m * m, lambda, 0.05 * lambda);
  }
}

TEST(RngStream, UniformIntCoversRange) {
  RngStream s(CounterRng(3));
  std::vector<int> hits(4, 0);
  for (int i = 0; i < 4000; ++i) ++hits[s.uniform_int(0, 3)];
  for (int h : hits) EXPECT_GT(h, 800);
}

// ---------------------------------------------------------------------------
// Kernels: parallel implementations against the serial references

TEST(Reflect101, MirrorsWithoutRepeatingEdge) {
  EXPECT_EQ(reflect101(-1, 5), 1);
  EXPECT_EQ(reflect101(-2, 5), 2);
  EXPECT_EQ(reflect101(5, 5), 3);
  EXPECT_EQ(reflect101(6, 5), 2);
  EXPECT_EQ(reflect101(0, 1), 0);
}

TEST(Kernels, ConvolveMatchesReferenceBitForBit) {
  const ImageBuffer img = random_image(37, 23, 3, 11);
  std::vector<double> dense(49);
  for (std::size_t i = 0; i < dense.size(); ++i) dense[i] = std::sin(0.7 * i) * 0.1;
  const SparseKernel k = SparseKernel::from_dense(3, dense);
  EXPECT_EQ(kernels::convolve(img, k), kernels::reference::convolve(img, k));
}

TEST(Kernels, ConvolveDirectOracle) {
  // Hand-rolled correlation with explicit reflect-101 indexing.
  const ImageBuffer img = random_image(9, 7, 1, 12);
  const SparseKernel k{{{-1, 0, 0.25}, {0, 0, 0.5}, {2, 1, 0.25}}};
  const ImageBuffer out = kernels::convolve(img, k);
  auto refl = [](int i, int n) {
    while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
    return i;
  };
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 9; ++x) {
      const double v = 0.25 * img.at(refl(x - 1, 9), y, 0) + 0.5 * img.at(x, y, 0) +
                       0.25 * img.at(refl(x + 2, 9), refl(y + 1, 7), 0);
      EXPECT_NEAR(out.at(x, y, 0), v, 1e-6);
    }
  }
}

TEST(Kernels, SeparableMatchesReference) {
  GridD g(31, 19);
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = std::cos(0.37 * i);
  const auto kx = gaussian_kernel_1d(1.5, 4);
  const std::vector<double> ky{0.2, 0.5, 0.3};
  EXPECT_EQ(kernels::convolve_separable(g, kx, ky).values,
            kernels::reference::convolve_separable(g, kx, ky).values);
  EXPECT_EQ(kernels::filter_valid(g, kx, ky).values,
            kernels::reference::filter_valid(g, kx, ky).values);
}

TEST(Kernels, FilterValidShape) {
  GridD g(20, 15, 1.0);
  const auto k = gaussian_kernel_1d(1.5, 5);
  const GridD out = kernels::filter_valid(g, k, k);
  EXPECT_EQ(out.width, 10);
  EXPECT_EQ(out.height, 5);
  for (double v : out.values) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Kernels, ResizeMatchesReference) {
  const ImageBuffer img = random_image(40, 30, 3, 13);
  EXPECT_EQ(kernels::resize_bicubic(img, 64, 20), kernels::reference::resize_bicubic(img, 64, 20));
}

TEST(Kernels, ResizeKeepsConstantsAndRejectsTiny) {
  const ImageBuffer img(16, 16, 3, 0.3f);
  const ImageBuffer out = resize_bicubic(img, 40, 8);
  for (float v : out.data()) EXPECT_NEAR(v, 0.3f, 1e-6);
  EXPECT_THROW(resize_bicubic(img, 3, 8), DimensionError);
}

TEST(Kernels, CubicWeightsPartitionUnity) {
  for (double t : {0.0, 0.1, 0.5, 0.9}) {
    double s = 0.0;
    for (int k = -1; k <= 2; ++k) s += cubic_weight(k - t);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(cubic_weight(0.0), 1.0);
  EXPECT_DOUBLE_EQ(cubic_weight(1.0), 0.0);
}

TEST(Kernels, DistanceTransformMatchesBruteForce) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    Grid<std::uint8_t> seeds(23, 17, 0);
    for (auto& v : seeds.values) v = gen() % 29 == 0;
    EXPECT_EQ(kernels::squared_distance_to(seeds).values,
              kernels::reference::squared_distance_to(seeds).values);
  }
  Grid<std::uint8_t> none(4, 4, 0);
  for (double v : kernels::squared_distance_to(none).values) EXPECT_TRUE(std::isinf(v));
}

}  // namespace
}  // namespace camrobust
