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

// Data-parallel image kernels shared by the degradation operators and the
// quality metrics. Every kernel has an OpenMP implementation (namespace
// kernels) and a plain serial implementation (namespace kernels::reference)
// kept for testing and benchmarking. Both accumulate each output sample
// over the same taps in the same order, so their results are bit-identical
// and independent of the thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "camrobust/image.hpp"

namespace camrobust {

// Dense 2-D scalar field used by metric code.
template <class T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> values;

  Grid() = default;
  Grid(int w, int h, T fill = T{})
      : width(w), height(h),
        values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  T& operator()(int x, int y) {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  const T& operator()(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t size() const { return values.size(); }
};

using GridD = Grid<double>;

// Single channel of an image as doubles.
GridD channel_grid(const ImageBuffer& img, int channel);

struct Tap {
  int dx = 0;
  int dy = 0;
  double weight = 0.0;
};

// Convolution kernel stored as its nonzero taps (row-major tap order).
struct SparseKernel {
  std::vector<Tap> taps;

  double sum() const;
  int radius() const;
  // Dense (2r+1)^2 matrix, row-major, zeros dropped.
  static SparseKernel from_dense(int radius, std::span<const double> dense);
};

// Maps an out-of-range index into [0, n) by mirror reflection without
// repeating the edge sample (…2 1 | 0 1 2 … n-1 | n-2 …).
int reflect101(int i, int n);

namespace kernels {

// Correlation with the kernel taps, reflect-101 borders, per channel.
// Output is not clipped.
ImageBuffer convolve(const ImageBuffer& img, const SparseKernel& kernel);

// Separable correlation, reflect-101 borders.
GridD convolve_separable(const GridD& in, std::span<const double> kx,
                         std::span<const double> ky);

// Separable correlation evaluated only where the kernel fits ("valid").
GridD filter_valid(const GridD& in, std::span<const double> kx,
                   std::span<const double> ky);

// Keys cubic convolution (a = -0.5), pixel-center aligned, edge-clamped
// source indices; output clipped to [0,1].
ImageBuffer resize_bicubic(const ImageBuffer& img, int width, int height);

// Exact squared Euclidean distance from every cell to the nearest nonzero
// cell of `seeds` (+inf when there is none). Separable lower-envelope
// algorithm, linear in the cell count.
GridD squared_distance_to(const Grid<std::uint8_t>& seeds);

namespace reference {

ImageBuffer convolve(const ImageBuffer& img, const SparseKernel& kernel);
GridD convolve_separable(const GridD& in, std::span<const double> kx,
                         std::span<const double> ky);
GridD filter_valid(const GridD& in, std::span<const double> kx,
                   std::span<const double> ky);
ImageBuffer resize_bicubic(const ImageBuffer& img, int width, int height);
// Brute force over all seed cells.
GridD squared_distance_to(const Grid<std::uint8_t>& seeds);

}  // namespace reference
}  // namespace kernels

// Keys cubic weight for a = -0.5.
double cubic_weight(double x);

// Normalized 1-D Gaussian with the given half-width.
std::vector<double> gaussian_kernel_1d(double sigma, int radius);

// Throws unless 4 <= width, height.
ImageBuffer resize_bicubic(const ImageBuffer& img, int width, int height);

}  // namespace camrobust
