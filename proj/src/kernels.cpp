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

#include "camrobust/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace camrobust {

GridD channel_grid(const ImageBuffer& img, int channel) {
  GridD g(img.width(), img.height());
  const int c = img.channels();
  auto src = img.data();
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = src[i * c + channel];
  return g;
}

double SparseKernel::sum() const {
  double s = 0.0;
  for (const Tap& t : taps) s += t.weight;
  return s;
}

int SparseKernel::radius() const {
  int r = 0;
  for (const Tap& t : taps) r = std::max({r, std::abs(t.dx), std::abs(t.dy)});
  return r;
}

SparseKernel SparseKernel::from_dense(int radius, std::span<const double> dense) {
  const int n = 2 * radius + 1;
  SparseKernel k;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double w = dense[static_cast<std::size_t>(y) * n + x];
      if (w != 0.0) k.taps.push_back({x - radius, y - radius, w});
    }
  }
  return k;
}

int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

double cubic_weight(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

std::vector<double> gaussian_kernel_1d(double sigma, int radius) {
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[i + radius] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

ImageBuffer resize_bicubic(const ImageBuffer& img, int width, int height) {
  if (width < 4 || height < 4) {
    throw DimensionError("resize target must be at least 4x4, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  return kernels::resize_bicubic(img, width, height);
}

namespace kernels {

namespace {

struct CubicTaps {
  std::array<int, 4> index;
  std::array<double, 4> weight;
};

CubicTaps cubic_taps(int dst, double scale, int src_size) {
  const double s = (dst + 0.5) * scale - 0.5;
  const double base = std::floor(s);
  const double frac = s - base;
  CubicTaps t;
  for (int k = 0; k < 4; ++k) {
    t.index[k] = std::clamp(static_cast<int>(base) - 1 + k, 0, src_size - 1);
    t.weight[k] = cubic_weight(frac - (k - 1));
  }
  return t;
}

}  // namespace

ImageBuffer convolve(const ImageBuffer& img, const SparseKernel& kernel) {
  const int w = img.width(), h = img.height(), c = img.channels();
  const int r = kernel.radius();
  ImageBuffer out(w, h, c);
  auto src = img.data();
  auto dst = out.data();
  const auto& taps = kernel.taps;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const bool row_interior = y >= r && y < h - r;
    for (int x = 0; x < w; ++x) {
      const bool interior = row_interior && x >= r && x < w - r;
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        if (interior) {
          for (const Tap& t : taps) {
            acc += t.weight *
                   src[(static_cast<std::size_t>(y + t.dy) * w + (x + t.dx)) * c + ch];
          }
        } else {
          for (const Tap& t : taps) {
            const int sx = reflect101(x + t.dx, w);
            const int sy = reflect101(y + t.dy, h);
            acc += t.weight * src[(static_cast<std::size_t>(sy) * w + sx) * c + ch];
          }
        }
        dst[(static_cast<std::size_t>(y) * w + x) * c + ch] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

GridD convolve_separable(const GridD& in, std::span<const double> kx,
                         std::span<const double> ky) {
  const int w = in.width, h = in.height;
  const int rx = static_cast<int>(kx.size()) / 2;
  const int ry = static_cast<int>(ky.size()) / 2;
  GridD tmp(w, h), out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const double* row = in.values.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      if (x >= rx && x < w - rx) {
        for (int k = 0; k < static_cast<int>(kx.size()); ++k) {
          acc += kx[k] * row[x + k - rx];
        }
      } else {
        for (int k = 0; k < static_cast<int>(kx.size()); ++k) {
          acc += kx[k] * row[reflect101(x + k - rx, w)];
        }
      }
      tmp(x, y) = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const bool interior = y >= ry && y < h - ry;
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < static_cast<int>(ky.size()); ++k) {
        const int sy = interior ? y + k - ry : reflect101(y + k - ry, h);
        acc += ky[k] * tmp(x, sy);
      }
      out(x, y) = acc;
    }
  }
  return out;
}

GridD filter_valid(const GridD& in, std::span<const double> kx,
                   std::span<const double> ky) {
  const int nx = static_cast<int>(kx.size()), ny = static_cast<int>(ky.size());
  const int ow = in.width - nx + 1, oh = in.height - ny + 1;
  if (ow <= 0 || oh <= 0) throw DimensionError("filter larger than input");
  GridD tmp(ow, in.height), out(ow, oh);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < in.height; ++y) {
    const double* row = in.values.data() + static_cast<std::size_t>(y) * in.width;
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < nx; ++k) acc += kx[k] * row[x + k];
      tmp(x, y) = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < ny; ++k) acc += ky[k] * tmp(x, y + k);
      out(x, y) = acc;
    }
  }
  return out;
}

ImageBuffer resize_bicubic(const ImageBuffer& img, int width, int height) {
  const int c = img.channels();
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  std::vector<CubicTaps> col_taps(width);
  for (int x = 0; x < width; ++x) col_taps[x] = cubic_taps(x, sx, img.width());
  ImageBuffer out(width, height, c);
  auto src = img.data();
  auto dst = out.data();
  const std::size_t stride = static_cast<std::size_t>(img.width()) * c;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const CubicTaps ty = cubic_taps(y, sy, img.height());
    for (int x = 0; x < width; ++x) {
      const CubicTaps& tx = col_taps[x];
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j) {
          const float* row = src.data() + ty.index[j] * stride;
          double racc = 0.0;
          for (int i = 0; i < 4; ++i) {
            racc += tx.weight[i] * row[static_cast<std::size_t>(tx.index[i]) * c + ch];
          }
          acc += ty.weight[j] * racc;
        }
        const float v = static_cast<float>(acc);
        dst[(static_cast<std::size_t>(y) * width + x) * c + ch] =
            v > 0.0f ? (v < 1.0f ? v : 1.0f) : 0.0f;
      }
    }
  }
  return out;
}

namespace {

// Lower envelope of parabolas for one line (Felzenszwalb & Huttenlocher).
void distance_1d(const double* f, int n, double* d, std::vector<int>& v,
                 std::vector<double>& z) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    while (k >= 0) {
      const int p = v[k];
      const double s = ((f[q] + q * static_cast<double>(q)) -
                        (f[p] + p * static_cast<double>(p))) /
                       (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf
                  : ((f[q] + q * static_cast<double>(q)) -
                     (f[v[k - 1]] + v[k - 1] * static_cast<double>(v[k - 1]))) /
                        (2.0 * (q - v[k - 1]));
    z[k + 1] = kInf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) d[q] = kInf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

GridD squared_distance_to(const Grid<std::uint8_t>& seeds) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int w = seeds.width, h = seeds.height;
  GridD cols(w, h), out(w, h);
#pragma omp parallel
  {
    std::vector<double> f(h), d(h);
    std::vector<int> v(std::max(w, h));
    std::vector<double> z(std::max(w, h) + 1);
#pragma omp for schedule(static)
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) f[y] = seeds(x, y) ? 0.0 : kInf;
      distance_1d(f.data(), h, d.data(), v, z);
      for (int y = 0; y < h; ++y) cols(x, y) = d[y];
    }
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      distance_1d(&cols.values[static_cast<std::size_t>(y) * w], w,
                  &out.values[static_cast<std::size_t>(y) * w], v, z);
    }
  }
  return out;
}

namespace reference {

GridD squared_distance_to(const Grid<std::uint8_t>& seeds) {
  std::vector<std::pair<int, int>> points;
  for (int y = 0; y < seeds.height; ++y) {
    for (int x = 0; x < seeds.width; ++x) {
      if (seeds(x, y)) points.emplace_back(x, y);
    }
  }
  GridD out(seeds.width, seeds.height, std::numeric_limits<double>::infinity());
  for (int y = 0; y < seeds.height; ++y) {
    for (int x = 0; x < seeds.width; ++x) {
      for (const auto& [px, py] : points) {
        const double dx = x - px, dy = y - py;
        out(x, y) = std::min(out(x, y), dx * dx + dy * dy);
      }
    }
  }
  return out;
}

ImageBuffer convolve(const ImageBuffer& img, const SparseKernel& kernel) {
  ImageBuffer out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int ch = 0; ch < img.channels(); ++ch) {
        double acc = 0.0;
        for (const Tap& t : kernel.taps) {
          acc += t.weight * img.at(reflect101(x + t.dx, img.width()),
                                   reflect101(y + t.dy, img.height()), ch);
        }
        out.at(x, y, ch) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

GridD convolve_separable(const GridD& in, std::span<const double> kx,
                         std::span<const double> ky) {
  const int rx = static_cast<int>(kx.size()) / 2;
  const int ry = static_cast<int>(ky.size()) / 2;
  GridD tmp(in.width, in.height), out(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < kx.size(); ++k) {
        acc += kx[k] * in(reflect101(x + static_cast<int>(k) - rx, in.width), y);
      }
      tmp(x, y) = acc;
    }
  }
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < ky.size(); ++k) {
        acc += ky[k] * tmp(x, reflect101(y + static_cast<int>(k) - ry, in.height));
      }
      out(x, y) = acc;
    }
  }
  return out;
}

GridD filter_valid(const GridD& in, std::span<const double> kx,
                   std::span<const double> ky) {
  const int ow = in.width - static_cast<int>(kx.size()) + 1;
  const int oh = in.height - static_cast<int>(ky.size()) + 1;
  if (ow <= 0 || oh <= 0) throw DimensionError("filter larger than input");
  GridD tmp(ow, in.height), out(ow, oh);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < kx.size(); ++k) acc += kx[k] * in(x + static_cast<int>(k), y);
      tmp(x, y) = acc;
    }
  }
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < ky.size(); ++k) acc += ky[k] * tmp(x, y + static_cast<int>(k));
      out(x, y) = acc;
    }
  }
  return out;
}

ImageBuffer resize_bicubic(const ImageBuffer& img, int width, int height) {
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  ImageBuffer out(width, height, img.channels());
  for (int y = 0; y < height; ++y) {
    const CubicTaps ty = cubic_taps(y, sy, img.height());
    for (int x = 0; x < width; ++x) {
      const CubicTaps tx = cubic_taps(x, sx, img.width());
      for (int ch = 0; ch < img.channels(); ++ch) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j) {
          double racc = 0.0;
          for (int i = 0; i < 4; ++i) {
            racc += tx.weight[i] * img.at(tx.index[i], ty.index[j], ch);
          }
          acc += ty.weight[j] * racc;
        }
        out.at(x, y, ch) = std::clamp(static_cast<float>(acc), 0.0f, 1.0f);
      }
    }
  }
  return out;
}

}  // namespace reference
}  // namespace kernels
}  // namespace camrobust
