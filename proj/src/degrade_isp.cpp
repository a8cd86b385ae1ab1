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

#include "camrobust/degrade.hpp"
#include "camrobust/io.hpp"

namespace camrobust {

ImageBuffer jpeg_cycle_quality(const ImageBuffer& img, int quality) {
  if (quality < 1 || quality > 100) {
    throw ValidationError("jpeg quality must lie in [1, 100]");
  }
  const auto bytes = encode_jpeg(img, quality);
  ImageBuffer out = decode_image(bytes);
  if (img.channels() == 1 && out.channels() == 3) out = to_luma(out);
  return out;
}

ImageBuffer jpeg_cycle(const ImageBuffer& img, int severity) {
  check_severity(severity);
  return jpeg_cycle_quality(img, kJpegQuality[severity - 1]);
}

SparseKernel sharpen_kernel(double lightness) {
  SparseKernel k;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      k.taps.push_back({dx, dy, dx == 0 && dy == 0 ? 8.0 + lightness : -1.0});
    }
  }
  return k;
}

ImageBuffer oversharpen(const ImageBuffer& img, double alpha, double lightness) {
  if (alpha < 0.0 || alpha > 1.0) throw ValidationError("sharpen alpha must lie in [0, 1]");
  SparseKernel k = sharpen_kernel(lightness);
  // Blend with the identity kernel.
  for (Tap& t : k.taps) {
    t.weight *= alpha;
    if (t.dx == 0 && t.dy == 0) t.weight += 1.0 - alpha;
  }
  ImageBuffer out = kernels::convolve(img, k);
  out.clip();
  return out;
}

ImageBuffer oversharpen(const ImageBuffer& img, int severity) {
  check_severity(severity);
  return oversharpen(img, kSharpenAlpha[severity - 1], 1.0);
}

ImageBuffer no_demosaic(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  ImageBuffer out(img.width(), img.height(), 3, 0.0f);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const int ch = (y % 2) + (x % 2);  // 0 R, 1 G, 2 B
      out.at(x, y, ch) = img.at(x, y, ch);
    }
  }
  return out;
}

ImageBuffer no_bayer(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  const ImageBuffer luma = to_luma(img);
  ImageBuffer out(img.width(), img.height(), 3);
  auto src = luma.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  }
  out.clip();
  return out;
}

}  // namespace camrobust
