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

#include "camrobust/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace camrobust {

namespace {

void check_dims(int width, int height, int channels) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw DimensionError("image must have 1 or 3 channels, got " +
                         std::to_string(channels));
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels,
                         std::vector<float> data)
    : width_(width), height_(height), channels_(channels),
      data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionError("image data length does not match width*height*channels");
  }
}

void ImageBuffer::clip() {
  for (float& v : data_) {
    // std::clamp keeps NaN; the comparison form maps it to 0.
    v = v > 0.0f ? (v < 1.0f ? v : 1.0f) : 0.0f;
  }
}

bool ImageBuffer::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float v) { return std::isfinite(v); });
}

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape mismatch (" +
                         std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + "x" +
                         std::to_string(a.channels()) + " vs " +
                         std::to_string(b.width()) + "x" +
                         std::to_string(b.height()) + "x" +
                         std::to_string(b.channels()) + ")");
  }
}

ImageBuffer to_luma(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  ImageBuffer out(img.width(), img.height(), 1);
  auto src = img.data();
  auto dst = out.data();
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = kLumaR * src[3 * i] + kLumaG * src[3 * i + 1] +
             kLumaB * src[3 * i + 2];
  }
  return out;
}

DepthMap::DepthMap(int width, int height, float fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("depth map dimensions must be positive");
  }
  depth_.assign(static_cast<std::size_t>(width) * height, fill);
}

DepthMap::DepthMap(int width, int height, std::vector<float> meters)
    : width_(width), height_(height), depth_(std::move(meters)) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("depth map dimensions must be positive");
  }
  if (depth_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("depth data length does not match width*height");
  }
}

PanopticMap::PanopticMap(int width, int height, std::vector<std::uint32_t> ids,
                         std::vector<SegmentInfo> segments)
    : width_(width), height_(height), ids_(std::move(ids)) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("panoptic map dimensions must be positive");
  }
  if (ids_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("panoptic id grid length does not match width*height");
  }
  std::unordered_map<std::uint32_t, std::size_t> pixel_count;
  for (std::uint32_t id : ids_) {
    if (id != 0) ++pixel_count[id];
  }
  std::sort(segments.begin(), segments.end(),
            [](const SegmentInfo& a, const SegmentInfo& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].id == 0) {
      throw ValidationError("segment id 0 is reserved for void");
    }
    if (i > 0 && segments[i].id == segments[i - 1].id) {
      throw ValidationError("duplicate segment id " +
                            std::to_string(segments[i].id));
    }
  }
  for (const auto& [id, count] : pixel_count) {
    const bool listed = std::binary_search(
        segments.begin(), segments.end(), SegmentInfo{id, 0, false},
        [](const SegmentInfo& a, const SegmentInfo& b) { return a.id < b.id; });
    if (!listed) {
      throw ValidationError("segment id " + std::to_string(id) +
                            " present in the id grid but missing from segments");
    }
  }
  // Listed segments that cover no pixel carry no information for matching.
  std::erase_if(segments, [&](const SegmentInfo& s) {
    return pixel_count.find(s.id) == pixel_count.end();
  });
  segments_ = std::move(segments);
}

const SegmentInfo* PanopticMap::find(std::uint32_t id) const {
  auto it = std::lower_bound(
      segments_.begin(), segments_.end(), id,
      [](const SegmentInfo& s, std::uint32_t v) { return s.id < v; });
  if (it == segments_.end() || it->id != id) return nullptr;
  return &*it;
}

}  // namespace camrobust
