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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "camrobust/error.hpp"

namespace camrobust {

// H x W x C float image, row-major, channel-interleaved. Samples are in
// [0,1] after any degradation operator; constructors do not clip.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, float fill = 0.0f);
  ImageBuffer(int width, int height, int channels, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  float at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  std::span<float> row(int y) {
    return std::span<float>(data_).subspan(
        static_cast<std::size_t>(y) * width_ * channels_,
        static_cast<std::size_t>(width_) * channels_);
  }
  std::span<const float> row(int y) const {
    return std::span<const float>(data_).subspan(
        static_cast<std::size_t>(y) * width_ * channels_,
        static_cast<std::size_t>(width_) * channels_);
  }

  bool same_shape(const ImageBuffer& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  // Clamps every sample into [0,1]. NaN becomes 0.
  void clip();
  // True when every sample is finite.
  bool all_finite() const;

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

// Throws DimensionError unless a and b agree in width, height and channels.
void require_same_shape(const ImageBuffer& a, const ImageBuffer& b,
                        const char* what);

// Luma with the 0.2989/0.5870/0.1140 weights. Single-channel input is
// returned unchanged.
ImageBuffer to_luma(const ImageBuffer& img);

inline constexpr float kLumaR = 0.2989f;
inline constexpr float kLumaG = 0.5870f;
inline constexpr float kLumaB = 0.1140f;

// Per-pixel metric distance in meters. Every value is > 0 or +inf.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, float fill);
  DepthMap(int width, int height, std::vector<float> meters);

  int width() const { return width_; }
  int height() const { return height_; }
  float at(int x, int y) const {
    return depth_[static_cast<std::size_t>(y) * width_ + x];
  }
  float& at(int x, int y) {
    return depth_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const float> data() const { return depth_; }
  std::span<float> data() { return depth_; }

  bool matches(const ImageBuffer& img) const {
    return width_ == img.width() && height_ == img.height();
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> depth_;
};

struct SegmentInfo {
  std::uint32_t id = 0;
  int category_id = 0;
  bool is_crowd = false;

  friend bool operator==(const SegmentInfo&, const SegmentInfo&) = default;
};

// Per-pixel segment ids (0 = void) plus the metadata of every segment that
// occurs in the grid.
class PanopticMap {
 public:
  PanopticMap() = default;
  // Validates: every nonzero id in the grid is listed exactly once; listed
  // segments with no pixels are dropped.
  PanopticMap(int width, int height, std::vector<std::uint32_t> ids,
              std::vector<SegmentInfo> segments);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint32_t> ids() const { return ids_; }
  std::uint32_t id_at(int x, int y) const {
    return ids_[static_cast<std::size_t>(y) * width_ + x];
  }
  const std::vector<SegmentInfo>& segments() const { return segments_; }
  const SegmentInfo* find(std::uint32_t id) const;

  friend bool operator==(const PanopticMap&, const PanopticMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> ids_;
  std::vector<SegmentInfo> segments_;  // sorted by id
};

}  // namespace camrobust
