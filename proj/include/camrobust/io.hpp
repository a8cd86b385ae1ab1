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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "camrobust/image.hpp"

namespace camrobust {

// 8-bit quantization used everywhere bytes leave the library:
// round-half-away-from-zero of 255*v after clamping to [0,1].
std::uint8_t quantize(float v);

enum class ImageFormat { kPng, kJpeg };

struct SaveOptions {
  ImageFormat format = ImageFormat::kPng;
  int jpeg_quality = 95;
};

// Loads an 8-bit PNG or JPEG. Samples are byte/255; alpha is dropped and
// grayscale stays single-channel. Throws DecodeError.
ImageBuffer load_image(const std::filesystem::path& path);
ImageBuffer decode_image(std::span<const std::uint8_t> bytes);

// Throws IoError when the path is not writable.
void save_image(const ImageBuffer& img, const std::filesystem::path& path,
                const SaveOptions& options = {});

std::vector<std::uint8_t> encode_png(const ImageBuffer& img);
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);

enum class DepthMode { kDepth, kDisparity };

struct DepthIngestOptions {
  DepthMode mode = DepthMode::kDepth;
  // Meters per stored unit (depth mode) or disparity units per stored unit.
  double scale = 1.0;
  // Baseline times focal length; required in disparity mode.
  std::optional<double> baseline_focal;
};

// Loads a 16-bit (or 8-bit) grayscale PNG as metric depth. Zero samples are
// holes: they are filled by iterative nearest-valid dilation followed by a
// 3x3 median restricted to the filled pixels. Throws DecodeError or
// ValidationError (all samples invalid, missing baseline_focal).
DepthMap load_depth(const std::filesystem::path& path,
                    const DepthIngestOptions& options = {});

// Ingestion core shared by load_depth; raw values are the stored integers.
DepthMap depth_from_raw(int width, int height, std::span<const std::uint16_t> raw,
                        const DepthIngestOptions& options);

// Fills non-positive / non-finite entries in place (+inf is kept as sky).
void fill_depth_holes(int width, int height, std::vector<float>& depth);

// Writes raw 16-bit grayscale samples.
void save_gray16(const std::filesystem::path& path, int width, int height,
                 std::span<const std::uint16_t> raw);

// COCO-panoptic encoding: id = R + 256*G + 65536*B in an RGB PNG, with a JSON
// document carrying "segments_info" (either at top level or inside a single
// matching entry of "annotations").
PanopticMap load_panoptic(const std::filesystem::path& png_path,
                          const std::filesystem::path& json_path);
void save_panoptic(const PanopticMap& map, const std::filesystem::path& png_path,
                   const std::filesystem::path& json_path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

// Lowercase hex SHA-256 of a byte range / file.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace camrobust
