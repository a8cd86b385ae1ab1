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

#include "camrobust/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <jpeglib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>
#include <png.h>

namespace camrobust {

namespace fs = std::filesystem;

std::uint8_t quantize(float v) {
  const double c = v > 0.0f ? (v < 1.0f ? static_cast<double>(v) : 1.0) : 0.0;
  // Non-negative argument: floor(x + 0.5) is round-half-away-from-zero.
  return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(size);
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()),
                           static_cast<std::streamsize>(size))) {
    throw DecodeError("cannot read " + path.string());
  }
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

// ---------------------------------------------------------------------------
// PNG

namespace {

struct PngRaw {
  int width = 0;
  int height = 0;
  int channels = 0;  // after stripping alpha: 1 or 3
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;  // interleaved
};

struct MemReader {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void png_read_mem(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<MemReader*>(png_get_io_ptr(png));
  if (reader->offset + count > reader->bytes.size()) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(out, reader->bytes.data() + reader->offset, count);
  reader->offset += count;
}

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* buf = static_cast<std::string*>(png_get_error_ptr(png));
  if (buf) *buf = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

bool is_png(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

bool is_jpeg(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 &&
         bytes[2] == 0xFF;
}

PngRaw decode_png_raw(std::span<const std::uint8_t> bytes) {
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message,
                                           png_error_fn, png_warning_fn);
  if (!png) throw DecodeError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DecodeError("png_create_info_struct failed");
  }
  MemReader reader{bytes, 0};
  PngRaw raw;
  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError("PNG decode error: " + message);
  }
  png_set_read_fn(png, &reader, png_read_mem);
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (bit_depth == 16) png_set_swap(png);  // native little-endian uint16
  png_read_update_info(png, info);
  const int channels = png_get_channels(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  pixels.resize(rowbytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  raw.width = static_cast<int>(width);
  raw.height = static_cast<int>(height);
  raw.channels = channels;
  raw.bit_depth = out_depth;
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  raw.samples.resize(n);
  if (out_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint16_t v;
      std::memcpy(&v, pixels.data() + 2 * i, 2);
      raw.samples[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) raw.samples[i] = pixels[i];
  }
  return raw;
}

struct MemWriter {
  std::vector<std::uint8_t> bytes;
};

void png_write_mem(png_structp png, png_bytep data, png_size_t count) {
  auto* writer = static_cast<MemWriter*>(png_get_io_ptr(png));
  writer->bytes.insert(writer->bytes.end(), data, data + count);
}

void png_flush_mem(png_structp) {}

std::vector<std::uint8_t> encode_png_raw(int width, int height, int channels,
                                         int bit_depth,
                                         std::span<const std::uint8_t> packed) {
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message,
                                            png_error_fn, png_warning_fn);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  MemWriter writer;
  std::vector<png_bytep> rows(height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode error: " + message);
  }
  png_set_write_fn(png, &writer, png_write_mem, png_flush_mem);
  // Fixed settings so identical buffers always produce identical bytes.
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
  png_set_IHDR(png, info, width, height, bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_BASE,
               PNG_FILTER_TYPE_BASE);
  png_write_info(png, info);
  const std::size_t rowbytes =
      static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(packed.data() + y * rowbytes);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return std::move(writer.bytes);
}

// ---------------------------------------------------------------------------
// JPEG

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit_fn(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

ImageBuffer decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo{};
  JpegErrorManager jerr{};
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_exit_fn;
  std::vector<std::uint8_t> pixels;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw DecodeError(std::string("JPEG decode error: ") + jerr.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.num_components != 1) cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const int width = static_cast<int>(cinfo.output_width);
  const int height = static_cast<int>(cinfo.output_height);
  const int channels = cinfo.output_components;
  pixels.resize(static_cast<std::size_t>(width) * height * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() +
                   static_cast<std::size_t>(cinfo.output_scanline) * width * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::vector<float> data(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) data[i] = pixels[i] / 255.0f;
  return ImageBuffer(width, height, channels, std::move(data));
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality) {
  if (quality < 1 || quality > 100) {
    throw CatalogError("JPEG quality must be in [1,100]");
  }
  std::vector<std::uint8_t> packed(img.size());
  auto src = img.data();
  for (std::size_t i = 0; i < packed.size(); ++i) packed[i] = quantize(src[i]);

  jpeg_compress_struct cinfo{};
  JpegErrorManager jerr{};
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_exit_fn;
  unsigned char* out = nullptr;
  unsigned long out_size = 0;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(out);
    throw IoError(std::string("JPEG encode error: ") + jerr.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &out, &out_size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = img.channels();
  cinfo.in_color_space = img.channels() == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = packed.data() + cinfo.next_scanline * stride;
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::vector<std::uint8_t> bytes(out, out + out_size);
  std::free(out);
  return bytes;
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  std::vector<std::uint8_t> packed(img.size());
  auto src = img.data();
  for (std::size_t i = 0; i < packed.size(); ++i) packed[i] = quantize(src[i]);
  return encode_png_raw(img.width(), img.height(), img.channels(), 8, packed);
}

ImageBuffer decode_image(std::span<const std::uint8_t> bytes) {
  if (is_jpeg(bytes)) return decode_jpeg(bytes);
  if (!is_png(bytes)) throw DecodeError("not a PNG or JPEG stream");
  PngRaw raw = decode_png_raw(bytes);
  if (raw.bit_depth != 8) {
    throw DecodeError("unsupported PNG bit depth " + std::to_string(raw.bit_depth) +
                      " for an image (expected 8)");
  }
  std::vector<float> data(raw.samples.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = raw.samples[i] / 255.0f;
  return ImageBuffer(raw.width, raw.height, raw.channels, std::move(data));
}

ImageBuffer load_image(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
}

void save_image(const ImageBuffer& img, const fs::path& path,
                const SaveOptions& options) {
  if (img.empty()) throw IoError("refusing to save an empty image");
  const auto bytes = options.format == ImageFormat::kPng
                         ? encode_png(img)
                         : encode_jpeg(img, options.jpeg_quality);
  write_file(path, bytes);
}

void save_gray16(const fs::path& path, int width, int height,
                 std::span<const std::uint16_t> raw) {
  if (raw.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("gray16 sample count mismatch");
  }
  std::vector<std::uint8_t> packed(raw.size() * 2);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    packed[2 * i] = static_cast<std::uint8_t>(raw[i] >> 8);  // PNG is big-endian
    packed[2 * i + 1] = static_cast<std::uint8_t>(raw[i] & 0xFF);
  }
  write_file(path, encode_png_raw(width, height, 1, 16, packed));
}

// ---------------------------------------------------------------------------
// Depth

void fill_depth_holes(int width, int height, std::vector<float>& depth) {
  const auto is_hole = [](float v) { return !(v > 0.0f); };  // 0, <0, NaN
  std::vector<std::uint8_t> hole(depth.size());
  std::size_t holes = 0;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    hole[i] = is_hole(depth[i]) ? 1 : 0;
    holes += hole[i];
  }
  if (holes == 0) return;
  if (holes == depth.size()) {
    throw ValidationError("depth map has no valid samples; cannot fill holes");
  }
  const std::vector<std::uint8_t> was_hole = hole;

  // Each pass fills the holes bordering valid pixels with the mean of their
  // valid 8-neighbours, reading only values valid before the pass.
  std::vector<float> next = depth;
  std::vector<std::uint8_t> next_hole = hole;
  while (holes > 0) {
    std::size_t filled = 0;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * width + x;
        if (!hole[i]) continue;
        double sum = 0.0;
        int finite = 0;
        int infinite = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= width ||
                ny >= height) {
              continue;
            }
            const std::size_t j = static_cast<std::size_t>(ny) * width + nx;
            if (hole[j]) continue;
            if (std::isinf(depth[j])) {
              ++infinite;
            } else {
              sum += depth[j];
              ++finite;
            }
          }
        }
        if (finite + infinite == 0) continue;
        next[i] = finite == 0 ? std::numeric_limits<float>::infinity()
                              : static_cast<float>(sum / finite);
        next_hole[i] = 0;
        ++filled;
      }
    }
    depth = next;
    hole = next_hole;
    holes -= filled;
  }

  // 3x3 median over the filled pixels only; measured samples stay untouched.
  std::vector<float> smoothed = depth;
  std::array<float, 9> window{};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      if (!was_hole[i]) continue;
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = std::clamp(x + dx, 0, width - 1);
          const int ny = std::clamp(y + dy, 0, height - 1);
          window[n++] = depth[static_cast<std::size_t>(ny) * width + nx];
        }
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      smoothed[i] = window[4];
    }
  }
  depth = std::move(smoothed);
}

DepthMap depth_from_raw(int width, int height, std::span<const std::uint16_t> raw,
                        const DepthIngestOptions& options) {
  if (raw.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("depth sample count mismatch");
  }
  if (!(options.scale > 0.0)) throw ValidationError("depth scale must be positive");
  if (options.mode == DepthMode::kDisparity &&
      !(options.baseline_focal && *options.baseline_focal > 0.0)) {
    throw ValidationError("disparity mode requires a positive baseline_focal");
  }
  std::vector<float> depth(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == 0) {
      depth[i] = 0.0f;
      continue;
    }
    const double scaled = raw[i] * options.scale;
    depth[i] = options.mode == DepthMode::kDepth
                   ? static_cast<float>(scaled)
                   : static_cast<float>(*options.baseline_focal / scaled);
  }
  fill_depth_holes(width, height, depth);
  return DepthMap(width, height, std::move(depth));
}

DepthMap load_depth(const fs::path& path, const DepthIngestOptions& options) {
  const auto bytes = read_file(path);
  if (!is_png(bytes)) throw DecodeError(path.string() + ": depth must be a PNG");
  PngRaw raw = decode_png_raw(bytes);
  if (raw.channels != 1) {
    throw DecodeError(path.string() + ": depth PNG must be single-channel");
  }
  return depth_from_raw(raw.width, raw.height, raw.samples, options);
}

// ---------------------------------------------------------------------------
// Panoptic

namespace {

std::vector<SegmentInfo> parse_segments(const nlohmann::json& doc,
                                        const fs::path& png_path) {
  const nlohmann::json* info = nullptr;
  if (doc.contains("segments_info")) {
    info = &doc.at("segments_info");
  } else if (doc.contains("annotations")) {
    const auto& anns = doc.at("annotations");
    const std::string name = png_path.filename().string();
    for (const auto& ann : anns) {
      if (anns.size() == 1 || ann.value("file_name", "") == name) {
        info = &ann.at("segments_info");
        break;
      }
    }
  }
  if (!info || !info->is_array()) {
    throw DecodeError("panoptic JSON has no segments_info for " + png_path.string());
  }
  std::vector<SegmentInfo> segments;
  std::unordered_set<std::uint32_t> seen;
  for (const auto& s : *info) {
    SegmentInfo seg;
    seg.id = s.at("id").get<std::uint32_t>();
    seg.category_id = s.at("category_id").get<int>();
    seg.is_crowd = s.value("iscrowd", 0) != 0;
    if (!seen.insert(seg.id).second) {
      throw ValidationError("duplicate segment id " + std::to_string(seg.id) +
                            " in " + png_path.string());
    }
    segments.push_back(seg);
  }
  return segments;
}

}  // namespace

PanopticMap load_panoptic(const fs::path& png_path, const fs::path& json_path) {
  const auto bytes = read_file(png_path);
  if (!is_png(bytes)) throw DecodeError(png_path.string() + ": not a PNG");
  PngRaw raw = decode_png_raw(bytes);
  if (raw.bit_depth != 8 || raw.channels != 3) {
    throw DecodeError(png_path.string() + ": panoptic PNG must be 8-bit RGB");
  }
  std::vector<std::uint32_t> ids(static_cast<std::size_t>(raw.width) * raw.height);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ids[i] = raw.samples[3 * i] + 256u * raw.samples[3 * i + 1] +
             65536u * raw.samples[3 * i + 2];
  }
  nlohmann::json doc;
  try {
    const auto text = read_file(json_path);
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(json_path.string() + ": " + e.what());
  }
  try {
    return PanopticMap(raw.width, raw.height, std::move(ids),
                       parse_segments(doc, png_path));
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(json_path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(png_path.string() + ": " + e.what());
  }
}

void save_panoptic(const PanopticMap& map, const fs::path& png_path,
                   const fs::path& json_path) {
  std::vector<std::uint8_t> packed(static_cast<std::size_t>(map.width()) *
                                   map.height() * 3);
  auto ids = map.ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= (1u << 24)) throw IoError("segment id exceeds 24-bit range");
    packed[3 * i] = static_cast<std::uint8_t>(ids[i] & 0xFF);
    packed[3 * i + 1] = static_cast<std::uint8_t>((ids[i] >> 8) & 0xFF);
    packed[3 * i + 2] = static_cast<std::uint8_t>((ids[i] >> 16) & 0xFF);
  }
  write_file(png_path, encode_png_raw(map.width(), map.height(), 3, 8, packed));
  nlohmann::json doc;
  doc["file_name"] = png_path.filename().string();
  doc["segments_info"] = nlohmann::json::array();
  for (const auto& s : map.segments()) {
    doc["segments_info"].push_back(
        {{"id", s.id}, {"category_id", s.category_id}, {"iscrowd", s.is_crowd ? 1 : 0}});
  }
  const std::string text = doc.dump(2) + "\n";
  write_file(json_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                  text.size()));
}

}  // namespace camrobust
