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

// Batch commands behind the camrobust CLI. Each command is a plain function
// so tests can drive it without spawning a process.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "camrobust/correlate.hpp"
#include "camrobust/degrade.hpp"
#include "camrobust/io.hpp"
#include "camrobust/panoptic.hpp"

namespace camrobust {

inline constexpr const char* kToolVersion = "0.1.0";

struct Size2 {
  int width = 0;
  int height = 0;
};

// "WxH"; "none" or "0x0" disables resizing.
std::optional<Size2> parse_size(const std::string& text);

// --workers, then CAMROBUST_WORKERS, then the OpenMP default.
int resolve_workers(std::optional<int> requested);

// Image files (png/jpg/jpeg) in a directory, sorted by file name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

struct ManifestRecord {
  std::string image_id;
  std::string factor;
  int severity = 0;
  std::uint64_t seed = 0;
  std::string path;  // relative to the output root, '/' separated
  std::string sha256;
  ParamMap params;
  double native_level = 0.0;
  std::string native_unit;
  bool surrogate = false;
};

struct SkippedTask {
  std::string image_id;
  std::string factor;
  std::string reason;
};

struct Manifest {
  std::string tool_version = kToolVersion;
  std::uint64_t global_seed = 0;
  std::optional<Size2> size;
  std::vector<ManifestRecord> records;  // sorted by (factor, severity, image_id)
  std::vector<SkippedTask> skipped;
};

std::string manifest_json(const Manifest& m);
Manifest parse_manifest(const std::string& json);
Manifest read_manifest(const std::filesystem::path& path);

struct DegradeOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> depth;
  std::filesystem::path out;
  std::vector<Factor> factors;  // empty: all
  std::vector<int> severities{1, 2, 3};
  std::uint64_t seed = 0;
  std::optional<Size2> size = Size2{1024, 512};
  int workers = 1;
  DepthIngestOptions depth_options;
};

struct DegradeSummary {
  Manifest manifest;
  std::vector<std::string> warnings;
  bool partial() const { return !manifest.skipped.empty(); }
};

// Writes <out>/<factor>/s<sev>/<stem>.png and <out>/manifest.json.
DegradeSummary cmd_degrade(const DegradeOptions& options);

struct IqaRow {
  std::string image_id;
  std::string factor;
  int severity = 0;
  double psnr = 0.0, ssim = 0.0, cw_ssim = 0.0, fsim = 0.0;
};

struct IqaAggregate {
  std::string factor;
  int severity = 0;
  int count = 0;
  double psnr = 0.0, ssim = 0.0, cw_ssim = 0.0, fsim = 0.0;
};

struct IqaTable {
  std::vector<IqaRow> rows;  // sorted by (factor, severity, image_id)
  std::vector<IqaAggregate> aggregates;
};

// Scores every <test_root>/<factor>/s<sev>/<stem>.png against the reference
// with the same stem. A reference whose size differs from the test image is
// first resized with the bicubic preprocessing used by cmd_degrade. Writes
// out_csv and, next to it, <name>_agg.csv with per-(factor, severity) means.
// Throws ValidationError listing stems without a reference.
IqaTable cmd_iqa(const std::filesystem::path& ref_dir,
                 const std::filesystem::path& test_root,
                 const std::filesystem::path& out_csv, int workers);

std::filesystem::path aggregate_csv_path(const std::filesystem::path& out_csv);

struct PqRow {
  std::string image_id;
  std::string factor;  // "clean" with severity 0 for flat prediction files
  int severity = 0;
  PQResult result;
};

struct PqCell {
  std::string factor;
  int severity = 0;
  PQAggregate aggregate;
  std::optional<PQResult> pooled;  // with global averaging
  std::vector<std::string> missing;
};

struct PqTable {
  std::vector<PqRow> rows;
  std::vector<PqCell> cells;
};

// Ground truth: <gt_dir>/<stem>.png + <stem>.json. Predictions:
// <pred_root>/<factor>/s<sev>/<stem>.png + .json, or flat in pred_root.
// Writes <out>/pq.csv (scores x100) and <out>/pq_summary.json.
PqTable cmd_pq(const std::filesystem::path& gt_dir, const std::filesystem::path& pred_root,
               const std::filesystem::path& out, bool global, int workers);

// Writes <out>/correlation.json and <out>/correlation.md.
std::vector<CorrelationReport> cmd_correlate(const std::filesystem::path& iqa_csv,
                                             const std::filesystem::path& pq_csv,
                                             JoinMode mode,
                                             const std::filesystem::path& out,
                                             const CorrelationOptions& options = {});

std::vector<CorrelationReport> parse_report_json(const std::string& json);

struct ReportInputs {
  std::filesystem::path manifest;
  std::filesystem::path iqa_csv;
  std::optional<std::filesystem::path> pq_csv;
  std::optional<std::filesystem::path> correlation_json;
};

// Renders <out_dir>/report.md and returns its text.
std::string cmd_report(const ReportInputs& inputs, const std::filesystem::path& out_dir);

}  // namespace camrobust
