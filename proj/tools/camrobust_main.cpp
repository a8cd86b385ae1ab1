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

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "camrobust/error.hpp"
#include "camrobust/pipeline.hpp"

namespace {

using namespace camrobust;

constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Factor> parse_factors(const std::string& text) {
  std::vector<Factor> out;
  if (text == "all") return out;
  for (const auto& name : split_list(text)) out.push_back(parse_factor(name));
  if (out.empty()) throw CatalogError("no factors given");
  return out;
}

std::vector<int> parse_severities(const std::string& text) {
  std::vector<int> out;
  for (const auto& s : split_list(text)) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      check_severity(v);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw CatalogError("bad severity '" + s + "'");
    }
  }
  if (out.empty()) throw CatalogError("no severities given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"camrobust: camera-degradation robustness benchmark tooling"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<int> workers;
  app.add_option("--workers", workers, "Worker threads (default: CAMROBUST_WORKERS or all cores)");

  // degrade
  auto* degrade = app.add_subcommand("degrade", "Generate the degraded image corpus");
  std::string input, depth_dir, out, factors = "all", severities = "1,2,3", size = "1024x512";
  std::string depth_mode = "depth";
  double depth_scale = 1.0;
  std::optional<double> baseline_focal;
  std::uint64_t seed = 0;
  degrade->add_option("--input", input, "Directory of clean images")->required();
  degrade->add_option("--depth", depth_dir, "Directory of 16-bit depth PNGs (same stems)");
  degrade->add_option("--out", out, "Output root")->required();
  degrade->add_option("--factors", factors, "Comma-separated factor names or 'all'");
  degrade->add_option("--severities", severities, "Comma-separated severities");
  degrade->add_option("--seed", seed, "Global seed");
  degrade->add_option("--size", size, "Resize to WxH before degrading ('none' to keep)");
  degrade->add_option("--depth-mode", depth_mode, "depth or disparity")
      ->check(CLI::IsMember({"depth", "disparity"}));
  degrade->add_option("--depth-scale", depth_scale, "Meters (or disparity units) per stored unit");
  degrade->add_option("--baseline-focal", baseline_focal, "Baseline x focal length (disparity mode)");

  // iqa
  auto* iqa = app.add_subcommand("iqa", "Score a degraded tree against clean references");
  std::string ref_dir, test_root, iqa_out;
  iqa->add_option("--input,--ref", ref_dir, "Directory of clean references")->required();
  iqa->add_option("--test", test_root, "Degraded tree root")->required();
  iqa->add_option("--out", iqa_out, "Output CSV")->required();

  // pq
  auto* pqc = app.add_subcommand("pq", "Panoptic quality of predictions against ground truth");
  std::string gt_dir, pred_root, pq_out;
  bool global = false;
  pqc->add_option("--gt", gt_dir, "Ground-truth panoptic PNG+JSON directory")->required();
  pqc->add_option("--input,--pred", pred_root, "Prediction root")->required();
  pqc->add_option("--out", pq_out, "Output directory")->required();
  pqc->add_flag("--global", global, "Pool counts over categories instead of averaging");

  // correlate
  auto* corr = app.add_subcommand("correlate", "PLCC/SRCC between IQ and PQ tables");
  std::string iqa_csv, pq_csv, corr_out, mode = "factor", iq_cols, pq_cols;
  corr->add_option("--iqa", iqa_csv, "IQA CSV")->required();
  corr->add_option("--pq", pq_csv, "PQ CSV")->required();
  corr->add_option("--mode", mode, "factor or image")->check(CLI::IsMember({"factor", "image"}));
  corr->add_option("--iq-columns", iq_cols, "Comma-separated IQ columns (default: all)");
  corr->add_option("--pq-columns", pq_cols, "Comma-separated PQ columns (default: names with 'pq')");
  corr->add_option("--out", corr_out, "Output directory")->required();

  // report
  auto* report = app.add_subcommand("report", "Render a Markdown summary");
  std::string manifest, rep_iqa, rep_pq, rep_corr, rep_out;
  report->add_option("--manifest", manifest, "manifest.json from degrade")->required();
  report->add_option("--iqa", rep_iqa, "IQA CSV")->required();
  report->add_option("--pq", rep_pq, "PQ CSV");
  report->add_option("--correlate", rep_corr, "correlation.json");
  report->add_option("--out", rep_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const int nworkers = resolve_workers(workers);
    if (degrade->parsed()) {
      DegradeOptions o;
      o.input = input;
      if (!depth_dir.empty()) o.depth = depth_dir;
      o.out = out;
      o.factors = parse_factors(factors);
      o.severities = parse_severities(severities);
      o.seed = seed;
      o.size = parse_size(size);
      o.workers = nworkers;
      o.depth_options.mode = depth_mode == "disparity" ? DepthMode::kDisparity : DepthMode::kDepth;
      o.depth_options.scale = depth_scale;
      o.depth_options.baseline_focal = baseline_focal;
      const DegradeSummary s = cmd_degrade(o);
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "wrote " << s.manifest.records.size() << " images to " << out << '\n';
      if (s.partial()) {
        std::cerr << s.manifest.skipped.size() << " factor/image combinations skipped\n";
        return kExitPartial;
      }
    } else if (iqa->parsed()) {
      const IqaTable t = cmd_iqa(ref_dir, test_root, iqa_out, nworkers);
      std::cout << "scored " << t.rows.size() << " images\n";
    } else if (pqc->parsed()) {
      const PqTable t = cmd_pq(gt_dir, pred_root, pq_out, global, nworkers);
      std::size_t missing = 0;
      for (const auto& c : t.cells) missing += c.missing.size();
      std::cout << "evaluated " << t.rows.size() << " predictions";
      if (missing) std::cout << ", " << missing << " missing";
      std::cout << '\n';
    } else if (corr->parsed()) {
      CorrelationOptions co;
      co.iq_columns = split_list(iq_cols);
      co.pq_columns = split_list(pq_cols);
      cmd_correlate(iqa_csv, pq_csv, mode == "image" ? JoinMode::kImage : JoinMode::kFactor,
                    corr_out, co);
    } else if (report->parsed()) {
      ReportInputs in;
      in.manifest = manifest;
      in.iqa_csv = rep_iqa;
      if (!rep_pq.empty()) in.pq_csv = rep_pq;
      if (!rep_corr.empty()) in.correlation_json = rep_corr;
      cmd_report(in, rep_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
