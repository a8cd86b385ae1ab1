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

#include "camrobust/pipeline.hpp"

#include <nlohmann/json.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "camrobust/error.hpp"
#include "camrobust/iqa.hpp"
#include "camrobust/kernels.hpp"
#include "camrobust/seed.hpp"

namespace camrobust {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::string severity_dir(int s) { return "s" + std::to_string(s); }

// Parses "s<k>" directory names.
std::optional<int> parse_severity_dir(const std::string& name) {
  if (name.size() < 2 || name[0] != 's') return std::nullopt;
  int v = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    v = v * 10 + (name[i] - '0');
  }
  return v;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

DepthMap resize_nearest(const DepthMap& d, int width, int height) {
  if (d.width() == width && d.height() == height) return d;
  std::vector<float> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(d.height() - 1,
                            static_cast<int>((y + 0.5) * d.height() / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(d.width() - 1, static_cast<int>((x + 0.5) * d.width() / width));
      out[static_cast<std::size_t>(y) * width + x] = d.at(sx, sy);
    }
  }
  return DepthMap(width, height, std::move(out));
}

std::optional<fs::path> find_with_stem(const fs::path& dir, const std::string& stem,
                                       std::initializer_list<const char*> exts) {
  for (const char* e : exts) {
    const fs::path p = dir / (stem + e);
    if (fs::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// Shortest text that round-trips the double.
std::string exact(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct FactorSeverity {
  std::string factor;
  int severity;
  bool operator<(const FactorSeverity& o) const {
    return std::tie(factor, severity) < std::tie(o.factor, o.severity);
  }
};

// (factor, severity) directories below a root, in sorted order.
std::vector<std::pair<FactorSeverity, fs::path>> severity_dirs(const fs::path& root) {
  std::vector<std::pair<FactorSeverity, fs::path>> out;
  if (!fs::is_directory(root)) throw IoError("not a directory: " + root.string());
  for (const auto& f : fs::directory_iterator(root)) {
    if (!f.is_directory()) continue;
    for (const auto& s : fs::directory_iterator(f.path())) {
      if (!s.is_directory()) continue;
      const auto sev = parse_severity_dir(s.path().filename().string());
      if (!sev) continue;
      out.push_back({{f.path().filename().string(), *sev}, s.path()});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace

std::optional<Size2> parse_size(const std::string& text) {
  if (text == "none") return std::nullopt;
  const auto x = text.find('x');
  if (x == std::string::npos) throw ValidationError("size must look like WxH: " + text);
  try {
    std::size_t a = 0, b = 0;
    const int w = std::stoi(text.substr(0, x), &a);
    const int h = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1 || w < 0 || h < 0) throw std::invalid_argument("");
    if (w == 0 && h == 0) return std::nullopt;
    if (w < 4 || h < 4) throw ValidationError("size must be at least 4x4: " + text);
    return Size2{w, h};
  } catch (const std::logic_error&) {
    throw ValidationError("size must look like WxH: " + text);
  }
}

int resolve_workers(std::optional<int> requested) {
  if (requested) {
    if (*requested < 1) throw ValidationError("workers must be >= 1");
    return *requested;
  }
  if (const char* env = std::getenv("CAMROBUST_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::logic_error&) {
    }
    throw ValidationError(std::string("CAMROBUST_WORKERS must be a positive integer, got '") +
                          env + "'");
  }
  return std::max(1, omp_get_max_threads());
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// ---------------------------------------------------------------------------
// Manifest

std::string manifest_json(const Manifest& m) {
  ojson doc;
  doc["tool"] = "camrobust";
  doc["version"] = m.tool_version;
  doc["global_seed"] = m.global_seed;
  if (m.size) {
    doc["size"] = {m.size->width, m.size->height};
  } else {
    doc["size"] = nullptr;
  }
  ojson records = ojson::array();
  for (const auto& r : m.records) {
    ojson o;
    o["image_id"] = r.image_id;
    o["factor"] = r.factor;
    o["severity"] = r.severity;
    o["seed"] = r.seed;
    o["path"] = r.path;
    o["sha256"] = r.sha256;
    ojson params = ojson::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    o["params"] = params;
    o["native_level"] = r.native_level;
    o["native_unit"] = r.native_unit;
    o["surrogate"] = r.surrogate;
    records.push_back(o);
  }
  doc["records"] = records;
  ojson skipped = ojson::array();
  for (const auto& s : m.skipped) {
    skipped.push_back({{"image_id", s.image_id}, {"factor", s.factor}, {"reason", s.reason}});
  }
  doc["skipped"] = skipped;
  return doc.dump(2) + "\n";
}

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  try {
    const auto doc = nlohmann::json::parse(text);
    m.tool_version = doc.at("version").get<std::string>();
    m.global_seed = doc.at("global_seed").get<std::uint64_t>();
    if (!doc.at("size").is_null()) {
      m.size = Size2{doc["size"].at(0).get<int>(), doc["size"].at(1).get<int>()};
    }
    for (const auto& o : doc.at("records")) {
      ManifestRecord r;
      r.image_id = o.at("image_id").get<std::string>();
      r.factor = o.at("factor").get<std::string>();
      r.severity = o.at("severity").get<int>();
      r.seed = o.at("seed").get<std::uint64_t>();
      r.path = o.at("path").get<std::string>();
      r.sha256 = o.at("sha256").get<std::string>();
      for (const auto& [k, v] : o.at("params").items()) r.params[k] = v.get<double>();
      r.native_level = o.at("native_level").get<double>();
      r.native_unit = o.at("native_unit").get<std::string>();
      r.surrogate = o.at("surrogate").get<bool>();
      m.records.push_back(std::move(r));
    }
    for (const auto& o : doc.at("skipped")) {
      m.skipped.push_back({o.at("image_id").get<std::string>(),
                           o.at("factor").get<std::string>(),
                           o.at("reason").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

Manifest read_manifest(const fs::path& path) { return parse_manifest(read_text(path)); }

// ---------------------------------------------------------------------------
// degrade

DegradeSummary cmd_degrade(const DegradeOptions& options) {
  const auto images = list_images(options.input);
  if (images.empty()) throw ValidationError("no images in " + options.input.string());
  std::vector<Factor> factors = options.factors;
  if (factors.empty()) {
    for (const auto& info : factor_catalog()) factors.push_back(info.factor);
  }
  for (int s : options.severities) check_severity(s);
  std::vector<int> severities = options.severities;
  std::sort(severities.begin(), severities.end());
  severities.erase(std::unique(severities.begin(), severities.end()), severities.end());

  DegradeSummary summary;
  summary.manifest.global_seed = options.seed;
  summary.manifest.size = options.size;
  fs::create_directories(options.out);

  for (const fs::path& image_path : images) {
    const std::string stem = image_path.stem().string();
    ImageBuffer img = load_image(image_path);
    if (options.size) img = resize_bicubic(img, options.size->width, options.size->height);

    std::optional<DepthMap> depth;
    std::string depth_problem;
    if (options.depth) {
      const auto dp = find_with_stem(*options.depth, stem, {".png"});
      if (dp) {
        depth = resize_nearest(load_depth(*dp, options.depth_options), img.width(),
                               img.height());
      } else {
        depth_problem = "no depth map for stem";
      }
    } else {
      depth_problem = "no depth directory given";
    }

    struct Task {
      Factor factor;
      int severity;
    };
    std::vector<Task> tasks;
    for (Factor f : factors) {
      const FactorInfo& info = factor_info(f);
      if (info.needs_depth && !depth) {
        summary.manifest.skipped.push_back({stem, std::string(info.name), depth_problem});
        summary.warnings.push_back("skipping " + std::string(info.name) + " for " + stem +
                                   ": " + depth_problem);
        continue;
      }
      for (int s : severities) tasks.push_back({f, s});
    }

    std::vector<ManifestRecord> records(tasks.size());
    std::vector<std::string> errors(tasks.size());
    const int n = static_cast<int>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(options.workers)
    for (int t = 0; t < n; ++t) {
      try {
        const FactorInfo& info = factor_info(tasks[t].factor);
        const DegradationSpec spec =
            task_spec(options.seed, stem, tasks[t].factor, tasks[t].severity);
        const ImageBuffer out = apply_degradation(img, depth ? &*depth : nullptr, spec);
        const std::string rel = std::string(info.name) + "/" + severity_dir(spec.severity) +
                                "/" + stem + ".png";
        const auto bytes = encode_png(out);
        const fs::path dst = options.out / rel;
        fs::create_directories(dst.parent_path());
        write_file(dst, bytes);
        ManifestRecord& r = records[t];
        r.image_id = stem;
        r.factor = std::string(info.name);
        r.severity = spec.severity;
        r.seed = spec.seed;
        r.path = rel;
        r.sha256 = sha256_hex(bytes);
        r.params = resolve_parameters(spec);
        r.native_level = info.native_levels[spec.severity - 1];
        r.native_unit = std::string(info.native_unit);
        r.surrogate = info.surrogate;
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
    for (const auto& e : errors) {
      if (!e.empty()) throw Error(stem + ": " + e);
    }
    for (auto& r : records) summary.manifest.records.push_back(std::move(r));
  }

  std::sort(summary.manifest.records.begin(), summary.manifest.records.end(),
            [](const ManifestRecord& a, const ManifestRecord& b) {
              return std::tie(a.factor, a.severity, a.image_id) <
                     std::tie(b.factor, b.severity, b.image_id);
            });
  write_text(options.out / "manifest.json", manifest_json(summary.manifest));
  return summary;
}

// ---------------------------------------------------------------------------
// iqa

fs::path aggregate_csv_path(const fs::path& out_csv) {
  return out_csv.parent_path() / (out_csv.stem().string() + "_agg.csv");
}

IqaTable cmd_iqa(const fs::path& ref_dir, const fs::path& test_root, const fs::path& out_csv,
                 int workers) {
  struct Job {
    std::string factor;
    int severity;
    std::string stem;
    fs::path test;
    fs::path ref;
  };
  std::vector<Job> jobs;
  std::vector<std::string> unmatched;
  for (const auto& [key, dir] : severity_dirs(test_root)) {
    for (const fs::path& p : list_images(dir)) {
      const std::string stem = p.stem().string();
      const auto ref = find_with_stem(ref_dir, stem, {".png", ".jpg", ".jpeg", ".PNG", ".JPG"});
      if (!ref) {
        unmatched.push_back(key.factor + "/" + severity_dir(key.severity) + "/" + stem);
        continue;
      }
      jobs.push_back({key.factor, key.severity, stem, p, *ref});
    }
  }
  if (!unmatched.empty()) {
    std::string msg = "no reference image for:";
    for (const auto& u : unmatched) msg += " " + u;
    throw ValidationError(msg);
  }
  if (jobs.empty()) throw ValidationError("no test images under " + test_root.string());

  IqaTable table;
  table.rows.resize(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const int n = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < n; ++i) {
    try {
      const ImageBuffer test = load_image(jobs[i].test);
      ImageBuffer ref = load_image(jobs[i].ref);
      if (ref.width() != test.width() || ref.height() != test.height()) {
        ref = resize_bicubic(ref, test.width(), test.height());
      }
      if (ref.channels() != test.channels()) {
        ref = to_luma(ref);
        const ImageBuffer t = to_luma(test);
        const IQReport r = iq_suite(ref, t);
        table.rows[i] = {jobs[i].stem, jobs[i].factor, jobs[i].severity, r.psnr, r.ssim,
                         r.cw_ssim, r.fsim};
        continue;
      }
      const IQReport r = iq_suite(ref, test);
      table.rows[i] = {jobs[i].stem, jobs[i].factor, jobs[i].severity, r.psnr, r.ssim,
                       r.cw_ssim, r.fsim};
    } catch (const std::exception& e) {
      errors[i] = jobs[i].test.string() + ": " + e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw Error(e);
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const IqaRow& a, const IqaRow& b) {
    return std::tie(a.factor, a.severity, a.image_id) <
           std::tie(b.factor, b.severity, b.image_id);
  });

  std::ostringstream csv;
  csv << "image_id,factor,severity,psnr,ssim,cw_ssim,fsim\n";
  for (const auto& r : table.rows) {
    csv << r.image_id << ',' << r.factor << ',' << r.severity << ',' << exact(r.psnr) << ','
        << exact(r.ssim) << ',' << exact(r.cw_ssim) << ',' << exact(r.fsim) << '\n';
    if (table.aggregates.empty() || table.aggregates.back().factor != r.factor ||
        table.aggregates.back().severity != r.severity) {
      table.aggregates.push_back({r.factor, r.severity, 0, 0.0, 0.0, 0.0, 0.0});
    }
    IqaAggregate& a = table.aggregates.back();
    ++a.count;
    a.psnr += r.psnr;
    a.ssim += r.ssim;
    a.cw_ssim += r.cw_ssim;
    a.fsim += r.fsim;
  }
  std::ostringstream agg;
  agg << "factor,severity,count,psnr,ssim,cw_ssim,fsim\n";
  for (auto& a : table.aggregates) {
    a.psnr /= a.count;
    a.ssim /= a.count;
    a.cw_ssim /= a.count;
    a.fsim /= a.count;
    agg << a.factor << ',' << a.severity << ',' << a.count << ',' << exact(a.psnr) << ','
        << exact(a.ssim) << ',' << exact(a.cw_ssim) << ',' << exact(a.fsim) << '\n';
  }
  write_text(out_csv, csv.str());
  write_text(aggregate_csv_path(out_csv), agg.str());
  return table;
}

// ---------------------------------------------------------------------------
// pq

PqTable cmd_pq(const fs::path& gt_dir, const fs::path& pred_root, const fs::path& out,
               bool global, int workers) {
  std::vector<std::string> stems;
  if (!fs::is_directory(gt_dir)) throw IoError("not a directory: " + gt_dir.string());
  for (const auto& e : fs::directory_iterator(gt_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") {
      stems.push_back(e.path().stem().string());
    }
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) throw ValidationError("no ground-truth PNGs in " + gt_dir.string());

  // Prediction sets: flat files in the root, then one per severity dir.
  std::vector<std::pair<FactorSeverity, fs::path>> sets;
  bool has_flat = false;
  for (const auto& e : fs::directory_iterator(pred_root)) {
    if (e.is_regular_file() && e.path().extension() == ".png") has_flat = true;
  }
  if (has_flat) sets.push_back({{"clean", 0}, pred_root});
  for (auto& d : severity_dirs(pred_root)) sets.push_back(std::move(d));
  if (sets.empty()) throw ValidationError("no predictions under " + pred_root.string());

  struct Job {
    std::size_t set;
    std::string stem;
  };
  std::vector<Job> jobs;
  PqTable table;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    PqCell cell;
    cell.factor = sets[s].first.factor;
    cell.severity = sets[s].first.severity;
    for (const auto& stem : stems) {
      if (fs::is_regular_file(sets[s].second / (stem + ".png"))) {
        jobs.push_back({s, stem});
      } else {
        cell.missing.push_back(stem);
      }
    }
    table.cells.push_back(std::move(cell));
  }

  std::vector<PqRow> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const PQAverage avg = global ? PQAverage::kGlobal : PQAverage::kCategoryMean;
  const int n = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < n; ++i) {
    const Job& j = jobs[i];
    try {
      const fs::path dir = sets[j.set].second;
      const PanopticMap gt = load_panoptic(gt_dir / (j.stem + ".png"), gt_dir / (j.stem + ".json"));
      const PanopticMap pred = load_panoptic(dir / (j.stem + ".png"), dir / (j.stem + ".json"));
      rows[i] = {j.stem, sets[j.set].first.factor, sets[j.set].first.severity, pq(pred, gt, avg)};
    } catch (const std::exception& e) {
      errors[i] = j.stem + ": " + e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw DecodeError(e);
  }
  table.rows = rows;

  for (std::size_t s = 0; s < sets.size(); ++s) {
    std::vector<PQResult> members;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].set == s) members.push_back(rows[i].result);
    }
    if (members.empty()) continue;
    table.cells[s].aggregate = aggregate_pq(std::span<const PQResult>(members));
    if (global) table.cells[s].pooled = combine(members, PQAverage::kGlobal);
  }

  std::ostringstream csv;
  csv << "image_id,factor,severity,pq,sq,rq,tp,fp,fn\n";
  for (const auto& r : table.rows) {
    csv << r.image_id << ',' << r.factor << ',' << r.severity << ',' << exact(100.0 * r.result.pq)
        << ',' << exact(100.0 * r.result.sq) << ',' << exact(100.0 * r.result.rq) << ','
        << r.result.tp << ',' << r.result.fp << ',' << r.result.fn << '\n';
  }
  ojson summary;
  summary["averaging"] = global ? "global" : "category_mean";
  ojson cells = ojson::array();
  ojson missing = ojson::array();
  for (const auto& c : table.cells) {
    ojson o;
    o["factor"] = c.factor;
    o["severity"] = c.severity;
    o["count"] = c.aggregate.count;
    o["apq"] = 100.0 * c.aggregate.apq;
    o["vpq"] = 100.0 * 100.0 * c.aggregate.vpq;
    if (c.pooled) {
      o["pooled"] = {{"pq", 100.0 * c.pooled->pq}, {"sq", 100.0 * c.pooled->sq},
                     {"rq", 100.0 * c.pooled->rq}, {"tp", c.pooled->tp},
                     {"fp", c.pooled->fp},         {"fn", c.pooled->fn}};
    }
    cells.push_back(o);
    for (const auto& m : c.missing) {
      missing.push_back({{"factor", c.factor}, {"severity", c.severity}, {"image_id", m}});
    }
  }
  summary["cells"] = cells;
  summary["missing"] = missing;
  write_text(out / "pq.csv", csv.str());
  write_text(out / "pq_summary.json", summary.dump(2) + "\n");
  return table;
}

// ---------------------------------------------------------------------------
// correlate

std::vector<CorrelationReport> cmd_correlate(const fs::path& iqa_csv, const fs::path& pq_csv,
                                             JoinMode mode, const fs::path& out,
                                             const CorrelationOptions& options) {
  const ScoreTable iq = read_score_csv(iqa_csv);
  const ScoreTable pqt = read_score_csv(pq_csv);
  auto reports = correlation_report(iq, pqt, mode, options);
  write_text(out / "correlation.json", report_json(reports));
  write_text(out / "correlation.md", report_markdown(reports));
  return reports;
}

std::vector<CorrelationReport> parse_report_json(const std::string& text) {
  std::vector<CorrelationReport> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    auto matrix = [](const nlohmann::json& m) {
      std::vector<std::vector<double>> r;
      for (const auto& row : m) {
        std::vector<double> v;
        for (const auto& x : row) {
          v.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
        }
        r.push_back(std::move(v));
      }
      return r;
    };
    for (const auto& o : doc) {
      CorrelationReport r;
      r.aggregation = o.at("aggregation").get<std::string>();
      r.rows = o.at("rows").get<std::vector<std::string>>();
      r.cols = o.at("cols").get<std::vector<std::string>>();
      r.plcc = matrix(o.at("plcc"));
      r.srcc = matrix(o.at("srcc"));
      r.n = o.at("n").get<std::vector<std::vector<int>>>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("malformed correlation report: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// report

std::string cmd_report(const ReportInputs& inputs, const fs::path& out_dir) {
  if (!fs::is_regular_file(inputs.manifest)) {
    throw IoError("manifest not found: " + inputs.manifest.string());
  }
  if (!fs::is_regular_file(inputs.iqa_csv)) {
    throw IoError("IQA table not found: " + inputs.iqa_csv.string());
  }
  const Manifest manifest = read_manifest(inputs.manifest);
  const ScoreTable iq = read_score_csv(inputs.iqa_csv);
  std::optional<ScoreTable> pqt;
  if (inputs.pq_csv) pqt = read_score_csv(*inputs.pq_csv);
  std::optional<std::vector<CorrelationReport>> corr;
  if (inputs.correlation_json) corr = parse_report_json(read_text(*inputs.correlation_json));

  // Per-(factor, severity) means.
  auto means = [](const ScoreTable& t) {
    std::map<std::pair<std::string, int>, std::pair<std::vector<double>, std::vector<int>>> acc;
    for (const auto& r : t.rows) {
      auto& [sum, cnt] = acc[{r.factor, r.severity}];
      sum.resize(t.columns.size(), 0.0);
      cnt.resize(t.columns.size(), 0);
      for (std::size_t i = 0; i < r.values.size(); ++i) {
        if (std::isnan(r.values[i])) continue;
        sum[i] += r.values[i];
        ++cnt[i];
      }
    }
    std::map<std::pair<std::string, int>, std::vector<double>> out;
    for (auto& [k, v] : acc) {
      std::vector<double> m(v.first.size());
      for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = v.second[i] ? v.first[i] / v.second[i] : std::numeric_limits<double>::quiet_NaN();
      }
      out[k] = m;
    }
    return out;
  };
  const auto iq_means = means(iq);
  std::map<std::pair<std::string, int>, std::vector<double>> pq_means;
  if (pqt) pq_means = means(*pqt);
  const int c_psnr = iq.column("psnr"), c_ssim = iq.column("ssim");
  const int c_cw = iq.column("cw_ssim"), c_fsim = iq.column("fsim");
  const int c_pq = pqt ? pqt->column("pq") : -1;
  auto cell = [](const std::vector<double>& v, int c, int digits) -> std::string {
    if (c < 0 || std::isnan(v[c])) return "n/a";
    return fixed(v[c], digits);
  };

  std::ostringstream md;
  md << "# camrobust report\n\n";
  md << "- tool version: " << manifest.tool_version << "\n";
  md << "- global seed: " << manifest.global_seed << "\n";
  md << "- size: "
     << (manifest.size ? std::to_string(manifest.size->width) + "x" +
                             std::to_string(manifest.size->height)
                       : std::string("original"))
     << "\n";
  md << "- generated files: " << manifest.records.size() << "\n";
  if (!manifest.skipped.empty()) {
    md << "- skipped tasks: " << manifest.skipped.size() << " (missing depth)\n";
  }
  if (!pqt) md << "- panoptic quality: not provided; PQ columns omitted\n";
  if (!corr) md << "- correlation: not provided; section omitted\n";
  md << "\n## Factors\n";

  for (const auto& info : factor_catalog()) {
    const std::string name(info.name);
    md << "\n### " << name << "\n\n";
    md << "category " << info.category_id << " (" << info.category << "), native unit: "
       << info.native_unit << (info.surrogate ? ", procedural surrogate" : "") << "\n\n";
    std::map<int, const ManifestRecord*> params;
    for (const auto& r : manifest.records) {
      if (r.factor == name && !params.count(r.severity)) params[r.severity] = &r;
    }
    bool any_iq = false;
    for (int s = 1; s <= kSeverityLevels; ++s) any_iq |= iq_means.count({name, s}) > 0;
    if (params.empty() && !any_iq) {
      md << "No outputs for this factor.\n";
      continue;
    }
    md << "| severity | native | parameters | PSNR | SSIM | CW-SSIM | FSIM |"
       << (pqt ? " aPQ |" : "") << "\n";
    md << "|---|---|---|---|---|---|---|" << (pqt ? "---|" : "") << "\n";
    for (int s = 1; s <= kSeverityLevels; ++s) {
      std::string p = "n/a";
      if (params.count(s)) {
        p.clear();
        for (const auto& [k, v] : params[s]->params) {
          if (!p.empty()) p += ", ";
          std::ostringstream os;
          os << k << '=' << std::setprecision(6) << v;
          p += os.str();
        }
        if (p.empty()) p = "-";
      }
      std::ostringstream native;
      native << std::setprecision(6) << info.native_levels[s - 1];
      md << "| " << s << " | " << native.str() << " | " << p << " | ";
      const auto it = iq_means.find({name, s});
      if (it != iq_means.end()) {
        md << cell(it->second, c_psnr, 2) << " | " << cell(it->second, c_ssim, 4) << " | "
           << cell(it->second, c_cw, 4) << " | " << cell(it->second, c_fsim, 4) << " |";
      } else {
        md << "n/a | n/a | n/a | n/a |";
      }
      if (pqt) {
        const auto pit = pq_means.find({name, s});
        md << ' ' << (pit != pq_means.end() ? cell(pit->second, c_pq, 2) : "n/a") << " |";
      }
      md << '\n';
    }
  }
  if (corr) {
    md << "\n## Correlation\n\n" << report_markdown(*corr);
  }
  const std::string text = md.str();
  write_text(out_dir / "report.md", text);
  return text;
}

}  // namespace camrobust
