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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace camrobust {

// Pearson correlation with two-pass means. Throws UndefinedStatistic for a
// constant series and ValidationError for a length mismatch or n < 3.
double plcc(std::span<const double> x, std::span<const double> y);

// Pearson correlation of fractional ranks (ties share their mean rank).
double srcc(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values receive the average of the ranks they span.
std::vector<double> fractional_ranks(std::span<const double> x);

// Row of a score table keyed by (image_id, factor, severity). Missing or
// non-numeric cells are NaN.
struct ScoreRow {
  std::string image_id;
  std::string factor;
  int severity = 0;
  std::vector<double> values;
};

struct ScoreTable {
  std::vector<std::string> columns;  // value columns, in file order
  std::vector<ScoreRow> rows;

  int column(const std::string& name) const;  // -1 when absent
};

// CSV with a header row. Key columns image_id, factor and severity are
// recognized by name (image_id may be absent for aggregate tables); every
// other column is a value column.
ScoreTable parse_score_csv(const std::string& text);
ScoreTable read_score_csv(const std::filesystem::path& path);

enum class JoinMode {
  kImage,   // join rows on (image_id, factor, severity)
  kFactor,  // average over images per (factor, severity) before joining
};

struct CorrelationReport {
  std::string aggregation;         // "image", "pooled" or "factor_averaged"
  std::vector<std::string> rows;   // IQ metric names
  std::vector<std::string> cols;   // PQ series names
  std::vector<std::vector<double>> plcc;  // NaN where undefined
  std::vector<std::vector<double>> srcc;
  std::vector<std::vector<int>> n;
};

struct CorrelationOptions {
  std::vector<std::string> iq_columns;  // empty: every value column
  std::vector<std::string> pq_columns;  // empty: columns whose name contains "pq"
};

// Image mode yields one report. Factor mode yields two: "pooled" correlates
// the (factor, severity) cell means directly; "factor_averaged" correlates
// across severities within each factor and averages over the factors where
// the coefficient is defined.
std::vector<CorrelationReport> correlation_report(const ScoreTable& iq,
                                                  const ScoreTable& pq, JoinMode mode,
                                                  const CorrelationOptions& options = {});

std::string report_json(const std::vector<CorrelationReport>& reports);
std::string report_markdown(const std::vector<CorrelationReport>& reports);

}  // namespace camrobust
