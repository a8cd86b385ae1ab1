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

#include "camrobust/correlate.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "camrobust/error.hpp"
#include "camrobust/io.hpp"

namespace camrobust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_series(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("correlation series differ in length");
  if (x.size() < 3) throw ValidationError("correlation needs at least 3 samples");
}

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s) {
  if (s.empty()) return kNaN;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    return used == s.size() ? v : kNaN;
  } catch (const std::exception&) {
    return kNaN;
  }
}

std::vector<int> select_columns(const ScoreTable& t, const std::vector<std::string>& wanted,
                                bool pq_default) {
  std::vector<int> idx;
  if (wanted.empty()) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      std::string lower = t.columns[i];
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (!pq_default || lower.find("pq") != std::string::npos) {
        idx.push_back(static_cast<int>(i));
      }
    }
  } else {
    for (const auto& name : wanted) {
      const int c = t.column(name);
      if (c < 0) throw ValidationError("column '" + name + "' not found");
      idx.push_back(c);
    }
  }
  if (idx.empty()) throw ValidationError("no columns selected for correlation");
  return idx;
}

using CellKey = std::pair<std::string, int>;  // (factor, severity)

// Mean of each value column over the rows of a (factor, severity) cell,
// ignoring NaN entries.
std::map<CellKey, std::vector<double>> cell_means(const ScoreTable& t) {
  std::map<CellKey, std::vector<double>> sums;
  std::map<CellKey, std::vector<int>> counts;
  for (const ScoreRow& r : t.rows) {
    const CellKey k{r.factor, r.severity};
    auto& s = sums[k];
    auto& c = counts[k];
    s.resize(t.columns.size(), 0.0);
    c.resize(t.columns.size(), 0);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      if (std::isnan(r.values[i])) continue;
      s[i] += r.values[i];
      ++c[i];
    }
  }
  for (auto& [k, s] : sums) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = counts[k][i] ? s[i] / counts[k][i] : kNaN;
  }
  return sums;
}

struct Joined {
  std::vector<std::string> group;  // factor of each joined sample
  std::vector<std::vector<double>> iq, pq;  // [column][sample]
};

CorrelationReport empty_report(const std::string& aggregation, const ScoreTable& iq,
                               const std::vector<int>& ic, const ScoreTable& pq,
                               const std::vector<int>& pc) {
  CorrelationReport r;
  r.aggregation = aggregation;
  for (int i : ic) r.rows.push_back(iq.columns[i]);
  for (int j : pc) r.cols.push_back(pq.columns[j]);
  r.plcc.assign(ic.size(), std::vector<double>(pc.size(), kNaN));
  r.srcc = r.plcc;
  r.n.assign(ic.size(), std::vector<int>(pc.size(), 0));
  return r;
}

// Correlation over the samples where both series are finite; NaN when
// fewer than 3 remain or either side is constant.
std::pair<double, double> safe_corr(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<std::size_t>& members, int& n) {
  std::vector<double> x, y;
  for (std::size_t k : members) {
    if (std::isfinite(a[k]) && std::isfinite(b[k])) {
      x.push_back(a[k]);
      y.push_back(b[k]);
    }
  }
  n = static_cast<int>(x.size());
  if (x.size() < 3) return {kNaN, kNaN};
  try {
    return {plcc(x, y), srcc(x, y)};
  } catch (const UndefinedStatistic&) {
    return {kNaN, kNaN};
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

double plcc(std::span<const double> x, std::span<const double> y) {
  check_series(x, y);
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedStatistic("correlation undefined for a constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double srcc(std::span<const double> x, std::span<const double> y) {
  check_series(x, y);
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  return plcc(rx, ry);
}

int ScoreTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

ScoreTable parse_score_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DecodeError("empty CSV");
  const auto header = split_csv_line(line);
  int image_col = -1, factor_col = -1, severity_col = -1;
  ScoreTable t;
  std::vector<int> value_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& h = header[i];
    if (h == "image_id") {
      image_col = static_cast<int>(i);
    } else if (h == "factor") {
      factor_col = static_cast<int>(i);
    } else if (h == "severity") {
      severity_col = static_cast<int>(i);
    } else {
      t.columns.push_back(h);
      value_cols.push_back(static_cast<int>(i));
    }
  }
  if (factor_col < 0 || severity_col < 0) {
    throw DecodeError("CSV needs 'factor' and 'severity' columns");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DecodeError("CSV line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
    }
    ScoreRow r;
    if (image_col >= 0) r.image_id = cells[image_col];
    r.factor = cells[factor_col];
    const double sev = parse_number(cells[severity_col]);
    if (!std::isfinite(sev)) {
      throw DecodeError("CSV line " + std::to_string(line_no) + ": bad severity");
    }
    r.severity = static_cast<int>(sev);
    for (int c : value_cols) r.values.push_back(parse_number(cells[c]));
    t.rows.push_back(std::move(r));
  }
  return t;
}

ScoreTable read_score_csv(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_score_csv(std::string(bytes.begin(), bytes.end()));
}

std::vector<CorrelationReport> correlation_report(const ScoreTable& iq, const ScoreTable& pq,
                                                  JoinMode mode,
                                                  const CorrelationOptions& options) {
  const auto ic = select_columns(iq, options.iq_columns, false);
  const auto pc = select_columns(pq, options.pq_columns, true);

  Joined j;
  j.iq.resize(ic.size());
  j.pq.resize(pc.size());
  if (mode == JoinMode::kImage) {
    std::map<std::tuple<std::string, std::string, int>, const ScoreRow*> index;
    for (const ScoreRow& r : pq.rows) index[{r.image_id, r.factor, r.severity}] = &r;
    for (const ScoreRow& r : iq.rows) {
      const auto it = index.find({r.image_id, r.factor, r.severity});
      if (it == index.end()) continue;
      j.group.push_back(r.factor);
      for (std::size_t a = 0; a < ic.size(); ++a) j.iq[a].push_back(r.values[ic[a]]);
      for (std::size_t b = 0; b < pc.size(); ++b) j.pq[b].push_back(it->second->values[pc[b]]);
    }
  } else {
    const auto mi = cell_means(iq), mp = cell_means(pq);
    for (const auto& [key, vals] : mi) {
      const auto it = mp.find(key);
      if (it == mp.end()) continue;
      j.group.push_back(key.first);
      for (std::size_t a = 0; a < ic.size(); ++a) j.iq[a].push_back(vals[ic[a]]);
      for (std::size_t b = 0; b < pc.size(); ++b) j.pq[b].push_back(it->second[pc[b]]);
    }
  }
  if (j.group.empty()) throw ValidationError("empty join between IQ and PQ tables");

  std::vector<std::size_t> all(j.group.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<CorrelationReport> out;
  CorrelationReport pooled =
      empty_report(mode == JoinMode::kImage ? "image" : "pooled", iq, ic, pq, pc);
  for (std::size_t a = 0; a < ic.size(); ++a) {
    for (std::size_t b = 0; b < pc.size(); ++b) {
      std::tie(pooled.plcc[a][b], pooled.srcc[a][b]) = safe_corr(j.iq[a], j.pq[b], all, pooled.n[a][b]);
    }
  }
  out.push_back(std::move(pooled));
  if (mode == JoinMode::kImage) return out;

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < j.group.size(); ++k) groups[j.group[k]].push_back(k);
  CorrelationReport avg = empty_report("factor_averaged", iq, ic, pq, pc);
  for (std::size_t a = 0; a < ic.size(); ++a) {
    for (std::size_t b = 0; b < pc.size(); ++b) {
      double sp = 0.0, ss = 0.0;
      int defined = 0;
      for (const auto& [factor, members] : groups) {
        int n = 0;
        const auto [p, s] = safe_corr(j.iq[a], j.pq[b], members, n);
        if (std::isnan(p)) continue;
        sp += p;
        ss += s;
        ++defined;
      }
      avg.n[a][b] = defined;
      if (defined > 0) {
        avg.plcc[a][b] = sp / defined;
        avg.srcc[a][b] = ss / defined;
      }
    }
  }
  out.push_back(std::move(avg));
  return out;
}

std::string report_json(const std::vector<CorrelationReport>& reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  auto matrix = [](const std::vector<std::vector<double>>& m) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& row : m) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (double v : row) {
        if (std::isnan(v)) {
          r.push_back(nullptr);
        } else {
          r.push_back(v);
        }
      }
      a.push_back(r);
    }
    return a;
  };
  for (const auto& rep : reports) {
    nlohmann::ordered_json o;
    o["aggregation"] = rep.aggregation;
    o["rows"] = rep.rows;
    o["cols"] = rep.cols;
    o["plcc"] = matrix(rep.plcc);
    o["srcc"] = matrix(rep.srcc);
    o["n"] = rep.n;
    doc.push_back(o);
  }
  return doc.dump(2) + "\n";
}

std::string report_markdown(const std::vector<CorrelationReport>& reports) {
  std::ostringstream md;
  for (const auto& rep : reports) {
    md << "### Correlation (" << rep.aggregation << ")\n\n| metric |";
    for (const auto& c : rep.cols) md << ' ' << c << " PLCC | " << c << " SRCC |";
    md << "\n|---|";
    for (std::size_t k = 0; k < rep.cols.size(); ++k) md << "---|---|";
    md << '\n';
    for (std::size_t a = 0; a < rep.rows.size(); ++a) {
      md << "| " << rep.rows[a] << " |";
      for (std::size_t b = 0; b < rep.cols.size(); ++b) {
        md << ' ' << fmt(rep.plcc[a][b]) << " | " << fmt(rep.srcc[a][b]) << " |";
      }
      md << '\n';
    }
    md << '\n';
  }
  return md.str();
}

}  // namespace camrobust
