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

#include "camrobust/panoptic.hpp"

#include <algorithm>
#include <unordered_map>

#include "camrobust/error.hpp"

namespace camrobust {

namespace {

std::uint64_t pair_key(std::uint32_t gt, std::uint32_t pred) {
  return (static_cast<std::uint64_t>(gt) << 32) | pred;
}

void check_grids(const PanopticMap& pred, const PanopticMap& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw DimensionError("prediction and ground truth differ in size");
  }
}

void overall_from_categories(PQResult& r, PQAverage average) {
  r.tp = r.fp = r.fn = 0;
  r.iou_sum = 0.0;
  double pq_sum = 0.0, sq_sum = 0.0, rq_sum = 0.0;
  int n = 0;
  for (auto& [cat, c] : r.per_category) {
    finalize(c);
    r.tp += c.tp;
    r.fp += c.fp;
    r.fn += c.fn;
    r.iou_sum += c.iou_sum;
    if (c.tp + c.fp + c.fn == 0) continue;
    pq_sum += c.pq;
    sq_sum += c.sq;
    rq_sum += c.rq;
    ++n;
  }
  if (average == PQAverage::kGlobal) {
    CategoryPQ pooled{0, 0, 0, r.tp, r.fp, r.fn, r.iou_sum};
    finalize(pooled);
    r.pq = pooled.pq;
    r.sq = pooled.sq;
    r.rq = pooled.rq;
  } else if (n > 0) {
    r.pq = pq_sum / n;
    r.sq = sq_sum / n;
    r.rq = rq_sum / n;
  } else {
    r.pq = r.sq = r.rq = 0.0;
  }
}

}  // namespace

double iou(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
           std::span<const std::uint8_t> void_mask) {
  if (a.size() != b.size() || (!void_mask.empty() && void_mask.size() != a.size())) {
    throw DimensionError("masks differ in size");
  }
  std::size_t inter = 0, uni = 0, void_only = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool in_a = a[i] != 0, in_b = b[i] != 0;
    if (in_a && in_b) ++inter;
    if (in_a || in_b) {
      ++uni;
      if (!(in_a && in_b) && !void_mask.empty() && void_mask[i]) ++void_only;
    }
  }
  const std::size_t denom = uni - void_only;
  return denom == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(denom);
}

MatchResult match_segments(const PanopticMap& pred, const PanopticMap& gt) {
  check_grids(pred, gt);
  std::unordered_map<std::uint64_t, std::size_t> overlap;
  std::unordered_map<std::uint32_t, std::size_t> pred_area, gt_area;
  const auto p = pred.ids();
  const auto g = gt.ids();
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++overlap[pair_key(g[i], p[i])];
    if (p[i]) ++pred_area[p[i]];
    if (g[i]) ++gt_area[g[i]];
  }

  MatchResult result;
  std::unordered_map<std::uint32_t, bool> pred_matched, gt_matched;
  for (const auto& [key, inter] : overlap) {
    const auto gid = static_cast<std::uint32_t>(key >> 32);
    const auto pid = static_cast<std::uint32_t>(key & 0xffffffffu);
    if (gid == 0 || pid == 0) continue;
    const SegmentInfo* gs = gt.find(gid);
    const SegmentInfo* ps = pred.find(pid);
    if (gs->is_crowd || gs->category_id != ps->category_id) continue;
    const auto void_it = overlap.find(pair_key(0, pid));
    const std::size_t pred_void = void_it == overlap.end() ? 0 : void_it->second;
    const std::size_t uni = pred_area[pid] + gt_area[gid] - inter - pred_void;
    const double v = static_cast<double>(inter) / static_cast<double>(uni);
    if (v > 0.5) {
      result.matches.push_back({pid, gid, gs->category_id, v});
      pred_matched[pid] = true;
      gt_matched[gid] = true;
    }
  }
  std::sort(result.matches.begin(), result.matches.end(),
            [](const SegmentMatch& a, const SegmentMatch& b) { return a.gt_id < b.gt_id; });

  for (const SegmentInfo& s : gt.segments()) {
    if (!s.is_crowd && !gt_matched.count(s.id)) result.unmatched_gt.push_back(s.id);
  }
  for (const SegmentInfo& s : pred.segments()) {
    if (pred_matched.count(s.id)) continue;
    // Pixels that are void or same-category crowd in the ground truth.
    std::size_t ignorable = 0;
    const auto void_it = overlap.find(pair_key(0, s.id));
    if (void_it != overlap.end()) ignorable += void_it->second;
    for (const SegmentInfo& c : gt.segments()) {
      if (!c.is_crowd || c.category_id != s.category_id) continue;
      const auto it = overlap.find(pair_key(c.id, s.id));
      if (it != overlap.end()) ignorable += it->second;
    }
    if (static_cast<double>(ignorable) / static_cast<double>(pred_area[s.id]) > 0.5) {
      result.ignored_pred.push_back(s.id);
    } else {
      result.unmatched_pred.push_back(s.id);
    }
  }
  return result;
}

void finalize(CategoryPQ& c) {
  const double denom = c.tp + 0.5 * c.fp + 0.5 * c.fn;
  c.sq = c.tp > 0 ? c.iou_sum / c.tp : 0.0;
  c.rq = denom > 0.0 ? c.tp / denom : 0.0;
  c.pq = denom > 0.0 ? c.iou_sum / denom : 0.0;
}

PQResult pq(const PanopticMap& pred, const PanopticMap& gt, PQAverage average) {
  const MatchResult m = match_segments(pred, gt);
  PQResult r;
  for (const SegmentMatch& s : m.matches) {
    CategoryPQ& c = r.per_category[s.category_id];
    ++c.tp;
    c.iou_sum += s.iou;
  }
  for (std::uint32_t id : m.unmatched_gt) ++r.per_category[gt.find(id)->category_id].fn;
  for (std::uint32_t id : m.unmatched_pred) ++r.per_category[pred.find(id)->category_id].fp;
  overall_from_categories(r, average);
  return r;
}

PQResult combine(std::span<const PQResult> results, PQAverage average) {
  PQResult r;
  for (const PQResult& x : results) {
    for (const auto& [cat, c] : x.per_category) {
      CategoryPQ& acc = r.per_category[cat];
      acc.tp += c.tp;
      acc.fp += c.fp;
      acc.fn += c.fn;
      acc.iou_sum += c.iou_sum;
    }
  }
  overall_from_categories(r, average);
  return r;
}

PQAggregate aggregate_pq(std::span<const double> values) {
  if (values.empty()) throw ValidationError("aggregate_pq needs at least one image");
  PQAggregate a;
  a.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  a.apq = sum / static_cast<double>(a.count);
  double ss = 0.0;
  for (double v : values) ss += (v - a.apq) * (v - a.apq);
  a.vpq = ss / static_cast<double>(a.count);
  return a;
}

PQAggregate aggregate_pq(std::span<const PQResult> per_image) {
  std::vector<double> v;
  v.reserve(per_image.size());
  for (const PQResult& r : per_image) v.push_back(r.pq);
  return aggregate_pq(std::span<const double>(v));
}

}  // namespace camrobust
