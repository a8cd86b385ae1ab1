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

// Brute-force panoptic matching used to check the threshold matcher.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "camrobust/image.hpp"

namespace camrobust::testing {

struct PqInstance {
  PanopticMap gt;
  PanopticMap pred;
};

// Rectangles painted over a partly void canvas; the prediction repaints a
// copy of the ground truth so that overlaps of every size occur.
inline PqInstance random_pq_instance(std::mt19937& gen, bool allow_void = true,
                                     bool allow_crowd = true) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
  const int w = uni(4, 64), h = uni(4, 64);
  const int cats = uni(1, 5);

  auto paint = [&](std::vector<std::uint32_t>& ids, std::uint32_t id) {
    const int x0 = uni(0, w - 1), y0 = uni(0, h - 1);
    const int x1 = std::min(w, x0 + uni(1, w)), y1 = std::min(h, y0 + uni(1, h));
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) ids[static_cast<std::size_t>(y) * w + x] = id;
    }
  };

  auto build = [&](std::vector<std::uint32_t> ids, std::uint32_t max_id,
                   const std::map<std::uint32_t, SegmentInfo>& base, bool crowd) {
    std::vector<SegmentInfo> segs;
    for (std::uint32_t id = 1; id <= max_id; ++id) {
      auto it = base.find(id);
      if (it != base.end()) {
        segs.push_back(it->second);
      } else {
        segs.push_back({id, uni(1, cats), crowd && uni(0, 9) == 0});
      }
    }
    if (!allow_void) {
      for (auto& v : ids) {
        if (v == 0) v = 1;
      }
    }
    return PanopticMap(w, h, std::move(ids), std::move(segs));
  };

  std::vector<std::uint32_t> g(static_cast<std::size_t>(w) * h, allow_void ? 0 : 1);
  const auto ng = static_cast<std::uint32_t>(uni(1, 20));
  for (std::uint32_t id = 1; id <= ng; ++id) paint(g, id);
  PanopticMap gt = build(g, ng, {}, allow_crowd);

  // Prediction: same segmentation with some segments repainted, some ids
  // shifted and categories occasionally changed.
  std::vector<std::uint32_t> p(g.begin(), g.end());
  if (!allow_void) {
    for (auto& v : p) {
      if (v == 0) v = 1;
    }
  }
  const auto np = static_cast<std::uint32_t>(uni(1, 20));
  for (std::uint32_t k = 0, n = uni(0, 6); k < n; ++k) {
    paint(p, static_cast<std::uint32_t>(uni(allow_void ? 0 : 1, np)));
  }
  for (auto& v : p) {
    if (v > np) v = 1 + v % np;
  }
  std::map<std::uint32_t, SegmentInfo> keep;
  for (const auto& s : gt.segments()) {
    if (s.id <= np && uni(0, 4) != 0) keep[s.id] = {s.id, s.category_id, false};
  }
  PanopticMap pred = build(p, np, keep, false);
  return {std::move(gt), std::move(pred)};
}

struct OracleMatch {
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;  // (pred, gt)
  double iou_sum = 0.0;
};

// Enumerates every one-to-one assignment over same-category, non-crowd
// pairs with IoU above one half and keeps the heaviest.
inline OracleMatch exhaustive_match(const PanopticMap& pred, const PanopticMap& gt) {
  const auto p = pred.ids();
  const auto g = gt.ids();
  struct Edge {
    std::uint32_t pred, gt;
    double iou;
  };
  std::vector<Edge> edges;
  for (const auto& gs : gt.segments()) {
    if (gs.is_crowd) continue;
    for (const auto& ps : pred.segments()) {
      if (ps.category_id != gs.category_id) continue;
      std::size_t inter = 0, uni = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const bool a = p[i] == ps.id, b = g[i] == gs.id;
        inter += a && b;
        // Prediction pixels on gt void are left out of the union.
        uni += b || (a && g[i] != 0);
      }
      const double v = uni ? static_cast<double>(inter) / uni : 0.0;
      if (v > 0.5) edges.push_back({ps.id, gs.id, v});
    }
  }
  OracleMatch best;
  std::set<std::uint32_t> used_p, used_g;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, double)> search = [&](std::size_t i, double w) {
    if (i == edges.size()) {
      if (w > best.iou_sum) {
        best.iou_sum = w;
        best.pairs.clear();
        for (std::size_t k : chosen) best.pairs.insert({edges[k].pred, edges[k].gt});
      }
      return;
    }
    search(i + 1, w);
    const Edge& e = edges[i];
    if (!used_p.count(e.pred) && !used_g.count(e.gt)) {
      used_p.insert(e.pred);
      used_g.insert(e.gt);
      chosen.push_back(i);
      search(i + 1, w + e.iou);
      chosen.pop_back();
      used_p.erase(e.pred);
      used_g.erase(e.gt);
    }
  };
  search(0, 0.0);
  return best;
}

}  // namespace camrobust::testing
