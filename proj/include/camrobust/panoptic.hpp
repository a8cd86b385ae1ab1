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
#include <map>
#include <span>
#include <vector>

#include "camrobust/image.hpp"

namespace camrobust {

// |a ∩ b| / (|a ∪ b| - |void ∩ (a ∪ b) \ (a ∩ b)|) over equal-length masks;
// 0 when the denominator is 0.
double iou(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
           std::span<const std::uint8_t> void_mask);

struct SegmentMatch {
  std::uint32_t pred_id = 0;
  std::uint32_t gt_id = 0;
  int category_id = 0;
  double iou = 0.0;
};

struct MatchResult {
  std::vector<SegmentMatch> matches;          // sorted by gt id
  std::vector<std::uint32_t> unmatched_gt;    // non-crowd only
  std::vector<std::uint32_t> unmatched_pred;  // counted as false positives
  std::vector<std::uint32_t> ignored_pred;    // mostly void or same-class crowd
};

// A pair matches iff categories agree, the gt segment is not crowd, and
// IoU > 0.5 (void pixels inside the prediction leave the union).
MatchResult match_segments(const PanopticMap& pred, const PanopticMap& gt);

struct CategoryPQ {
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double iou_sum = 0.0;
};

enum class PQAverage {
  kCategoryMean,  // mean over categories with tp + fp + fn > 0
  kGlobal,        // counts pooled over categories
};

struct PQResult {
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double iou_sum = 0.0;
  std::map<int, CategoryPQ> per_category;
};

// Fills pq/sq/rq from the counts.
void finalize(CategoryPQ& c);

PQResult pq(const PanopticMap& pred, const PanopticMap& gt,
            PQAverage average = PQAverage::kCategoryMean);

// Sums per-category counts of several results (dataset-level PQ).
PQResult combine(std::span<const PQResult> results,
                 PQAverage average = PQAverage::kCategoryMean);

struct PQAggregate {
  double apq = 0.0;  // mean per-image pq
  double vpq = 0.0;  // population variance of per-image pq
  std::size_t count = 0;
};

PQAggregate aggregate_pq(std::span<const PQResult> per_image);
PQAggregate aggregate_pq(std::span<const double> per_image_pq);

}  // namespace camrobust
