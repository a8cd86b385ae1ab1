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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "camrobust/correlate.hpp"
#include "camrobust/error.hpp"
#include "corr_oracle.hpp"

namespace camrobust {
namespace {

using testing::pearson_oracle;
using testing::spearman_oracle;
using V = std::vector<double>;

TEST(Plcc, SmallExamples) {
  const V x{1, 2, 3}, y{1, 4, 9};
  EXPECT_NEAR(plcc(x, y), pearson_oracle(x, y), 1e-15);
  EXPECT_NEAR(plcc(x, y), 0.9897, 5e-5);
  EXPECT_DOUBLE_EQ(plcc(x, V{2, 4, 6}), 1.0);
  EXPECT_DOUBLE_EQ(plcc(x, V{-1, -2, -3}), -1.0);
}

TEST(Plcc, Errors) {
  EXPECT_THROW(plcc(V{1, 1, 1}, V{1, 2, 3}), UndefinedStatistic);
  EXPECT_THROW(plcc(V{1, 2, 3}, V{1, 2}), ValidationError);
  EXPECT_THROW(plcc(V{1, 2}, V{1, 2}), ValidationError);
  EXPECT_THROW(srcc(V{1, 2, 3}, V{5, 5, 5}), UndefinedStatistic);
}

TEST(Srcc, RanksAndTies) {
  EXPECT_DOUBLE_EQ(srcc(V{1, 2, 3}, V{1, 4, 9}), 1.0);
  EXPECT_EQ(fractional_ranks(V{1, 1, 2}), (V{1.5, 1.5, 3}));
  EXPECT_EQ(fractional_ranks(V{3, 1, 3, 3}), (V{3, 1, 3, 3}));
  const V x{1, 1, 2}, y{3, 5, 9};
  EXPECT_NEAR(srcc(x, y), pearson_oracle(V{1.5, 1.5, 3}, V{1, 2, 3}), 1e-15);
  EXPECT_NEAR(srcc(x, y), std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(Oracle, RandomSeries) {
  std::mt19937 gen(99);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> small(0, 5);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 40;
    V x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = nd(gen);
      // Half the series carry ties.
      y[i] = t % 2 ? small(gen) + 0.5 * x[i] * (i % 3 == 0) : 0.3 * x[i] + nd(gen);
    }
    EXPECT_NEAR(plcc(x, y), pearson_oracle(x, y), 1e-12);
    EXPECT_NEAR(srcc(x, y), spearman_oracle(x, y), 1e-12);
    EXPECT_NEAR(plcc(x, y), plcc(y, x), 1e-15);
    EXPECT_NEAR(srcc(x, y), srcc(y, x), 1e-15);
  }
}

TEST(Invariance, AffineAndMonotone) {
  std::mt19937 gen(5);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    V x(20), y(20), ax(20), mx(20), neg(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = nd(gen);
      y[i] = x[i] + nd(gen);
      ax[i] = 3.5 * x[i] - 2.0;
      neg[i] = -0.5 * x[i] + 7.0;
      mx[i] = std::exp(2.0 * x[i]) + x[i] * x[i] * x[i];
    }
    EXPECT_NEAR(plcc(ax, y), plcc(x, y), 1e-12);
    EXPECT_NEAR(plcc(neg, y), -plcc(x, y), 1e-12);
    EXPECT_NEAR(srcc(mx, y), srcc(x, y), 1e-12);
    EXPECT_DOUBLE_EQ(srcc(x, mx), 1.0);
  }
}

// ---------------------------------------------------------------------------
// Tables

const char* kIq =
    "image_id,factor,severity,psnr,ssim,lpips\n"
    "a,fog,1,30,0.9,0.1\n"
    "b,fog,1,28,0.8,0.2\n"
    "a,fog,2,25,0.7,0.3\n"
    "b,fog,2,24,0.65,0.35\n"
    "a,fog,3,20,0.5,0.5\n"
    "b,fog,3,18,0.4,0.6\n"
    "a,mud,1,26,0.85,0.15\n"
    "b,mud,1,27,0.8,\n"
    "a,mud,2,22,0.7,0.25\n"
    "b,mud,2,23,0.72,0.3\n"
    "a,mud,3,21,0.6,0.4\n"
    "b,mud,3,20,0.62,0.45\n";

const char* kPq =
    "image_id,factor,severity,pq,sq\n"
    "a,fog,1,60,80\n"
    "b,fog,1,58,79\n"
    "a,fog,2,50,78\n"
    "b,fog,2,47,77\n"
    "a,fog,3,40,75\n"
    "b,fog,3,37,74\n"
    "a,mud,1,55,80\n"
    "b,mud,1,57,80\n"
    "a,mud,2,51,79\n"
    "b,mud,2,50,78\n"
    "a,mud,3,49,78\n"
    "b,mud,3,45,77\n";

TEST(Csv, ParsesKeysAndValues) {
  const ScoreTable t = parse_score_csv(kIq);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"psnr", "ssim", "lpips"}));
  ASSERT_EQ(t.rows.size(), 12u);
  EXPECT_EQ(t.rows[7].image_id, "b");
  EXPECT_EQ(t.rows[7].factor, "mud");
  EXPECT_TRUE(std::isnan(t.rows[7].values[2]));
  EXPECT_EQ(t.column("ssim"), 1);
  EXPECT_EQ(t.column("fid"), -1);
  EXPECT_THROW(parse_score_csv("x,y\n1,2\n"), DecodeError);
}

TEST(Report, SelfCorrelationIsOne) {
  const ScoreTable iq = parse_score_csv(kIq);
  CorrelationOptions o;
  o.iq_columns = {"psnr"};
  o.pq_columns = {"psnr"};
  for (JoinMode mode : {JoinMode::kImage, JoinMode::kFactor}) {
    for (const auto& r : correlation_report(iq, iq, mode, o)) {
      EXPECT_NEAR(r.plcc[0][0], 1.0, 1e-12) << r.aggregation;
      EXPECT_NEAR(r.srcc[0][0], 1.0, 1e-12) << r.aggregation;
    }
  }
}

TEST(Report, ImageModeMatchesOracle) {
  const ScoreTable iq = parse_score_csv(kIq), pq = parse_score_csv(kPq);
  const auto reports = correlation_report(iq, pq, JoinMode::kImage);
  ASSERT_EQ(reports.size(), 1u);
  const auto& r = reports[0];
  EXPECT_EQ(r.aggregation, "image");
  EXPECT_EQ(r.rows, (std::vector<std::string>{"psnr", "ssim", "lpips"}));
  EXPECT_EQ(r.cols, (std::vector<std::string>{"pq"}));
  V x, y;
  for (std::size_t i = 0; i < iq.rows.size(); ++i) {
    x.push_back(iq.rows[i].values[0]);
    y.push_back(pq.rows[i].values[0]);
  }
  EXPECT_NEAR(r.plcc[0][0], pearson_oracle(x, y), 1e-12);
  EXPECT_NEAR(r.srcc[0][0], spearman_oracle(x, y), 1e-12);
  EXPECT_EQ(r.n[0][0], 12);
  // The blank lpips cell drops one row.
  EXPECT_EQ(r.n[2][0], 11);
}

TEST(Report, FactorModeAveragesFirst) {
  const ScoreTable iq = parse_score_csv(kIq), pq = parse_score_csv(kPq);
  const auto reports = correlation_report(iq, pq, JoinMode::kFactor);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].aggregation, "pooled");
  EXPECT_EQ(reports[1].aggregation, "factor_averaged");
  // Pooled: six (factor, severity) means.
  V x, y;
  for (std::size_t i = 0; i < 12; i += 2) {
    x.push_back((iq.rows[i].values[0] + iq.rows[i + 1].values[0]) / 2);
    y.push_back((pq.rows[i].values[0] + pq.rows[i + 1].values[0]) / 2);
  }
  EXPECT_NEAR(reports[0].plcc[0][0], pearson_oracle(x, y), 1e-12);
  EXPECT_EQ(reports[0].n[0][0], 6);
  // Factor-averaged: mean of the per-factor coefficients over 3 severities.
  const V fog_x(x.begin(), x.begin() + 3), fog_y(y.begin(), y.begin() + 3);
  const V mud_x(x.begin() + 3, x.end()), mud_y(y.begin() + 3, y.end());
  const double expected = (pearson_oracle(fog_x, fog_y) + pearson_oracle(mud_x, mud_y)) / 2;
  EXPECT_NEAR(reports[1].plcc[0][0], expected, 1e-12);
  EXPECT_NE(reports[0].plcc[0][0], correlation_report(iq, pq, JoinMode::kImage)[0].plcc[0][0]);
}

TEST(Report, EmptyJoinAndUnknownColumn) {
  const ScoreTable iq = parse_score_csv(kIq);
  const ScoreTable other = parse_score_csv("image_id,factor,severity,pq\nz,snow,1,1\n");
  EXPECT_THROW(correlation_report(iq, other, JoinMode::kImage), ValidationError);
  CorrelationOptions o;
  o.iq_columns = {"fid"};
  EXPECT_THROW(correlation_report(iq, parse_score_csv(kPq), JoinMode::kImage, o),
               ValidationError);
}

TEST(Report, UndefinedCellsAreNan) {
  const ScoreTable iq = parse_score_csv(
      "image_id,factor,severity,psnr\na,fog,1,1\nb,fog,1,1\nc,fog,1,1\n");
  const ScoreTable pq = parse_score_csv(
      "image_id,factor,severity,pq\na,fog,1,1\nb,fog,1,2\nc,fog,1,3\n");
  const auto r = correlation_report(iq, pq, JoinMode::kImage);
  EXPECT_TRUE(std::isnan(r[0].plcc[0][0]));
  EXPECT_NE(report_json(r).find("null"), std::string::npos);
}

TEST(Report, MarkdownListsExternalColumns) {
  const auto r = correlation_report(parse_score_csv(kIq), parse_score_csv(kPq), JoinMode::kImage);
  const std::string md = report_markdown(r);
  EXPECT_NE(md.find("lpips"), std::string::npos);
  EXPECT_NE(md.find("PLCC"), std::string::npos);
}

}  // namespace
}  // namespace camrobust
