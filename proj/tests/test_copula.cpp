// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flampred/copula.hpp"
#include "flampred/descriptors.hpp"
#include "flampred/error.hpp"
#include "flampred/pipeline.hpp"
#include "test_util.hpp"

using namespace flampred;
using flampred::testing::kDataDir;

namespace {

FeatureTable table_of(std::vector<std::string> names, std::vector<std::vector<double>> rows) {
  FeatureTable t;
  t.column_names = std::move(names);
  t.rows = std::move(rows);
  return t;
}

FeatureTable retained_fi_table() {
  ReferenceData data = load_reference_data(kDataDir);
  Hyperparams hp;
  hp.max_features = MaxFeatures::sqrt();
  auto outcome = expert_label_filter(data.fi_records,
                                     record_features(data, data.fi_records, chem1_catalog()),
                                     data.expert_labels, hp);
  return real_table(data, Target::kFI, chem1_catalog(), outcome.kept);
}

}  // namespace

TEST(Marginal, MidpointPlottingPositions) {
  MarginalModel m;
  m.sorted_values = {1, 2, 3};
  m.observed_min = 1;
  m.observed_max = 3;
  EXPECT_DOUBLE_EQ(m.cdf(1), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(m.cdf(2), 0.5);
  EXPECT_DOUBLE_EQ(m.cdf(3), 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(m.cdf(1.5), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.quantile(0.5), 2.0);
  EXPECT_DOUBLE_EQ(m.quantile(1.0 / 3.0), 1.5);
  EXPECT_EQ(m.quantile(0.01), 1.0);
  EXPECT_EQ(m.quantile(0.99), 3.0);
}

TEST(Marginal, TiesShareAveragePosition) {
  MarginalModel m;
  m.sorted_values = {1, 1, 3};
  m.observed_min = 1;
  m.observed_max = 3;
  EXPECT_DOUBLE_EQ(m.cdf(1), (0.5 + 1.5) / 2 / 3);
  EXPECT_EQ(m.quantile(0.3), 1.0);
}

TEST(Marginal, QuantileInvertsCdfBetweenDistinctValues) {
  MarginalModel m;
  m.sorted_values = {0.5, 1.25, 2, 7, 7.5, 11};
  m.observed_min = 0.5;
  m.observed_max = 11;
  for (double x = 0.5; x <= 11; x += 0.173) EXPECT_NEAR(m.quantile(m.cdf(x)), x, 1e-12);
}

TEST(Copula, ConstantColumnIsDegenerate) {
  FeatureTable t = table_of({"a", "c", "b"}, {{1, 5, 2}, {2, 5, 1}, {3, 5, 7}, {4, 5, 3}});
  CopulaModel m = fit_copula(t);
  EXPECT_EQ(m.marginals[1].kind, MarginalModel::Kind::kDegenerate);
  EXPECT_EQ(m.correlation[0][1], 0.0);
  EXPECT_EQ(m.correlation[1][2], 0.0);
  EXPECT_EQ(m.correlation[1][1], 1.0);
  FeatureTable s = sample_copula(m, 100, 3);
  for (const auto& row : s.rows) EXPECT_EQ(row[1], 5.0);
}

TEST(Copula, IdenticalColumnsCorrelateFully) {
  FeatureTable t = table_of({"a", "b", "c"}, {{1, 1, 4}, {3, 3, 2}, {2, 2, 9}, {8, 8, 1}, {5, 5, 5}});
  CopulaModel m = fit_copula(t);
  EXPECT_NEAR(m.correlation[0][1], 1.0, 1e-9);
}

TEST(Copula, DegenerateSingleColumn) {
  FeatureTable t = table_of({"x"}, {{2.5}, {2.5}, {2.5}});
  FeatureTable s = sample_copula(fit_copula(t), 5, 1);
  ASSERT_EQ(s.row_count(), 5u);
  for (const auto& row : s.rows) EXPECT_EQ(row[0], 2.5);
  EXPECT_EQ(s.provenance, Provenance::kSynthetic);
}

TEST(Copula, Errors) {
  EXPECT_THROW(fit_copula(table_of({"x"}, {{1}, {2}})), FitError);
  EXPECT_THROW(fit_copula(table_of({"x"}, {{1}, {2}, {NAN}})), FitError);
  CopulaModel m = fit_copula(table_of({"x"}, {{1}, {2}, {3}}));
  EXPECT_THROW(sample_copula(m, 0, 1), ConfigError);
}

TEST(Copula, RetainedPolymerModelIsValid) {
  FeatureTable real = retained_fi_table();
  CopulaModel m = fit_copula(real);
  EXPECT_EQ(m.fit_row_count, 26u);
  const auto& c = m.correlation;
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(c[i][i], 1.0, 1e-12);
    for (std::size_t j = 0; j < c.size(); ++j) {
      EXPECT_EQ(c[i][j], c[j][i]);
      EXPECT_LE(std::abs(c[i][j]), 1.0 + 1e-12);
    }
  }
  EXPECT_GE(min_eigenvalue(c), -1e-9);
  auto L = correlation_factor(c);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      double s = 0;
      for (std::size_t k = 0; k < c.size(); ++k) s += L[i][k] * L[j][k];
      EXPECT_NEAR(s, c[i][j], 1e-8);
    }
}

TEST(Copula, SameSeedBitIdentical) {
  CopulaModel m = fit_copula(retained_fi_table());
  FeatureTable a = sample_copula(m, 500, 17), b = sample_copula(m, 500, 17), c = sample_copula(m, 500, 18);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_NE(a.rows, c.rows);
}

TEST(Copula, SamplesRespectObservedBoundsAndMeans) {
  FeatureTable real = retained_fi_table();
  CopulaModel m = fit_copula(real);
  FeatureTable s = sample_copula(m, 10000, 2024);
  for (std::size_t j = 0; j < real.column_count(); ++j) {
    auto col = s.column(j);
    auto ref = real.column(j);
    double lo = *std::min_element(ref.begin(), ref.end()), hi = *std::max_element(ref.begin(), ref.end());
    for (double v : col) {
      ASSERT_GE(v, lo) << real.column_names[j];
      ASSERT_LE(v, hi) << real.column_names[j];
    }
    double mean_s = 0, mean_r = 0;
    for (double v : col) mean_s += v;
    for (double v : ref) mean_r += v;
    mean_s /= col.size();
    mean_r /= ref.size();
    if (lo == hi || std::abs(mean_r) <= 1e-6) continue;
    EXPECT_LE(std::abs(mean_s - mean_r), 0.1 * std::abs(mean_r)) << real.column_names[j];
  }
}

TEST(Copula, PositiveScalingCommutes) {
  FeatureTable real = retained_fi_table();
  FeatureTable scaled = real;
  const std::size_t col = real.column_index("molecular_weight");
  for (auto& row : scaled.rows) row[col] *= 3.5;
  FeatureTable a = sample_copula(fit_copula(real), 2000, 5);
  FeatureTable b = sample_copula(fit_copula(scaled), 2000, 5);
  for (std::size_t r = 0; r < a.row_count(); ++r)
    for (std::size_t j = 0; j < a.column_count(); ++j) {
      if (j == col)
        ASSERT_NEAR(b.rows[r][j], 3.5 * a.rows[r][j], 1e-12 * std::abs(b.rows[r][j]));
      else
        ASSERT_EQ(b.rows[r][j], a.rows[r][j]);
    }
}

TEST(Copula, ContinuousColumnsRecoverModelCorrelation) {
  // Columns without ties map back to their latent normal score almost
  // exactly, so their correlation is recovered closely.
  FeatureTable t;
  t.column_names = {"a", "b", "c"};
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n(0, 1);
  for (int i = 0; i < 40; ++i) {
    double x = n(gen), y = 0.7 * x + 0.7 * n(gen), z = n(gen) - 0.5 * x;
    t.rows.push_back({x, std::exp(y), z});
  }
  CopulaModel m = fit_copula(t);
  FeatureTable s = sample_copula(m, 10000, 8);
  auto c = normal_score_correlation(m, s);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(c[i][j], m.correlation[i][j], 0.1);
}
