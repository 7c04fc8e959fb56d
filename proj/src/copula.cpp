// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/copula.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "flampred/error.hpp"
#include "flampred/random.hpp"

namespace flampred {

double MarginalModel::cdf(double x) const {
  const auto& v = sorted_values;
  const double n = static_cast<double>(v.size());
  const auto lo = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  const auto hi = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
  double position;  // 1-based plotting position
  if (lo < hi) {
    position = (static_cast<double>(lo + 1) + static_cast<double>(hi)) / 2.0;
  } else if (lo == 0) {
    position = 1.0;
  } else if (lo == v.size()) {
    position = n;
  } else {
    position = static_cast<double>(lo) + (x - v[lo - 1]) / (v[lo] - v[lo - 1]);
  }
  return (position - 0.5) / n;
}

double MarginalModel::quantile(double u) const {
  if (kind == Kind::kDegenerate) return observed_min;
  const auto& v = sorted_values;
  const double n = static_cast<double>(v.size());
  const double position = u * n + 0.5;
  if (!(position > 1.0)) return v.front();
  if (!(position < n)) return v.back();
  const auto i = static_cast<std::size_t>(std::floor(position));
  const double t = position - static_cast<double>(i);
  const double value = v[i - 1] + t * (v[i] - v[i - 1]);
  return std::clamp(value, observed_min, observed_max);
}

double MarginalModel::normal_score(double x) const {
  if (kind == Kind::kDegenerate) return 0.0;
  return normal_quantile(cdf(x));
}

std::vector<std::string> CopulaModel::column_names() const {
  std::vector<std::string> out;
  for (const auto& m : marginals) out.push_back(m.column);
  return out;
}

namespace {

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

std::vector<std::vector<double>> from_eigen(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()),
                                       std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

std::vector<std::vector<double>> pearson(const std::vector<std::vector<double>>& columns) {
  const std::size_t d = columns.size();
  std::vector<std::vector<double>> corr(d, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> centered(d);
  std::vector<double> norm(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const auto& c = columns[j];
    double mean = 0;
    for (double v : c) mean += v;
    mean /= static_cast<double>(c.size());
    centered[j].reserve(c.size());
    for (double v : c) {
      centered[j].push_back(v - mean);
      norm[j] += (v - mean) * (v - mean);
    }
    norm[j] = std::sqrt(norm[j]);
  }
  for (std::size_t i = 0; i < d; ++i) {
    corr[i][i] = 1.0;
    for (std::size_t j = i + 1; j < d; ++j) {
      double value = 0;
      if (norm[i] > 0 && norm[j] > 0) {
        double dot = 0;
        for (std::size_t r = 0; r < centered[i].size(); ++r) dot += centered[i][r] * centered[j][r];
        value = std::clamp(dot / (norm[i] * norm[j]), -1.0, 1.0);
      }
      corr[i][j] = corr[j][i] = value;
    }
  }
  return corr;
}

// Eigenvalue clipping followed by rescaling to unit diagonal.
std::vector<std::vector<double>> nearest_correlation(const std::vector<std::vector<double>>& corr) {
  const Eigen::MatrixXd c = to_eigen(corr);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(kEigenFloor);
  Eigen::MatrixXd repaired = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
  const Eigen::VectorXd scale = repaired.diagonal().cwiseSqrt().cwiseInverse();
  repaired = scale.asDiagonal() * repaired * scale.asDiagonal();
  repaired = ((repaired + repaired.transpose()) / 2.0).eval();
  repaired.diagonal().setOnes();
  return from_eigen(repaired);
}

}  // namespace

CopulaModel fit_copula(const FeatureTable& table) {
  if (table.row_count() < 3)
    throw FitError("copula fit needs at least 3 rows, got " + std::to_string(table.row_count()));
  for (const auto& row : table.rows) {
    if (row.size() != table.column_count()) throw FitError("ragged table");
    for (double v : row)
      if (!std::isfinite(v)) throw FitError("non-finite value in copula input");
  }

  CopulaModel model;
  model.fit_row_count = table.row_count();
  model.catalog_id = table.catalog_id;
  model.target_column = table.target_column;

  std::vector<std::vector<double>> scores;
  for (std::size_t j = 0; j < table.column_count(); ++j) {
    MarginalModel m;
    m.column = table.column_names[j];
    m.sorted_values = table.column(j);
    std::sort(m.sorted_values.begin(), m.sorted_values.end());
    m.observed_min = m.sorted_values.front();
    m.observed_max = m.sorted_values.back();
    m.kind = m.observed_min == m.observed_max ? MarginalModel::Kind::kDegenerate
                                              : MarginalModel::Kind::kEmpiricalCdf;
    std::vector<double> z;
    for (const auto& row : table.rows) z.push_back(m.normal_score(row[j]));
    scores.push_back(std::move(z));
    model.marginals.push_back(std::move(m));
  }
  model.correlation = nearest_correlation(pearson(scores));
  return model;
}

std::vector<std::vector<double>> correlation_factor(const std::vector<std::vector<double>>& corr) {
  const Eigen::MatrixXd c = to_eigen(corr);
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() == Eigen::Success) return from_eigen(Eigen::MatrixXd(llt.matrixL()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return from_eigen(eig.eigenvectors() * root.asDiagonal());
}

double min_eigenvalue(const std::vector<std::vector<double>>& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_eigen(matrix), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

FeatureTable sample_copula(const CopulaModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample size must be >= 1");
  const std::size_t d = model.marginals.size();
  const auto factor = correlation_factor(model.correlation);

  FeatureTable out;
  out.column_names = model.column_names();
  out.catalog_id = model.catalog_id;
  out.target_column = model.target_column;
  out.provenance = Provenance::kSynthetic;
  out.rows.reserve(n);

  Rng rng(derive_seed(seed, Stream::kCopula));
  std::vector<double> z(d);
  for (std::size_t r = 0; r < n; ++r) {
    for (double& v : z) v = rng.standard_normal();
    std::vector<double> row(d);
    for (std::size_t i = 0; i < d; ++i) {
      double latent = 0;
      for (std::size_t k = 0; k < factor[i].size(); ++k) latent += factor[i][k] * z[k];
      row[i] = model.marginals[i].quantile(normal_cdf(latent));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<double>> normal_score_correlation(const CopulaModel& model,
                                                          const FeatureTable& table) {
  if (table.column_count() != model.marginals.size())
    throw ConfigError("table does not match copula columns");
  std::vector<std::vector<double>> scores(model.marginals.size());
  for (std::size_t j = 0; j < model.marginals.size(); ++j)
    for (const auto& row : table.rows) scores[j].push_back(model.marginals[j].normal_score(row[j]));
  return pearson(scores);
}

}  // namespace flampred
