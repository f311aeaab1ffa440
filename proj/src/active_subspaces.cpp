// Copyright 2026 The aerorom Authors
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

#include "aerorom/active_subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "aerorom/errors.hpp"

namespace aerorom {

ParameterDomain ParameterDomain::box(Index k, double lower_value, double upper_value) {
  ParameterDomain d{Vector::Constant(k, lower_value), Vector::Constant(k, upper_value)};
  d.validate();
  return d;
}

bool ParameterDomain::contains(const Vector& mu) const {
  if (mu.size() != dimension()) return false;
  return (mu.array() >= lower.array()).all() && (mu.array() <= upper.array()).all();
}

void ParameterDomain::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw InputError("ParameterDomain: bounds must be non-empty and of equal length");
  }
  if (!(lower.array() < upper.array()).all()) {
    throw InputError("ParameterDomain: require lower < upper in every coordinate");
  }
}

Vector normalize_parameters(const Vector& mu, const ParameterDomain& domain) {
  if (!domain.contains(mu)) throw InputError("normalize_parameters: mu outside the domain");
  return (2.0 * (mu - domain.lower).array() / (domain.upper - domain.lower).array() - 1.0)
      .matrix();
}

Vector denormalize_parameters(const Vector& xi, const ParameterDomain& domain) {
  if (xi.size() != domain.dimension()) {
    throw InputError("denormalize_parameters: dimension mismatch");
  }
  return (domain.lower.array() + 0.5 * (xi.array() + 1.0) * (domain.upper - domain.lower).array())
      .matrix();
}

Matrix normalize_samples(const Matrix& samples, const ParameterDomain& domain) {
  Matrix out(samples.rows(), samples.cols());
  for (Index i = 0; i < samples.rows(); ++i) {
    out.row(i) = normalize_parameters(Vector(samples.row(i).transpose()), domain).transpose();
  }
  return out;
}

Matrix estimate_covariance(const Matrix& gradients) {
  if (gradients.rows() == 0 || gradients.cols() == 0) {
    throw InputError("estimate_covariance: no gradients");
  }
  if (!gradients.allFinite()) throw InputError("estimate_covariance: non-finite gradient");
  const Index k = gradients.cols();
  Matrix c = Matrix::Zero(k, k);
  for (Index s = 0; s < gradients.rows(); ++s) {
    const Vector g = gradients.row(s).transpose();
    c.noalias() += g * g.transpose();
  }
  return c / static_cast<double>(gradients.rows());
}

Index spectral_gap_dimension(const Vector& lambda) {
  const Index k = lambda.size();
  if (k < 2) throw InputError("spectral_gap_dimension: need at least 2 eigenvalues");
  if (!(lambda(0) > 0.0)) return 1;
  const double floor = 1e-14 * lambda(0);
  Index best = 1;
  double best_ratio = -1.0;
  for (Index i = 0; i + 1 < k; ++i) {
    const double ratio = std::max(lambda(i), floor) / std::max(lambda(i + 1), floor);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i + 1;
    }
  }
  return best;
}

ActiveSubspace fit_active_subspace(const Matrix& c, std::optional<Index> active_dim) {
  const Index k = c.rows();
  if (k < 2 || c.cols() != k) throw InputError("fit_active_subspace: need a square k x k, k >= 2");
  if (!c.allFinite()) throw InputError("fit_active_subspace: non-finite covariance");
  const double scale = std::max(c.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InputError("fit_active_subspace: covariance is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (c + c.transpose()));
  if (eig.info() != Eigen::Success) throw FitError("fit_active_subspace: eigensolver failed");

  ActiveSubspace as;
  as.eigenvalues = eig.eigenvalues().reverse().cwiseMax(0.0);
  as.eigenvectors = eig.eigenvectors().rowwise().reverse();
  for (Index j = 0; j < k; ++j) {
    Index pivot = 0;
    as.eigenvectors.col(j).cwiseAbs().maxCoeff(&pivot);
    if (as.eigenvectors(pivot, j) < 0.0) as.eigenvectors.col(j) *= -1.0;
  }

  if (active_dim) {
    if (*active_dim < 1 || *active_dim > k - 1) {
      throw InputError("fit_active_subspace: active dimension must be in [1, k-1]");
    }
    as.active_dim = *active_dim;
  } else {
    as.active_dim = spectral_gap_dimension(as.eigenvalues);
  }
  return as;
}

Vector active_variable(const ActiveSubspace& as, const Vector& mu) {
  if (mu.size() != as.dimension()) throw InputError("active_variable: dimension mismatch");
  return as.W1().transpose() * mu;
}

Vector inactive_variable(const ActiveSubspace& as, const Vector& mu) {
  if (mu.size() != as.dimension()) throw InputError("inactive_variable: dimension mismatch");
  return as.W2().transpose() * mu;
}

DyasSeries compute_dyas(const Matrix& samples, const ParameterDomain& domain,
                        const GradientProvider& gradient, const std::vector<double>& times,
                        std::optional<Index> active_dim) {
  domain.validate();
  const Index k = domain.dimension();
  if (samples.cols() != k) throw InputError("compute_dyas: sample dimension mismatch");
  if (samples.rows() == 0) throw InputError("compute_dyas: no samples");
  if (times.empty()) throw InputError("compute_dyas: no analysis instants");

  DyasSeries series;
  if (samples.rows() < k + 1) {
    series.warnings.push_back("compute_dyas: " + std::to_string(samples.rows()) +
                              " samples for k = " + std::to_string(k) +
                              "; covariance is rank deficient");
  }
  const Vector chain = domain.half_width();
  for (double t : times) {
    Matrix grads(samples.rows(), k);
    for (Index s = 0; s < samples.rows(); ++s) {
      const std::string where =
          " (sample " + std::to_string(s) + ", t = " + std::to_string(t) + ")";
      Vector g;
      try {
        g = gradient(samples.row(s).transpose(), t);
      } catch (const InputError& e) {
        throw InputError(e.what() + where);
      } catch (const std::exception& e) {
        throw FitError(e.what() + where);
      }
      if (g.size() != k) throw InputError("compute_dyas: gradient has wrong size" + where);
      grads.row(s) = g.cwiseProduct(chain).transpose();
    }
    series.times.push_back(t);
    series.subspaces.push_back(fit_active_subspace(estimate_covariance(grads), active_dim));
  }
  return series;
}

std::vector<Index> frozen_parameters(const DyasSeries& series, double tau) {
  std::vector<Index> frozen;
  if (series.subspaces.empty()) return frozen;
  const Index k = series.subspaces.front().dimension();
  Vector peak = Vector::Zero(k);
  for (const auto& as : series.subspaces) {
    peak = peak.cwiseMax(as.eigenvectors.col(0).cwiseAbs());
  }
  for (Index j = 0; j < k; ++j) {
    if (peak(j) < tau) frozen.push_back(j);
  }
  return frozen;
}

Eigen::MatrixX2d sufficiency_summary(const ActiveSubspace& as, const Matrix& samples,
                                     const Vector& f_values) {
  if (as.active_dim != 1) throw InputError("sufficiency_summary: needs a 1-d active subspace");
  if (samples.rows() != f_values.size() || samples.cols() != as.dimension()) {
    throw InputError("sufficiency_summary: samples and values are not aligned");
  }
  const Vector y = samples * as.eigenvectors.col(0);
  std::vector<Index> order(static_cast<std::size_t>(y.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y(a) < y(b); });
  Eigen::MatrixX2d table(y.size(), 2);
  for (Index i = 0; i < y.size(); ++i) {
    table(i, 0) = y(order[static_cast<std::size_t>(i)]);
    table(i, 1) = f_values(order[static_cast<std::size_t>(i)]);
  }
  return table;
}

std::vector<std::string> parameter_names(Index k) {
  std::vector<std::string> names;
  if (k == 10) {
    for (int i = 1; i <= 5; ++i) names.push_back("c" + std::to_string(i));
    for (int i = 1; i <= 5; ++i) names.push_back("d" + std::to_string(i));
  } else {
    for (Index i = 1; i <= k; ++i) names.push_back("mu" + std::to_string(i));
  }
  return names;
}

}  // namespace aerorom
