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

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aerorom/types.hpp"

namespace aerorom {

/// Axis-aligned box with uniform density.
struct ParameterDomain {
  Vector lower;
  Vector upper;

  /// [value, value + width]^k.
  static ParameterDomain box(Index k, double lower_value, double upper_value);

  Index dimension() const { return lower.size(); }
  bool contains(const Vector& mu) const;
  /// Throws InputError unless lower < upper componentwise.
  void validate() const;
  /// d mu / d xi for the [-1,1] coordinates xi: (upper - lower) / 2.
  Vector half_width() const { return 0.5 * (upper - lower); }
};

/// Affine map of the box onto [-1,1]^k. Throws InputError outside the box.
Vector normalize_parameters(const Vector& mu, const ParameterDomain& domain);
Vector denormalize_parameters(const Vector& xi, const ParameterDomain& domain);
/// Row-wise versions for a sample matrix (one parameter vector per row).
Matrix normalize_samples(const Matrix& samples, const ParameterDomain& domain);

/// Uncentered covariance (1/N) sum g g^T of the rows of `gradients`,
/// accumulated sample by sample in row order. Throws InputError when empty
/// or non-finite.
Matrix estimate_covariance(const Matrix& gradients);

struct ActiveSubspace {
  /// Descending, clamped at zero.
  Vector eigenvalues;
  /// Orthogonal; column i pairs with eigenvalues(i); each column's
  /// largest-magnitude entry is positive.
  Matrix eigenvectors;
  Index active_dim = 1;

  Index dimension() const { return eigenvalues.size(); }
  auto W1() const { return eigenvectors.leftCols(active_dim); }
  auto W2() const { return eigenvectors.rightCols(dimension() - active_dim); }
};

/// Largest spectral-gap ratio lambda_i / lambda_{i+1}, first argmax on ties.
Index spectral_gap_dimension(const Vector& descending_eigenvalues);

/// Eigendecomposition of a symmetric k x k covariance (k >= 2). Without
/// `active_dim` the dimension comes from spectral_gap_dimension. Throws
/// InputError for asymmetric input or an active_dim outside [1, k-1].
ActiveSubspace fit_active_subspace(const Matrix& covariance,
                                   std::optional<Index> active_dim = std::nullopt);

/// W1^T mu for normalized mu.
Vector active_variable(const ActiveSubspace& subspace, const Vector& mu_normalized);
/// W2^T mu for normalized mu.
Vector inactive_variable(const ActiveSubspace& subspace, const Vector& mu_normalized);

/// Gradient of the quantity of interest with respect to the physical
/// parameters at (mu, t).
using GradientProvider = std::function<Vector(const Vector& mu, double t)>;

struct DyasSeries {
  std::vector<double> times;
  std::vector<ActiveSubspace> subspaces;
  std::vector<std::string> warnings;
};

/// Active subspace at each instant from gradients at every sample row of
/// `samples` (physical coordinates), chain-ruled onto [-1,1]^k. Failures of
/// the provider are rethrown with the sample and time attached.
DyasSeries compute_dyas(const Matrix& samples, const ParameterDomain& domain,
                        const GradientProvider& gradient, const std::vector<double>& times,
                        std::optional<Index> active_dim = std::nullopt);

/// Indices j (0-based) with max_t |w_1,j(t)| < tau.
std::vector<Index> frozen_parameters(const DyasSeries& series, double tau);

/// Rows (w_1^T mu_i, f_i) sorted by the active variable. Requires a
/// one-dimensional subspace and aligned inputs, else InputError.
Eigen::MatrixX2d sufficiency_summary(const ActiveSubspace& subspace,
                                     const Matrix& samples_normalized, const Vector& f_values);

/// c1..c5, d1..d5 for the 10-parameter airfoil layout, mu1..muk otherwise.
std::vector<std::string> parameter_names(Index k);

}  // namespace aerorom
