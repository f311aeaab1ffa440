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

#include <cmath>
#include <cstdint>

#include <Eigen/Cholesky>

#include "aerorom/types.hpp"

namespace aerorom {

/// Squared-exponential kernel sf2 exp(-|x - x'|^2 / (2 l^2)).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar se_kernel(const Eigen::MatrixBase<DerivedA>& x,
                                    const Eigen::MatrixBase<DerivedB>& x_prime,
                                    typename DerivedA::Scalar lengthscale,
                                    typename DerivedA::Scalar signal_variance) {
  using std::exp;
  const auto r2 = (x - x_prime).squaredNorm();
  return signal_variance * exp(-r2 / (2 * lengthscale * lengthscale));
}

struct GprHyperparameters {
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 0.0;
};

struct GprOptions {
  /// Maximize the log marginal likelihood over (log l, log sf2, log sn2).
  bool optimize = true;
  /// Starting/fixed hyperparameters when optimize is false.
  GprHyperparameters hyperparameters;
  /// Subtract the training-target mean before fitting (added back on
  /// prediction). Off gives a zero prior mean.
  bool center_targets = true;
  /// Lower bound of the searched noise variance, relative to the mean
  /// squared (centered) target.
  double min_noise_ratio = 1e-6;
  int restarts = 8;
  int max_evaluations_per_start = 400;
  std::uint64_t seed = 20200101;
};

struct GprPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Fitted GP with a cached Cholesky factor of K + (sn2 + jitter) I and the
/// weight vector alpha = (K + (sn2 + jitter) I)^-1 (y - y_mean).
class GprModel {
 public:
  /// Factorizes at fixed hyperparameters, escalating the jitter from 0
  /// through 1e-10 .. 1e-6 (relative to sf2) on failure. Throws FitError when
  /// every rung fails, InputError for malformed data or duplicate inputs
  /// under zero noise.
  static GprModel assemble(Matrix inputs, Vector targets, const GprHyperparameters& hyper,
                           bool center_targets);

  const Matrix& inputs() const { return inputs_; }
  const Vector& targets() const { return targets_; }
  const GprHyperparameters& hyperparameters() const { return hyper_; }
  double target_mean() const { return target_mean_; }
  bool centered() const { return centered_; }
  double jitter() const { return jitter_; }
  const Vector& weights() const { return alpha_; }
  Index dimension() const { return inputs_.cols(); }
  double log_marginal_likelihood() const { return log_likelihood_; }

  Vector kernel_vector(const Vector& x) const;

 private:
  friend GprPrediction predict(const GprModel&, const Vector&);

  Matrix inputs_;
  Vector targets_;
  GprHyperparameters hyper_;
  double target_mean_ = 0.0;
  bool centered_ = true;
  double jitter_ = 0.0;
  Eigen::LLT<Matrix> llt_;
  Vector alpha_;
  double log_likelihood_ = 0.0;
};

/// Log marginal likelihood at the given hyperparameters; -inf when the
/// kernel matrix cannot be factorized.
double log_marginal_likelihood(const Matrix& inputs, const Vector& centered_targets,
                               const GprHyperparameters& hyper);

/// Fit with optional multi-start coordinate search on the likelihood.
GprModel fit_gpr(const Matrix& inputs, const Vector& targets, const GprOptions& options = {});

/// Posterior mean and variance (variance clamped at 0). Throws InputError on
/// dimension mismatch.
GprPrediction predict(const GprModel& model, const Vector& x);

/// Analytic gradient of the posterior mean with respect to x.
Vector posterior_mean_gradient(const GprModel& model, const Vector& x);

}  // namespace aerorom
