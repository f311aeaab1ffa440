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

#include "aerorom/gpr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "aerorom/errors.hpp"

namespace aerorom {

namespace {

constexpr std::array<double, 6> kJitterLadder{0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};
constexpr double kMinRcond = 1e-13;

Matrix kernel_matrix(const Matrix& x, const GprHyperparameters& hyper) {
  const Index n = x.rows();
  Matrix k(n, n);
  for (Index j = 0; j < n; ++j) {
    k(j, j) = hyper.signal_variance;
    for (Index i = j + 1; i < n; ++i) {
      k(i, j) = k(j, i) =
          se_kernel(x.row(i), x.row(j), hyper.lengthscale, hyper.signal_variance);
    }
  }
  return k;
}

struct Factorization {
  Eigen::LLT<Matrix> llt;
  double jitter = 0.0;
};

std::optional<Factorization> factorize(const Matrix& inputs, const GprHyperparameters& hyper) {
  const Matrix k = kernel_matrix(inputs, hyper);
  for (double rung : kJitterLadder) {
    const double jitter = rung * hyper.signal_variance;
    Matrix a = k;
    a.diagonal().array() += hyper.noise_variance + jitter;
    Factorization f{Eigen::LLT<Matrix>(a), jitter};
    if (f.llt.info() == Eigen::Success && f.llt.rcond() > kMinRcond) return f;
  }
  return std::nullopt;
}

double likelihood_from(const Eigen::LLT<Matrix>& llt, const Vector& y, const Vector& alpha) {
  const auto n = static_cast<double>(y.size());
  const double log_det_half = llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * y.dot(alpha) - log_det_half - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

bool has_duplicate_rows(const Matrix& x) {
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = i + 1; j < x.rows(); ++j) {
      if (x.row(i) == x.row(j)) return true;
    }
  }
  return false;
}

void check_data(const Matrix& inputs, const Vector& targets) {
  if (inputs.rows() < 1 || inputs.cols() < 1) throw InputError("fit_gpr: no training data");
  if (targets.size() != inputs.rows()) throw InputError("fit_gpr: one target per input row");
  if (!inputs.allFinite() || !targets.allFinite()) throw InputError("fit_gpr: non-finite data");
}

GprHyperparameters from_log(const std::array<double, 3>& theta) {
  return {std::exp(theta[0]), std::exp(theta[1]), std::exp(theta[2])};
}

}  // namespace

double log_marginal_likelihood(const Matrix& inputs, const Vector& y,
                               const GprHyperparameters& hyper) {
  const auto f = factorize(inputs, hyper);
  if (!f) return -std::numeric_limits<double>::infinity();
  return likelihood_from(f->llt, y, f->llt.solve(y));
}

GprModel GprModel::assemble(Matrix inputs, Vector targets, const GprHyperparameters& hyper,
                            bool center_targets) {
  check_data(inputs, targets);
  if (!(hyper.lengthscale > 0.0) || !(hyper.signal_variance > 0.0) ||
      !(hyper.noise_variance >= 0.0)) {
    throw InputError("GprModel: require l > 0, sf2 > 0, sn2 >= 0");
  }
  if (hyper.noise_variance == 0.0 && has_duplicate_rows(inputs)) {
    throw InputError("GprModel: duplicate training inputs with zero noise");
  }

  GprModel model;
  model.hyper_ = hyper;
  model.centered_ = center_targets;
  model.target_mean_ = center_targets ? targets.mean() : 0.0;
  auto f = factorize(inputs, hyper);
  if (!f) {
    throw FitError("GprModel: kernel matrix not positive definite after jitter " +
                   std::to_string(kJitterLadder.back()));
  }
  model.inputs_ = std::move(inputs);
  model.targets_ = std::move(targets);
  model.jitter_ = f->jitter;
  model.llt_ = std::move(f->llt);
  const Vector centered = model.targets_.array() - model.target_mean_;
  model.alpha_ = model.llt_.solve(centered);
  model.log_likelihood_ = likelihood_from(model.llt_, centered, model.alpha_);
  return model;
}

Vector GprModel::kernel_vector(const Vector& x) const {
  Vector k(inputs_.rows());
  for (Index i = 0; i < inputs_.rows(); ++i) {
    k(i) = se_kernel(inputs_.row(i).transpose(), x, hyper_.lengthscale, hyper_.signal_variance);
  }
  return k;
}

GprModel fit_gpr(const Matrix& inputs, const Vector& targets, const GprOptions& options) {
  check_data(inputs, targets);
  if (!options.optimize) {
    return GprModel::assemble(inputs, targets, options.hyperparameters, options.center_targets);
  }

  const double mean = options.center_targets ? targets.mean() : 0.0;
  const Vector y = targets.array() - mean;
  double scale = y.squaredNorm() / static_cast<double>(y.size());
  if (!(scale > 0.0)) scale = 1.0;
  const double ls = std::log(scale);

  const std::array<double, 3> lo{std::log(1e-2), ls + std::log(1e-4),
                                 ls + std::log(options.min_noise_ratio)};
  const std::array<double, 3> hi{std::log(1e2), ls + std::log(1e6), ls};

  auto objective = [&](const std::array<double, 3>& theta) {
    return log_marginal_likelihood(inputs, y, from_log(theta));
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int starts = std::max(1, options.restarts);

  std::array<double, 3> best_theta{};
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    const double frac = starts == 1 ? 0.5 : static_cast<double>(s) / (starts - 1);
    std::array<double, 3> theta{std::log(0.1) + frac * (std::log(10.0) - std::log(0.1)),
                                ls + 2.0 * unit(rng), ls + std::log(1e-6) + 2.0 * unit(rng)};
    for (int d = 0; d < 3; ++d) theta[d] = std::clamp(theta[d], lo[d], hi[d]);

    double value = objective(theta);
    double step = 1.0;
    int evaluations = 1;
    while (step > 1e-4 && evaluations < options.max_evaluations_per_start) {
      bool improved = false;
      for (int d = 0; d < 3; ++d) {
        for (double sign : {1.0, -1.0}) {
          std::array<double, 3> trial = theta;
          trial[d] = std::clamp(theta[d] + sign * step, lo[d], hi[d]);
          if (trial[d] == theta[d]) continue;
          const double v = objective(trial);
          ++evaluations;
          if (v > value) {
            value = v;
            theta = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (value > best) {
      best = value;
      best_theta = theta;
    }
  }
  if (!std::isfinite(best)) throw FitError("fit_gpr: likelihood is not finite at any start");
  return GprModel::assemble(inputs, targets, from_log(best_theta), options.center_targets);
}

GprPrediction predict(const GprModel& model, const Vector& x) {
  if (x.size() != model.dimension()) throw InputError("predict: dimension mismatch");
  const Vector k = model.kernel_vector(x);
  GprPrediction out;
  out.mean = model.target_mean_ + k.dot(model.alpha_);
  const Vector v = model.llt_.matrixL().solve(k);
  out.variance = std::max(0.0, model.hyper_.signal_variance - v.squaredNorm());
  return out;
}

Vector posterior_mean_gradient(const GprModel& model, const Vector& x) {
  if (x.size() != model.dimension()) {
    throw InputError("posterior_mean_gradient: dimension mismatch");
  }
  const Vector k = model.kernel_vector(x);
  const double l2 = model.hyperparameters().lengthscale * model.hyperparameters().lengthscale;
  Vector g = Vector::Zero(x.size());
  for (Index i = 0; i < model.inputs().rows(); ++i) {
    g += (model.weights()(i) * k(i) / l2) * (model.inputs().row(i).transpose() - x);
  }
  return g;
}

}  // namespace aerorom
