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

#include "aerorom/dmd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "aerorom/errors.hpp"

namespace aerorom {

SnapshotEnsemble::SnapshotEnsemble(Matrix values, double t0, double dt,
                                   std::vector<std::string> sample_ids)
    : values_(std::move(values)), t0_(t0), dt_(dt), sample_ids_(std::move(sample_ids)) {
  if (values_.rows() < 1 || values_.cols() < 2) {
    throw InputError("SnapshotEnsemble: need at least 1 sample and 2 instants");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_) || !std::isfinite(t0_)) {
    throw InputError("SnapshotEnsemble: dt must be positive and finite");
  }
  if (sample_ids_.empty()) {
    sample_ids_.reserve(static_cast<std::size_t>(values_.rows()));
    for (Index i = 0; i < values_.rows(); ++i) sample_ids_.push_back("s" + std::to_string(i));
  }
  if (static_cast<Index>(sample_ids_.size()) != values_.rows()) {
    throw InputError("SnapshotEnsemble: one id per sample required");
  }
}

SnapshotEnsemble SnapshotEnsemble::from_times(Matrix values, const Vector& times,
                                              std::vector<std::string> sample_ids) {
  if (times.size() < 2 || times.size() != values.cols()) {
    throw InputError("SnapshotEnsemble: need one time per column and at least 2 instants");
  }
  const Index m = times.size();
  const double dt = (times(m - 1) - times(0)) / static_cast<double>(m - 1);
  const double floor =
      8.0 * std::numeric_limits<double>::epsilon() * times.cwiseAbs().maxCoeff();
  for (Index j = 0; j + 1 < m; ++j) {
    if (std::abs(times(j + 1) - times(j) - dt) > 1e-12 * dt + floor) {
      throw InputError("SnapshotEnsemble: instants are not equispaced");
    }
  }
  return SnapshotEnsemble(std::move(values), times(0), dt, std::move(sample_ids));
}

Vector SnapshotEnsemble::times() const {
  Vector t(instants());
  for (Index j = 0; j < instants(); ++j) t(j) = time(j);
  return t;
}

void RankSpec::validate(Index max_rank) const {
  if (mode == Mode::kFixed) {
    if (value != std::floor(value) || value < 1.0 || value > static_cast<double>(max_rank)) {
      throw InputError("RankSpec: fixed rank must be an integer in [1, " +
                       std::to_string(max_rank) + "]");
    }
  } else if (!(value > 0.0 && value <= 1.0)) {
    throw InputError("RankSpec: energy fraction must lie in (0, 1]");
  }
}

std::pair<Matrix, Matrix> build_snapshot_matrices(const SnapshotEnsemble& ensemble) {
  const Index m = ensemble.instants();
  if (m < 2) throw InputError("build_snapshot_matrices: need at least 2 snapshots");
  return {ensemble.values().leftCols(m - 1), ensemble.values().rightCols(m - 1)};
}

Index select_rank(const Vector& sigma, const RankSpec& spec, Index max_dim) {
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) {
    throw FitError("select_rank: all singular values are zero");
  }
  if (max_dim <= 0) max_dim = sigma.size();
  const double floor = singular_value_floor(sigma, max_dim);
  Index usable = 0;
  while (usable < sigma.size() && sigma(usable) > floor) ++usable;

  if (spec.mode == RankSpec::Mode::kFixed) {
    return std::min(static_cast<Index>(spec.value), usable);
  }
  const double total = sigma.squaredNorm();
  double cumulative = 0.0;
  for (Index r = 0; r < sigma.size(); ++r) {
    cumulative += sigma(r) * sigma(r);
    if (cumulative / total >= spec.value) return std::min(r + 1, usable);
  }
  return usable;
}

DmdModel fit_dmd(const SnapshotEnsemble& ensemble, const RankSpec& spec) {
  if (!ensemble.values().allFinite()) throw InputError("fit_dmd: non-finite snapshot data");
  const Index ns = ensemble.samples();
  const Index m = ensemble.instants();
  spec.validate(std::min(ns, m - 1));

  const auto [X, Y] = build_snapshot_matrices(ensemble);
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const Index r = select_rank(sigma, spec, std::max(ns, m));

  const Matrix U = svd.matrixU().leftCols(r);
  const Vector inv_sigma = sigma.head(r).cwiseInverse();
  // Y V S^-1, shared by the reduced operator and the exact modes
  const Matrix YVS = (Y * svd.matrixV().leftCols(r)) * inv_sigma.asDiagonal();
  const Matrix reduced = U.transpose() * YVS;

  Eigen::EigenSolver<Matrix> eig(reduced, true);
  if (eig.info() != Eigen::Success) throw FitError("fit_dmd: eigendecomposition failed");

  std::vector<Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), Index{0});
  const ComplexVector& lambda = eig.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(lambda(a));
    const double mb = std::abs(lambda(b));
    if (ma != mb) return ma > mb;
    return lambda(a).imag() > lambda(b).imag();
  });

  DmdModel model;
  model.rank = r;
  model.dt = ensemble.dt();
  model.t0 = ensemble.t0();
  model.singular_values = sigma;
  model.eigenvalues.resize(r);
  ComplexMatrix W(r, r);
  for (Index k = 0; k < r; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    model.eigenvalues(k) = lambda(src);
    W.col(k) = eig.eigenvectors().col(src);
  }
  model.modes = YVS.cast<Complex>() * W;

  const ComplexVector first = ensemble.values().col(0).cast<Complex>();
  model.amplitudes = model.modes.completeOrthogonalDecomposition().solve(first);
  if (!model.modes.allFinite() || !model.amplitudes.allFinite()) {
    throw FitError("fit_dmd: non-finite modes or amplitudes");
  }
  return model;
}

Complex eigenvalue_power(Complex lambda, double steps) {
  if (steps == 0.0) return {1.0, 0.0};
  if (lambda == Complex(0.0, 0.0)) return {0.0, 0.0};
  return std::exp(steps * std::log(lambda));
}

ComplexVector forecast_complex(const DmdModel& model, double t) {
  if (!(t >= model.t0)) {
    throw InputError("forecast: t precedes the first training instant");
  }
  const double steps = (t - model.t0) / model.dt;
  ComplexVector coeff(model.rank);
  for (Index k = 0; k < model.rank; ++k) {
    coeff(k) = eigenvalue_power(model.eigenvalues(k), steps) * model.amplitudes(k);
  }
  return model.modes * coeff;
}

Vector forecast(const DmdModel& model, double t) { return forecast_complex(model, t).real(); }

double reconstruction_error(const DmdModel& model, const SnapshotEnsemble& ensemble) {
  if (ensemble.samples() != model.state_size()) {
    throw InputError("reconstruction_error: state size mismatch");
  }
  double err2 = 0.0;
  for (Index j = 0; j < ensemble.instants(); ++j) {
    const ComplexVector x = forecast_complex(model, ensemble.time(j));
    err2 += (ensemble.values().col(j) - x.real()).squaredNorm();
  }
  const double norm2 = ensemble.values().squaredNorm();
  return norm2 > 0.0 ? std::sqrt(err2 / norm2) : std::sqrt(err2);
}

}  // namespace aerorom
