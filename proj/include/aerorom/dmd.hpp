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

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "aerorom/types.hpp"

namespace aerorom {

/// Ns x m matrix of a scalar output: row i is parameter sample i, column j is
/// the instant t0 + j dt.
class SnapshotEnsemble {
 public:
  /// Equispaced times are generated from (t0, dt). Sample ids default to
  /// "s0", "s1", ... when empty. Throws InputError when Ns < 1, m < 2,
  /// dt <= 0 or the id count does not match.
  SnapshotEnsemble(Matrix values, double t0, double dt,
                   std::vector<std::string> sample_ids = {});

  /// Builds an ensemble from explicit instants, checking they are equispaced
  /// to 1e-12 dt plus the rounding floor of the time magnitudes.
  static SnapshotEnsemble from_times(Matrix values, const Vector& times,
                                     std::vector<std::string> sample_ids = {});

  const Matrix& values() const { return values_; }
  Index samples() const { return values_.rows(); }
  Index instants() const { return values_.cols(); }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double time(Index j) const { return t0_ + static_cast<double>(j) * dt_; }
  Vector times() const;
  const std::vector<std::string>& sample_ids() const { return sample_ids_; }

 private:
  Matrix values_;
  double t0_;
  double dt_;
  std::vector<std::string> sample_ids_;
};

/// How many POD directions to keep.
struct RankSpec {
  enum class Mode { kFixed, kEnergy };

  Mode mode = Mode::kEnergy;
  double value = 1.0 - 1e-6;

  static RankSpec fixed(Index rank) { return {Mode::kFixed, static_cast<double>(rank)}; }
  static RankSpec energy(double fraction) { return {Mode::kEnergy, fraction}; }

  /// Throws InputError for a fixed rank outside [1, max_rank] or an energy
  /// fraction outside (0, 1].
  void validate(Index max_rank) const;
};

/// X = [x_1 .. x_{m-1}], Y = [x_2 .. x_m]. Throws InputError when m < 2.
std::pair<Matrix, Matrix> build_snapshot_matrices(const SnapshotEnsemble& ensemble);

/// Singular values below this are treated as zero.
inline double singular_value_floor(const Vector& sigma, Index max_dim) {
  return sigma.size() == 0 ? 0.0
                           : std::numeric_limits<double>::epsilon() * sigma(0) *
                                 static_cast<double>(max_dim);
}

/// Truncation rank from descending singular values. max_dim is max(Ns, m)
/// of the data the values came from (scales the zero floor); 0 means
/// sigma.size(). Throws FitError when every singular value is zero.
Index select_rank(const Vector& singular_values, const RankSpec& spec, Index max_dim = 0);

/// Exact DMD model: x(t) ~ Re(Phi diag(lambda^((t - t0)/dt)) b).
struct DmdModel {
  Index rank = 0;
  ComplexVector eigenvalues;
  ComplexMatrix modes;
  ComplexVector amplitudes;
  double dt = 0.0;
  double t0 = 0.0;
  /// Singular values of X, all of them (diagnostics).
  Vector singular_values;

  Index state_size() const { return modes.rows(); }
};

/// Fits exact DMD: truncated SVD of X, reduced operator U* Y V S^-1, its
/// eigenpairs, exact modes Y V S^-1 W, and least-squares amplitudes on the
/// first snapshot. Eigenpairs are ordered by decreasing magnitude with the
/// positive-imaginary member of each conjugate pair first.
/// Throws InputError for non-finite data or an invalid rank spec and FitError
/// for all-zero data.
DmdModel fit_dmd(const SnapshotEnsemble& ensemble, const RankSpec& spec);

/// lambda^steps on the principal branch; 0^0 = 1 and 0^s = 0 for s > 0.
Complex eigenvalue_power(Complex lambda, double steps);

/// Complex state at time t (before taking the real part).
ComplexVector forecast_complex(const DmdModel& model, double t);

/// Real part of the predicted state at time t >= t0. Throws InputError for
/// t < t0.
Vector forecast(const DmdModel& model, double t);

/// ||X_all - reconstruction||_F / ||X_all||_F over the ensemble instants.
double reconstruction_error(const DmdModel& model, const SnapshotEnsemble& ensemble);

}  // namespace aerorom
