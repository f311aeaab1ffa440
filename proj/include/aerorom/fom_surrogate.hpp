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

#include <vector>

#include "aerorom/active_subspaces.hpp"
#include "aerorom/dmd.hpp"
#include "aerorom/types.hpp"

namespace aerorom {

/// Analytic stand-in for the flow solver's lift history:
///
///   f(mu, t) = (baseline + a . m)(1 - e1) + (g . m) e2 cos(omega t)
///            + (p . m)(e1 - e2 cos(omega t)) + (h . m) e2 sin(omega t)
///
/// with e1 = exp(-t/tau1), e2 = exp(-t/tau2) and m the parameters mapped onto
/// [0,1]^k. f(mu, 0) = g . m and f -> baseline + a . m as t grows.
///
/// The time dynamics span four discrete eigenvalues shared by every mu. The
/// p and h terms give the decaying rise and the sine quadrature their own
/// spatial patterns; with p = h = 0 the ensemble collapses to rank 2 and no
/// linear operator on the sample space reproduces it.
struct SurrogateSpec {
  double baseline = 0.355;
  /// a
  Vector steady_weights;
  /// g
  Vector transient_weights;
  /// p
  Vector relaxation_weights;
  /// h
  Vector quadrature_weights;
  double tau1 = 3.0;
  double tau2 = 5.0;
  double omega = 1.0;
  /// 0-based indices whose weights must be exactly zero.
  std::vector<Index> frozen_indices;
  ParameterDomain domain;

  /// Planted ridge mirroring the airfoil study: frozen c1, c5, d1, d5 on
  /// [0, 0.03]^10.
  static SurrogateSpec default_spec();

  /// Throws InputError when a structural invariant is violated.
  void validate() const;
};

/// Throws InputError for mu outside the domain or t < 0.
double lift(const SurrogateSpec& spec, const Vector& mu, double t);

/// Exact gradient of `lift` with respect to the physical parameters.
Vector lift_gradient(const SurrogateSpec& spec, const Vector& mu, double t);

/// Equispaced instants t0 + j dt, j = 0 .. count-1.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 1.0;
  Index count = 2;
};

/// Ns x m lift matrix, one row per sample row of `samples`.
SnapshotEnsemble run_ensemble(const SurrogateSpec& spec, const Matrix& samples,
                              const TimeGrid& grid);

}  // namespace aerorom
