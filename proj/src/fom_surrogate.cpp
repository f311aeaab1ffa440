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

#include "aerorom/fom_surrogate.hpp"

#include <cmath>
#include <string>

#include "aerorom/errors.hpp"

namespace aerorom {

SurrogateSpec SurrogateSpec::default_spec() {
  SurrogateSpec spec;
  spec.steady_weights.resize(10);
  spec.steady_weights << 0.0, 0.05, 0.15, 0.12, 0.0, 0.0, 0.04, 0.18, 0.15, 0.0;
  spec.transient_weights.resize(10);
  spec.transient_weights << 0.0, 0.02, 0.0, 0.05, 0.0, 0.0, -0.05, 0.03, 0.0, 0.0;
  spec.relaxation_weights.resize(10);
  spec.relaxation_weights << 0.0, 0.03, -0.02, 0.04, 0.0, 0.0, 0.03, -0.03, 0.02, 0.0;
  spec.quadrature_weights.resize(10);
  spec.quadrature_weights << 0.0, -0.03, 0.02, 0.02, 0.0, 0.0, 0.04, 0.03, -0.03, 0.0;
  spec.frozen_indices = {0, 4, 5, 9};
  spec.domain = ParameterDomain::box(10, 0.0, 0.03);
  return spec;
}

void SurrogateSpec::validate() const {
  domain.validate();
  const Index k = domain.dimension();
  if (steady_weights.size() != k || transient_weights.size() != k ||
      relaxation_weights.size() != k || quadrature_weights.size() != k) {
    throw InputError("SurrogateSpec: weight vectors must match the domain dimension");
  }
  if (!(tau1 > 0.0) || !(tau2 > 0.0) || !std::isfinite(omega) || !std::isfinite(baseline)) {
    throw InputError("SurrogateSpec: decay times must be positive");
  }
  if (steady_weights.isZero(0.0) && transient_weights.isZero(0.0) &&
      relaxation_weights.isZero(0.0) && quadrature_weights.isZero(0.0)) {
    throw InputError("SurrogateSpec: at least one weight vector must be nonzero");
  }
  for (Index j : frozen_indices) {
    if (j < 0 || j >= k) throw InputError("SurrogateSpec: frozen index out of range");
    if (steady_weights(j) != 0.0 || transient_weights(j) != 0.0 ||
        relaxation_weights(j) != 0.0 || quadrature_weights(j) != 0.0) {
      throw InputError("SurrogateSpec: nonzero weight at frozen index " + std::to_string(j + 1));
    }
  }
}

namespace {

void check_point(const SurrogateSpec& spec, const Vector& mu, double t) {
  if (!spec.domain.contains(mu)) throw InputError("lift: mu outside the parameter domain");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("lift: t must be finite and >= 0");
}

Vector unit_coordinates(const SurrogateSpec& spec, const Vector& mu) {
  return ((mu - spec.domain.lower).array() / (spec.domain.upper - spec.domain.lower).array())
      .matrix();
}

}  // namespace

double lift(const SurrogateSpec& spec, const Vector& mu, double t) {
  check_point(spec, mu, t);
  const Vector m = unit_coordinates(spec, mu);
  const double e1 = std::exp(-t / spec.tau1);
  const double e2 = std::exp(-t / spec.tau2);
  const double c = e2 * std::cos(spec.omega * t);
  const double s = e2 * std::sin(spec.omega * t);
  return (spec.baseline + spec.steady_weights.dot(m)) * (1.0 - e1) +
         spec.transient_weights.dot(m) * c + spec.relaxation_weights.dot(m) * (e1 - c) +
         spec.quadrature_weights.dot(m) * s;
}

Vector lift_gradient(const SurrogateSpec& spec, const Vector& mu, double t) {
  check_point(spec, mu, t);
  const double e1 = std::exp(-t / spec.tau1);
  const double e2 = std::exp(-t / spec.tau2);
  const double c = e2 * std::cos(spec.omega * t);
  const double s = e2 * std::sin(spec.omega * t);
  const Vector dm = (1.0 - e1) * spec.steady_weights + c * spec.transient_weights +
                    (e1 - c) * spec.relaxation_weights + s * spec.quadrature_weights;
  return (dm.array() / (spec.domain.upper - spec.domain.lower).array()).matrix();
}

SnapshotEnsemble run_ensemble(const SurrogateSpec& spec, const Matrix& samples,
                              const TimeGrid& grid) {
  spec.validate();
  if (samples.rows() < 1) throw InputError("run_ensemble: no samples");
  if (grid.count < 1 || !(grid.dt > 0.0)) throw InputError("run_ensemble: empty time grid");
  Matrix values(samples.rows(), grid.count);
  for (Index i = 0; i < samples.rows(); ++i) {
    const Vector mu = samples.row(i).transpose();
    for (Index j = 0; j < grid.count; ++j) {
      values(i, j) = lift(spec, mu, grid.t0 + static_cast<double>(j) * grid.dt);
    }
  }
  return SnapshotEnsemble(std::move(values), grid.t0, grid.dt);
}

}  // namespace aerorom
