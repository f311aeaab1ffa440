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

#include <doctest.h>

#include <cmath>

#include "aerorom/dmd.hpp"
#include "aerorom/errors.hpp"
#include "test_support.hpp"

using namespace aerorom;

namespace {

/// Columns x_{k+1} = A x_k starting from x0.
Matrix iterate(const Matrix& a, const Vector& x0, Index m) {
  Matrix x(x0.size(), m);
  x.col(0) = x0;
  for (Index k = 1; k < m; ++k) x.col(k) = a * x.col(k - 1);
  return x;
}

/// Real matrix with eigenvalues rho (real) and r e^{+-i theta} in a random basis.
Matrix rank4_operator(testing::Generator& gen, Index n, double rho0, double rho1, double r,
                      double theta) {
  Matrix core = Matrix::Zero(n, n);
  core(0, 0) = rho0;
  core(1, 1) = rho1;
  core.block(2, 2, 2, 2) << r * std::cos(theta), -r * std::sin(theta), r * std::sin(theta),
      r * std::cos(theta);
  const Matrix q = gen.matrix(n, n) + 2.0 * Matrix::Identity(n, n);
  return q * core * q.inverse();
}

bool contains(const ComplexVector& v, Complex z, double tol) {
  for (Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i) - z) < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("snapshot ensembles validate their shape") {
  CHECK_THROWS_AS(SnapshotEnsemble(Matrix::Ones(3, 1), 0.0, 1.0), InputError);
  CHECK_THROWS_AS(SnapshotEnsemble(Matrix::Ones(3, 4), 0.0, 0.0), InputError);
  CHECK_THROWS_AS(SnapshotEnsemble(Matrix::Ones(2, 4), 0.0, 1.0, {"a"}), InputError);
  const SnapshotEnsemble e(Matrix::Ones(2, 4), 12.0, 0.5);
  CHECK(e.sample_ids() == std::vector<std::string>{"s0", "s1"});
  CHECK(e.time(3) == 13.5);

  Vector t(4);
  t << 1.0, 1.1, 1.2, 1.3;
  CHECK(SnapshotEnsemble::from_times(Matrix::Ones(1, 4), t).dt() == doctest::Approx(0.1));
  t(2) = 1.25;
  CHECK_THROWS_AS(SnapshotEnsemble::from_times(Matrix::Ones(1, 4), t), InputError);
}

TEST_CASE("snapshot pairs are shifted by one instant") {
  Matrix v(2, 5);
  v << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
  const auto [x, y] = build_snapshot_matrices(SnapshotEnsemble(v, 0.0, 1.0));
  CHECK(x.cols() == 4);
  CHECK(x == v.leftCols(4));
  CHECK(y == v.rightCols(4));
  const auto [x2, y2] = build_snapshot_matrices(SnapshotEnsemble(v.leftCols(2), 0.0, 1.0));
  CHECK(x2 == v.col(0));
  CHECK(y2 == v.col(1));
}

TEST_CASE("rank selection") {
  CHECK(select_rank(Eigen::Vector3d(1, 0, 0), RankSpec::energy(0.99)) == 1);
  CHECK(select_rank(Eigen::Vector2d(3, 1), RankSpec::energy(0.9)) == 1);
  CHECK(select_rank(Eigen::Vector2d(3, 1), RankSpec::energy(0.95)) == 2);
  CHECK(select_rank(Eigen::Vector3d(5, 4, 1e-20), RankSpec::fixed(3)) == 2);
  CHECK(select_rank(Eigen::Vector3d(5, 4, 3), RankSpec::fixed(2)) == 2);
  CHECK_THROWS_AS(select_rank(Eigen::Vector3d::Zero(), RankSpec::energy(0.5)), FitError);
  CHECK_THROWS_AS(RankSpec::energy(0.0).validate(5), InputError);
  CHECK_THROWS_AS(RankSpec::energy(1.5).validate(5), InputError);
  CHECK_THROWS_AS(RankSpec::fixed(6).validate(5), InputError);
  CHECK_NOTHROW(RankSpec::fixed(5).validate(5));
}

TEST_CASE("a constant ensemble is a fixed point") {
  const Vector c = Eigen::Vector3d(0.3, -1.0, 2.0);
  const Matrix v = c.replicate(1, 10);
  const DmdModel m = fit_dmd(SnapshotEnsemble(v, 1.0, 0.1), RankSpec{});
  REQUIRE(m.rank == 1);
  CHECK(std::abs(m.eigenvalues(0) - Complex(1.0)) < 1e-10);
  for (double t : {1.0, 1.55, 7.0, 40.0}) CHECK((forecast(m, t) - c).norm() < 1e-10 * c.norm());
}

TEST_CASE("eigenvalues of a two-mode linear map") {
  testing::Generator gen(21);
  const Matrix q = gen.matrix(2, 2) + 2.0 * Matrix::Identity(2, 2);
  const Matrix a = q * Eigen::Vector2d(0.9, 0.5).asDiagonal() * q.inverse();
  const Matrix v = iterate(a, Eigen::Vector2d(1.0, -0.7), 20);
  const DmdModel m = fit_dmd(SnapshotEnsemble(v, 0.0, 1.0), RankSpec::fixed(2));
  CHECK(std::abs(m.eigenvalues(0) - Complex(0.9)) < 1e-8);
  CHECK(std::abs(m.eigenvalues(1) - Complex(0.5)) < 1e-8);
}

TEST_CASE("damped oscillation gives the closed-form conjugate pair") {
  const double tau = 4.0, omega = 2.5, dt = 0.05;
  Matrix v(2, 60);
  for (Index j = 0; j < 60; ++j) {
    const double t = static_cast<double>(j) * dt;
    v(0, j) = 1.3 * std::exp(-t / tau) * std::cos(omega * t);
    v(1, j) = 0.4 * std::exp(-t / tau) * std::cos(omega * t + 0.8);
  }
  const DmdModel m = fit_dmd(SnapshotEnsemble(v, 0.0, dt), RankSpec::fixed(2));
  REQUIRE(m.rank == 2);
  for (Index k = 0; k < 2; ++k) {
    CHECK(std::abs(std::abs(m.eigenvalues(k)) - std::exp(-dt / tau)) < 1e-6);
    CHECK(std::abs(std::abs(std::arg(m.eigenvalues(k))) - omega * dt) < 1e-6);
  }
  CHECK(m.eigenvalues(0).imag() > 0.0);
  CHECK(std::abs(m.eigenvalues(1) - std::conj(m.eigenvalues(0))) < 1e-10);
}

TEST_CASE("geometric growth is forecast exactly") {
  const Vector v0 = Eigen::Vector3d(0.2, -0.5, 1.0);
  Matrix x(3, 10);
  for (Index k = 0; k < 10; ++k) x.col(k) = std::pow(2.0, static_cast<double>(k)) * v0;
  const DmdModel m = fit_dmd(SnapshotEnsemble(x, 0.0, 1.0), RankSpec{});
  CHECK(m.rank == 1);
  for (int j = 0; j <= 30; ++j) {
    const Vector exact = std::pow(2.0, j) * v0;
    CHECK((forecast(m, j) - exact).norm() <= 1e-9 * exact.norm());
  }
}

TEST_CASE("linear exactness on generated rank-4 operators") {
  testing::Generator gen(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = gen.integer(4, 12);
    const double rho0 = gen.uniform(0.95, 1.0), rho1 = gen.uniform(0.6, 0.9);
    const double r = gen.uniform(0.9, 0.99), theta = gen.uniform(0.05, 0.5);
    const Matrix a = rank4_operator(gen, 4, rho0, rho1, r, theta);
    // lift the 4-d dynamics into n states through a fixed injective map
    const Matrix lift = gen.matrix(n, 4);
    const Matrix z = iterate(a, gen.vector(4) + Vector::Constant(4, 2.0), 30 + 50);
    const Matrix v = lift * z;
    const DmdModel m = fit_dmd(SnapshotEnsemble(v.leftCols(30), 0.0, 0.1), RankSpec::fixed(4));
    CHECK(m.rank == 4);
    CHECK(contains(m.eigenvalues, Complex(rho0), 1e-8));
    CHECK(contains(m.eigenvalues, Complex(rho1), 1e-8));
    CHECK(contains(m.eigenvalues, std::polar(r, theta), 1e-8));
    CHECK(contains(m.eigenvalues, std::polar(r, -theta), 1e-8));
    for (Index j = 29; j < 80; ++j) {
      const Vector exact = v.col(j);
      CHECK((forecast(m, 0.1 * static_cast<double>(j)) - exact).norm() <= 1e-6 * exact.norm());
    }
  }
}

TEST_CASE("eigenpairs belong to the full best-fit operator") {
  testing::Generator gen(5);
  const Matrix a = rank4_operator(gen, 4, 0.97, 0.7, 0.95, 0.3);
  const Matrix v = gen.matrix(6, 4) * iterate(a, Vector::Constant(4, 1.0), 25);
  const DmdModel m = fit_dmd(SnapshotEnsemble(v, 0.0, 1.0), RankSpec::fixed(4));
  const auto [x, y] = build_snapshot_matrices(SnapshotEnsemble(v, 0.0, 1.0));
  const ComplexMatrix full = (y * x.completeOrthogonalDecomposition().pseudoInverse()).cast<Complex>();
  for (Index k = 0; k < m.rank; ++k) {
    const ComplexVector phi = m.modes.col(k);
    CHECK((full * phi - m.eigenvalues(k) * phi).norm() < 1e-8 * phi.norm());
  }
}

TEST_CASE("conjugate symmetry and real forecasts on random data") {
  testing::Generator gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix v = gen.matrix(8, 25);
    const DmdModel m = fit_dmd(SnapshotEnsemble(v, 0.0, 1.0), RankSpec::fixed(6));
    for (Index k = 0; k < m.rank; ++k) {
      if (m.eigenvalues(k).imag() <= 0.0) continue;
      REQUIRE(k + 1 < m.rank);
      CHECK(std::abs(m.eigenvalues(k + 1) - std::conj(m.eigenvalues(k))) < 1e-10);
      CHECK((m.modes.col(k + 1) - m.modes.col(k).conjugate()).norm() < 1e-10 * m.modes.col(k).norm());
      CHECK(std::abs(m.amplitudes(k + 1) - std::conj(m.amplitudes(k))) <
            1e-10 * std::max(1.0, std::abs(m.amplitudes(k))));
    }
    // random operators may carry negative real eigenvalues, whose
    // fractional powers are genuinely complex: check whole steps here
    for (double t : {0.0, 3.0, 7.0, 24.0}) {
      const ComplexVector z = forecast_complex(m, t);
      CHECK(z.imag().cwiseAbs().maxCoeff() < 1e-8 * z.real().cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("fractional-step forecasts of sampled smooth dynamics are real") {
  testing::Generator gen(9);
  const Matrix a = rank4_operator(gen, 4, 0.99, 0.9, 0.98, 0.2);
  const Matrix v = gen.matrix(10, 4) * iterate(a, Vector::Constant(4, 1.0), 30);
  const DmdModel m = fit_dmd(SnapshotEnsemble(v, 0.0, 0.1), RankSpec::fixed(4));
  for (double t : {0.05, 0.77, 2.93, 6.01}) {
    const ComplexVector z = forecast_complex(m, t);
    CHECK(z.imag().cwiseAbs().maxCoeff() < 1e-8 * z.real().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("zero-step forecast reproduces the first snapshot on consistent data") {
  testing::Generator gen(13);
  const Matrix a = rank4_operator(gen, 4, 0.97, 0.8, 0.95, 0.4);
  const Matrix v = gen.matrix(7, 4) * iterate(a, Vector::Constant(4, 1.0), 30);
  for (Index r = 4; r <= 6; ++r) {
    const DmdModel m = fit_dmd(SnapshotEnsemble(v, 2.0, 0.5), RankSpec::fixed(r));
    Eigen::BDCSVD<Matrix> svd(v.leftCols(29), Eigen::ComputeThinU);
    const Matrix u = svd.matrixU().leftCols(m.rank);
    const Vector x0 = v.col(0);
    const double pod = (x0 - u * (u.transpose() * x0)).norm();
    CHECK((forecast(m, 2.0) - x0).norm() <= pod + 1e-10 * x0.norm());
  }
}

TEST_CASE("POD projection error of the training snapshots does not grow with rank") {
  testing::Generator gen(17);
  const Matrix v = gen.matrix(9, 40);
  const auto [x, y] = build_snapshot_matrices(SnapshotEnsemble(v, 0.0, 1.0));
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU);
  double previous = INFINITY;
  for (Index r = 1; r <= 9; ++r) {
    const Matrix u = svd.matrixU().leftCols(r);
    const double err = (x - u * (u.transpose() * x)).norm() / x.norm();
    CHECK(err <= previous + 1e-12);
    previous = err;
  }
  CHECK(previous < 1e-12);
}

TEST_CASE("reconstruction becomes exact once the rank covers the dynamics") {
  testing::Generator gen(18);
  const Matrix a = rank4_operator(gen, 4, 0.99, 0.8, 0.97, 0.2);
  const Matrix v = gen.matrix(9, 4) * iterate(a, Vector::Constant(4, 1.0), 40);
  const SnapshotEnsemble e(v, 0.0, 1.0);
  for (Index r = 4; r <= 8; ++r) {
    CHECK(reconstruction_error(fit_dmd(e, RankSpec::fixed(r)), e) < 1e-10);
  }
}

TEST_CASE("forecasting and fitting reject bad input") {
  const DmdModel m = fit_dmd(SnapshotEnsemble(Matrix::Ones(2, 5), 10.0, 1.0), RankSpec{});
  CHECK_THROWS_AS(forecast(m, 9.999), InputError);
  Matrix nan = Matrix::Ones(2, 5);
  nan(1, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_dmd(SnapshotEnsemble(nan, 0.0, 1.0), RankSpec{}), InputError);
  CHECK_THROWS_AS(fit_dmd(SnapshotEnsemble(Matrix::Zero(2, 5), 0.0, 1.0), RankSpec{}), FitError);
  CHECK_THROWS_AS(fit_dmd(SnapshotEnsemble(Matrix::Ones(2, 5), 0.0, 1.0), RankSpec::fixed(3)),
                  InputError);
}

TEST_CASE("eigenvalue powers") {
  CHECK(eigenvalue_power(Complex(0.0), 0.0) == Complex(1.0));
  CHECK(eigenvalue_power(Complex(0.0), 2.5) == Complex(0.0));
  CHECK(std::abs(eigenvalue_power(Complex(0.5), 3.0) - Complex(0.125)) < 1e-15);
  CHECK(std::abs(eigenvalue_power(Complex(0.0, 1.0), 2.0) - Complex(-1.0)) < 1e-15);
}
