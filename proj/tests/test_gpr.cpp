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

#include "aerorom/errors.hpp"
#include "aerorom/gpr.hpp"
#include "test_support.hpp"

using namespace aerorom;

namespace {

double smooth_target(const Vector& x) {
  double s = 0.0;
  for (Index j = 0; j < x.size(); ++j) s += std::sin(1.3 * x(j) + 0.2 * static_cast<double>(j));
  return s / static_cast<double>(x.size()) + 0.3 * x(0) * x(0);
}

GprModel fixed_model(const Matrix& x, const Vector& y, double l, double sf2, double sn2,
                     bool center) {
  GprOptions o;
  o.optimize = false;
  o.center_targets = center;
  o.hyperparameters = {l, sf2, sn2};
  return fit_gpr(x, y, o);
}

}  // namespace

TEST_CASE("squared-exponential kernel") {
  const Vector x = Eigen::Vector3d(0.1, -0.4, 0.9);
  CHECK(se_kernel(x, x, 0.7, 2.5) == 2.5);
  const Vector y = x + Eigen::Vector3d(1.0, 0.0, 0.0) * 0.7 * std::sqrt(2.0);
  CHECK(se_kernel(x, y, 0.7, 2.5) == doctest::Approx(2.5 * std::exp(-1.0)).epsilon(1e-14));
  testing::Generator gen(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector a = gen.vector(4), b = gen.vector(4);
    CHECK(se_kernel(a, b, 0.5, 1.3) == se_kernel(b, a, 0.5, 1.3));
    CHECK(se_kernel(a, b, 0.5, 1.3) <= 1.3);
  }
}

TEST_CASE("one training point has a closed-form posterior") {
  Matrix x(1, 2);
  x << 0.2, -0.3;
  const Vector y = Vector::Constant(1, 1.7);
  const double l = 0.6;
  const GprModel m = fixed_model(x, y, l, 1.0, 0.0, false);
  CHECK(predict(m, x.row(0).transpose()).mean == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(predict(m, x.row(0).transpose()).variance <= 1e-8);
  testing::Generator gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector q = gen.vector(2);
    const Vector dx = q - x.row(0).transpose();
    const double closed = 1.7 * std::exp(-dx.squaredNorm() / (2 * l * l));
    CHECK(std::abs(predict(m, q).mean - closed) < 1e-12);
    const Vector grad = -closed * dx / (l * l);
    CHECK((posterior_mean_gradient(m, q) - grad).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("far from the data the prior returns") {
  testing::Generator gen(3);
  const Matrix x = gen.matrix(10, 3);
  Vector y(10);
  for (Index i = 0; i < 10; ++i) y(i) = smooth_target(x.row(i));
  const Vector far = Vector::Constant(3, 50.0);

  const GprModel raw = fixed_model(x, y, 0.5, 2.0, 0.0, false);
  CHECK(std::abs(predict(raw, far).mean) < 1e-12);
  CHECK(predict(raw, far).variance == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(posterior_mean_gradient(raw, far).norm() < 1e-8);

  const GprModel centered = fixed_model(x, y, 0.5, 2.0, 0.0, true);
  CHECK(predict(centered, far).mean == doctest::Approx(y.mean()).epsilon(1e-12));
}

TEST_CASE("symmetric pair has a flat mean at the midpoint") {
  Matrix x(2, 2);
  x << -0.5, 0.3, 0.5, -0.1;
  const GprModel m = fixed_model(x, Vector::Constant(2, 0.8), 0.7, 1.0, 0.0, false);
  const Vector mid = 0.5 * (x.row(0) + x.row(1)).transpose();
  CHECK(posterior_mean_gradient(m, mid).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("zero-noise fits interpolate") {
  testing::Generator gen(4);
  for (Index p : {2, 6, 10}) {
    const Matrix x = gen.matrix(20, p);
    Vector y(20);
    for (Index i = 0; i < 20; ++i) y(i) = smooth_target(x.row(i));
    const GprModel m = fixed_model(x, y, 0.8, 1.0, 0.0, true);
    for (Index i = 0; i < 20; ++i) {
      const GprPrediction pr = predict(m, x.row(i).transpose());
      CHECK(std::abs(pr.mean - y(i)) <= 1e-6 * y.cwiseAbs().maxCoeff());
      CHECK(pr.variance <= 1e-8);
    }
  }
}

TEST_CASE("posterior variance is never negative") {
  testing::Generator gen(5);
  const Matrix x = gen.matrix(30, 4);
  Vector y(30);
  for (Index i = 0; i < 30; ++i) y(i) = smooth_target(x.row(i));
  const GprModel m = fit_gpr(x, y);
  for (int q = 0; q < 10000; ++q) CHECK(predict(m, gen.vector(4, -1.5, 1.5)).variance >= 0.0);
}

TEST_CASE("posterior mean gradient matches central differences") {
  testing::Generator gen(6);
  const double h = 1e-5;
  for (Index p : {2, 6, 10}) {
    const Matrix x = gen.matrix(20, p);
    Vector y(20);
    for (Index i = 0; i < 20; ++i) y(i) = smooth_target(x.row(i));
    const GprModel m = fit_gpr(x, y);
    double worst = 0.0;
    for (int q = 0; q < 100; ++q) {
      const Vector at = gen.vector(p);
      const Vector g = posterior_mean_gradient(m, at);
      for (Index j = 0; j < p; ++j) {
        Vector plus = at, minus = at;
        plus(j) += h;
        minus(j) -= h;
        const double fd = (predict(m, plus).mean - predict(m, minus).mean) / (2 * h);
        worst = std::max(worst, std::abs(fd - g(j)));
      }
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("more data never increases the variance") {
  testing::Generator gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Index p = gen.integer(1, 5);
    const Matrix x = gen.matrix(12, p);
    Vector y(12);
    for (Index i = 0; i < 12; ++i) y(i) = smooth_target(x.row(i));
    const double l = gen.uniform(0.3, 1.5);
    const GprModel small = fixed_model(x.topRows(11), y.head(11), l, 1.0, 1e-6, true);
    const GprModel large = fixed_model(x, y, l, 1.0, 1e-6, true);
    for (int q = 0; q < 50; ++q) {
      const Vector at = gen.vector(p);
      CHECK(predict(large, at).variance <= predict(small, at).variance + 1e-10);
    }
  }
}

TEST_CASE("likelihood optimization") {
  testing::Generator gen(8);
  const Matrix x = gen.matrix(25, 3);
  Vector y(25);
  for (Index i = 0; i < 25; ++i) y(i) = smooth_target(x.row(i));
  const GprModel a = fit_gpr(x, y);
  const GprModel b = fit_gpr(x, y);
  CHECK(a.hyperparameters().lengthscale == b.hyperparameters().lengthscale);
  CHECK(a.weights() == b.weights());
  const GprModel start = fixed_model(x, y, 1.0, 1.0, 0.0, true);
  CHECK(a.log_marginal_likelihood() >= start.log_marginal_likelihood());
  const Vector centered = y.array() - y.mean();
  CHECK(log_marginal_likelihood(x, centered, a.hyperparameters()) ==
        doctest::Approx(a.log_marginal_likelihood()).epsilon(1e-9));
}

TEST_CASE("invalid training data is rejected") {
  Matrix x(3, 2);
  x << 0, 0, 1, 1, 0, 0;
  CHECK_THROWS_AS(fixed_model(x, Eigen::Vector3d(1, 2, 3), 1.0, 1.0, 0.0, true), InputError);
  CHECK_NOTHROW(fixed_model(x, Eigen::Vector3d(1, 2, 1), 1.0, 1.0, 0.1, true));
  CHECK_THROWS_AS(fit_gpr(x, Vector::Ones(2)), InputError);
  CHECK_THROWS_AS(fit_gpr(Matrix(0, 2), Vector(0)), InputError);
  CHECK_THROWS_AS(fixed_model(x.topRows(2), Vector::Ones(2), -1.0, 1.0, 0.0, true), InputError);
  const GprModel m = fixed_model(x.topRows(2), Vector::Ones(2), 1.0, 1.0, 0.0, true);
  CHECK_THROWS_AS(predict(m, Vector::Zero(3)), InputError);
  CHECK_THROWS_AS(posterior_mean_gradient(m, Vector::Zero(1)), InputError);
}

TEST_CASE("nearly coincident inputs climb the jitter ladder") {
  Matrix x(3, 1);
  x << 0.0, 1e-9, 1.0;
  const GprModel m = fixed_model(x, Eigen::Vector3d(0.0, 0.0, 1.0), 2.0, 1.0, 0.0, false);
  CHECK(m.jitter() > 0.0);
  CHECK(m.jitter() <= 1e-6);
}
