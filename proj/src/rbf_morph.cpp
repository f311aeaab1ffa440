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

#include "aerorom/rbf_morph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "aerorom/errors.hpp"

namespace aerorom {

namespace {

constexpr double kMinRcond = 1e-14;

}  // namespace

std::string_view to_string(PointTag tag) {
  switch (tag) {
    case PointTag::kWing:
      return "wing";
    case PointTag::kOuter:
      return "outer";
    case PointTag::kInterior:
      return "interior";
  }
  return "interior";
}

PointTag parse_point_tag(std::string_view text) {
  if (text == "wing") return PointTag::kWing;
  if (text == "outer") return PointTag::kOuter;
  if (text == "interior") return PointTag::kInterior;
  throw InputError("unknown point tag '" + std::string(text) + "'");
}

Eigen::MatrixX2d PointSet2D::select(PointTag tag) const {
  const auto n = static_cast<Index>(std::count(tags.begin(), tags.end(), tag));
  Eigen::MatrixX2d out(n, 2);
  Index row = 0;
  for (Index i = 0; i < size(); ++i) {
    if (tags[static_cast<std::size_t>(i)] == tag) out.row(row++) = coordinates.row(i);
  }
  return out;
}

void PointSet2D::validate() const {
  if (static_cast<Index>(tags.size()) != coordinates.rows()) {
    throw InputError("PointSet2D: one tag per point required");
  }
  if (!coordinates.allFinite()) throw InputError("PointSet2D: non-finite coordinate");
  Eigen::MatrixX2d wing = select(PointTag::kWing);
  std::vector<std::pair<double, double>> keys(static_cast<std::size_t>(wing.rows()));
  for (Index i = 0; i < wing.rows(); ++i) {
    keys[static_cast<std::size_t>(i)] = {wing(i, 0), wing(i, 1)};
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw InputError("PointSet2D: coincident wing points");
  }
}

Vector2 RbfModel::operator()(const Vector2& x) const {
  Vector2 s = delta_.row(0).transpose() + delta_.row(1).transpose() * x(0) +
              delta_.row(2).transpose() * x(1);
  for (Index i = 0; i < centers_.rows(); ++i) {
    const double r = (x - centers_.row(i).transpose()).norm();
    if (r < radius_) s += wendland_c2(r, radius_) * beta_.row(i).transpose();
  }
  return s;
}

RbfModel fit_rbf(const Eigen::MatrixX2d& centers, const Eigen::MatrixX2d& displacements,
                 double kernel_radius) {
  const Index n = centers.rows();
  if (displacements.rows() != n) {
    throw InputError("fit_rbf: one displacement per center required");
  }
  if (!(kernel_radius > 0.0)) throw InputError("fit_rbf: kernel radius must be positive");
  if (!centers.allFinite() || !displacements.allFinite()) {
    throw InputError("fit_rbf: non-finite input");
  }
  if (n < 3) throw FitError("fit_rbf: at least 3 non-collinear centers required");

  Matrix system = Matrix::Zero(n + 3, n + 3);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const double r = (centers.row(i) - centers.row(j)).norm();
      system(i, j) = system(j, i) = wendland_c2(r, kernel_radius);
    }
    system(j, n) = system(n, j) = 1.0;
    system(j, n + 1) = system(n + 1, j) = centers(j, 0);
    system(j, n + 2) = system(n + 2, j) = centers(j, 1);
  }

  Eigen::ColPivHouseholderQR<Matrix> poly_qr(system.block(0, n, n, 3));
  if (poly_qr.rank() < 3) {
    throw FitError("fit_rbf: centers are collinear, linear term is not determined");
  }

  Eigen::PartialPivLU<Matrix> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > kMinRcond)) {
    std::ostringstream msg;
    msg << "fit_rbf: singular saddle-point system (estimated condition number "
        << (rcond > 0.0 ? 1.0 / rcond : INFINITY) << ")";
    throw FitError(msg.str());
  }

  Matrix rhs = Matrix::Zero(n + 3, 2);
  rhs.topRows(n) = displacements;
  const Matrix sol = lu.solve(rhs);
  if (!sol.allFinite()) throw FitError("fit_rbf: non-finite solution");

  RbfModel model;
  model.centers_ = centers;
  model.prescribed_ = displacements;
  model.beta_ = sol.topRows(n);
  model.delta_ = sol.bottomRows(3);
  model.radius_ = kernel_radius;
  model.rcond_ = rcond;
  return model;
}

Eigen::MatrixX2d evaluate_rbf(const RbfModel& model, const Eigen::MatrixX2d& queries) {
  Eigen::MatrixX2d out(queries.rows(), 2);
  for (Index q = 0; q < queries.rows(); ++q) {
    out.row(q) = model(queries.row(q).transpose()).transpose();
  }
  return out;
}

void CutoffConfig::validate() const {
  if (!(r_inner > 0.0 && r_inner < r_out) || !focal_point.allFinite()) {
    throw ConfigError("CutoffConfig: require 0 < r_inner < r_out");
  }
}

double cutoff_blend(double distance, const CutoffConfig& cutoff) {
  if (distance <= cutoff.r_inner) return 1.0;
  if (distance >= cutoff.r_out) return 0.0;
  const double u = (distance - cutoff.r_inner) / (cutoff.r_out - cutoff.r_inner);
  return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
}

PointSet2D morph_mesh(const PointSet2D& mesh, const RbfModel& model,
                      const CutoffConfig& cutoff) {
  mesh.validate();
  cutoff.validate();

  PointSet2D out = mesh;
  Index wing = 0;
  for (Index i = 0; i < mesh.size(); ++i) {
    const Vector2 x = mesh.coordinates.row(i).transpose();
    const double dist = (x - cutoff.focal_point).norm();
    switch (mesh.tags[static_cast<std::size_t>(i)]) {
      case PointTag::kOuter:
        break;
      case PointTag::kWing: {
        if (wing >= model.centers().rows() ||
            model.centers().row(wing) != mesh.coordinates.row(i)) {
          throw InputError("morph_mesh: wing point " + std::to_string(i) +
                           " does not match RBF center " + std::to_string(wing));
        }
        if (dist > cutoff.r_inner) {
          throw ConfigError("morph_mesh: wing point " + std::to_string(i) +
                            " lies outside r_inner of the focal point");
        }
        out.coordinates.row(i) += model.prescribed().row(wing);
        ++wing;
        break;
      }
      case PointTag::kInterior: {
        const double psi = cutoff_blend(dist, cutoff);
        if (psi == 0.0) break;
        out.coordinates.row(i) += psi * model(x).transpose();
        break;
      }
    }
  }
  if (wing != model.centers().rows()) {
    throw InputError("morph_mesh: mesh has fewer wing points than the model has centers");
  }
  return out;
}

namespace {

std::vector<Index> lower_only_stations(const AirfoilProfile& profile) {
  std::vector<Index> idx;
  for (Index i = 0; i < profile.size(); ++i) {
    if (profile.y_lower()(i) != profile.y_upper()(i)) idx.push_back(i);
  }
  return idx;
}

}  // namespace

Eigen::MatrixX2d wing_points(const AirfoilProfile& profile) {
  const std::vector<Index> lower = lower_only_stations(profile);
  const Index n = profile.size();
  Eigen::MatrixX2d pts(n + static_cast<Index>(lower.size()), 2);
  pts.col(0).head(n) = profile.stations();
  pts.col(1).head(n) = profile.y_upper();
  Index row = n;
  for (Index i : lower) {
    pts(row, 0) = profile.stations()(i);
    pts(row, 1) = profile.y_lower()(i);
    ++row;
  }
  return pts;
}

Eigen::MatrixX2d wing_displacements(const AirfoilProfile& reference,
                                    const AirfoilProfile& deformed) {
  if (reference.stations() != deformed.stations()) {
    throw InputError("wing_displacements: profiles must share stations");
  }
  const std::vector<Index> lower = lower_only_stations(reference);
  const Index n = reference.size();
  Eigen::MatrixX2d d = Eigen::MatrixX2d::Zero(n + static_cast<Index>(lower.size()), 2);
  d.col(1).head(n) = deformed.y_upper() - reference.y_upper();
  Index row = n;
  for (Index i : lower) {
    d(row++, 1) = deformed.y_lower()(i) - reference.y_lower()(i);
  }
  return d;
}

PointSet2D generate_reference_mesh(const AirfoilProfile& profile, const OMeshOptions& opt) {
  if (opt.n_rings < 1 || opt.n_angular < 3 || opt.n_outer < 3 ||
      !(opt.inner_radius > 0.5 && opt.inner_radius < opt.outer_radius)) {
    throw InputError("generate_reference_mesh: invalid mesh options");
  }
  const Eigen::MatrixX2d wing = wing_points(profile);
  const Index n_interior = opt.n_rings * opt.n_angular;
  const Index n_total = wing.rows() + n_interior + opt.n_outer;

  PointSet2D mesh;
  mesh.coordinates.resize(n_total, 2);
  mesh.tags.reserve(static_cast<std::size_t>(n_total));
  mesh.coordinates.topRows(wing.rows()) = wing;
  mesh.tags.assign(static_cast<std::size_t>(wing.rows()), PointTag::kWing);

  const Vector2 center(0.5, 0.0);
  // geometric grading, last ring strictly inside the outer boundary
  const double ratio =
      std::pow(opt.outer_radius / opt.inner_radius, 1.0 / static_cast<double>(opt.n_rings));
  Index row = wing.rows();
  double radius = opt.inner_radius;
  for (Index ring = 0; ring < opt.n_rings; ++ring) {
    const double offset = (ring % 2 == 0) ? 0.0 : 0.5;
    for (Index a = 0; a < opt.n_angular; ++a) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(a) + offset) /
                           static_cast<double>(opt.n_angular);
      mesh.coordinates.row(row++) =
          (center + radius * Vector2(std::cos(theta), std::sin(theta))).transpose();
      mesh.tags.push_back(PointTag::kInterior);
    }
    radius *= ratio;
  }
  for (Index a = 0; a < opt.n_outer; ++a) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(opt.n_outer);
    mesh.coordinates.row(row++) =
        (center + opt.outer_radius * Vector2(std::cos(theta), std::sin(theta))).transpose();
    mesh.tags.push_back(PointTag::kOuter);
  }
  return mesh;
}

}  // namespace aerorom
