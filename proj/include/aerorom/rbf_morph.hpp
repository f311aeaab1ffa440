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

#include <cstdint>
#include <string_view>
#include <vector>

#include "aerorom/shape_param.hpp"
#include "aerorom/types.hpp"

namespace aerorom {

enum class PointTag : std::uint8_t { kWing, kOuter, kInterior };

std::string_view to_string(PointTag tag);
/// Throws InputError for anything other than wing/outer/interior.
PointTag parse_point_tag(std::string_view text);

/// 2-D point cloud with a boundary label per point. Coordinates in meters,
/// one point per row.
struct PointSet2D {
  Eigen::MatrixX2d coordinates;
  std::vector<PointTag> tags;

  Index size() const { return coordinates.rows(); }

  /// Rows tagged `tag`, in mesh order.
  Eigen::MatrixX2d select(PointTag tag) const;

  /// Checks tag count and that no two wing points coincide.
  void validate() const;

  friend bool operator==(const PointSet2D& a, const PointSet2D& b) {
    return a.tags == b.tags && a.coordinates.rows() == b.coordinates.rows() &&
           a.coordinates == b.coordinates;
  }
};

/// Wendland C2 kernel (1 - r/rho)^4 (4 r/rho + 1) on [0, rho), zero beyond.
template <typename Scalar>
Scalar wendland_c2(Scalar r, Scalar radius) {
  if (r >= radius) return Scalar(0);
  const Scalar u = r / radius;
  const Scalar v = Scalar(1) - u;
  return v * v * v * v * (Scalar(4) * u + Scalar(1));
}

/// Fitted displacement interpolant s(x) = sum beta_i xi(|x - x_i|) + q(x) with
/// a linear polynomial q, one column per displacement component.
class RbfModel {
 public:
  const Eigen::MatrixX2d& centers() const { return centers_; }
  /// Displacements imposed at the centers.
  const Eigen::MatrixX2d& prescribed() const { return prescribed_; }
  const Eigen::MatrixX2d& beta() const { return beta_; }
  /// Rows: constant, x, y coefficients of q.
  const Eigen::Matrix<double, 3, 2>& delta() const { return delta_; }
  double kernel_radius() const { return radius_; }
  /// Reciprocal condition estimate of the saddle-point factorization.
  double rcond() const { return rcond_; }

  Vector2 operator()(const Vector2& x) const;

 private:
  friend RbfModel fit_rbf(const Eigen::MatrixX2d&, const Eigen::MatrixX2d&, double);

  Eigen::MatrixX2d centers_;
  Eigen::MatrixX2d prescribed_;
  Eigen::MatrixX2d beta_;
  Eigen::Matrix<double, 3, 2> delta_ = Eigen::Matrix<double, 3, 2>::Zero();
  double radius_ = 0.0;
  double rcond_ = 0.0;
};

/// Solves [[M, P], [P^T, 0]] [beta; delta] = [d; 0] once per component with a
/// single partial-pivoting LU. Throws FitError for collinear/coincident
/// centers (the message carries the estimated condition number) and
/// InputError for mismatched sizes or a non-positive radius.
RbfModel fit_rbf(const Eigen::MatrixX2d& centers, const Eigen::MatrixX2d& displacements,
                 double kernel_radius);

/// Model displacement at every query row.
Eigen::MatrixX2d evaluate_rbf(const RbfModel& model, const Eigen::MatrixX2d& queries);
inline Eigen::MatrixX2d evaluate_rbf(const RbfModel& model, const PointSet2D& queries) {
  return evaluate_rbf(model, queries.coordinates);
}

/// Radial fade of the RBF displacement around a focal point.
struct CutoffConfig {
  Vector2 focal_point{0.5, 0.0};
  double r_inner = 1.5;
  double r_out = 7.0;

  /// Throws ConfigError unless 0 < r_inner < r_out.
  void validate() const;
};

/// psi(t): 1 up to r_inner, 0 from r_out on, 1 - 3u^2 + 2u^3 in between.
double cutoff_blend(double distance, const CutoffConfig& cutoff);

/// Moves interior points by psi(|x - focal|) s(x). Outer points stay put,
/// wing points (matched in order to the model centers) receive their
/// prescribed displacement exactly. Throws ConfigError when a wing point lies
/// outside r_inner and InputError when wing points do not match the centers.
PointSet2D morph_mesh(const PointSet2D& mesh, const RbfModel& model,
                      const CutoffConfig& cutoff);

/// Wing contour points of a profile (chord 1 m, leading edge at the origin):
/// all upper stations, then lower stations without the points shared with the
/// upper surface.
Eigen::MatrixX2d wing_points(const AirfoilProfile& profile);

/// Per-wing-point displacement between two profiles on the same stations.
Eigen::MatrixX2d wing_displacements(const AirfoilProfile& reference,
                                    const AirfoilProfile& deformed);

struct OMeshOptions {
  Index n_rings = 40;
  Index n_angular = 115;
  double inner_radius = 0.6;
  double outer_radius = 10.0;
  Index n_outer = 200;
};

/// Reference O-type point cloud around a profile: wing contour, interior
/// rings geometrically graded from inner_radius to just below outer_radius
/// around the chord center, and a circle of outer boundary points.
PointSet2D generate_reference_mesh(const AirfoilProfile& profile,
                                   const OMeshOptions& options = {});

}  // namespace aerorom
