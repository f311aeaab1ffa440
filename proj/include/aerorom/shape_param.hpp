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

#include <array>
#include <string_view>

#include "aerorom/types.hpp"

namespace aerorom {

/// Upper and lower ordinates of a wing section sampled on shared chordwise
/// stations. All lengths are chord fractions.
///
/// Invariants: stations strictly increasing from 0 to 1; the three arrays
/// share a length; y_upper >= y_lower everywhere.
class AirfoilProfile {
 public:
  /// Throws InputError when an invariant does not hold.
  AirfoilProfile(Vector stations, Vector y_upper, Vector y_lower);

  const Vector& stations() const { return stations_; }
  const Vector& y_upper() const { return y_upper_; }
  const Vector& y_lower() const { return y_lower_; }
  Index size() const { return stations_.size(); }

  friend bool operator==(const AirfoilProfile&, const AirfoilProfile&) = default;

 private:
  Vector stations_;
  Vector y_upper_;
  Vector y_lower_;
};

/// Hicks-Henne bump family r_i(x) = sin^e(pi x^{m_i}), m_i = ln 0.5 / ln p_i.
struct BumpBasis {
  static constexpr int kCount = 5;

  std::array<double, kCount> peak_locations{0.1, 0.3, 0.5, 0.7, 0.9};
  double exponent = 3.0;

  /// Throws InputError unless peaks are strictly increasing in (0,1) and the
  /// exponent is positive.
  void validate() const;
};

/// Cosine-spaced chord stations 0.5 (1 - cos(pi i / (n-1))).
Vector cosine_stations(Index n_points);

/// Camber line of a 4-digit section with max camber m at chord position p.
double naca4_camber(double max_camber, double camber_position, double x);

/// Half-thickness of the standard 4-digit thickness distribution.
double naca4_half_thickness(double thickness, double x, bool closed_te);

/// NACA 4-digit section on cosine stations, ordinates normal to the chord.
/// Throws InputError for a malformed code or n_points < 3.
AirfoilProfile naca4_profile(std::string_view code, Index n_points = 200,
                             bool closed_te = true);

/// r_i(x) for the 1-based bump index i. Returns exactly 0 at x = 0 and x = 1.
double bump_value(const BumpBasis& basis, int i, double x);

/// Number of shape parameters carried by a basis: c_1..c_n then d_1..d_n.
inline constexpr Index shape_parameter_count() { return 2 * BumpBasis::kCount; }

/// y_u = ybar_u + sum c_i r_i, y_l = ybar_l - sum d_i r_i at fixed stations.
/// mu holds c_1..c_5 followed by d_1..d_5.
/// Throws GeometryError when the result self-intersects.
AirfoilProfile deform_profile(const AirfoilProfile& reference, const Vector& mu,
                              const BumpBasis& basis = {});

}  // namespace aerorom
