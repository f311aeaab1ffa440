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

#include "aerorom/shape_param.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "aerorom/errors.hpp"

namespace aerorom {

AirfoilProfile::AirfoilProfile(Vector stations, Vector y_upper, Vector y_lower)
    : stations_(std::move(stations)),
      y_upper_(std::move(y_upper)),
      y_lower_(std::move(y_lower)) {
  const Index n = stations_.size();
  if (n < 2 || y_upper_.size() != n || y_lower_.size() != n) {
    throw InputError("AirfoilProfile: ordinate arrays must match the station count (>= 2)");
  }
  if (stations_(0) != 0.0 || stations_(n - 1) != 1.0) {
    throw InputError("AirfoilProfile: stations must start at 0 and end at 1");
  }
  for (Index i = 1; i < n; ++i) {
    if (!(stations_(i) > stations_(i - 1))) {
      throw InputError("AirfoilProfile: stations must be strictly increasing");
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(y_upper_(i)) || !std::isfinite(y_lower_(i))) {
      throw InputError("AirfoilProfile: non-finite ordinate");
    }
    if (y_upper_(i) < y_lower_(i)) {
      throw InputError("AirfoilProfile: upper surface below lower surface at station " +
                       std::to_string(i));
    }
  }
}

void BumpBasis::validate() const {
  if (!(exponent > 0.0)) throw InputError("BumpBasis: exponent must be positive");
  for (int i = 0; i < kCount; ++i) {
    const double p = peak_locations[i];
    if (!(p > 0.0 && p < 1.0)) throw InputError("BumpBasis: peaks must lie in (0,1)");
    if (i > 0 && !(p > peak_locations[i - 1])) {
      throw InputError("BumpBasis: peaks must be strictly increasing");
    }
  }
}

Vector cosine_stations(Index n_points) {
  Vector x(n_points);
  for (Index i = 0; i < n_points; ++i) {
    x(i) = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(n_points - 1)));
  }
  // pin the endpoints; the cosine does not return exact 0/1 in floating point
  x(0) = 0.0;
  x(n_points - 1) = 1.0;
  return x;
}

double naca4_camber(double max_camber, double camber_position, double x) {
  const double m = max_camber;
  const double p = camber_position;
  if (m == 0.0 || p == 0.0) return 0.0;
  if (x < p) return m / (p * p) * (2.0 * p * x - x * x);
  return m / ((1.0 - p) * (1.0 - p)) * ((1.0 - 2.0 * p) + 2.0 * p * x - x * x);
}

double naca4_half_thickness(double thickness, double x, bool closed_te) {
  if (closed_te && x == 1.0) return 0.0;
  const double a4 = closed_te ? 0.1036 : 0.1015;
  return 5.0 * thickness *
         (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x + 0.2843 * x * x * x -
          a4 * x * x * x * x);
}

AirfoilProfile naca4_profile(std::string_view code, Index n_points, bool closed_te) {
  if (code.size() != 4) throw InputError("naca4_profile: code must have 4 digits");
  for (char c : code) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw InputError("naca4_profile: code must be decimal digits, got '" +
                       std::string(code) + "'");
    }
  }
  if (n_points < 3) throw InputError("naca4_profile: need at least 3 points");

  const double m = (code[0] - '0') / 100.0;
  const double p = (code[1] - '0') / 10.0;
  const double t = ((code[2] - '0') * 10 + (code[3] - '0')) / 100.0;

  Vector x = cosine_stations(n_points);
  Vector yu(n_points), yl(n_points);
  for (Index i = 0; i < n_points; ++i) {
    const double yc = naca4_camber(m, p, x(i));
    const double yt = naca4_half_thickness(t, x(i), closed_te);
    yu(i) = yc + yt;
    yl(i) = yc - yt;
  }
  return AirfoilProfile(std::move(x), std::move(yu), std::move(yl));
}

double bump_value(const BumpBasis& basis, int i, double x) {
  if (i < 1 || i > BumpBasis::kCount) {
    throw InputError("bump_value: index must be in 1.." + std::to_string(BumpBasis::kCount));
  }
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("bump_value: x must lie in [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  const double shape = std::log(0.5) / std::log(basis.peak_locations[i - 1]);
  return std::pow(std::sin(std::numbers::pi * std::pow(x, shape)), basis.exponent);
}

AirfoilProfile deform_profile(const AirfoilProfile& reference, const Vector& mu,
                              const BumpBasis& basis) {
  basis.validate();
  constexpr int n_bumps = BumpBasis::kCount;
  if (mu.size() != 2 * n_bumps) {
    throw InputError("deform_profile: parameter vector must have " +
                     std::to_string(2 * n_bumps) + " entries");
  }
  if (!mu.allFinite()) throw InputError("deform_profile: non-finite parameter");

  const Vector& x = reference.stations();
  Vector yu = reference.y_upper();
  Vector yl = reference.y_lower();
  for (Index s = 0; s < x.size(); ++s) {
    double upper = 0.0;
    double lower = 0.0;
    for (int i = 0; i < n_bumps; ++i) {
      const double r = bump_value(basis, i + 1, x(s));
      upper += mu(i) * r;
      lower += mu(n_bumps + i) * r;
    }
    yu(s) += upper;
    yl(s) -= lower;
    if (yu(s) < yl(s)) {
      throw GeometryError("deform_profile: deformation too large, surfaces cross at x = " +
                          std::to_string(x(s)));
    }
  }
  return AirfoilProfile(x, std::move(yu), std::move(yl));
}

}  // namespace aerorom
