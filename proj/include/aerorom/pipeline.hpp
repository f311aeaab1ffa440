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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aerorom/active_subspaces.hpp"
#include "aerorom/dmd.hpp"
#include "aerorom/errors.hpp"
#include "aerorom/fom_surrogate.hpp"
#include "aerorom/gpr.hpp"
#include "aerorom/rbf_morph.hpp"
#include "aerorom/shape_param.hpp"

namespace aerorom {

/// ||exact - approx|| / ||exact||. Throws InputError on a length mismatch and
/// a zero-norm reference.
template <typename DerivedA, typename DerivedB>
double relative_error(const Eigen::MatrixBase<DerivedA>& exact,
                      const Eigen::MatrixBase<DerivedB>& approx) {
  if (exact.size() != approx.size()) throw InputError("relative_error: length mismatch");
  const double denom = exact.norm();
  if (!(denom > 0.0)) throw InputError("relative_error: reference has zero norm");
  return (exact - approx).norm() / denom;
}

enum class SamplingStrategy { kUniform, kLatinHypercube };

/// n parameter vectors (one per row) drawn inside the domain. Deterministic
/// for a given (seed, strategy).
Matrix sample_parameters(const ParameterDomain& domain, Index n, std::uint64_t seed,
                         SamplingStrategy strategy = SamplingStrategy::kUniform);

enum class GradientSource { kSurrogate, kGpr };

struct GeometryConfig {
  std::string naca_code = "4412";
  Index n_points = 200;
  bool closed_te = true;
  BumpBasis bumps;
  double kernel_radius = 0.1;
  CutoffConfig cutoff;
  /// Reference mesh (x,y,tag CSV). Empty: generate an O-type point cloud.
  std::filesystem::path mesh_file;
  OMeshOptions generated_mesh;
};

struct PipelineConfig {
  ParameterDomain domain = ParameterDomain::box(10, 0.0, 0.03);
  Index n_train = 70;
  Index n_test = 100;
  std::uint64_t seed = 12345;
  SamplingStrategy sampling = SamplingStrategy::kUniform;
  /// High-fidelity window [t_a, t_b]; snapshots at t_a + dt .. t_b.
  double window_start = 12.0;
  double window_end = 20.0;
  double dt = 0.001;
  /// Instants where both regressions are evaluated. Those after window_end
  /// are trained on DMD forecasts.
  std::vector<double> forecast_times;
  RankSpec dmd_rank = RankSpec::fixed(10);
  std::vector<double> dyas_times{6.0, 10.0, 14.0, 18.0};
  double freeze_threshold = 0.1;
  GradientSource gradient_source = GradientSource::kSurrogate;
  GprOptions gpr;
  SurrogateSpec surrogate = SurrogateSpec::default_spec();
  GeometryConfig geometry;
  std::vector<double> sweep_dmd_dts{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 0.1, 0.2};
  std::vector<Index> sweep_train_sizes{1, 5, 10, 20, 30, 40, 50, 60, 70};
  std::filesystem::path output_dir = "out";
  bool write_ensemble = true;

  PipelineConfig();

  /// Number of snapshots in the high-fidelity window.
  Index window_snapshots() const;
  TimeGrid window_grid() const;
  /// Throws ConfigError for any violated invariant.
  void validate() const;
};

/// Strict parse: unknown keys and wrong types are ConfigError.
PipelineConfig parse_config(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const PipelineConfig& config);

struct PipelineReport {
  std::vector<double> times;
  std::vector<double> full_errors;
  std::vector<double> reduced_errors;
  /// 0-based.
  std::vector<Index> frozen;
  Index dmd_rank = 0;
  ComplexVector dmd_eigenvalues;
  double dmd_training_residual = 0.0;
  /// Stage name -> seconds. Kept out of report.json so reports stay
  /// reproducible.
  std::vector<std::pair<std::string, double>> timing;
  std::vector<std::string> warnings;
};

nlohmann::json report_to_json(const PipelineReport& report);

/// Raised by run_pipeline with the name of the stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what, bool numerical)
      : Error(stage + ": " + what), stage_(std::move(stage)), numerical_(numerical) {}
  const std::string& stage() const { return stage_; }
  /// False when the failure came from bad input/configuration.
  bool numerical() const { return numerical_; }

 private:
  std::string stage_;
  bool numerical_;
};

/// Everything the pipeline computed, for inspection by callers and tests.
struct PipelineResult {
  PipelineReport report;
  Matrix train;
  Matrix test;
  DmdModel dmd;
  DyasSeries dyas;
  /// Training targets per evaluation time, aligned with report.times.
  std::vector<Vector> training_targets;
};

/// Which artifacts run_pipeline writes.
enum class PipelineOutputs { kAll, kRegressionOnly, kNone };

/// Sampling, surrogate ensemble, DMD forecast, DyAS, freezing, and the
/// full/reduced regression comparison.
PipelineResult run_pipeline(const PipelineConfig& config,
                            PipelineOutputs outputs = PipelineOutputs::kAll);

/// Training targets at time t: surrogate truth inside the window, DMD
/// forecasts after it.
Vector training_targets(const PipelineConfig& config, const Matrix& train, const DmdModel& dmd,
                        double t);

/// DyAS at config.dyas_times on the training samples with the configured
/// gradient source (the DMD model supplies targets after the window for the
/// GPR source).
DyasSeries run_dyas(const PipelineConfig& config, const Matrix& train, const DmdModel& dmd);

/// Test-set relative errors of the full and reduced regressions at one time.
std::pair<double, double> compare_regressions(const PipelineConfig& config, const Matrix& train,
                                              const Vector& targets, const Matrix& test,
                                              const Vector& truth,
                                              const std::vector<Index>& frozen);

/// Drops the listed columns.
Matrix drop_columns(const Matrix& m, const std::vector<Index>& columns);

struct SweepTables {
  /// (dt, relative error at the final evaluation time)
  Matrix dmd_dt;
  /// (n_train, full error, reduced error) at window_end
  Matrix gpr_size;
};

SweepTables sensitivity_sweeps(const PipelineConfig& config, bool write_files = true);

/// Deforms the reference profile by mu and morphs the reference mesh.
std::pair<AirfoilProfile, PointSet2D> deform_and_morph(const PipelineConfig& config,
                                                       const Vector& mu,
                                                       bool write_files = true);

/// Reference profile and mesh of the geometry configuration.
AirfoilProfile reference_profile(const GeometryConfig& geometry);
PointSet2D reference_mesh(const GeometryConfig& geometry, const AirfoilProfile& profile);

/// Writes the DyAS plot data for one instant: w1 components, eigenvalues and
/// the sufficiency summary of (samples, f_values).
void write_dyas_instant(const std::filesystem::path& dir, double t, const ActiveSubspace& as,
                        const Matrix& samples_normalized, const Vector& f_values);

}  // namespace aerorom
