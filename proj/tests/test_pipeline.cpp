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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aerorom/errors.hpp"
#include "aerorom/io.hpp"
#include "aerorom/pipeline.hpp"
#include "test_support.hpp"

using namespace aerorom;
namespace fs = std::filesystem;

namespace {

/// Small, fast configuration: 20 train / 15 test, dt = 0.05 on [12, 20].
PipelineConfig small_config(const std::string& out) {
  PipelineConfig c;
  c.n_train = 20;
  c.n_test = 15;
  c.seed = 7;
  c.dt = 0.05;
  c.forecast_times = {5.0, 15.0, 21.0, 25.0, 30.0};
  c.dmd_rank = RankSpec::fixed(6);
  c.gpr.restarts = 2;
  c.gpr.max_evaluations_per_start = 150;
  c.geometry.n_points = 80;
  c.geometry.generated_mesh = {12, 40, 0.6, 10.0, 60};
  c.sweep_dmd_dts = {0.05, 0.2};
  c.sweep_train_sizes = {1, 10, 20};
  c.output_dir = fs::temp_directory_path() / "aerorom_test_pipeline" / out;
  fs::remove_all(c.output_dir);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("parameter sampling") {
  const ParameterDomain d = ParameterDomain::box(10, 0.0, 0.03);
  CHECK(sample_parameters(d, 0, 1).rows() == 0);
  for (auto strategy : {SamplingStrategy::kUniform, SamplingStrategy::kLatinHypercube}) {
    const Matrix a = sample_parameters(d, 40, 5, strategy);
    CHECK(a == sample_parameters(d, 40, 5, strategy));
    CHECK(a != sample_parameters(d, 40, 6, strategy));
    for (Index i = 0; i < a.rows(); ++i) CHECK(d.contains(a.row(i).transpose()));
  }
  const Matrix lhs = sample_parameters(d, 10, 3, SamplingStrategy::kLatinHypercube);
  for (Index j = 0; j < 10; ++j) {
    std::vector<int> count(10, 0);
    for (Index i = 0; i < 10; ++i) {
      const auto bin = static_cast<std::size_t>(std::min(9.0, std::floor(lhs(i, j) / 0.003)));
      ++count[bin];
    }
    CHECK(count == std::vector<int>(10, 1));
  }
}

TEST_CASE("relative error") {
  const Vector x = Eigen::Vector3d(1.0, -2.0, 0.5);
  CHECK(relative_error(x, x) == 0.0);
  CHECK(relative_error(Eigen::Vector2d(3, 4), Eigen::Vector2d(0, 0)) == 1.0);
  testing::Generator gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector a = gen.vector(6), b = gen.vector(6);
    const double c = gen.uniform(0.1, 10.0) * (trial % 2 ? -1.0 : 1.0);
    CHECK(relative_error(Vector(c * a), Vector(c * b)) ==
          doctest::Approx(relative_error(a, b)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(relative_error(Vector::Zero(3), x), InputError);
  CHECK_THROWS_AS(relative_error(x, Vector::Zero(2)), InputError);
}

TEST_CASE("dropping columns") {
  Matrix m(2, 4);
  m << 1, 2, 3, 4, 5, 6, 7, 8;
  Matrix kept(2, 2);
  kept << 2, 3, 6, 7;
  CHECK(drop_columns(m, {0, 3}) == kept);
  CHECK(drop_columns(m, {}) == m);
}

TEST_CASE("config parsing is strict") {
  const PipelineConfig defaults;
  CHECK(defaults.window_snapshots() == 8000);
  CHECK(defaults.window_grid().t0 == doctest::Approx(12.001));
  CHECK(defaults.forecast_times.size() == 30);
  CHECK_NOTHROW(defaults.validate());

  const PipelineConfig parsed = parse_config(nlohmann::json::object());
  CHECK(config_to_json(parsed) == config_to_json(defaults));

  const PipelineConfig small = small_config("parse");
  CHECK(config_to_json(parse_config(config_to_json(small))) == config_to_json(small));

  using nlohmann::json;
  CHECK_THROWS_AS(parse_config(json{{"n_trian", 5}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"gpr", {{"kernel", "matern"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n_train", "many"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n_train", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"fom_window", {20.0, 12.0}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"sampling", "sobol"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"dmd_rank", {{"mode", "energy"}, {"value", 1.5}}}}),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(json{{"surrogate", {{"frozen_indices", {1, 2}}}}}), ConfigError);
  CHECK(parse_config(json{{"sampling", "latin-hypercube"}}).sampling ==
        SamplingStrategy::kLatinHypercube);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("end-to-end run on a small configuration") {
  const PipelineConfig c = small_config("run");
  const PipelineResult r = run_pipeline(c);
  const PipelineReport& rep = r.report;

  CHECK(rep.times == c.forecast_times);
  REQUIRE(rep.full_errors.size() == c.forecast_times.size());
  REQUIRE(rep.reduced_errors.size() == c.forecast_times.size());
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    CHECK(std::isfinite(rep.full_errors[i]));
    CHECK(rep.full_errors[i] >= 0.0);
    CHECK(std::isfinite(rep.reduced_errors[i]));
    CHECK(rep.reduced_errors[i] >= 0.0);
  }
  CHECK(rep.frozen == std::vector<Index>{0, 4, 5, 9});
  CHECK(rep.dmd_rank <= 6);
  CHECK(rep.dmd_training_residual < 1e-8);

  // targets: truth inside the window, DMD forecasts after it
  testing::Generator gen(2);
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double t = rep.times[i];
    for (int pick = 0; pick < 3; ++pick) {
      const Index s = gen.integer(0, c.n_train - 1);
      const double expected = t <= c.window_end
                                  ? lift(c.surrogate, r.train.row(s).transpose(), t)
                                  : forecast(r.dmd, t)(s);
      CHECK(r.training_targets[i](s) == expected);
    }
  }

  for (const char* f : {"report.json", "errors_full.csv", "errors_reduced.csv", "ensemble.csv",
                        "dmd_model.json", "samples_train.csv", "samples_test.csv"}) {
    CHECK(fs::exists(c.output_dir / f));
  }
  const io::CsvTable full = io::read_csv(c.output_dir / "errors_full.csv");
  CHECK(full.header == std::vector<std::string>{"t", "relative_error"});
  CHECK(full.rows.size() == c.forecast_times.size());
  const io::CsvTable w1 = io::read_csv(c.output_dir / "dyas" / "dyas_w1_t10.csv");
  CHECK(w1.header ==
        std::vector<std::string>{"parameter_index", "parameter_name", "w1_component"});
  CHECK(w1.rows.size() == 10);
  const io::CsvTable lam = io::read_csv(c.output_dir / "dyas" / "dyas_eigenvalues_t10.csv");
  CHECK(lam.header == std::vector<std::string>{"index", "lambda"});
  const io::CsvTable suff = io::read_csv(c.output_dir / "dyas" / "sufficiency_t10.csv");
  CHECK(suff.header == std::vector<std::string>{"active_variable", "f_value"});
  CHECK(suff.rows.size() == static_cast<std::size_t>(c.n_train));

  const nlohmann::json report = io::read_json(c.output_dir / "report.json");
  CHECK(report.at("status") == "ok");
  CHECK(report.at("frozen_parameters") == nlohmann::json({1, 5, 6, 10}));
}

TEST_CASE("identical seeds give identical artifacts") {
  PipelineConfig a = small_config("det_a");
  PipelineConfig b = small_config("det_b");
  a.forecast_times = b.forecast_times = {15.0, 25.0};
  run_pipeline(a);
  run_pipeline(b);
  for (const char* f : {"report.json", "errors_full.csv", "errors_reduced.csv", "ensemble.csv",
                        "dmd_model.json", "dyas/dyas_w1_t6.csv", "dyas/sufficiency_t18.csv"}) {
    CHECK(slurp(a.output_dir / f) == slurp(b.output_dir / f));
  }
}

TEST_CASE("without frozen parameters both regressions coincide") {
  PipelineConfig c = small_config("nofreeze");
  c.freeze_threshold = 0.0;
  c.forecast_times = {15.0, 25.0};
  const PipelineResult r = run_pipeline(c, PipelineOutputs::kNone);
  CHECK(r.report.frozen.empty());
  CHECK(r.report.full_errors == r.report.reduced_errors);
  CHECK(!fs::exists(c.output_dir / "report.json"));
}

TEST_CASE("a failing stage is named and leaves a failure marker") {
  PipelineConfig c = small_config("fail");
  c.freeze_threshold = 2.0;  // every coordinate frozen: nothing left to regress on
  c.forecast_times = {15.0};
  try {
    run_pipeline(c);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "gpr-compare");
    CHECK_FALSE(e.numerical());
  }
  const nlohmann::json report = io::read_json(c.output_dir / "report.json");
  CHECK(report.at("status") == "failed");
  CHECK(report.at("failed_stage") == "gpr-compare");
}

TEST_CASE("GPR-based gradients drive DyAS when configured") {
  PipelineConfig c = small_config("gprdyas");
  c.gradient_source = GradientSource::kGpr;
  const Matrix train = sample_parameters(c.domain, c.n_train, c.seed);
  const DmdModel dmd = fit_dmd(run_ensemble(c.surrogate, train, c.window_grid()), c.dmd_rank);
  const DyasSeries s = run_dyas(c, train, dmd);
  CHECK(s.subspaces.size() == c.dyas_times.size());
  for (const auto& as : s.subspaces) CHECK(as.eigenvalues.allFinite());
}

TEST_CASE("sensitivity sweeps") {
  const PipelineConfig c = small_config("sweeps");
  const SweepTables t = sensitivity_sweeps(c);
  REQUIRE(t.dmd_dt.rows() == 2);
  CHECK(t.dmd_dt(0, 0) == 0.05);
  CHECK(t.dmd_dt(1, 0) == 0.2);
  CHECK(t.dmd_dt.col(1).allFinite());
  REQUIRE(t.gpr_size.rows() == 3);
  CHECK(t.gpr_size(0, 0) == 1.0);
  CHECK(t.gpr_size(2, 0) == 20.0);
  CHECK(t.gpr_size.rightCols(2).allFinite());
  CHECK(fs::exists(c.output_dir / "sweep_dmd_dt.csv"));
  CHECK(fs::exists(c.output_dir / "sweep_gpr_size.csv"));
}

TEST_CASE("geometry leg") {
  const PipelineConfig c = small_config("geometry");
  const AirfoilProfile ref = reference_profile(c.geometry);
  const PointSet2D mesh = reference_mesh(c.geometry, ref);

  const auto [p0, m0] = deform_and_morph(c, Vector::Zero(10));
  CHECK(p0 == ref);
  CHECK(m0 == mesh);
  CHECK(slurp(c.output_dir / "geometry" / "profile_deformed.csv") ==
        slurp(c.output_dir / "geometry" / "profile_reference.csv"));
  CHECK(slurp(c.output_dir / "geometry" / "mesh_morphed.csv") ==
        slurp(c.output_dir / "geometry" / "mesh_reference.csv"));

  Vector fig4(10);
  fig4 << 0.0071, 0.0229, 0.0015, 0.0015, 0.0087, 0.0107, 0.0033, 0.0130, 0.0247, 0.0280;
  const auto [p1, m1] = deform_and_morph(c, fig4, false);
  CHECK(p1 == deform_profile(ref, fig4, c.geometry.bumps));
  CHECK(m1.size() == mesh.size());
  CHECK(m1.tags == mesh.tags);
  const Eigen::MatrixX2d moved_wing = m1.select(PointTag::kWing);
  CHECK((moved_wing - wing_points(p1)).cwiseAbs().maxCoeff() < 1e-15);

  testing::Generator gen(3);
  for (int trial = 0; trial < 3; ++trial) {
    const auto [p, m] = deform_and_morph(c, gen.vector(10, 0.0, 0.03), false);
    CHECK(m.size() == mesh.size());
    CHECK(m.tags == mesh.tags);
  }
}
