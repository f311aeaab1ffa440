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

#include "aerorom/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <numeric>
#include <random>

#include "aerorom/io.hpp"

namespace aerorom {

namespace fs = std::filesystem;
using nlohmann::json;

Matrix sample_parameters(const ParameterDomain& domain, Index n, std::uint64_t seed,
                         SamplingStrategy strategy) {
  domain.validate();
  const Index k = domain.dimension();
  Matrix samples(std::max<Index>(n, 0), k);
  if (n <= 0) return samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vector width = domain.upper - domain.lower;

  if (strategy == SamplingStrategy::kUniform) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < k; ++j) samples(i, j) = domain.lower(j) + unit(rng) * width(j);
    }
    return samples;
  }

  std::vector<Index> bins(static_cast<std::size_t>(n));
  for (Index j = 0; j < k; ++j) {
    std::iota(bins.begin(), bins.end(), Index{0});
    std::shuffle(bins.begin(), bins.end(), rng);
    for (Index i = 0; i < n; ++i) {
      const double u = (static_cast<double>(bins[static_cast<std::size_t>(i)]) + unit(rng)) /
                       static_cast<double>(n);
      samples(i, j) = std::min(domain.lower(j) + u * width(j), domain.upper(j));
    }
  }
  return samples;
}

Matrix drop_columns(const Matrix& m, const std::vector<Index>& columns) {
  std::vector<Index> keep;
  for (Index j = 0; j < m.cols(); ++j) {
    if (std::find(columns.begin(), columns.end(), j) == columns.end()) keep.push_back(j);
  }
  Matrix out(m.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Index>(c)) = m.col(keep[c]);
  return out;
}

namespace {

Vector truth_at(const SurrogateSpec& spec, const Matrix& samples, double t) {
  Vector y(samples.rows());
  for (Index i = 0; i < samples.rows(); ++i) y(i) = lift(spec, samples.row(i).transpose(), t);
  return y;
}

double regression_error(const Matrix& train, const Vector& targets, const Matrix& test,
                        const Vector& truth, const GprOptions& options) {
  if (train.cols() == 0) throw InputError("regression: every parameter is frozen");
  const GprModel model = fit_gpr(train, targets, options);
  Vector approx(test.rows());
  for (Index i = 0; i < test.rows(); ++i) approx(i) = predict(model, test.row(i).transpose()).mean;
  return relative_error(truth, approx);
}

std::string time_tag(double t) { return io::format_double(t); }

json complex_pairs(const ComplexVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

std::vector<std::string> sample_header(Index k) { return parameter_names(k); }

/// GPR posterior-mean gradients, one model per analysis instant, mapped back
/// to physical coordinates.
GradientProvider gpr_gradient_provider(const PipelineConfig& config, const Matrix& train,
                                       const DmdModel& dmd) {
  auto models = std::make_shared<std::map<double, GprModel>>();
  const Matrix xi = normalize_samples(train, config.domain);
  for (double t : config.dyas_times) {
    models->emplace(t, fit_gpr(xi, training_targets(config, train, dmd, t), config.gpr));
  }
  const Vector to_physical = config.domain.half_width().cwiseInverse();
  const ParameterDomain domain = config.domain;
  return [models, to_physical, domain](const Vector& mu, double t) {
    const auto it = models->find(t);
    if (it == models->end()) throw InputError("no GPR model for this instant");
    return Vector(posterior_mean_gradient(it->second, normalize_parameters(mu, domain))
                      .cwiseProduct(to_physical));
  };
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

Vector training_targets(const PipelineConfig& config, const Matrix& train, const DmdModel& dmd,
                        double t) {
  if (t <= config.window_end) return truth_at(config.surrogate, train, t);
  return forecast(dmd, t);
}

DyasSeries run_dyas(const PipelineConfig& config, const Matrix& train, const DmdModel& dmd) {
  GradientProvider provider;
  if (config.gradient_source == GradientSource::kSurrogate) {
    const SurrogateSpec spec = config.surrogate;
    provider = [spec](const Vector& mu, double t) { return lift_gradient(spec, mu, t); };
  } else {
    provider = gpr_gradient_provider(config, train, dmd);
  }
  return compute_dyas(train, config.domain, provider, config.dyas_times);
}

std::pair<double, double> compare_regressions(const PipelineConfig& config, const Matrix& train,
                                              const Vector& targets, const Matrix& test,
                                              const Vector& truth,
                                              const std::vector<Index>& frozen) {
  const Matrix xi_train = normalize_samples(train, config.domain);
  const Matrix xi_test = normalize_samples(test, config.domain);
  const double full = regression_error(xi_train, targets, xi_test, truth, config.gpr);
  const double reduced = regression_error(drop_columns(xi_train, frozen), targets,
                                          drop_columns(xi_test, frozen), truth, config.gpr);
  return {full, reduced};
}

json report_to_json(const PipelineReport& r) {
  std::vector<Index> frozen;
  for (Index j : r.frozen) frozen.push_back(j + 1);
  std::vector<std::string> names;
  const auto all = parameter_names(10);
  for (Index j : r.frozen) {
    names.push_back(j < static_cast<Index>(all.size()) ? all[static_cast<std::size_t>(j)]
                                                       : "mu" + std::to_string(j + 1));
  }
  return {{"status", "ok"},
          {"times", r.times},
          {"relative_error_full", r.full_errors},
          {"relative_error_reduced", r.reduced_errors},
          {"frozen_parameters", frozen},
          {"frozen_parameter_names", names},
          {"dmd",
           {{"rank", r.dmd_rank},
            {"eigenvalues", complex_pairs(r.dmd_eigenvalues)},
            {"training_residual", r.dmd_training_residual}}},
          {"warnings", r.warnings}};
}

void write_dyas_instant(const fs::path& dir, double t, const ActiveSubspace& as,
                        const Matrix& samples_normalized, const Vector& f_values) {
  const Index k = as.dimension();
  const auto names = parameter_names(k);
  {
    std::ofstream out = [&] {
      fs::create_directories(dir);
      return std::ofstream(dir / ("dyas_w1_t" + time_tag(t) + ".csv"), std::ios::binary);
    }();
    out << "parameter_index,parameter_name,w1_component\n";
    for (Index j = 0; j < k; ++j) {
      out << j + 1 << ',' << names[static_cast<std::size_t>(j)] << ','
          << io::format_double(as.eigenvectors(j, 0)) << '\n';
    }
  }
  Matrix lambda(k, 2);
  for (Index j = 0; j < k; ++j) {
    lambda(j, 0) = static_cast<double>(j + 1);
    lambda(j, 1) = as.eigenvalues(j);
  }
  io::write_csv(dir / ("dyas_eigenvalues_t" + time_tag(t) + ".csv"), {"index", "lambda"}, lambda);
  ActiveSubspace one = as;
  one.active_dim = 1;
  io::write_csv(dir / ("sufficiency_t" + time_tag(t) + ".csv"), {"active_variable", "f_value"},
                sufficiency_summary(one, samples_normalized, f_values));
}

PipelineResult run_pipeline(const PipelineConfig& config, PipelineOutputs outputs) {
  config.validate();
  PipelineResult result;
  PipelineReport& report = result.report;
  const fs::path& out = config.output_dir;
  const bool write_all = outputs == PipelineOutputs::kAll;
  const bool write_any = outputs != PipelineOutputs::kNone;
  Stopwatch clock;
  std::vector<std::string> completed;

  auto stage = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      const bool numerical = !dynamic_cast<const InputError*>(&e) &&
                             !dynamic_cast<const ConfigError*>(&e);
      if (write_any) {
        try {
          io::write_json(out / "report.json", {{"status", "failed"},
                                               {"failed_stage", name},
                                               {"error", e.what()},
                                               {"completed_stages", completed}});
        } catch (const std::exception&) {
        }
      }
      throw StageError(name, e.what(), numerical);
    }
    completed.push_back(name);
    report.timing.emplace_back(name, clock.lap());
  };

  const Index k = config.domain.dimension();
  stage("sample", [&] {
    result.train = sample_parameters(config.domain, config.n_train, config.seed, config.sampling);
    result.test =
        sample_parameters(config.domain, config.n_test, config.seed + 1, config.sampling);
    if (write_all) {
      io::write_csv(out / "samples_train.csv", sample_header(k), result.train);
      io::write_csv(out / "samples_test.csv", sample_header(k), result.test);
    }
  });

  std::optional<SnapshotEnsemble> ensemble;
  stage("fom-run", [&] {
    ensemble.emplace(run_ensemble(config.surrogate, result.train, config.window_grid()));
    if (write_all && config.write_ensemble) io::write_ensemble(out / "ensemble.csv", *ensemble);
  });

  std::vector<double> future;
  for (double t : config.forecast_times) {
    if (t > config.window_end) future.push_back(t);
  }
  stage("dmd", [&] {
    result.dmd = fit_dmd(*ensemble, config.dmd_rank);
    report.dmd_rank = result.dmd.rank;
    report.dmd_eigenvalues = result.dmd.eigenvalues;
    report.dmd_training_residual = reconstruction_error(result.dmd, *ensemble);
    if (write_all) {
      io::write_json(out / "dmd_model.json", io::dmd_to_json(result.dmd));
      if (!future.empty()) {
        Matrix rows(static_cast<Index>(future.size()), result.dmd.state_size() + 1);
        for (std::size_t i = 0; i < future.size(); ++i) {
          rows(static_cast<Index>(i), 0) = future[i];
          rows.row(static_cast<Index>(i)).tail(result.dmd.state_size()) =
              forecast(result.dmd, future[i]).transpose();
        }
        std::vector<std::string> header{"t"};
        header.insert(header.end(), ensemble->sample_ids().begin(), ensemble->sample_ids().end());
        io::write_csv(out / "dmd_forecast.csv", header, rows);
      }
    }
  });
  ensemble.reset();

  stage("dyas", [&] {
    result.dyas = run_dyas(config, result.train, result.dmd);
    report.warnings.insert(report.warnings.end(), result.dyas.warnings.begin(),
                           result.dyas.warnings.end());
    if (write_all) {
      const Matrix xi = normalize_samples(result.train, config.domain);
      for (std::size_t i = 0; i < result.dyas.times.size(); ++i) {
        const double t = result.dyas.times[i];
        write_dyas_instant(out / "dyas", t, result.dyas.subspaces[i], xi,
                           training_targets(config, result.train, result.dmd, t));
      }
    }
  });

  stage("freeze", [&] { report.frozen = frozen_parameters(result.dyas, config.freeze_threshold); });

  stage("gpr-compare", [&] {
    for (double t : config.forecast_times) {
      Vector targets = training_targets(config, result.train, result.dmd, t);
      const Vector truth = truth_at(config.surrogate, result.test, t);
      const auto [full, reduced] =
          compare_regressions(config, result.train, targets, result.test, truth, report.frozen);
      report.times.push_back(t);
      report.full_errors.push_back(full);
      report.reduced_errors.push_back(reduced);
      result.training_targets.push_back(std::move(targets));
    }
    if (write_any) {
      Matrix full(static_cast<Index>(report.times.size()), 2);
      Matrix reduced(full.rows(), 2);
      for (Index i = 0; i < full.rows(); ++i) {
        full(i, 0) = reduced(i, 0) = report.times[static_cast<std::size_t>(i)];
        full(i, 1) = report.full_errors[static_cast<std::size_t>(i)];
        reduced(i, 1) = report.reduced_errors[static_cast<std::size_t>(i)];
      }
      io::write_csv(out / "errors_full.csv", {"t", "relative_error"}, full);
      io::write_csv(out / "errors_reduced.csv", {"t", "relative_error"}, reduced);
    }
  });

  if (write_any) {
    stage("report", [&] {
      json j = report_to_json(report);
      // the output location is not an input; leaving it out keeps reports
      // from different directories comparable byte for byte
      j["config"] = config_to_json(config);
      j["config"].erase("output_dir");
      io::write_json(out / "report.json", j);
      json timing = json::object();
      for (const auto& [name, seconds] : report.timing) timing[name] = seconds;
      io::write_json(out / "timing.json", timing);
    });
  }
  return result;
}

SweepTables sensitivity_sweeps(const PipelineConfig& config, bool write_files) {
  config.validate();
  SweepTables tables;
  const Matrix train =
      sample_parameters(config.domain, config.n_train, config.seed, config.sampling);
  const Matrix test =
      sample_parameters(config.domain, config.n_test, config.seed + 1, config.sampling);
  const double final_time =
      *std::max_element(config.forecast_times.begin(), config.forecast_times.end());
  const Vector final_truth = truth_at(config.surrogate, train, final_time);

  tables.dmd_dt.resize(static_cast<Index>(config.sweep_dmd_dts.size()), 2);
  DmdModel reference_dmd;
  for (std::size_t i = 0; i < config.sweep_dmd_dts.size(); ++i) {
    const double step = config.sweep_dmd_dts[i];
    const auto count =
        static_cast<Index>(std::llround((config.window_end - config.window_start) / step));
    const SnapshotEnsemble ens =
        run_ensemble(config.surrogate, train, {config.window_start + step, step, count});
    RankSpec rank = config.dmd_rank;
    const Index max_rank = std::min(ens.samples(), ens.instants() - 1);
    if (rank.mode == RankSpec::Mode::kFixed) {
      rank.value = std::min(rank.value, static_cast<double>(max_rank));
    }
    const DmdModel model = fit_dmd(ens, rank);
    if (i == 0) reference_dmd = model;
    tables.dmd_dt(static_cast<Index>(i), 0) = step;
    tables.dmd_dt(static_cast<Index>(i), 1) =
        relative_error(final_truth, forecast(model, final_time));
  }

  if (config.dt != config.sweep_dmd_dts.front()) {
    reference_dmd = fit_dmd(run_ensemble(config.surrogate, train, config.window_grid()),
                            config.dmd_rank);
  }
  const std::vector<Index> frozen =
      frozen_parameters(run_dyas(config, train, reference_dmd), config.freeze_threshold);
  const Vector window_targets = truth_at(config.surrogate, train, config.window_end);
  const Vector window_truth = truth_at(config.surrogate, test, config.window_end);
  tables.gpr_size.resize(static_cast<Index>(config.sweep_train_sizes.size()), 3);
  for (std::size_t i = 0; i < config.sweep_train_sizes.size(); ++i) {
    const Index n = config.sweep_train_sizes[i];
    const auto [full, reduced] = compare_regressions(config, train.topRows(n),
                                                     window_targets.head(n), test, window_truth,
                                                     frozen);
    tables.gpr_size.row(static_cast<Index>(i)) << static_cast<double>(n), full, reduced;
  }

  if (write_files) {
    io::write_csv(config.output_dir / "sweep_dmd_dt.csv", {"dt", "relative_error"},
                  tables.dmd_dt);
    io::write_csv(config.output_dir / "sweep_gpr_size.csv",
                  {"n_train", "relative_error_full", "relative_error_reduced"}, tables.gpr_size);
  }
  return tables;
}

AirfoilProfile reference_profile(const GeometryConfig& geometry) {
  return naca4_profile(geometry.naca_code, geometry.n_points, geometry.closed_te);
}

PointSet2D reference_mesh(const GeometryConfig& geometry, const AirfoilProfile& profile) {
  if (geometry.mesh_file.empty()) return generate_reference_mesh(profile, geometry.generated_mesh);
  return io::read_mesh(geometry.mesh_file);
}

namespace {

/// Displacement of a wing point under the bump deformation: the upper sum
/// above the reference mean line, minus the lower sum below it.
Vector2 surface_displacement(const AirfoilProfile& reference, const BumpBasis& bumps,
                             const Vector& mu, const Vector2& point) {
  const double x = std::clamp(point(0), 0.0, 1.0);
  const Vector& st = reference.stations();
  const auto hi = std::upper_bound(st.data(), st.data() + st.size(), x) - st.data();
  const Index j = std::clamp<Index>(hi, 1, st.size() - 1);
  const double w = (x - st(j - 1)) / (st(j) - st(j - 1));
  auto mean_line = [&](Index i) { return 0.5 * (reference.y_upper()(i) + reference.y_lower()(i)); };
  const double mean = (1.0 - w) * mean_line(j - 1) + w * mean_line(j);

  const bool upper = point(1) >= mean;
  double dy = 0.0;
  for (int i = 0; i < BumpBasis::kCount; ++i) {
    const double r = bump_value(bumps, i + 1, x);
    dy += upper ? mu(i) * r : -mu(BumpBasis::kCount + i) * r;
  }
  return {0.0, dy};
}

}  // namespace

std::pair<AirfoilProfile, PointSet2D> deform_and_morph(const PipelineConfig& config,
                                                       const Vector& mu, bool write_files) {
  const GeometryConfig& g = config.geometry;
  const AirfoilProfile reference = reference_profile(g);
  AirfoilProfile deformed = deform_profile(reference, mu, g.bumps);
  const PointSet2D mesh = reference_mesh(g, reference);

  const Eigen::MatrixX2d centers = mesh.select(PointTag::kWing);
  Eigen::MatrixX2d displacements(centers.rows(), 2);
  for (Index i = 0; i < centers.rows(); ++i) {
    displacements.row(i) =
        surface_displacement(reference, g.bumps, mu, centers.row(i).transpose()).transpose();
  }
  const RbfModel model = fit_rbf(centers, displacements, g.kernel_radius);
  PointSet2D morphed = morph_mesh(mesh, model, g.cutoff);

  if (write_files) {
    const fs::path dir = config.output_dir / "geometry";
    io::write_profile(dir / "profile_reference.csv", reference);
    io::write_profile(dir / "profile_deformed.csv", deformed);
    io::write_mesh(dir / "mesh_reference.csv", mesh);
    io::write_mesh(dir / "mesh_morphed.csv", morphed);
  }
  return {std::move(deformed), std::move(morphed)};
}

}  // namespace aerorom
