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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aerorom/io.hpp"
#include "aerorom/pipeline.hpp"

namespace fs = std::filesystem;
using namespace aerorom;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

PipelineConfig resolve_config(const GlobalOptions& g) {
  PipelineConfig c = g.config.empty() ? PipelineConfig{} : load_config(g.config);
  if (g.seed) c.seed = *g.seed;
  if (!g.out.empty()) c.output_dir = g.out;
  c.validate();
  return c;
}

void print_errors(const PipelineReport& r) {
  std::cout << "frozen parameters:";
  const auto names = parameter_names(10);
  for (Index j : r.frozen) std::cout << ' ' << (j < 10 ? names[static_cast<std::size_t>(j)] : std::to_string(j + 1));
  std::cout << "\nDMD rank " << r.dmd_rank << ", training residual "
            << io::format_double(r.dmd_training_residual) << '\n';
  std::cout << "t,relative_error_full,relative_error_reduced\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::cout << io::format_double(r.times[i]) << ',' << io::format_double(r.full_errors[i]) << ','
              << io::format_double(r.reduced_errors[i]) << '\n';
  }
}

Vector parse_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    values.push_back(io::parse_double(std::string_view(text).substr(start, end - start)));
    start = end + 1;
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-order airfoil lift pipeline: DMD forecasting, dynamic active "
               "subspaces and GPR response surfaces"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config, "Pipeline config (JSON)");
  app.add_option("--seed", g.seed, "Override the sampling seed");
  app.add_option("--out", g.out, "Override the output directory");
  app.add_flag("--quiet", g.quiet, "Only report errors");

  auto* sample = app.add_subcommand("sample", "Draw training and test parameter samples");

  auto* deform = app.add_subcommand("deform", "Deform the reference profile and morph the mesh");
  std::string mu_text;
  std::optional<Index> sample_index;
  deform->add_option("--mu", mu_text, "Comma-separated parameters c1..c5,d1..d5");
  deform->add_option("--sample", sample_index, "Use training sample #i instead of --mu");

  auto* fom = app.add_subcommand("fom-run", "Evaluate the surrogate ensemble on the window");

  auto* dmd_fit = app.add_subcommand("dmd-fit", "Fit DMD to an ensemble CSV");
  std::string ensemble_path;
  dmd_fit->add_option("--ensemble", ensemble_path, "Ensemble CSV (default: run the surrogate)");

  auto* dmd_forecast = app.add_subcommand("dmd-forecast", "Forecast with a saved DMD model");
  std::string model_path;
  std::string times_text;
  dmd_forecast->add_option("--model", model_path, "DMD model JSON (default: <out>/dmd_model.json)");
  dmd_forecast->add_option("--times", times_text, "Comma-separated instants (default: config)");

  auto* dyas = app.add_subcommand("dyas", "Dynamic active subspaces and frozen parameters");
  auto* gpr = app.add_subcommand("gpr-compare", "Full vs reduced GPR error curves");
  auto* pipeline = app.add_subcommand("pipeline", "Run the whole pipeline");
  auto* sweeps = app.add_subcommand("sweeps", "DMD sampling-period and GPR training-size sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const PipelineConfig config = resolve_config(g);
    const fs::path& out = config.output_dir;
    const Index k = config.domain.dimension();

    if (*sample) {
      io::write_csv(out / "samples_train.csv", parameter_names(k),
                    sample_parameters(config.domain, config.n_train, config.seed, config.sampling));
      io::write_csv(out / "samples_test.csv", parameter_names(k),
                    sample_parameters(config.domain, config.n_test, config.seed + 1,
                                      config.sampling));
      if (!g.quiet) std::cout << "wrote samples to " << out << '\n';
    } else if (*deform) {
      Vector mu = Vector::Zero(k);
      if (sample_index) {
        const Matrix train =
            sample_parameters(config.domain, config.n_train, config.seed, config.sampling);
        if (*sample_index < 0 || *sample_index >= train.rows()) {
          throw ConfigError("--sample index out of range");
        }
        mu = train.row(*sample_index).transpose();
      } else if (!mu_text.empty()) {
        mu = parse_list(mu_text);
      }
      const auto [profile, mesh] = deform_and_morph(config, mu);
      if (!g.quiet) {
        std::cout << "profile: " << profile.size() << " stations, mesh: " << mesh.size()
                  << " points -> " << (out / "geometry") << '\n';
      }
    } else if (*fom) {
      const Matrix train =
          sample_parameters(config.domain, config.n_train, config.seed, config.sampling);
      io::write_csv(out / "samples_train.csv", parameter_names(k), train);
      const SnapshotEnsemble e = run_ensemble(config.surrogate, train, config.window_grid());
      io::write_ensemble(out / "ensemble.csv", e);
      if (!g.quiet) {
        std::cout << "ensemble " << e.samples() << " x " << e.instants() << " -> "
                  << (out / "ensemble.csv") << '\n';
      }
    } else if (*dmd_fit) {
      const SnapshotEnsemble e =
          ensemble_path.empty()
              ? run_ensemble(config.surrogate,
                             sample_parameters(config.domain, config.n_train, config.seed,
                                               config.sampling),
                             config.window_grid())
              : io::read_ensemble(ensemble_path);
      const DmdModel model = fit_dmd(e, config.dmd_rank);
      io::write_json(out / "dmd_model.json", io::dmd_to_json(model));
      if (!g.quiet) {
        std::cout << "DMD rank " << model.rank << ", training residual "
                  << io::format_double(reconstruction_error(model, e)) << '\n';
        for (Index i = 0; i < model.rank; ++i) {
          std::cout << "  lambda_" << i + 1 << " = " << io::format_double(model.eigenvalues(i).real())
                    << (model.eigenvalues(i).imag() < 0 ? " - " : " + ")
                    << io::format_double(std::abs(model.eigenvalues(i).imag())) << "i\n";
        }
      }
    } else if (*dmd_forecast) {
      const fs::path path = model_path.empty() ? out / "dmd_model.json" : fs::path(model_path);
      const DmdModel model = io::dmd_from_json(io::read_json(path));
      std::vector<double> times;
      if (!times_text.empty()) {
        const Vector t = parse_list(times_text);
        times.assign(t.data(), t.data() + t.size());
      } else {
        for (double t : config.forecast_times) {
          if (t >= model.t0) times.push_back(t);
        }
      }
      Matrix rows(static_cast<Index>(times.size()), model.state_size() + 1);
      std::vector<std::string> header{"t"};
      for (Index i = 0; i < model.state_size(); ++i) header.push_back("s" + std::to_string(i));
      for (std::size_t i = 0; i < times.size(); ++i) {
        rows(static_cast<Index>(i), 0) = times[i];
        rows.row(static_cast<Index>(i)).tail(model.state_size()) =
            forecast(model, times[i]).transpose();
      }
      io::write_csv(out / "forecast.csv", header, rows);
      if (!g.quiet) std::cout << "forecast at " << times.size() << " instants -> " << (out / "forecast.csv") << '\n';
    } else if (*dyas) {
      const Matrix train =
          sample_parameters(config.domain, config.n_train, config.seed, config.sampling);
      DmdModel model;
      if (config.gradient_source == GradientSource::kGpr) {
        model = fit_dmd(run_ensemble(config.surrogate, train, config.window_grid()),
                        config.dmd_rank);
      }
      const DyasSeries series = run_dyas(config, train, model);
      const Matrix xi = normalize_samples(train, config.domain);
      for (std::size_t i = 0; i < series.times.size(); ++i) {
        write_dyas_instant(out / "dyas", series.times[i], series.subspaces[i], xi,
                           training_targets(config, train, model, series.times[i]));
      }
      const auto frozen = frozen_parameters(series, config.freeze_threshold);
      std::vector<Index> one_based;
      for (Index j : frozen) one_based.push_back(j + 1);
      io::write_json(out / "dyas" / "frozen.json",
                     {{"threshold", config.freeze_threshold}, {"frozen_parameters", one_based}});
      for (const auto& w : series.warnings) std::cerr << "warning: " << w << '\n';
      if (!g.quiet) {
        const auto names = parameter_names(k);
        std::cout << "frozen parameters (tau = " << config.freeze_threshold << "):";
        for (Index j : frozen) std::cout << ' ' << names[static_cast<std::size_t>(j)];
        std::cout << '\n';
      }
    } else if (*gpr || *pipeline) {
      const PipelineResult result =
          run_pipeline(config, *gpr ? PipelineOutputs::kRegressionOnly : PipelineOutputs::kAll);
      for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << '\n';
      if (!g.quiet) print_errors(result.report);
    } else if (*sweeps) {
      const SweepTables t = sensitivity_sweeps(config);
      if (!g.quiet) {
        std::cout << "dt,relative_error\n";
        for (Index i = 0; i < t.dmd_dt.rows(); ++i) {
          std::cout << io::format_double(t.dmd_dt(i, 0)) << ',' << io::format_double(t.dmd_dt(i, 1))
                    << '\n';
        }
        std::cout << "n_train,relative_error_full,relative_error_reduced\n";
        for (Index i = 0; i < t.gpr_size.rows(); ++i) {
          std::cout << t.gpr_size(i, 0) << ',' << io::format_double(t.gpr_size(i, 1)) << ','
                    << io::format_double(t.gpr_size(i, 2)) << '\n';
        }
      }
    }
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.what() << '\n';
    return e.numerical() ? kExitNumerical : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
