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

#include <cmath>
#include <set>
#include <string>

#include "aerorom/io.hpp"
#include "aerorom/pipeline.hpp"

namespace aerorom {

namespace {

using nlohmann::json;

/// Object reader that remembers which keys were consumed so leftovers can be
/// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + " has the wrong type");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  Section child(const char* key) {
    used_.insert(key);
    return Section(j_.at(key), path_.empty() ? key : path_ + "." + key);
  }

  const json& raw(const char* key) {
    used_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) throw ConfigError("unknown config key " + where(item.key()));
    }
  }

  std::string where(const std::string& key = "") const {
    std::string p = path_.empty() ? key : (key.empty() ? path_ : path_ + "." + key);
    return "'" + (p.empty() ? std::string("<root>") : p) + "'";
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> from_vector(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector bound_vector(const json& j, Index k, const std::string& name) {
  if (j.is_number()) return Vector::Constant(k, j.get<double>());
  if (j.is_array()) {
    try {
      return to_vector(j.get<std::vector<double>>());
    } catch (const json::exception&) {
    }
  }
  throw ConfigError("'" + name + "' must be a number or an array of numbers");
}

void parse_domain(Section s, PipelineConfig& c) {
  Index k = c.domain.dimension();
  s.read("dimension", k);
  if (k < 1) throw ConfigError("'domain.dimension' must be >= 1");
  if (s.has("lower")) c.domain.lower = bound_vector(s.raw("lower"), k, "domain.lower");
  else c.domain.lower = Vector::Constant(k, 0.0);
  if (s.has("upper")) c.domain.upper = bound_vector(s.raw("upper"), k, "domain.upper");
  else c.domain.upper = Vector::Constant(k, 0.03);
  s.finish();
}

void parse_rank(Section s, RankSpec& rank) {
  std::string mode = rank.mode == RankSpec::Mode::kFixed ? "fixed" : "energy";
  s.read("mode", mode);
  s.read("value", rank.value);
  if (mode == "fixed") rank.mode = RankSpec::Mode::kFixed;
  else if (mode == "energy") rank.mode = RankSpec::Mode::kEnergy;
  else throw ConfigError("'dmd_rank.mode' must be fixed or energy");
  s.finish();
}

void parse_gpr(Section s, GprOptions& g) {
  s.read("optimize", g.optimize);
  s.read("center_targets", g.center_targets);
  s.read("min_noise_ratio", g.min_noise_ratio);
  s.read("restarts", g.restarts);
  s.read("max_evaluations_per_start", g.max_evaluations_per_start);
  s.read("seed", g.seed);
  s.read("lengthscale", g.hyperparameters.lengthscale);
  s.read("signal_variance", g.hyperparameters.signal_variance);
  s.read("noise_variance", g.hyperparameters.noise_variance);
  s.finish();
}

void parse_surrogate(Section s, SurrogateSpec& spec) {
  s.read("baseline", spec.baseline);
  s.read("tau1", spec.tau1);
  s.read("tau2", spec.tau2);
  s.read("omega", spec.omega);
  std::vector<double> steady = from_vector(spec.steady_weights);
  std::vector<double> transient = from_vector(spec.transient_weights);
  std::vector<double> relaxation = from_vector(spec.relaxation_weights);
  std::vector<double> quadrature = from_vector(spec.quadrature_weights);
  s.read("steady_weights", steady);
  s.read("transient_weights", transient);
  s.read("relaxation_weights", relaxation);
  s.read("quadrature_weights", quadrature);
  spec.steady_weights = to_vector(steady);
  spec.transient_weights = to_vector(transient);
  spec.relaxation_weights = to_vector(relaxation);
  spec.quadrature_weights = to_vector(quadrature);
  std::vector<Index> frozen;
  for (Index j : spec.frozen_indices) frozen.push_back(j + 1);
  s.read("frozen_indices", frozen);
  spec.frozen_indices.clear();
  for (Index j : frozen) spec.frozen_indices.push_back(j - 1);
  s.finish();
}

void parse_geometry(Section s, GeometryConfig& g) {
  s.read("naca_code", g.naca_code);
  s.read("n_points", g.n_points);
  s.read("closed_te", g.closed_te);
  std::vector<double> peaks(g.bumps.peak_locations.begin(), g.bumps.peak_locations.end());
  s.read("bump_peaks", peaks);
  if (peaks.size() != g.bumps.peak_locations.size()) {
    throw ConfigError("'geometry.bump_peaks' must list 5 peaks");
  }
  std::copy(peaks.begin(), peaks.end(), g.bumps.peak_locations.begin());
  s.read("bump_exponent", g.bumps.exponent);
  s.read("kernel_radius", g.kernel_radius);
  std::string mesh = g.mesh_file.string();
  s.read("mesh_file", mesh);
  g.mesh_file = mesh;
  if (s.has("cutoff")) {
    Section c = s.child("cutoff");
    std::vector<double> focal{g.cutoff.focal_point(0), g.cutoff.focal_point(1)};
    c.read("focal_point", focal);
    if (focal.size() != 2) throw ConfigError("'geometry.cutoff.focal_point' must be [x, y]");
    g.cutoff.focal_point = Vector2(focal[0], focal[1]);
    c.read("r_inner", g.cutoff.r_inner);
    c.read("r_out", g.cutoff.r_out);
    c.finish();
  }
  if (s.has("generated_mesh")) {
    Section m = s.child("generated_mesh");
    m.read("n_rings", g.generated_mesh.n_rings);
    m.read("n_angular", g.generated_mesh.n_angular);
    m.read("inner_radius", g.generated_mesh.inner_radius);
    m.read("outer_radius", g.generated_mesh.outer_radius);
    m.read("n_outer", g.generated_mesh.n_outer);
    m.finish();
  }
  s.finish();
}

json rank_json(const RankSpec& r) {
  if (r.mode == RankSpec::Mode::kFixed) {
    return {{"mode", "fixed"}, {"value", static_cast<long long>(r.value)}};
  }
  return {{"mode", "energy"}, {"value", r.value}};
}

}  // namespace

PipelineConfig::PipelineConfig() {
  for (int t = 1; t <= 30; ++t) forecast_times.push_back(static_cast<double>(t));
}

Index PipelineConfig::window_snapshots() const {
  return static_cast<Index>(std::llround((window_end - window_start) / dt));
}

TimeGrid PipelineConfig::window_grid() const {
  return {window_start + dt, dt, window_snapshots()};
}

void PipelineConfig::validate() const {
  try {
    domain.validate();
    surrogate.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  if (surrogate.domain.lower != domain.lower || surrogate.domain.upper != domain.upper) {
    throw ConfigError("surrogate domain must equal the parameter domain");
  }
  if (n_train < 1 || n_test < 1) throw ConfigError("n_train and n_test must be >= 1");
  if (!(window_start < window_end) || !(dt > 0.0) || !std::isfinite(window_end)) {
    throw ConfigError("fom_window must satisfy t_a < t_b and dt > 0");
  }
  if (window_snapshots() < 2) throw ConfigError("fom_window holds fewer than 2 snapshots");
  if (forecast_times.empty()) throw ConfigError("forecast_times must not be empty");
  for (double t : forecast_times) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("forecast_times must be positive");
  }
  if (dyas_times.empty()) throw ConfigError("dyas_times must not be empty");
  for (double t : dyas_times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("dyas_times must be >= 0");
  }
  if (!(freeze_threshold >= 0.0)) throw ConfigError("freeze_threshold must be >= 0");
  try {
    dmd_rank.validate(std::min(n_train, window_snapshots() - 1));
  } catch (const InputError& e) {
    throw ConfigError(std::string("dmd_rank: ") + e.what());
  }
  if (!(gpr.min_noise_ratio > 0.0 && gpr.min_noise_ratio <= 1.0)) {
    throw ConfigError("gpr.min_noise_ratio must lie in (0, 1]");
  }
  if (gpr.restarts < 1 || gpr.max_evaluations_per_start < 1) {
    throw ConfigError("gpr restarts and evaluation budget must be >= 1");
  }
  for (double s : sweep_dmd_dts) {
    if (!(s > 0.0) || std::llround((window_end - window_start) / s) < 2) {
      throw ConfigError("sweep dt values must leave at least 2 snapshots in the window");
    }
  }
  for (Index n : sweep_train_sizes) {
    if (n < 1 || n > n_train) throw ConfigError("sweep train sizes must lie in [1, n_train]");
  }
  try {
    geometry.bumps.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  geometry.cutoff.validate();
  if (!(geometry.kernel_radius > 0.0)) throw ConfigError("kernel_radius must be positive");
  if (geometry.n_points < 3) throw ConfigError("geometry.n_points must be >= 3");
}

PipelineConfig parse_config(const json& j) {
  PipelineConfig c;
  Section root(j, "");
  if (root.has("domain")) parse_domain(root.child("domain"), c);
  root.read("n_train", c.n_train);
  root.read("n_test", c.n_test);
  root.read("seed", c.seed);
  std::string sampling = c.sampling == SamplingStrategy::kUniform ? "uniform" : "latin-hypercube";
  root.read("sampling", sampling);
  if (sampling == "uniform") c.sampling = SamplingStrategy::kUniform;
  else if (sampling == "latin-hypercube") c.sampling = SamplingStrategy::kLatinHypercube;
  else throw ConfigError("'sampling' must be uniform or latin-hypercube");

  std::vector<double> window{c.window_start, c.window_end};
  root.read("fom_window", window);
  if (window.size() != 2) throw ConfigError("'fom_window' must be [t_a, t_b]");
  c.window_start = window[0];
  c.window_end = window[1];
  root.read("dt", c.dt);
  root.read("forecast_times", c.forecast_times);
  if (root.has("dmd_rank")) parse_rank(root.child("dmd_rank"), c.dmd_rank);
  root.read("dyas_times", c.dyas_times);
  root.read("freeze_threshold", c.freeze_threshold);
  std::string source = c.gradient_source == GradientSource::kSurrogate ? "surrogate" : "gpr";
  root.read("gradient_provider", source);
  if (source == "surrogate") c.gradient_source = GradientSource::kSurrogate;
  else if (source == "gpr") c.gradient_source = GradientSource::kGpr;
  else throw ConfigError("'gradient_provider' must be surrogate or gpr");
  if (root.has("gpr")) parse_gpr(root.child("gpr"), c.gpr);
  if (root.has("surrogate")) parse_surrogate(root.child("surrogate"), c.surrogate);
  c.surrogate.domain = c.domain;
  if (root.has("geometry")) parse_geometry(root.child("geometry"), c.geometry);
  if (root.has("sweeps")) {
    Section s = root.child("sweeps");
    s.read("dmd_dts", c.sweep_dmd_dts);
    s.read("train_sizes", c.sweep_train_sizes);
    s.finish();
  }
  std::string out = c.output_dir.string();
  root.read("output_dir", out);
  c.output_dir = out;
  root.read("write_ensemble", c.write_ensemble);
  root.finish();
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = io::read_json(path);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(j);
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  std::vector<Index> frozen;
  for (Index j : c.surrogate.frozen_indices) frozen.push_back(j + 1);
  const auto& g = c.geometry;
  return {
      {"domain",
       {{"dimension", c.domain.dimension()},
        {"lower", from_vector(c.domain.lower)},
        {"upper", from_vector(c.domain.upper)}}},
      {"n_train", c.n_train},
      {"n_test", c.n_test},
      {"seed", c.seed},
      {"sampling", c.sampling == SamplingStrategy::kUniform ? "uniform" : "latin-hypercube"},
      {"fom_window", {c.window_start, c.window_end}},
      {"dt", c.dt},
      {"forecast_times", c.forecast_times},
      {"dmd_rank", rank_json(c.dmd_rank)},
      {"dyas_times", c.dyas_times},
      {"freeze_threshold", c.freeze_threshold},
      {"gradient_provider", c.gradient_source == GradientSource::kSurrogate ? "surrogate" : "gpr"},
      {"gpr",
       {{"optimize", c.gpr.optimize},
        {"center_targets", c.gpr.center_targets},
        {"min_noise_ratio", c.gpr.min_noise_ratio},
        {"restarts", c.gpr.restarts},
        {"max_evaluations_per_start", c.gpr.max_evaluations_per_start},
        {"seed", c.gpr.seed},
        {"lengthscale", c.gpr.hyperparameters.lengthscale},
        {"signal_variance", c.gpr.hyperparameters.signal_variance},
        {"noise_variance", c.gpr.hyperparameters.noise_variance}}},
      {"surrogate",
       {{"baseline", c.surrogate.baseline},
        {"steady_weights", from_vector(c.surrogate.steady_weights)},
        {"transient_weights", from_vector(c.surrogate.transient_weights)},
        {"relaxation_weights", from_vector(c.surrogate.relaxation_weights)},
        {"quadrature_weights", from_vector(c.surrogate.quadrature_weights)},
        {"tau1", c.surrogate.tau1},
        {"tau2", c.surrogate.tau2},
        {"omega", c.surrogate.omega},
        {"frozen_indices", frozen}}},
      {"geometry",
       {{"naca_code", g.naca_code},
        {"n_points", g.n_points},
        {"closed_te", g.closed_te},
        {"bump_peaks", g.bumps.peak_locations},
        {"bump_exponent", g.bumps.exponent},
        {"kernel_radius", g.kernel_radius},
        {"mesh_file", g.mesh_file.string()},
        {"cutoff",
         {{"focal_point", {g.cutoff.focal_point(0), g.cutoff.focal_point(1)}},
          {"r_inner", g.cutoff.r_inner},
          {"r_out", g.cutoff.r_out}}},
        {"generated_mesh",
         {{"n_rings", g.generated_mesh.n_rings},
          {"n_angular", g.generated_mesh.n_angular},
          {"inner_radius", g.generated_mesh.inner_radius},
          {"outer_radius", g.generated_mesh.outer_radius},
          {"n_outer", g.generated_mesh.n_outer}}}}},
      {"sweeps", {{"dmd_dts", c.sweep_dmd_dts}, {"train_sizes", c.sweep_train_sizes}}},
      {"output_dir", c.output_dir.string()},
      {"write_ensemble", c.write_ensemble}};
}

}  // namespace aerorom
