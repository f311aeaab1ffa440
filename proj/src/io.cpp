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

#include "aerorom/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aerorom/errors.hpp"

namespace aerorom::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& expected,
                   const fs::path& path) {
  if (t.header != expected) throw InputError(path.string() + ": unexpected CSV header");
}

}  // namespace

void write_csv(const fs::path& path, const std::vector<std::string>& header, const Matrix& rows) {
  if (static_cast<Index>(header.size()) != rows.cols()) {
    throw InputError("write_csv: header does not match column count");
  }
  std::ofstream out = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << format_double(rows(i, c));
    out << '\n';
  }
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (first) {
      t.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw InputError(path.string() + ": row " + std::to_string(t.rows.size() + 1) +
                       " has the wrong number of fields");
    }
    t.rows.push_back(std::move(fields));
  }
  if (first) throw InputError(path.string() + ": empty CSV");
  return t;
}

void write_profile(const fs::path& path, const AirfoilProfile& p) {
  Matrix rows(p.size(), 3);
  rows << p.stations(), p.y_upper(), p.y_lower();
  write_csv(path, {"station", "y_upper", "y_lower"}, rows);
}

AirfoilProfile read_profile(const fs::path& path) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"station", "y_upper", "y_lower"}, path);
  const auto n = static_cast<Index>(t.rows.size());
  Vector x(n), yu(n), yl(n);
  for (Index i = 0; i < n; ++i) {
    const auto& r = t.rows[static_cast<std::size_t>(i)];
    x(i) = parse_double(r[0]);
    yu(i) = parse_double(r[1]);
    yl(i) = parse_double(r[2]);
  }
  return AirfoilProfile(std::move(x), std::move(yu), std::move(yl));
}

void write_mesh(const fs::path& path, const PointSet2D& mesh) {
  mesh.validate();
  std::ofstream out = open_out(path);
  out << "x,y,tag\n";
  for (Index i = 0; i < mesh.size(); ++i) {
    out << format_double(mesh.coordinates(i, 0)) << ',' << format_double(mesh.coordinates(i, 1))
        << ',' << to_string(mesh.tags[static_cast<std::size_t>(i)]) << '\n';
  }
}

PointSet2D read_mesh(const fs::path& path) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"x", "y", "tag"}, path);
  PointSet2D mesh;
  mesh.coordinates.resize(static_cast<Index>(t.rows.size()), 2);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    mesh.coordinates(static_cast<Index>(i), 0) = parse_double(t.rows[i][0]);
    mesh.coordinates(static_cast<Index>(i), 1) = parse_double(t.rows[i][1]);
    mesh.tags.push_back(parse_point_tag(t.rows[i][2]));
  }
  mesh.validate();
  return mesh;
}

void write_ensemble(const fs::path& path, const SnapshotEnsemble& e) {
  std::ofstream out = open_out(path);
  out << 't';
  for (const auto& id : e.sample_ids()) out << ',' << id;
  out << '\n';
  for (Index j = 0; j < e.instants(); ++j) {
    out << format_double(e.time(j));
    for (Index i = 0; i < e.samples(); ++i) out << ',' << format_double(e.values()(i, j));
    out << '\n';
  }
}

SnapshotEnsemble read_ensemble(const fs::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() < 2 || t.header[0] != "t") {
    throw InputError(path.string() + ": ensemble header must be t,<sample ids>");
  }
  const auto m = static_cast<Index>(t.rows.size());
  const auto ns = static_cast<Index>(t.header.size() - 1);
  Vector times(m);
  Matrix values(ns, m);
  for (Index j = 0; j < m; ++j) {
    const auto& r = t.rows[static_cast<std::size_t>(j)];
    times(j) = parse_double(r[0]);
    for (Index i = 0; i < ns; ++i) values(i, j) = parse_double(r[static_cast<std::size_t>(i + 1)]);
  }
  return SnapshotEnsemble::from_times(std::move(values), times,
                                      {t.header.begin() + 1, t.header.end()});
}

namespace {

json complex_array(const ComplexVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

ComplexVector complex_vector(const json& arr) {
  ComplexVector v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v(static_cast<Index>(i)) = {arr.at(i).at(0).get<double>(), arr.at(i).at(1).get<double>()};
  }
  return v;
}

json real_array(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector real_vector(const json& arr) {
  const auto values = arr.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace

json dmd_to_json(const DmdModel& model) {
  json modes = json::array();
  for (Index k = 0; k < model.rank; ++k) modes.push_back(complex_array(model.modes.col(k)));
  return {{"rank", model.rank},
          {"dt", model.dt},
          {"t0", model.t0},
          {"eigenvalues", complex_array(model.eigenvalues)},
          {"modes", modes},
          {"amplitudes", complex_array(model.amplitudes)},
          {"singular_values", real_array(model.singular_values)}};
}

DmdModel dmd_from_json(const json& j) {
  try {
    DmdModel model;
    model.rank = j.at("rank").get<Index>();
    model.dt = j.at("dt").get<double>();
    model.t0 = j.at("t0").get<double>();
    model.eigenvalues = complex_vector(j.at("eigenvalues"));
    model.amplitudes = complex_vector(j.at("amplitudes"));
    if (j.contains("singular_values")) model.singular_values = real_vector(j.at("singular_values"));
    const json& modes = j.at("modes");
    if (static_cast<Index>(modes.size()) != model.rank || model.eigenvalues.size() != model.rank ||
        model.amplitudes.size() != model.rank || !(model.dt > 0.0)) {
      throw InputError("dmd model: inconsistent rank");
    }
    const Index ns = model.rank > 0 ? static_cast<Index>(modes.at(0).size()) : 0;
    model.modes.resize(ns, model.rank);
    for (Index k = 0; k < model.rank; ++k) {
      const ComplexVector col = complex_vector(modes.at(static_cast<std::size_t>(k)));
      if (col.size() != ns) throw InputError("dmd model: ragged modes");
      model.modes.col(k) = col;
    }
    return model;
  } catch (const json::exception& e) {
    throw InputError(std::string("dmd model: ") + e.what());
  }
}

json gpr_to_json(const GprModel& model) {
  json inputs = json::array();
  for (Index i = 0; i < model.inputs().rows(); ++i) {
    inputs.push_back(real_array(model.inputs().row(i).transpose()));
  }
  const auto& h = model.hyperparameters();
  return {{"lengthscale", h.lengthscale},
          {"signal_variance", h.signal_variance},
          {"noise_variance", h.noise_variance},
          {"center_targets", model.centered()},
          {"target_mean", model.target_mean()},
          {"jitter", model.jitter()},
          {"inputs", inputs},
          {"targets", real_array(model.targets())},
          {"weights", real_array(model.weights())}};
}

GprModel gpr_from_json(const json& j) {
  GprHyperparameters h;
  Matrix inputs;
  Vector targets, weights;
  bool centered = true;
  try {
    h.lengthscale = j.at("lengthscale").get<double>();
    h.signal_variance = j.at("signal_variance").get<double>();
    h.noise_variance = j.at("noise_variance").get<double>();
    centered = j.at("center_targets").get<bool>();
    const json& rows = j.at("inputs");
    const Index n = static_cast<Index>(rows.size());
    const Index p = n > 0 ? static_cast<Index>(rows.at(0).size()) : 0;
    inputs.resize(n, p);
    for (Index i = 0; i < n; ++i) {
      const Vector r = real_vector(rows.at(static_cast<std::size_t>(i)));
      if (r.size() != p) throw InputError("gpr model: ragged inputs");
      inputs.row(i) = r.transpose();
    }
    targets = real_vector(j.at("targets"));
    weights = real_vector(j.at("weights"));
  } catch (const json::exception& e) {
    throw InputError(std::string("gpr model: ") + e.what());
  }
  GprModel model = GprModel::assemble(std::move(inputs), std::move(targets), h, centered);
  const double scale = std::max(1.0, model.weights().cwiseAbs().maxCoeff());
  if (weights.size() != model.weights().size() ||
      (weights - model.weights()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw FitError("gpr model: stored weights do not match the refactorized kernel matrix");
  }
  return model;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace aerorom::io
