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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aerorom/dmd.hpp"
#include "aerorom/gpr.hpp"
#include "aerorom/rbf_morph.hpp"
#include "aerorom/shape_param.hpp"
#include "aerorom/types.hpp"

namespace aerorom::io {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
/// Throws InputError unless the whole field is a number.
double parse_double(std::string_view text);

/// Header row plus one row per matrix row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const Matrix& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
/// Comma-separated, no quoting. Throws InputError for ragged rows or a
/// missing file.
CsvTable read_csv(const std::filesystem::path& path);

/// station,y_upper,y_lower
void write_profile(const std::filesystem::path& path, const AirfoilProfile& profile);
AirfoilProfile read_profile(const std::filesystem::path& path);

/// x,y,tag in mesh order.
void write_mesh(const std::filesystem::path& path, const PointSet2D& mesh);
PointSet2D read_mesh(const std::filesystem::path& path);

/// t,<id_1>,...,<id_Ns>, one row per instant.
void write_ensemble(const std::filesystem::path& path, const SnapshotEnsemble& ensemble);
SnapshotEnsemble read_ensemble(const std::filesystem::path& path);

/// rank, dt, t0, and (re, im) pair arrays.
nlohmann::json dmd_to_json(const DmdModel& model);
DmdModel dmd_from_json(const nlohmann::json& j);

/// Hyperparameters, training data and the weight vector. Loading refactorizes
/// and throws FitError when the stored weights no longer match.
nlohmann::json gpr_to_json(const GprModel& model);
GprModel gpr_from_json(const nlohmann::json& j);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace aerorom::io
