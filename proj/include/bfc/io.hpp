// Copyright 2026 The bfctomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bfc/bayes.hpp"
#include "bfc/correlation.hpp"
#include "bfc/design.hpp"
#include "bfc/measmodel.hpp"
#include "bfc/qstate.hpp"
#include "bfc/synth.hpp"

namespace bfc::io {

using nlohmann::json;

/// {"dim": n, "re": [[...]], "im": [[...]]}; reading re-validates.
json density_to_json(const DensityMatrix &rho);
DensityMatrix density_from_json(const json &j);

/// {"d", "delta_max", "seed", "settings": [{"theta", "phi", "delta"}, ...]}.
json plan_to_json(const SettingPlan &plan);
SettingPlan plan_from_json(const json &j);

/// Counts CSV with header `r,m,n,counts`, 1-based indices, one row per bin.
std::string counts_to_csv(const CoincidenceDataset &data);
/// Sidecar {"d", "R_tot", "exposure": [...], "seed"}; seed is null for measured data.
json dataset_sidecar(const CoincidenceDataset &data);
CoincidenceDataset dataset_from_csv(const std::string &csv, const json &sidecar);

json param_to_json(const ParamVector &x);
ParamVector param_from_json(const json &j);

json chain_config_to_json(const ChainConfig &cfg);
ChainConfig chain_config_from_json(const json &j);

json checkpoint_to_json(const ChainCheckpoint &cp);
ChainCheckpoint checkpoint_from_json(const json &j);

json summary_to_json(const PosteriorSummary &summary);

/// `n,fidelity` rows of the sequential-fidelity schedule.
std::string schedule_to_csv(const std::vector<std::pair<int, double>> &schedule);

/// `bin_left,bin_right,count`.
std::string histogram_to_csv(const DesignHistogram &h);

/// `x,counts` rows.
std::vector<std::pair<double, double>> calibration_from_csv(const std::string &csv);
std::string calibration_to_csv(const std::vector<std::pair<double, double>> &samples);
json fit_to_json(const CorrelationFit &fit);

std::string read_file(const std::filesystem::path &path);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

} // namespace bfc::io
