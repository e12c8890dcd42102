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

#include <cstdint>
#include <optional>
#include <vector>

#include "bfc/measmodel.hpp"
#include "bfc/qstate.hpp"

namespace bfc {

/// Coincidence counts N[r][m][n] (0-based here; 1-based in files) together with
/// per-setting relative integration times.
class CoincidenceDataset {
  public:
    CoincidenceDataset(int d, int settings);

    int d() const { return d_; }
    int settings() const { return settings_; }

    std::int64_t &at(int r, int m, int n) { return counts_[index(r, m, n)]; }
    std::int64_t at(int r, int m, int n) const { return counts_[index(r, m, n)]; }
    const std::vector<std::int64_t> &counts() const { return counts_; }

    const std::vector<double> &exposure() const { return exposure_; }
    void set_exposure(std::vector<double> exposure);

    std::optional<std::uint64_t> seed;

    std::int64_t setting_total(int r) const;
    /// Dataset restricted to the first count settings.
    CoincidenceDataset first(int count) const;
    void validate() const;

  private:
    std::size_t index(int r, int m, int n) const {
        return (static_cast<std::size_t>(r) * d_ + m) * d_ + n;
    }

    int d_;
    int settings_;
    std::vector<std::int64_t> counts_;
    std::vector<double> exposure_;
};

enum class CountModel { kPoisson, kMultinomial };

/// Draws counts for every setting of the plan from the true state. Each setting
/// uses its own stream derived from (seed, r), so the result does not depend on
/// evaluation order.
CoincidenceDataset simulate_counts(const DensityMatrix &rho_true, const SettingPlan &plan, double flux,
                                   CountModel model, std::uint64_t seed,
                                   const std::vector<double> &exposure = {});

/// Coincidences-to-accidentals ratio of the unmodulated first setting: each
/// diagonal element over the mean of all off-diagonal elements.
struct CarReport {
    std::vector<double> per_bin;
    double min = 0.0;
    double max = 0.0;
};

/// Returns +infinity entries when every off-diagonal count is zero.
CarReport car_of_dataset(const CoincidenceDataset &data);

} // namespace bfc
