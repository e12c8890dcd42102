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

#include "bfc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bfc/error.hpp"
#include "bfc/rng.hpp"

namespace bfc {

CoincidenceDataset::CoincidenceDataset(int d, int settings)
    : d_(d), settings_(settings), counts_(static_cast<std::size_t>(std::max(settings, 0)) * d * d, 0),
      exposure_(std::max(settings, 0), 1.0) {
    if (d < 2 || settings < 1) throw Error(ErrorCode::kInvalidArguments, "dataset needs d >= 2 and at least one setting");
}

void CoincidenceDataset::set_exposure(std::vector<double> exposure) {
    if (static_cast<int>(exposure.size()) != settings_)
        throw Error(ErrorCode::kDimensionMismatch, "need one exposure weight per setting");
    for (double e : exposure)
        if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorCode::kInvalidArguments, "exposure weights must be positive");
    exposure_ = std::move(exposure);
}

std::int64_t CoincidenceDataset::setting_total(int r) const {
    std::int64_t total = 0;
    for (int m = 0; m < d_; ++m)
        for (int n = 0; n < d_; ++n) total += at(r, m, n);
    return total;
}

CoincidenceDataset CoincidenceDataset::first(int count) const {
    if (count < 1 || count > settings_) throw Error(ErrorCode::kInvalidArguments, "requested settings outside the dataset");
    CoincidenceDataset out(d_, count);
    std::copy_n(counts_.begin(), out.counts_.size(), out.counts_.begin());
    out.set_exposure(std::vector<double>(exposure_.begin(), exposure_.begin() + count));
    out.seed = seed;
    return out;
}

void CoincidenceDataset::validate() const {
    for (auto c : counts_)
        if (c < 0) throw Error(ErrorCode::kInvalidArguments, "negative coincidence count");
    for (double e : exposure_)
        if (!(e > 0.0)) throw Error(ErrorCode::kInvalidArguments, "exposure weights must be positive");
}

CoincidenceDataset simulate_counts(const DensityMatrix &rho_true, const SettingPlan &plan, double flux,
                                   CountModel model, std::uint64_t seed, const std::vector<double> &exposure) {
    if (!(flux > 0.0) || !std::isfinite(flux)) throw Error(ErrorCode::kInvalidK, "flux K must be positive and finite");
    plan.validate();
    const int d = plan.d;
    if (rho_true.dim() != d * d) throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match the plan");

    CoincidenceDataset data(d, plan.size());
    if (!exposure.empty()) data.set_exposure(exposure);
    data.seed = seed;

    for (int r = 0; r < plan.size(); ++r) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
        const RMatrix p = outcome_probabilities(rho_true, plan.settings[r], d);
        const double mean_total = flux * data.exposure()[r];
        if (model == CountModel::kPoisson) {
            for (int m = 0; m < d; ++m) {
                for (int n = 0; n < d; ++n) {
                    const double mu = mean_total * p(m, n);
                    data.at(r, m, n) = mu > 0.0 ? std::poisson_distribution<std::int64_t>(mu)(rng.engine()) : 0;
                }
            }
        } else {
            const double in_grid = p.sum();
            std::int64_t remaining =
                in_grid > 0.0 ? std::poisson_distribution<std::int64_t>(mean_total * in_grid)(rng.engine()) : 0;
            // Sequential binomial splitting of the total over the d^2 bins.
            double mass_left = in_grid;
            for (int m = 0; m < d; ++m) {
                for (int n = 0; n < d; ++n) {
                    const bool last = (m == d - 1 && n == d - 1);
                    std::int64_t draw = remaining;
                    if (!last && remaining > 0 && mass_left > 0.0) {
                        const double q = std::clamp(p(m, n) / mass_left, 0.0, 1.0);
                        draw = std::binomial_distribution<std::int64_t>(remaining, q)(rng.engine());
                    }
                    data.at(r, m, n) = draw;
                    remaining -= draw;
                    mass_left -= p(m, n);
                }
            }
        }
    }
    return data;
}

CarReport car_of_dataset(const CoincidenceDataset &data) {
    const int d = data.d();
    double off_sum = 0.0;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            if (m != n) off_sum += static_cast<double>(data.at(0, m, n));
    const double off_mean = off_sum / (d * (d - 1));

    CarReport report;
    report.per_bin.resize(d);
    for (int m = 0; m < d; ++m) {
        const double diag = static_cast<double>(data.at(0, m, m));
        report.per_bin[m] = off_mean > 0.0 ? diag / off_mean : std::numeric_limits<double>::infinity();
    }
    report.min = *std::min_element(report.per_bin.begin(), report.per_bin.end());
    report.max = *std::max_element(report.per_bin.begin(), report.per_bin.end());
    return report;
}

} // namespace bfc
