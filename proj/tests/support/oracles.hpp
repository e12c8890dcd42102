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


// Independent reference implementations used only by the test suites.

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bfc/bayes.hpp"
#include "bfc/correlation.hpp"
#include "bfc/measmodel.hpp"
#include "bfc/synth.hpp"

namespace bfc::testing {

// Asymptotic Kolmogorov p-value of a one-sample KS test against cdf.
double ks_pvalue(std::vector<double> sample, const std::function<double(double)> &cdf);
double ks_normal_pvalue(std::vector<double> sample);

// log L summed outcome by outcome from Poisson pmfs, dropping log N!.
double brute_force_log_likelihood(const DensityMatrix &rho, double flux, const CoincidenceDataset &data,
                                  const SettingPlan &plan);

// Complete set of d+1 mutually unbiased bases for prime d, as rows of unitaries.
std::vector<CMatrix> prime_mub_bases(int d);

// Log Bures density of a state with respect to Lebesgue measure on unit-trace
// Hermitian matrices, up to a constant. -inf outside the state space.
double log_bures_density(const CMatrix &rho);

struct ImportanceEstimate {
    CMatrix mean;
    double k_mean = 0.0;
    double ess = 0.0;
    std::int64_t draws = 0;
    int stages = 0;
};

// Draws straight from the prior (Bures state, normal flux) and weights by L.
ImportanceEstimate prior_importance(const CoincidenceDataset &data, const SettingPlan &plan, const FluxModel &flux,
                                    std::int64_t draws, std::uint64_t seed);

// Tempered importance sampling in state coordinates: prior draws are
// reweighted by L^phi as phi rises from 0 to 1, resampled, and moved by
// random-walk Metropolis against the analytic Bures density. ess is the
// smallest effective sample size over the stages; draws counts all proposals.
ImportanceEstimate tempered_importance(const CoincidenceDataset &data, const SettingPlan &plan,
                                       const FluxModel &flux, int particles, int moves, std::uint64_t seed);

// Poisson-noisy frequency sweep of tau-integrated coincidences around a ring
// resonance: x in GHz, baseline counts far from resonance, dip centred on fsr.
std::vector<std::pair<double, double>> frequency_sweep_samples(double gamma_ghz, double fsr_ghz, double baseline,
                                                               double floor, int points, double span_ghz,
                                                               std::uint64_t seed);

} // namespace bfc::testing
