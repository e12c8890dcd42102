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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bfc/measmodel.hpp"
#include "bfc/qstate.hpp"
#include "bfc/rng.hpp"
#include "bfc/synth.hpp"

namespace bfc {

/// Sampler coordinates: y holds 2 D^2 complex entries for a D x D density
/// matrix (first D^2 the Ginibre matrix G, row-major; last D^2 the Ginibre seed
/// of the unitary), z the standardized flux. All have standard normal priors.
struct ParamVector {
    CVector y;
    double z = 0.0;

    static ParamVector prior_draw(int state_dim, Rng &rng);
};

/// K(z) = K0 (1 + sigma z), floored at K0 * 1e-6.
struct FluxModel {
    double k0 = 1.0;
    double sigma = 0.1;

    double flux(double z) const;
    void validate() const;
};

struct ChainConfig {
    int samples = 1024;        // S
    int thinning = 1;          // T
    double beta = 0.1;         // initial pCN step, adapted during burn-in
    int burn_in = -1;          // steps; negative means 10 * samples
    std::uint64_t seed = 0;
    double accept_low = 0.2;
    double accept_high = 0.4;
    int adapt_window = 100;

    int burn_in_steps() const { return burn_in < 0 ? 10 * samples : burn_in; }
    void validate() const;
};

/// Mezzadri construction: Q diag(R_ii / |R_ii|) from the QR factorization of z.
CMatrix haar_unitary_from_ginibre(const CMatrix &z);

/// Factor X = (I + U) G with rho = X X^dagger / Tr(X X^dagger).
CMatrix bures_factor(const CVector &y, int state_dim);

/// Bures-distributed density matrix for state dimension state_dim (d^2 for two qudits).
DensityMatrix bures_density(const CVector &y, int state_dim);

using LogLikelihood = std::function<double(const ParamVector &)>;

/// Poisson log-likelihood sum_s [N_s log(K e_r p_s) - K e_r p_s], dropping
/// log N_s!. Returns -infinity when a bin with counts has zero probability.
class PoissonLikelihood {
  public:
    PoissonLikelihood(const CoincidenceDataset &data, const SettingPlan &plan, const FluxModel &flux);

    double operator()(const ParamVector &x) const;
    /// Same quantity for an explicit state and flux.
    double evaluate(const DensityMatrix &rho, double flux) const;

    int state_dim() const { return state_dim_; }
    const FluxModel &flux_model() const { return flux_; }

  private:
    double from_factor(const CMatrix &x, double flux) const;

    int state_dim_;
    FluxModel flux_;
    CMatrix stacked_;               // all V kron W blocks, one row per outcome
    std::vector<double> counts_;    // per row
    std::vector<double> exposure_;  // per row
};

double log_likelihood(const ParamVector &x, const CoincidenceDataset &data, const SettingPlan &plan,
                      const FluxModel &flux);

struct PcnState {
    ParamVector x;
    double log_like = 0.0;
};

struct PcnStepResult {
    PcnState state;
    bool accepted = false;
};

/// One preconditioned Crank-Nicolson move: x* = sqrt(1 - beta^2) x + beta xi,
/// accepted with probability min(1, L(x*) / L(x)).
PcnStepResult pcn_step(const PcnState &current, double beta, const LogLikelihood &log_like, Rng &rng);

/// Everything needed to resume a chain bit-exactly.
struct ChainCheckpoint {
    ChainConfig config;
    PcnState state;
    double beta = 0.0;
    std::string rng_state;
    std::int64_t steps = 0;
    std::int64_t accepted = 0;
    bool burned_in = false;
    int level = 0;  // thinning level n reached, T = 2^n
    std::vector<ParamVector> samples;
};

class PcnChain {
  public:
    PcnChain(LogLikelihood log_like, int state_dim, const ChainConfig &config);
    PcnChain(LogLikelihood log_like, const ChainCheckpoint &checkpoint);

    /// Adapts beta towards the acceptance window, then freezes it. Throws
    /// AdaptationFailed if the final acceptance leaves [0.01, 0.99], except when
    /// beta is pinned at 1 (the likelihood is then too flat to restrict moves).
    void burn_in();

    /// Runs count * thinning steps, keeping every thinning-th state.
    std::vector<ParamVector> sample(int count, int thinning);

    double beta() const { return beta_; }
    /// Acceptance over post-burn-in steps.
    double acceptance_rate() const;
    const PcnState &state() const { return state_; }

    ChainCheckpoint checkpoint() const;

  private:
    LogLikelihood log_like_;
    ChainConfig config_;
    PcnState state_;
    double beta_;
    Rng rng_;
    std::int64_t steps_ = 0;
    std::int64_t accepted_ = 0;
    bool burned_in_ = false;
};

struct ChainDiagnostics {
    double beta = 0.0;
    double acceptance_rate = 0.0;
};

/// Burn-in followed by S * T retained-every-T steps.
std::vector<ParamVector> run_chain(const LogLikelihood &log_like, int state_dim, const ChainConfig &config,
                                   ChainDiagnostics *diagnostics = nullptr);
std::vector<ParamVector> run_chain(const CoincidenceDataset &data, const SettingPlan &plan, const FluxModel &flux,
                                   const ChainConfig &config, ChainDiagnostics *diagnostics = nullptr);

struct PosteriorSummary {
    explicit PosteriorSummary(DensityMatrix rho) : rho_mean(std::move(rho)) {}

    DensityMatrix rho_mean;
    double fidelity_mean = 0.0;
    double fidelity_std = 0.0;
    double logneg_mean = 0.0;
    double logneg_std = 0.0;
    double k_mean = 0.0;
    double k_std = 0.0;
    double acceptance_rate = 0.0;
    double beta = 0.0;
    int n_stop = 0;
    bool converged = true;
    std::vector<std::pair<int, double>> sequential_fidelities;
};

/// Mean density matrix, fidelity, log-negativity and flux over the samples.
/// Standard deviations are population deviations over samples.
PosteriorSummary bayes_estimates(const std::vector<ParamVector> &samples, const PureState &psi_ideal, int d,
                                 const FluxModel &flux);

/// Sample mean of bures_density over the samples.
DensityMatrix mean_density(const std::vector<ParamVector> &samples, int state_dim);

struct ScheduleResult {
    std::vector<ParamVector> samples;  // from the final thinning level
    int n_stop = 0;
    std::vector<std::pair<int, double>> schedule;  // (n, F_{n,n-1})
    bool converged = false;
    double beta = 0.0;
    double acceptance_rate = 0.0;
    ChainCheckpoint checkpoint;
};

/// Runs a fresh chain with thinning T = 2^n for n = 0, 1, ..., seeded by
/// derive_seed(base.seed, n), until the Uhlmann fidelity between consecutive
/// mean estimates exceeds the threshold or n = max_n.
/// converged = false marks an exhausted budget; the last estimate is returned.
/// With several chains, each level pools chain c (seeded by derive_seed of the
/// level seed and c, chain 0 keeping the level seed) in chain order; the
/// checkpoint and beta come from chain 0 and the acceptance rate is averaged.
ScheduleResult sequential_fidelity_schedule(const LogLikelihood &log_like, int state_dim, const ChainConfig &base,
                                            double threshold = 0.99, int max_n = 10, int chains = 1);
ScheduleResult sequential_fidelity_schedule(const CoincidenceDataset &data, const SettingPlan &plan,
                                            const FluxModel &flux, const ChainConfig &base, double threshold = 0.99,
                                            int max_n = 10, int chains = 1);

/// Total counts of the unmodulated first setting over its exposure.
double default_k0(const CoincidenceDataset &data, const SettingPlan &plan);

} // namespace bfc
