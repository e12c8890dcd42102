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

#include <algorithm>
#include <cmath>
#include <iterator>

#include "bfc/bayes.hpp"
#include "bfc/error.hpp"

namespace bfc {

void ChainConfig::validate() const {
    if (samples < 2) throw Error(ErrorCode::kInvalidArguments, "need at least two retained samples");
    if (thinning < 1) throw Error(ErrorCode::kInvalidArguments, "thinning factor must be at least 1");
    if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorCode::kInvalidArguments, "pCN step must lie in (0, 1]");
    if (!(accept_low > 0.0 && accept_low < accept_high && accept_high < 1.0))
        throw Error(ErrorCode::kInvalidArguments, "acceptance window must satisfy 0 < low < high < 1");
    if (adapt_window < 1) throw Error(ErrorCode::kInvalidArguments, "adaptation window must be positive");
}

PcnChain::PcnChain(LogLikelihood log_like, int state_dim, const ChainConfig &config)
    : log_like_(std::move(log_like)), config_(config), beta_(config.beta), rng_(config.seed) {
    config_.validate();
    state_.x = ParamVector::prior_draw(state_dim, rng_);
    state_.log_like = log_like_(state_.x);
}

PcnChain::PcnChain(LogLikelihood log_like, const ChainCheckpoint &cp)
    : log_like_(std::move(log_like)), config_(cp.config), state_(cp.state), beta_(cp.beta), steps_(cp.steps),
      accepted_(cp.accepted), burned_in_(cp.burned_in) {
    config_.validate();
    rng_.restore_state(cp.rng_state);
}

void PcnChain::burn_in() {
    const int total = config_.burn_in_steps();
    const double target = 0.5 * (config_.accept_low + config_.accept_high);
    int window_accepts = 0, window_steps = 0;
    int tail_accepts = 0, tail_steps = 0;
    const int tail_start = total - std::max(total / 5, std::min(total, config_.adapt_window));
    for (int i = 0; i < total; ++i) {
        PcnStepResult step = pcn_step(state_, beta_, log_like_, rng_);
        state_ = std::move(step.state);
        window_accepts += step.accepted;
        ++window_steps;
        if (i >= tail_start) {
            tail_accepts += step.accepted;
            ++tail_steps;
        }
        if (window_steps == config_.adapt_window) {
            const double rate = static_cast<double>(window_accepts) / window_steps;
            if (rate < config_.accept_low || rate > config_.accept_high)
                beta_ = std::clamp(beta_ * std::exp(2.0 * (rate - target)), 1e-8, 1.0);
            window_accepts = window_steps = 0;
        }
    }
    burned_in_ = true;
    if (tail_steps > 0) {
        const double rate = static_cast<double>(tail_accepts) / tail_steps;
        const bool pinned_flat = beta_ == 1.0 && rate > 0.99;
        if ((rate < 0.01 || rate > 0.99) && !pinned_flat)
            throw Error(ErrorCode::kAdaptationFailed,
                        "burn-in acceptance " + std::to_string(rate) + " outside [0.01, 0.99]");
    }
}

std::vector<ParamVector> PcnChain::sample(int count, int thinning) {
    if (count < 1 || thinning < 1) throw Error(ErrorCode::kInvalidArguments, "need positive sample count and thinning");
    std::vector<ParamVector> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        for (int t = 0; t < thinning; ++t) {
            PcnStepResult step = pcn_step(state_, beta_, log_like_, rng_);
            state_ = std::move(step.state);
            accepted_ += step.accepted;
            ++steps_;
        }
        out.push_back(state_.x);
    }
    return out;
}

double PcnChain::acceptance_rate() const { return steps_ == 0 ? 0.0 : static_cast<double>(accepted_) / steps_; }

ChainCheckpoint PcnChain::checkpoint() const {
    ChainCheckpoint cp;
    cp.config = config_;
    cp.state = state_;
    cp.beta = beta_;
    cp.rng_state = rng_.save_state();
    cp.steps = steps_;
    cp.accepted = accepted_;
    cp.burned_in = burned_in_;
    return cp;
}

std::vector<ParamVector> run_chain(const LogLikelihood &log_like, int state_dim, const ChainConfig &config,
                                   ChainDiagnostics *diagnostics) {
    PcnChain chain(log_like, state_dim, config);
    chain.burn_in();
    auto samples = chain.sample(config.samples, config.thinning);
    if (diagnostics) *diagnostics = {chain.beta(), chain.acceptance_rate()};
    return samples;
}

std::vector<ParamVector> run_chain(const CoincidenceDataset &data, const SettingPlan &plan, const FluxModel &flux,
                                   const ChainConfig &config, ChainDiagnostics *diagnostics) {
    const PoissonLikelihood like(data, plan, flux);
    return run_chain(std::cref(like), like.state_dim(), config, diagnostics);
}

DensityMatrix mean_density(const std::vector<ParamVector> &samples, int state_dim) {
    if (samples.empty()) throw Error(ErrorCode::kEmptyChain, "no samples");
    CMatrix sum = CMatrix::Zero(state_dim, state_dim);
    for (const auto &s : samples) sum += bures_density(s.y, state_dim).matrix();
    sum /= static_cast<double>(samples.size());
    // Renormalize away round-off accumulated over many samples.
    sum /= sum.trace().real();
    return make_density(0.5 * (sum + sum.adjoint()));
}

namespace {

struct MomentPair {
    double mean;
    double std;
};

MomentPair moments(const std::vector<double> &v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    return {mean, std::sqrt(var)};
}

} // namespace

PosteriorSummary bayes_estimates(const std::vector<ParamVector> &samples, const PureState &psi_ideal, int d,
                                 const FluxModel &flux) {
    if (samples.empty()) throw Error(ErrorCode::kEmptyChain, "no samples");
    const int dim = d * d;
    if (psi_ideal.dim() != dim) throw Error(ErrorCode::kDimensionMismatch, "ideal state dimension differs from d^2");

    std::vector<double> fid, neg, flux_values;
    fid.reserve(samples.size());
    neg.reserve(samples.size());
    flux_values.reserve(samples.size());
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (const auto &s : samples) {
        const DensityMatrix rho = bures_density(s.y, dim);
        sum += rho.matrix();
        fid.push_back(fidelity_pure(rho, psi_ideal));
        neg.push_back(log_negativity(rho, d));
        flux_values.push_back(flux.flux(s.z));
    }
    sum /= static_cast<double>(samples.size());
    sum /= sum.trace().real();

    const auto f = moments(fid);
    const auto e = moments(neg);
    const auto k = moments(flux_values);
    PosteriorSummary out(make_density(0.5 * (sum + sum.adjoint())));
    out.fidelity_mean = f.mean;
    out.fidelity_std = f.std;
    out.logneg_mean = e.mean;
    out.logneg_std = e.std;
    out.k_mean = k.mean;
    out.k_std = k.std;
    return out;
}

ScheduleResult sequential_fidelity_schedule(const LogLikelihood &log_like, int state_dim, const ChainConfig &base,
                                            double threshold, int max_n, int chains) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::kInvalidArguments, "threshold must lie in (0, 1)");
    if (max_n < 1 || max_n > 30) throw Error(ErrorCode::kInvalidArguments, "max_n must lie in [1, 30]");
    if (chains < 1) throw Error(ErrorCode::kInvalidArguments, "need at least one chain");

    struct Level {
        std::vector<ParamVector> samples;
        std::vector<PcnChain> chains;
    };
    // Each level is an independent run of length S * 2^n; agreement between
    // consecutive levels then reflects forgetting of the starting point.
    auto run_level = [&](int n) {
        Level level;
        const std::uint64_t level_seed = derive_seed(base.seed, static_cast<std::uint64_t>(n));
        for (int c = 0; c < chains; ++c) {
            ChainConfig cfg = base;
            cfg.seed = c == 0 ? level_seed : derive_seed(level_seed, static_cast<std::uint64_t>(c));
            cfg.thinning = 1 << n;
            PcnChain chain(log_like, state_dim, cfg);
            chain.burn_in();
            std::vector<ParamVector> samples = chain.sample(cfg.samples, cfg.thinning);
            level.samples.insert(level.samples.end(), std::make_move_iterator(samples.begin()),
                                 std::make_move_iterator(samples.end()));
            level.chains.push_back(std::move(chain));
        }
        return level;
    };

    ScheduleResult result;
    Level previous_level = run_level(0);
    DensityMatrix previous = mean_density(previous_level.samples, state_dim);
    int n = 1;
    for (; n <= max_n; ++n) {
        Level current_level = run_level(n);
        DensityMatrix current = mean_density(current_level.samples, state_dim);
        const double f = uhlmann_fidelity(previous, current);
        result.schedule.emplace_back(n, f);
        previous_level = std::move(current_level);
        previous = std::move(current);
        if (f > threshold) {
            result.converged = true;
            break;
        }
    }
    result.n_stop = std::min(n, max_n);
    result.samples = std::move(previous_level.samples);
    double rate = 0.0;
    for (const auto &chain : previous_level.chains) rate += chain.acceptance_rate();
    result.acceptance_rate = rate / chains;
    const PcnChain &first = previous_level.chains.front();
    result.beta = first.beta();
    result.checkpoint = first.checkpoint();
    result.checkpoint.level = result.n_stop;
    result.checkpoint.samples.assign(result.samples.begin(), result.samples.begin() + base.samples);
    return result;
}

ScheduleResult sequential_fidelity_schedule(const CoincidenceDataset &data, const SettingPlan &plan,
                                            const FluxModel &flux, const ChainConfig &base, double threshold,
                                            int max_n, int chains) {
    const PoissonLikelihood like(data, plan, flux);
    return sequential_fidelity_schedule(std::cref(like), like.state_dim(), base, threshold, max_n, chains);
}

double default_k0(const CoincidenceDataset &data, const SettingPlan &plan) {
    if (plan.settings.empty() || plan.settings.front().delta != 0.0)
        throw Error(ErrorCode::kMissingJSISetting, "first setting is not an unmodulated JSI");
    const double k0 = static_cast<double>(data.setting_total(0)) / data.exposure().front();
    if (!(k0 > 0.0)) throw Error(ErrorCode::kInvalidK, "first setting recorded no coincidences");
    return k0;
}

} // namespace bfc
