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

#include "bfc/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "bfc/error.hpp"
#include "bfc/types.hpp"

namespace bfc {

namespace {

constexpr double kGhzToRadPerSecond = kTwoPi * 1e9;

// Integral of e^{-g|t|} cos(phase - detune t) over |t| <= window / g. The odd
// sine part drops out of the symmetric window.
double cosine_integral(double g, double detune, double phase, double window) {
    const std::complex<double> a(g, -detune);
    const std::complex<double> part = (1.0 - std::exp(-a * (window / g))) / a;
    return 2.0 * std::cos(phase) * part.real();
}

// Residual functor: weighted (model - data) for an arbitrary parametric model.
template <typename Model>
struct Residuals : Eigen::DenseFunctor<double> {
    Residuals(const std::vector<std::pair<double, double>> &samples, int params, Model model)
        : Eigen::DenseFunctor<double>(params, static_cast<int>(samples.size())), samples(samples), model(model) {}

    int operator()(const Eigen::VectorXd &p, Eigen::VectorXd &out) const {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double weight = 1.0 / std::sqrt(std::max(samples[i].second, 1.0));
            out[static_cast<Eigen::Index>(i)] = weight * (model(p, samples[i].first) - samples[i].second);
        }
        return 0;
    }

    const std::vector<std::pair<double, double>> &samples;
    Model model;
};

struct Solution {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;
    double rss = std::numeric_limits<double>::infinity();
};

template <typename Model>
Solution least_squares(const std::vector<std::pair<double, double>> &samples, Model model, Eigen::VectorXd start) {
    using Functor = Residuals<Model>;
    Functor f(samples, static_cast<int>(start.size()), model);
    Eigen::NumericalDiff<Functor, Eigen::Central> numeric(f);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor, Eigen::Central>> lm(numeric);
    lm.setMaxfev(4000);
    lm.setXtol(1e-14);
    lm.setFtol(1e-14);
    lm.minimize(start);

    Solution s;
    Eigen::VectorXd res(samples.size());
    f(start, res);
    if (!start.allFinite() || !res.allFinite()) return s;
    s.params = start;
    s.rss = res.squaredNorm();

    Eigen::MatrixXd jac(samples.size(), start.size());
    numeric.df(start, jac);
    const int dof = std::max<int>(1, static_cast<int>(samples.size() - start.size()));
    const Eigen::MatrixXd info = jac.transpose() * jac;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
    if (lu.isInvertible())
        s.covariance = lu.inverse() * (s.rss / dof);
    else
        s.covariance = Eigen::MatrixXd::Constant(start.size(), start.size(), std::numeric_limits<double>::infinity());
    return s;
}

double wrap_phase(double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0.0 ? x + kTwoPi : x;
}

CorrelationFit fit_phase_sweep(const std::vector<std::pair<double, double>> &samples) {
    double lo = samples.front().second, hi = lo;
    for (const auto &[x, y] : samples) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    // p = (offset, scale, phi0)
    auto model = [](const Eigen::VectorXd &p, double phi) { return p[0] + p[1] * (1.0 - std::cos(phi + p[2])); };

    Solution best;
    for (double phi0 : {0.0, 0.5 * kPi, kPi, 1.5 * kPi}) {
        Eigen::VectorXd start(3);
        start << lo, 0.5 * (hi - lo), phi0;
        Solution s = least_squares(samples, model, start);
        if (s.rss < best.rss) best = std::move(s);
    }
    if (!std::isfinite(best.rss)) throw Error(ErrorCode::kFitDiverged, "no start converged");

    CorrelationFit fit;
    fit.mode = SweepMode::kPhaseSweep;
    fit.params.offset = best.params[0];
    fit.params.scale = best.params[1];
    fit.params.phi0 = wrap_phase(best.params[2]);
    // A negative scale is the same curve shifted by pi.
    if (fit.params.scale < 0.0) {
        fit.params.offset += 2.0 * fit.params.scale;
        fit.params.scale = -fit.params.scale;
        fit.params.phi0 = wrap_phase(fit.params.phi0 + kPi);
    }
    fit.sigma_offset = std::sqrt(best.covariance(0, 0));
    fit.sigma_scale = std::sqrt(best.covariance(1, 1));
    fit.sigma_phi0 = std::sqrt(best.covariance(2, 2));
    fit.residual_sum = best.rss;
    return fit;
}

CorrelationFit fit_frequency_sweep(const std::vector<std::pair<double, double>> &samples, const FitOptions &opt) {
    std::vector<std::pair<double, double>> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    auto min_it = std::min_element(sorted.begin(), sorted.end(), [](auto &a, auto &b) { return a.second < b.second; });
    const double lo = min_it->second;
    double hi = lo;
    for (const auto &s : sorted) hi = std::max(hi, s.second);
    const double half = 0.5 * (lo + hi);
    double left = sorted.front().first, right = sorted.back().first;
    for (auto it = min_it; it != sorted.begin(); --it)
        if (it->second > half) {
            left = it->first;
            break;
        }
    for (auto it = min_it; it != sorted.end(); ++it)
        if (it->second > half) {
            right = it->first;
            break;
        }
    const double width_guess = std::max(0.5 * (right - left), 1e-6);

    // Units: x and p[3] in GHz, p[2] = gamma / 2 pi in GHz. p[1] is the
    // off-resonance height above the offset.
    const double window = opt.window;
    const double phase = opt.total_phase;
    auto model = [window, phase](const Eigen::VectorXd &p, double f_rf) {
        const double g = kTwoPi * std::abs(p[2]);
        const double detune = kTwoPi * (p[3] - f_rf);
        const double shape = (1.0 - std::exp(-window)) - 0.5 * g * cosine_integral(g, detune, phase, window);
        return p[0] + p[1] * shape;
    };

    Solution best;
    for (double mult : {0.5, 1.0, 2.0}) {
        Eigen::VectorXd start(4);
        start << lo, hi - lo, width_guess * mult, min_it->first;
        Solution s = least_squares(sorted, model, start);
        if (s.rss < best.rss) best = std::move(s);
    }
    if (!std::isfinite(best.rss)) throw Error(ErrorCode::kFitDiverged, "no start converged");

    CorrelationFit fit;
    fit.mode = SweepMode::kFrequencySweep;
    const double gamma = kGhzToRadPerSecond * std::abs(best.params[2]);
    fit.params.gamma = gamma;
    fit.params.phi = phase;
    fit.params.offset = best.params[0];
    fit.params.scale = 0.5 * gamma * best.params[1];
    fit.omega_fsr = kGhzToRadPerSecond * best.params[3];
    fit.sigma_offset = std::sqrt(best.covariance(0, 0));
    fit.sigma_scale = 0.5 * gamma * std::sqrt(best.covariance(1, 1));
    fit.sigma_gamma = kGhzToRadPerSecond * std::sqrt(best.covariance(2, 2));
    fit.sigma_omega_fsr = kGhzToRadPerSecond * std::sqrt(best.covariance(3, 3));
    fit.residual_sum = best.rss;
    return fit;
}

} // namespace

void CorrelationParams::validate() const {
    if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidArguments, "linewidth must be positive");
    if (!(scale >= 0.0) || !(offset >= 0.0)) throw Error(ErrorCode::kInvalidArguments, "scale and offset must be non-negative");
}

double correlation_model(double tau, const CorrelationParams &p) {
    return p.offset + p.scale * std::exp(-p.gamma * std::abs(tau)) * (1.0 - std::cos(p.phi + p.phi0 - p.detune * tau));
}

double integrated_correlation(const CorrelationParams &p, double window) {
    const double flat = 2.0 * (1.0 - std::exp(-window)) / p.gamma;
    const double modulated = cosine_integral(p.gamma, p.detune, p.phi + p.phi0, window);
    return p.offset + p.scale * (flat - modulated);
}

CorrelationFit fit_correlation(const std::vector<std::pair<double, double>> &samples, SweepMode mode,
                               const FitOptions &options) {
    if (samples.size() < 6) throw Error(ErrorCode::kInsufficientData, "need at least six samples");
    for (const auto &[x, y] : samples)
        if (!std::isfinite(x) || !std::isfinite(y)) throw Error(ErrorCode::kInvalidArguments, "non-finite sample");

    CorrelationFit fit = mode == SweepMode::kPhaseSweep ? fit_phase_sweep(samples) : fit_frequency_sweep(samples, options);
    fit.samples = static_cast<int>(samples.size());

    const bool finite = std::isfinite(fit.params.scale) && std::isfinite(fit.params.offset) &&
                        std::isfinite(fit.sigma_scale) && std::isfinite(fit.params.gamma);
    if (!finite || !(fit.params.scale > 0.0) || fit.params.scale < 2.0 * fit.sigma_scale)
        throw Error(ErrorCode::kFitDiverged, "fitted modulation depth is not significantly above zero");
    return fit;
}

} // namespace bfc
