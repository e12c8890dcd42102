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

#include "bfc/design.hpp"

#include <algorithm>
#include <cmath>

#include "bfc/bessel.hpp"
#include "bfc/error.hpp"
#include "bfc/rng.hpp"

namespace bfc {

RMatrix weak_mixer(int d, int k, double epsilon) {
    if (d < 2) throw Error(ErrorCode::kInvalidArguments, "qudit dimension must be at least 2");
    if (k < 1 || k > d - 1) throw Error(ErrorCode::kBandOutOfRange, "band index must lie in 1..d-1");
    RMatrix s = RMatrix::Identity(d, d);
    for (int x = 0; x < d; ++x) {
        if (x - k >= 0) s(x - k, x) = -epsilon;
        if (x + k < d) s(x + k, x) = epsilon;
    }
    return s;
}

CMatrix phase_ramp(int d, int k) {
    if (d < 1 || k < 1) throw Error(ErrorCode::kInvalidArguments, "phase ramp needs d >= 1 and k >= 1");
    CMatrix out = CMatrix::Zero(d, d);
    for (int x = 1; x <= d; ++x) out(x - 1, x - 1) = std::polar(1.0, kPi / (2.0 * k) * x);
    return out;
}

void BandProbe::validate(int d) const {
    if (k < 1 || k > d - 1) throw Error(ErrorCode::kBandOutOfRange, "band index must lie in 1..d-1");
    if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArguments, "mixing strength must be positive");
    if (enforce_linear_regime && epsilon > 0.1)
        throw Error(ErrorCode::kInvalidArguments, "mixing strength above 0.1 leaves the linear regime");
}

BandProbePrediction band_probe_predictions(const CMatrix &rho, const BandProbe &probe) {
    const int d = static_cast<int>(rho.rows());
    if (rho.cols() != d || d < 2) throw Error(ErrorCode::kDimensionMismatch, "single-qudit density matrix must be square");
    probe.validate(d);
    const int k = probe.k;
    const double eps = probe.epsilon;

    const CMatrix s = weak_mixer(d, k, eps).cast<cplx>();
    const CMatrix phase = phase_ramp(d, k);
    const CMatrix mixed = s * rho * s.adjoint();
    const CMatrix mixed_prime = s * phase * rho * phase.adjoint() * s.adjoint();

    auto at = [&](int row, int col) -> cplx {
        return (row < 0 || row >= d || col < 0 || col >= d) ? cplx(0.0) : rho(row, col);
    };

    BandProbePrediction out{RVector(d), RVector(d), RVector(d), RVector(d), RVector(d)};
    for (int x = 0; x < d; ++x) {
        out.p0[x] = rho(x, x).real();
        out.pk[x] = mixed(x, x).real();
        out.pk_prime[x] = mixed_prime(x, x).real();
        out.linearized_pk[x] = rho(x, x).real() + 2.0 * eps * (at(x - k, x).real() - at(x, x + k).real());
        out.linearized_pk_prime[x] = rho(x, x).real() + 2.0 * eps * (at(x - k, x).imag() - at(x, x + k).imag());
    }
    return out;
}

CMatrix eom_operator(int d, double delta) {
    MeasurementSetting setting;
    setting.theta.assign(d, 0.0);
    setting.phi.assign(d, 0.0);
    setting.delta = delta;
    return transfer_matrices(setting, d).signal;
}

void DesignStudy::validate() const {
    if (d < 2) throw Error(ErrorCode::kInvalidArguments, "qudit dimension must be at least 2");
    if (settings < 1) throw Error(ErrorCode::kInvalidArguments, "need at least one setting per trial");
    if (!(delta_max >= 0.0) || !std::isfinite(delta_max)) throw Error(ErrorCode::kInvalidArguments, "delta_max must be non-negative");
    if (trials < 1) throw Error(ErrorCode::kInvalidArguments, "need at least one trial");
}

RVector design_trial_spectrum(const DesignStudy &study, int trial) {
    study.validate();
    Rng rng = Rng::stream(study.seed, static_cast<std::uint64_t>(trial));
    std::vector<CMatrix> transfers;
    transfers.reserve(study.settings);
    for (int r = 0; r < study.settings; ++r) {
        MeasurementSetting s;
        s.delta = study.delta_max * rng.uniform();
        s.theta.resize(study.d);
        for (auto &t : s.theta) t = kTwoPi * rng.uniform();
        s.phi.assign(study.d, 0.0);
        transfers.push_back(transfer_matrices(s, study.d).signal);
    }
    return singular_spectrum(measurement_matrix_from_transfers(transfers));
}

DesignHistogram design_histogram(const DesignStudy &study) {
    study.validate();
    DesignHistogram h;
    const double width = (kHistogramHigh - kHistogramLow) / kHistogramBins;
    h.edges.resize(kHistogramBins + 1);
    for (int i = 0; i <= kHistogramBins; ++i) h.edges[i] = kHistogramLow + i * width;
    h.counts.assign(kHistogramBins, 0);

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(study.trials) * study.d * study.d);
    std::int64_t tail = 0;
    for (int t = 0; t < study.trials; ++t) {
        const RVector s = design_trial_spectrum(study, t);
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            values.push_back(s[i]);
            const double lg = s[i] > 0.0 ? std::log10(s[i]) : kHistogramLow - 1.0;
            if (lg < kTailThreshold) ++tail;
            const int bin = std::clamp(static_cast<int>(std::floor((lg - kHistogramLow) / width)), 0, kHistogramBins - 1);
            ++h.counts[bin];
        }
    }
    h.total = static_cast<std::int64_t>(values.size());
    h.tail_fraction = static_cast<double>(tail) / static_cast<double>(h.total);
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    h.median_singular_value = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    return h;
}

Completeness informational_completeness(const MeasurementMatrix &o) {
    const RVector s = singular_spectrum(o);
    const double cutoff = 1e-10 * s[0];
    Completeness c;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > cutoff) ++c.rank;
    const Eigen::Index dim = o.entries.rows();
    c.complete = c.rank == dim;
    return c;
}

} // namespace bfc
