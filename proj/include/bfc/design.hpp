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
#include <vector>

#include "bfc/measmodel.hpp"
#include "bfc/types.hpp"

namespace bfc {

/// Single-qudit analysis of how modulation-based measurements resolve the
/// bands of a d x d density matrix.

/// S_k |x> = -eps |x-k> + |x> + eps |x+k>, truncated to bins 1..d.
RMatrix weak_mixer(int d, int k, double epsilon);

/// diag(w^x), x = 1..d, with w = e^{i pi / 2k}.
CMatrix phase_ramp(int d, int k);

struct BandProbe {
    int k = 1;
    double epsilon = 1e-2;
    /// Enforces epsilon <= 0.1 unless cleared.
    bool enforce_linear_regime = true;

    void validate(int d) const;
};

/// Exact bin probabilities after S_k and after S_k Phi_k, alongside their
/// first-order expansions in epsilon.
struct BandProbePrediction {
    RVector p0;
    RVector pk;
    RVector pk_prime;
    RVector linearized_pk;
    RVector linearized_pk_prime;
};

BandProbePrediction band_probe_predictions(const CMatrix &rho, const BandProbe &probe);

/// T[x+k][x] = J_k(delta) restricted to the grid; the modulation part of V.
CMatrix eom_operator(int d, double delta);

struct DesignStudy {
    int d = 8;
    int settings = 16;  // R, defaults to 2d
    double delta_max = 8.0;
    int trials = 2000;
    std::uint64_t seed = 0;

    void validate() const;
};

inline constexpr int kHistogramBins = 60;
inline constexpr double kHistogramLow = -6.0;
inline constexpr double kHistogramHigh = 1.0;
inline constexpr double kTailThreshold = -2.0;

/// Histogram of log10 singular values over all trials, 60 uniform bins on
/// [-6, 1]; values outside clamp to the end bins.
struct DesignHistogram {
    std::vector<double> edges;  // kHistogramBins + 1
    std::vector<std::int64_t> counts;
    double median_singular_value = 0.0;
    /// Fraction of singular values with log10 s below kTailThreshold.
    double tail_fraction = 0.0;
    std::int64_t total = 0;
};

/// Each trial draws R settings with delta uniform on [0, delta_max] and uniform
/// random phases, builds the single-qudit measurement matrix and records its
/// d^2 singular values. Trial t uses the stream derived from (seed, t).
DesignHistogram design_histogram(const DesignStudy &study);

/// Singular values of one trial of the study; exposed for inspection.
RVector design_trial_spectrum(const DesignStudy &study, int trial);

struct Completeness {
    int rank = 0;
    bool complete = false;
};

/// Rank counts singular values above 1e-10 times the largest.
Completeness informational_completeness(const MeasurementMatrix &o);

} // namespace bfc
