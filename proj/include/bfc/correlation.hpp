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

#include <utility>
#include <vector>

namespace bfc {

/// Biphoton time-correlation model for two equally weighted, equally mixed
/// Lorentzian bin pairs. SI units: gamma and detune in rad/s, phases in rad.
struct CorrelationParams {
    double gamma = 0.0;
    double phi = 0.0;
    double phi0 = 0.0;
    double detune = 0.0;  // omega_FSR - omega_RF
    double scale = 0.0;
    double offset = 0.0;

    void validate() const;
};

/// offset + scale e^{-gamma |tau|} (1 - cos[phi + phi0 - detune tau]), tau in s.
double correlation_model(double tau, const CorrelationParams &params);

/// Closed-form integral of the correlation model over tau in
/// [-window / gamma, window / gamma], plus the offset.
double integrated_correlation(const CorrelationParams &params, double window = 5.0);

enum class SweepMode {
    kPhaseSweep,      // x = applied joint spectral phase phi (rad), counts at tau = 0
    kFrequencySweep,  // x = RF drive frequency omega_RF / 2 pi (GHz), counts integrated over tau
};

struct FitOptions {
    /// Integration half-window in units of 1 / gamma (frequency sweep).
    double window = 5.0;
    /// phi + phi0 held during a frequency sweep; zero is the coincidence minimum.
    double total_phase = 0.0;
};

struct CorrelationFit {
    SweepMode mode = SweepMode::kPhaseSweep;
    CorrelationParams params;
    double omega_fsr = 0.0;  // rad/s, frequency sweep only

    // One-sigma uncertainties from the Jacobian at the optimum.
    double sigma_gamma = 0.0;
    double sigma_phi0 = 0.0;
    double sigma_omega_fsr = 0.0;
    double sigma_scale = 0.0;
    double sigma_offset = 0.0;

    double residual_sum = 0.0;  // weighted sum of squared residuals
    int samples = 0;
};

/// Nonlinear least-squares fit of a phase or frequency sweep, with residuals
/// weighted by the Poisson standard deviation and a multi-start over the
/// nonlinear parameter. Throws InsufficientData below six samples and
/// FitDiverged when no start converges to a significant positive scale.
CorrelationFit fit_correlation(const std::vector<std::pair<double, double>> &samples, SweepMode mode,
                               const FitOptions &options = {});

} // namespace bfc
