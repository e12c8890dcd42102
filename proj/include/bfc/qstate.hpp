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

#include <span>
#include <vector>

#include "bfc/types.hpp"

namespace bfc {

/// Frequency-bin layout of a two-qudit biphoton comb.
///
/// Signal bin k (1-based) sits at omega0 + (k + blocked) * delta_omega, idler bin
/// l at omega0 - (l + blocked) * delta_omega. Frequencies are angular (rad/s).
struct FrequencyGrid {
    int d = 2;
    int blocked = 0;
    double delta_omega = kTwoPi * 40e9;
    double omega0 = 0.0;

    void validate() const;
    double signal_frequency(int k) const { return omega0 + (k + blocked) * delta_omega; }
    double idler_frequency(int l) const { return omega0 - (l + blocked) * delta_omega; }
};

/// Composite index of |k, l> in a d*d two-qudit space, 0-based. Signal index is
/// the slow one: (k, l) -> k * d + l.
constexpr int composite_index(int k, int l, int d) { return k * d + l; }

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix. Only constructible
/// through make_density, which checks all three properties.
class DensityMatrix {
  public:
    Eigen::Index dim() const { return elements_.rows(); }
    const CMatrix &matrix() const { return elements_; }
    cplx operator()(Eigen::Index row, Eigen::Index col) const { return elements_(row, col); }

  private:
    explicit DensityMatrix(CMatrix elements) : elements_(std::move(elements)) {}
    friend DensityMatrix make_density(CMatrix elements);

    CMatrix elements_;
};

/// Validates and wraps a square matrix. Throws NotHermitian, NotUnitTrace or
/// NotPSD naming the size of the violation.
DensityMatrix make_density(CMatrix elements);

/// Unit-norm state vector.
class PureState {
  public:
    explicit PureState(CVector amplitudes);

    Eigen::Index dim() const { return amplitudes_.size(); }
    const CVector &amplitudes() const { return amplitudes_; }
    DensityMatrix projector() const;

  private:
    CVector amplitudes_;
};

struct DispersionConfig {
    double beta2 = 2.06e-2;  // ps^2/m
    double length = 20.0;    // m
    bool include_offset = true;
};

/// (1/sqrt(d)) sum_m exp(i alpha_m) |m, m>.
PureState maximally_entangled(const FrequencyGrid &grid, std::span<const double> alphas);

/// alpha_m = beta2 * L * delta_omega^2 * (m + B)^2, or with m^2 when
/// include_offset is false. delta_omega is converted to rad/ps.
std::vector<double> dispersion_phases(const FrequencyGrid &grid, const DispersionConfig &cfg);

/// lambda |psi><psi| + (1 - lambda) I / dim.
DensityMatrix white_noise_state(const PureState &psi, double lambda);

/// lambda giving the requested coincidences-to-accidentals ratio for a
/// maximally entangled state mixed with white noise: CAR = 1 + d lambda / (1 - lambda).
double lambda_from_car(double car, int d);
double car_from_lambda(double lambda, int d);

/// <psi|rho|psi>.
double fidelity_pure(const DensityMatrix &rho, const PureState &psi);

/// (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
double uhlmann_fidelity(const DensityMatrix &rho1, const DensityMatrix &rho2);

/// Transpose on the idler subsystem: out[(k,l)][(k',l')] = rho[(k,l')][(k',l)].
CMatrix partial_transpose(const CMatrix &rho, int d);
CMatrix partial_transpose(const DensityMatrix &rho, int d);

/// log2 of the trace norm of the idler partial transpose, in ebits.
double log_negativity(const DensityMatrix &rho, int d);

/// Fidelity and log-negativity of the white-noise model, closed form.
struct WhiteNoiseTheory {
    int d;
    double lambda;
    double car;
    double fidelity;
    double log_negativity;
};
WhiteNoiseTheory white_noise_theory(int d, double lambda);

} // namespace bfc
