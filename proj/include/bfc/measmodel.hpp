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

#include "bfc/qstate.hpp"
#include "bfc/types.hpp"

namespace bfc {

/// One pulse-shaper + EOM configuration: spectral phases on the signal and idler
/// bins (rad) followed by sinusoidal modulation of depth delta (rad).
struct MeasurementSetting {
    std::vector<double> theta;
    std::vector<double> phi;
    double delta = 0.0;

    void validate(int d) const;
};

/// Ordered settings r = 1..R_tot. The first setting always has delta = 0, i.e.
/// a plain joint spectral intensity.
struct SettingPlan {
    int d = 2;
    double delta_max = 0.0;
    std::uint64_t seed = 0;
    std::vector<MeasurementSetting> settings;

    int size() const { return static_cast<int>(settings.size()); }
    void validate() const;
    /// Plan restricted to the first count settings.
    SettingPlan first(int count) const;
};

/// Sign of the applied temporal phase. kNegativeSine is exp[-i delta sin(wt)],
/// giving V_mk = J_{m-k}; kPositiveSine swaps the Bessel order.
enum class ModulationSign { kNegativeSine, kPositiveSine };

struct TransferPair {
    CMatrix signal;  // V, d x d
    CMatrix idler;   // W, d x d
};

/// V[m][k] = J_{m-k}(delta) e^{i theta_k}, W[n][l] = J_{l-n}(delta) e^{i phi_l}.
/// Both are the in-grid block of a unitary on infinitely many bins.
TransferPair transfer_matrices(const MeasurementSetting &setting, int d,
                               ModulationSign sign = ModulationSign::kNegativeSine);

/// V kron W: row (m, n), column (k, l), composite indices as in composite_index().
CMatrix joint_transfer(const MeasurementSetting &setting, int d,
                       ModulationSign sign = ModulationSign::kNegativeSine);

/// Coincidence probabilities p[m][n] on the d x d output grid. The total falls
/// below one whenever modulation scatters photons out of the grid.
RMatrix outcome_probabilities(const DensityMatrix &rho, const MeasurementSetting &setting, int d,
                              ModulationSign sign = ModulationSign::kNegativeSine);

/// R_tot settings with i.i.d. uniform phases on [0, 2 pi). Setting 1 has delta = 0;
/// the others take the R_tot - 1 values delta_max * i / (R_tot - 2), i = 0..R_tot-2,
/// in a seeded random order (a single delta_max when R_tot = 2).
SettingPlan random_settings(int d, int r_tot, double delta_max, std::uint64_t seed);

enum class MeasurementSpace { kTwoQudit, kSingleQudit };

/// Columns are row-major vectorizations of the POVM elements M = u u^dagger,
/// so p = O^dagger vec(rho). setting_index[c] is the 0-based setting of column c.
struct MeasurementMatrix {
    CMatrix entries;
    std::vector<int> setting_index;
};

/// Row-major vectorization used by the measurement matrix.
CVector vectorize(const CMatrix &m);

MeasurementMatrix measurement_matrix(const SettingPlan &plan, MeasurementSpace space = MeasurementSpace::kTwoQudit);

/// Builds the matrix from arbitrary outcome amplitude rows: each row a of
/// `transfers[i]` yields the operator conj(a) conj(a)^dagger.
MeasurementMatrix measurement_matrix_from_transfers(const std::vector<CMatrix> &transfers);

/// Singular values of the measurement matrix, descending.
RVector singular_spectrum(const MeasurementMatrix &o);

} // namespace bfc
