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

#include "bfc/measmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "bfc/bessel.hpp"
#include "bfc/error.hpp"
#include "bfc/rng.hpp"

namespace bfc {

namespace {

// J_order(delta) for |order| <= d - 1 from one recurrence table.
struct BesselRow {
    explicit BesselRow(int d, double delta) : table(bessel_j_table(d, delta)) {}
    double operator()(int order) const {
        const int n = std::abs(order);
        return (order < 0 && (n % 2 == 1)) ? -table[n] : table[n];
    }
    std::vector<double> table;
};

} // namespace

void MeasurementSetting::validate(int d) const {
    if (static_cast<int>(theta.size()) != d || static_cast<int>(phi.size()) != d)
        throw Error(ErrorCode::kDimensionMismatch, "phase vectors must have one entry per bin");
    if (!std::isfinite(delta) || delta < 0.0) throw Error(ErrorCode::kInvalidArguments, "modulation index must be finite and non-negative");
}

void SettingPlan::validate() const {
    if (d < 2) throw Error(ErrorCode::kInvalidArguments, "qudit dimension must be at least 2");
    if (settings.empty()) throw Error(ErrorCode::kInvalidArguments, "plan has no settings");
    for (const auto &s : settings) s.validate(d);
}

SettingPlan SettingPlan::first(int count) const {
    if (count < 1 || count > size()) throw Error(ErrorCode::kInvalidArguments, "requested settings outside the plan");
    SettingPlan out = *this;
    out.settings.resize(count);
    return out;
}

TransferPair transfer_matrices(const MeasurementSetting &setting, int d, ModulationSign sign) {
    setting.validate(d);
    const BesselRow j(d, setting.delta);
    const int flip = sign == ModulationSign::kNegativeSine ? 1 : -1;
    TransferPair out{CMatrix(d, d), CMatrix(d, d)};
    for (int m = 0; m < d; ++m) {
        for (int k = 0; k < d; ++k) {
            out.signal(m, k) = j(flip * (m - k)) * std::polar(1.0, setting.theta[k]);
            // Idler frequencies decrease with index, hence the reversed order.
            out.idler(m, k) = j(flip * (k - m)) * std::polar(1.0, setting.phi[k]);
        }
    }
    return out;
}

CMatrix joint_transfer(const MeasurementSetting &setting, int d, ModulationSign sign) {
    const TransferPair vw = transfer_matrices(setting, d, sign);
    const int n = d * d;
    CMatrix a(n, n);
    for (int m = 0; m < d; ++m)
        for (int nn = 0; nn < d; ++nn)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    a(composite_index(m, nn, d), composite_index(k, l, d)) = vw.signal(m, k) * vw.idler(nn, l);
    return a;
}

RMatrix outcome_probabilities(const DensityMatrix &rho, const MeasurementSetting &setting, int d, ModulationSign sign) {
    if (rho.dim() != d * d) throw Error(ErrorCode::kDimensionMismatch, "density matrix is not d^2 x d^2");
    const CMatrix a = joint_transfer(setting, d, sign);
    const CMatrix ar = a * rho.matrix();
    RMatrix p(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            const int row = composite_index(m, n, d);
            p(m, n) = std::max(0.0, ar.row(row).dot(a.row(row)).real());
        }
    }
    return p;
}

SettingPlan random_settings(int d, int r_tot, double delta_max, std::uint64_t seed) {
    if (d < 2) throw Error(ErrorCode::kInvalidArguments, "qudit dimension must be at least 2");
    if (r_tot < 1) throw Error(ErrorCode::kInvalidArguments, "need at least one setting");
    if (!std::isfinite(delta_max) || delta_max < 0.0)
        throw Error(ErrorCode::kInvalidArguments, "delta_max must be finite and non-negative");

    Rng rng(seed);
    std::vector<double> deltas;
    const int remaining = r_tot - 1;
    for (int i = 0; i < remaining; ++i)
        deltas.push_back(remaining == 1 ? delta_max : delta_max * i / (remaining - 1));
    // Fisher-Yates, written out so the order does not depend on the standard library.
    for (int i = remaining - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform() * (i + 1));
        std::swap(deltas[i], deltas[j]);
    }

    SettingPlan plan;
    plan.d = d;
    plan.delta_max = delta_max;
    plan.seed = seed;
    plan.settings.reserve(r_tot);
    for (int r = 0; r < r_tot; ++r) {
        MeasurementSetting s;
        s.theta.resize(d);
        s.phi.resize(d);
        for (int k = 0; k < d; ++k) s.theta[k] = kTwoPi * rng.uniform();
        for (int k = 0; k < d; ++k) s.phi[k] = kTwoPi * rng.uniform();
        s.delta = r == 0 ? 0.0 : deltas[r - 1];
        plan.settings.push_back(std::move(s));
    }
    return plan;
}

CVector vectorize(const CMatrix &m) {
    CVector v(m.size());
    for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) v[a * m.cols() + b] = m(a, b);
    return v;
}

MeasurementMatrix measurement_matrix_from_transfers(const std::vector<CMatrix> &transfers) {
    if (transfers.empty()) throw Error(ErrorCode::kInvalidArguments, "no transfer matrices");
    const Eigen::Index dim = transfers.front().cols();
    Eigen::Index cols = 0;
    for (const auto &t : transfers) {
        if (t.cols() != dim) throw Error(ErrorCode::kDimensionMismatch, "transfer matrices act on different spaces");
        cols += t.rows();
    }
    MeasurementMatrix o{CMatrix(dim * dim, cols), {}};
    o.setting_index.reserve(cols);
    Eigen::Index c = 0;
    for (std::size_t i = 0; i < transfers.size(); ++i) {
        for (Eigen::Index row = 0; row < transfers[i].rows(); ++row) {
            const CVector u = transfers[i].row(row).adjoint();
            o.entries.col(c++) = vectorize(u * u.adjoint());
            o.setting_index.push_back(static_cast<int>(i));
        }
    }
    return o;
}

MeasurementMatrix measurement_matrix(const SettingPlan &plan, MeasurementSpace space) {
    plan.validate();
    std::vector<CMatrix> transfers;
    transfers.reserve(plan.settings.size());
    for (const auto &s : plan.settings) {
        if (space == MeasurementSpace::kTwoQudit)
            transfers.push_back(joint_transfer(s, plan.d));
        else
            transfers.push_back(transfer_matrices(s, plan.d).signal);
    }
    return measurement_matrix_from_transfers(transfers);
}

RVector singular_spectrum(const MeasurementMatrix &o) {
    if (o.entries.size() == 0) throw Error(ErrorCode::kInvalidArguments, "empty measurement matrix");
    Eigen::BDCSVD<CMatrix> svd(o.entries);
    if (svd.info() != Eigen::Success) throw Error(ErrorCode::kNumericalFailure, "SVD did not converge");
    // A wide-enough matrix has one value per row; pad the missing ones with zeros.
    RVector out = RVector::Zero(o.entries.rows());
    out.head(svd.singularValues().size()) = svd.singularValues();
    return out;
}

} // namespace bfc
