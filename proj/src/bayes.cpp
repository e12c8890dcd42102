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

#include "bfc/bayes.hpp"

#include <cmath>
#include <limits>

#include "bfc/error.hpp"

namespace bfc {

ParamVector ParamVector::prior_draw(int state_dim, Rng &rng) {
    ParamVector x;
    x.y = rng.complex_normal_vector(2 * static_cast<Eigen::Index>(state_dim) * state_dim);
    x.z = rng.normal();
    return x;
}

double FluxModel::flux(double z) const { return std::max(k0 * (1.0 + sigma * z), k0 * 1e-6); }

void FluxModel::validate() const {
    if (!(k0 > 0.0) || !std::isfinite(k0)) throw Error(ErrorCode::kInvalidK, "K0 must be positive and finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::kInvalidArguments, "flux prior width must be positive");
}

CMatrix haar_unitary_from_ginibre(const CMatrix &z) {
    if (z.rows() != z.cols() || z.rows() == 0) throw Error(ErrorCode::kDimensionMismatch, "Ginibre seed must be square");
    Eigen::HouseholderQR<CMatrix> qr(z);
    const CMatrix q = qr.householderQ();
    CMatrix u(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const cplx r = qr.matrixQR()(i, i);
        const double mag = std::abs(r);
        if (mag == 0.0) throw Error(ErrorCode::kSingularInput, "Ginibre seed is singular");
        u.col(i) = q.col(i) * (r / mag);
    }
    return u;
}

CMatrix bures_factor(const CVector &y, int state_dim) {
    const Eigen::Index n = state_dim;
    if (state_dim < 1 || y.size() != 2 * n * n)
        throw Error(ErrorCode::kDimensionMismatch, "parameter vector must hold two Ginibre matrices");
    // Row-major reshape of each half.
    using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const CMatrix g = Eigen::Map<const RowMajor>(y.data(), n, n);
    const CMatrix seed = Eigen::Map<const RowMajor>(y.data() + n * n, n, n);
    const CMatrix u = haar_unitary_from_ginibre(seed);
    return g + u * g;
}

DensityMatrix bures_density(const CVector &y, int state_dim) {
    const CMatrix x = bures_factor(y, state_dim);
    const double trace = x.squaredNorm();
    if (!(trace > 0.0) || !std::isfinite(trace)) throw Error(ErrorCode::kZeroTrace, "(I + U) G vanishes");
    CMatrix rho = (x * x.adjoint()) / trace;
    return make_density(0.5 * (rho + rho.adjoint()));
}

PoissonLikelihood::PoissonLikelihood(const CoincidenceDataset &data, const SettingPlan &plan, const FluxModel &flux)
    : state_dim_(plan.d * plan.d), flux_(flux) {
    plan.validate();
    data.validate();
    flux.validate();
    const int d = plan.d;
    if (data.d() != d || data.settings() != plan.size())
        throw Error(ErrorCode::kDimensionMismatch, "dataset and plan disagree on d or the number of settings");
    const int rows_per = d * d;
    stacked_.resize(static_cast<Eigen::Index>(plan.size()) * rows_per, rows_per);
    counts_.reserve(stacked_.rows());
    exposure_.reserve(stacked_.rows());
    for (int r = 0; r < plan.size(); ++r) {
        stacked_.middleRows(static_cast<Eigen::Index>(r) * rows_per, rows_per) = joint_transfer(plan.settings[r], d);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                counts_.push_back(static_cast<double>(data.at(r, m, n)));
                exposure_.push_back(data.exposure()[r]);
            }
    }
}

double PoissonLikelihood::from_factor(const CMatrix &x, double flux) const {
    const double trace = x.squaredNorm();
    if (!(trace > 0.0)) return -std::numeric_limits<double>::infinity();
    const CMatrix amps = stacked_ * x;
    const RVector prob = amps.rowwise().squaredNorm() / trace;
    double total = 0.0;
    for (Eigen::Index s = 0; s < prob.size(); ++s) {
        const double mean = flux * exposure_[s] * prob[s];
        if (counts_[s] > 0.0) {
            if (!(mean > 0.0)) return -std::numeric_limits<double>::infinity();
            total += counts_[s] * std::log(mean);
        }
        total -= mean;
    }
    return total;
}

double PoissonLikelihood::operator()(const ParamVector &x) const {
    return from_factor(bures_factor(x.y, state_dim_), flux_.flux(x.z));
}

double PoissonLikelihood::evaluate(const DensityMatrix &rho, double flux) const {
    if (rho.dim() != state_dim_) throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match the data");
    // rho = L L^dagger for any square root L; the eigen-root keeps rank-deficient states.
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.matrix());
    const CMatrix root = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    return from_factor(root, flux);
}

double log_likelihood(const ParamVector &x, const CoincidenceDataset &data, const SettingPlan &plan,
                      const FluxModel &flux) {
    return PoissonLikelihood(data, plan, flux)(x);
}

PcnStepResult pcn_step(const PcnState &current, double beta, const LogLikelihood &log_like, Rng &rng) {
    const double keep = std::sqrt(std::max(0.0, 1.0 - beta * beta));
    PcnStepResult out;
    out.state.x.y.resize(current.x.y.size());
    for (Eigen::Index i = 0; i < current.x.y.size(); ++i) out.state.x.y[i] = keep * current.x.y[i] + beta * rng.complex_normal();
    out.state.x.z = keep * current.x.z + beta * rng.normal();
    out.state.log_like = log_like(out.state.x);

    const double log_ratio = out.state.log_like - current.log_like;
    // Draw the uniform unconditionally so the stream advances identically either way.
    const double u = rng.uniform();
    if (log_ratio >= 0.0 || (std::isfinite(log_ratio) && u < std::exp(log_ratio))) {
        out.accepted = true;
        return out;
    }
    out.state = current;
    out.accepted = false;
    return out;
}

} // namespace bfc
