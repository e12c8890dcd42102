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

#include "bfc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bfc/error.hpp"

namespace bfc {

namespace {

std::string describe(const char *what, double magnitude) {
    std::ostringstream os;
    os << what << " (magnitude " << magnitude << ")";
    return os.str();
}

// Eigenvalues below dim * eps * max are rounding noise; their square roots
// would otherwise leak ~1e-8 into fidelities of rank-deficient states.
RVector clip_noise(const RVector &eigenvalues) {
    const double cutoff =
        static_cast<double>(eigenvalues.size()) * std::numeric_limits<double>::epsilon() * eigenvalues.cwiseAbs().maxCoeff();
    return eigenvalues.unaryExpr([cutoff](double v) { return v > cutoff ? v : 0.0; });
}

CMatrix psd_sqrt(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(m);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::kNumericalFailure, "eigendecomposition did not converge");
    const RVector roots = clip_noise(eig.eigenvalues()).cwiseSqrt();
    return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

} // namespace

void FrequencyGrid::validate() const {
    if (d < 2) throw Error(ErrorCode::kInvalidArguments, "qudit dimension must be at least 2");
    if (blocked < 0) throw Error(ErrorCode::kInvalidArguments, "blocked bin count must be non-negative");
}

DensityMatrix make_density(CMatrix elements) {
    if (elements.rows() != elements.cols() || elements.rows() == 0)
        throw Error(ErrorCode::kDimensionMismatch, "density matrix must be square and non-empty");

    const cplx trace = elements.trace();
    const double scale = std::max(1.0, std::abs(trace));
    const double asym = (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTolerance * scale) throw Error(ErrorCode::kNotHermitian, describe("matrix is not Hermitian", asym));

    const double trace_error = std::abs(trace - cplx(1.0, 0.0));
    if (trace_error > kTraceTolerance) throw Error(ErrorCode::kNotUnitTrace, describe("trace differs from one", trace_error));

    CMatrix hermitian = 0.5 * (elements + elements.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::kNumericalFailure, "eigendecomposition did not converge");
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -kPsdTolerance) throw Error(ErrorCode::kNotPSD, describe("negative eigenvalue", min_eig));

    return DensityMatrix(std::move(hermitian));
}

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw Error(ErrorCode::kDimensionMismatch, "empty state vector");
    const double norm_error = std::abs(amplitudes_.norm() - 1.0);
    if (norm_error > 1e-12) throw Error(ErrorCode::kInvalidArguments, describe("state vector is not normalized", norm_error));
}

DensityMatrix PureState::projector() const { return make_density(amplitudes_ * amplitudes_.adjoint()); }

PureState maximally_entangled(const FrequencyGrid &grid, std::span<const double> alphas) {
    grid.validate();
    const int d = grid.d;
    if (static_cast<int>(alphas.size()) != d)
        throw Error(ErrorCode::kDimensionMismatch, "need one phase per frequency-bin pair");
    CVector amps = CVector::Zero(d * d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int m = 0; m < d; ++m) amps[composite_index(m, m, d)] = std::polar(norm, alphas[m]);
    return PureState(std::move(amps));
}

std::vector<double> dispersion_phases(const FrequencyGrid &grid, const DispersionConfig &cfg) {
    grid.validate();
    if (cfg.length < 0.0) throw Error(ErrorCode::kInvalidArguments, "fiber length must be non-negative");
    const double spacing_rad_per_ps = grid.delta_omega * 1e-12;
    const double coeff = cfg.beta2 * cfg.length * spacing_rad_per_ps * spacing_rad_per_ps;
    std::vector<double> alphas(grid.d);
    for (int m = 1; m <= grid.d; ++m) {
        const double order = cfg.include_offset ? m + grid.blocked : m;
        alphas[m - 1] = coeff * order * order;
    }
    return alphas;
}

DensityMatrix white_noise_state(const PureState &psi, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::kLambdaOutOfRange, "lambda must lie in [0, 1]");
    const Eigen::Index n = psi.dim();
    CMatrix rho = lambda * (psi.amplitudes() * psi.amplitudes().adjoint());
    rho.diagonal().array() += (1.0 - lambda) / static_cast<double>(n);
    return make_density(std::move(rho));
}

double lambda_from_car(double car, int d) {
    if (!(car >= 1.0)) throw Error(ErrorCode::kInvalidArguments, "CAR must be at least 1");
    if (d < 2) throw Error(ErrorCode::kInvalidArguments, "qudit dimension must be at least 2");
    if (std::isinf(car)) return 1.0;
    return (car - 1.0) / (car - 1.0 + d);
}

double car_from_lambda(double lambda, int d) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::kLambdaOutOfRange, "lambda must lie in [0, 1]");
    if (lambda == 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 + d * lambda / (1.0 - lambda);
}

double fidelity_pure(const DensityMatrix &rho, const PureState &psi) {
    if (rho.dim() != psi.dim()) throw Error(ErrorCode::kDimensionMismatch, "state and density matrix dimensions differ");
    const cplx f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
    if (std::abs(f.imag()) > 1e-10) throw Error(ErrorCode::kNumericalFailure, "fidelity has an imaginary part");
    return std::clamp(f.real(), 0.0, 1.0);
}

double uhlmann_fidelity(const DensityMatrix &rho1, const DensityMatrix &rho2) {
    if (rho1.dim() != rho2.dim()) throw Error(ErrorCode::kDimensionMismatch, "density matrix dimensions differ");
    // F = ||sqrt(rho1) sqrt(rho2)||_1^2; singular values of the product stay
    // accurate where eigenvalues of sqrt(rho1) rho2 sqrt(rho1) would lose half the digits.
    const CMatrix product = psd_sqrt(rho1.matrix()) * psd_sqrt(rho2.matrix());
    Eigen::JacobiSVD<CMatrix> svd(product);
    const double tr = svd.singularValues().sum();
    return std::clamp(tr * tr, 0.0, 1.0);
}

CMatrix partial_transpose(const CMatrix &rho, int d) {
    if (d < 1 || rho.rows() != d * d || rho.cols() != d * d)
        throw Error(ErrorCode::kDimensionMismatch, "matrix is not d^2 x d^2");
    CMatrix out(rho.rows(), rho.cols());
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int kp = 0; kp < d; ++kp)
                for (int lp = 0; lp < d; ++lp)
                    out(composite_index(k, l, d), composite_index(kp, lp, d)) =
                        rho(composite_index(k, lp, d), composite_index(kp, l, d));
    return out;
}

CMatrix partial_transpose(const DensityMatrix &rho, int d) { return partial_transpose(rho.matrix(), d); }

double log_negativity(const DensityMatrix &rho, int d) {
    const CMatrix pt = partial_transpose(rho, d);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(pt, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::kNumericalFailure, "eigendecomposition did not converge");
    const double trace_norm = eig.eigenvalues().cwiseAbs().sum();
    return std::max(0.0, std::log2(trace_norm));
}

WhiteNoiseTheory white_noise_theory(int d, double lambda) {
    if (d < 2) throw Error(ErrorCode::kInvalidArguments, "qudit dimension must be at least 2");
    const double d2 = static_cast<double>(d) * d;
    WhiteNoiseTheory out{};
    out.d = d;
    out.lambda = lambda;
    out.car = car_from_lambda(lambda, d);
    out.fidelity = ((d2 - 1.0) * lambda + 1.0) / d2;
    out.log_negativity = out.fidelity > 1.0 / d ? std::log2(d * out.fidelity) : 0.0;
    return out;
}

} // namespace bfc
