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
#include <vector>

#include <gtest/gtest.h>

#include "bfc/bayes.hpp"
#include "bfc/design.hpp"
#include "bfc/error.hpp"
#include "oracles.hpp"

namespace bfc {
namespace {

CMatrix random_qudit(int d, Rng &rng) { return bures_density(rng.complex_normal_vector(2 * d * d), d).matrix(); }

double probe_error(const CMatrix &rho, int k, double eps) {
    const BandProbePrediction p = band_probe_predictions(rho, BandProbe{k, eps, true});
    return std::sqrt((p.pk - p.linearized_pk).squaredNorm() + (p.pk_prime - p.linearized_pk_prime).squaredNorm());
}

TEST(WeakMixer, Construction) {
    EXPECT_EQ(weak_mixer(4, 2, 0.0), RMatrix::Identity(4, 4));
    const RMatrix s = weak_mixer(3, 1, 0.05);
    RMatrix expected(3, 3);
    expected << 1.0, -0.05, 0.0, 0.05, 1.0, -0.05, 0.0, 0.05, 1.0;
    EXPECT_EQ(s, expected);
    EXPECT_EQ(weak_mixer(5, 2, 0.1)(4, 2), 0.1);
    EXPECT_EQ(weak_mixer(5, 2, 0.1)(0, 2), -0.1);
    EXPECT_THROW(weak_mixer(3, 0, 0.1), Error);
    EXPECT_THROW(weak_mixer(3, 3, 0.1), Error);
}

TEST(WeakMixer, SecondOrderNonUnitarity) {
    for (int d : {3, 5, 8})
        for (int k = 1; k < d; ++k) {
            std::vector<double> scaled;
            for (double eps : {1e-2, 1e-3, 1e-4}) {
                const RMatrix s = weak_mixer(d, k, eps);
                scaled.push_back((s.transpose() * s - RMatrix::Identity(d, d)).norm() / (eps * eps));
            }
            EXPECT_GT(scaled[0], 0.5);
            EXPECT_NEAR(scaled[1] / scaled[0], 1.0, 1e-6);
            EXPECT_NEAR(scaled[2] / scaled[0], 1.0, 1e-4);
        }
}

TEST(WeakMixer, ApproximatesEom) {
    for (int d : {3, 6}) {
        const double e1 = (weak_mixer(d, 1, 0.02).cast<cplx>() - eom_operator(d, 0.04)).norm();
        const double e2 = (weak_mixer(d, 1, 0.01).cast<cplx>() - eom_operator(d, 0.02)).norm();
        EXPECT_LT(e1, 0.02 * 0.02 * d);
        EXPECT_NEAR(e1 / e2, 4.0, 0.1);
    }
}

TEST(PhaseRamp, PowersOfRoot) {
    const CMatrix p = phase_ramp(5, 1);
    const cplx expected[5] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}, {0, 1}};
    for (int x = 0; x < 5; ++x) EXPECT_NEAR(std::abs(p(x, x) - expected[x]), 0.0, 1e-15);
    for (int k = 1; k <= 6; ++k) {
        const CMatrix r = phase_ramp(2 * k + 1, k);
        EXPECT_NEAR((r.adjoint() * r - CMatrix::Identity(2 * k + 1, 2 * k + 1)).norm(), 0.0, 1e-14);
        const cplx w = std::polar(1.0, kPi / (2.0 * k));
        EXPECT_NEAR(std::abs(std::pow(w, k) - cplx(0, 1)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(std::pow(w, -k) - cplx(0, -1)), 0.0, 1e-14);
        // Diagonal entry x is w^x.
        EXPECT_NEAR(std::abs(r(k - 1, k - 1) - cplx(0, 1)), 0.0, 1e-14);
    }
}

TEST(BandProbe, DiagonalStates) {
    CMatrix rho = CMatrix::Zero(4, 4);
    rho.diagonal() << 0.1, 0.2, 0.3, 0.4;
    for (double eps : {1e-2, 1e-3}) {
        const BandProbePrediction p = band_probe_predictions(rho, BandProbe{1, eps, true});
        EXPECT_EQ(p.linearized_pk, p.p0);
        EXPECT_EQ(p.linearized_pk_prime, p.p0);
        EXPECT_LT((p.pk - p.p0).cwiseAbs().maxCoeff(), eps * eps);
    }
}

TEST(BandProbe, RecoversRealPart) {
    Rng rng(1);
    const CMatrix rho = random_qudit(3, rng);
    const double eps = 1e-3;
    const BandProbePrediction p = band_probe_predictions(rho, BandProbe{1, eps, true});
    EXPECT_NEAR((p.pk[0] - p.p0[0]) / (2.0 * eps), -rho(0, 1).real(), 2.0 * eps);
    EXPECT_NEAR((p.pk_prime[0] - p.p0[0]) / (2.0 * eps), -rho(0, 1).imag(), 2.0 * eps);
}

TEST(BandProbe, HalvingRatio) {
    Rng rng(2);
    for (int d : {3, 5, 8})
        for (int k : {1, 2})
            for (int i = 0; i < 10; ++i) {
                const CMatrix rho = random_qudit(d, rng);
                const double ratio = probe_error(rho, k, 0.02) / probe_error(rho, k, 0.01);
                EXPECT_GE(ratio, 3.2);
                EXPECT_LE(ratio, 4.8);
            }
}

TEST(BandProbe, Validation) {
    const CMatrix rho = CMatrix::Identity(3, 3) / 3.0;
    EXPECT_THROW(band_probe_predictions(rho, BandProbe{1, 0.2, true}), Error);
    EXPECT_NO_THROW(band_probe_predictions(rho, BandProbe{1, 0.2, false}));
    EXPECT_THROW(band_probe_predictions(rho, BandProbe{3, 0.01, true}), Error);
    EXPECT_THROW(band_probe_predictions(CMatrix::Identity(3, 2), BandProbe{1, 0.01, true}), Error);
}

TEST(EomOperator, ColumnsAndLeakage) {
    EXPECT_EQ(eom_operator(4, 0.0), CMatrix::Identity(4, 4));
    for (int d : {3, 8})
        for (double delta : {0.5, 2.0, 4.0, 9.0}) {
            const CMatrix t = eom_operator(d, delta);
            for (int x = 0; x < d; ++x) {
                double leak = 0.0;
                for (int order = -80; order <= 80; ++order)
                    if (x + order < 0 || x + order >= d) leak += std::pow(std::cyl_bessel_j(double(std::abs(order)), delta), 2);
                EXPECT_LE(t.col(x).squaredNorm(), 1.0 + 1e-12);
                EXPECT_NEAR(1.0 - t.col(x).squaredNorm(), leak, 1e-12);
                for (int y = 0; y < d; ++y) {
                    const int order = y - x;
                    const double j = std::cyl_bessel_j(double(std::abs(order)), delta);
                    EXPECT_NEAR(t(y, x).real(), order < 0 && order % 2 ? -j : j, 1e-12);
                }
            }
        }
}

TEST(EomOperator, EffectiveSupport) {
    for (double delta = 0.25; delta <= 16.0; delta += 0.25) {
        const int c = static_cast<int>(std::ceil(delta));
        double outside = 0.0;
        for (int k = c + 1; k <= 120; ++k) outside += 2.0 * std::pow(std::cyl_bessel_j(double(k), delta), 2);
        EXPECT_LT(outside, 0.12) << delta;
    }
}

TEST(DesignHistogram, MassAndDeterminism) {
    const DesignStudy study{4, 8, 4.0, 30, 9};
    const DesignHistogram a = design_histogram(study), b = design_histogram(study);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.median_singular_value, b.median_singular_value);
    std::int64_t total = 0;
    for (auto c : a.counts) total += c;
    EXPECT_EQ(total, 30 * 16);
    EXPECT_EQ(a.total, 30 * 16);
    ASSERT_EQ(a.edges.size(), std::size_t(kHistogramBins + 1));
    EXPECT_DOUBLE_EQ(a.edges.front(), -6.0);
    EXPECT_DOUBLE_EQ(a.edges.back(), 1.0);

    const DesignHistogram one = design_histogram(DesignStudy{8, 16, 8.0, 1, 2});
    EXPECT_EQ(one.total, 64);
    EXPECT_THROW(design_histogram(DesignStudy{8, 16, 8.0, 0, 2}), Error);
}

TEST(DesignHistogram, PeakNearUnity) {
    const DesignHistogram h = design_histogram(DesignStudy{8, 16, 8.0, 200, 3});
    const auto peak = std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin();
    const double centre = 0.5 * (h.edges[peak] + h.edges[peak + 1]);
    EXPECT_NEAR(centre, 0.0, 0.5);
}

// Histograms for delta_max in {d/2, d, 2d} at d = 8, R = 2d.
const std::vector<DesignHistogram> &delta_scan() {
    static const std::vector<DesignHistogram> scan = [] {
        std::vector<DesignHistogram> out;
        for (double delta : {4.0, 8.0, 16.0}) out.push_back(design_histogram(DesignStudy{8, 16, delta, 300, 4}));
        return out;
    }();
    return scan;
}

double peak_centre(const DesignHistogram &h) {
    const auto peak = std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin();
    return 0.5 * (h.edges[peak] + h.edges[peak + 1]);
}

TEST(DesignHistogram, MedianLargestAtDeltaMaxD) {
    const auto &scan = delta_scan();
    EXPECT_GT(scan[1].median_singular_value, scan[0].median_singular_value);
    EXPECT_GT(scan[1].median_singular_value, scan[2].median_singular_value);
}

TEST(DesignHistogram, PeakClosestToUnityAtDeltaMaxD) {
    const auto &scan = delta_scan();
    EXPECT_LT(std::abs(peak_centre(scan[1])), std::abs(peak_centre(scan[0])));
    EXPECT_LT(std::abs(peak_centre(scan[1])), std::abs(peak_centre(scan[2])));
    EXPECT_GT(scan[0].tail_fraction, scan[1].tail_fraction);
    EXPECT_LT(peak_centre(scan[2]), peak_centre(scan[1]));
}

TEST(InformationalCompleteness, Cases) {
    SettingPlan jsi = random_settings(4, 1, 0.0, 1);
    for (int i = 0; i < 5; ++i) jsi.settings.push_back(random_settings(4, 1, 0.0, 2 + i).settings[0]);
    const Completeness c = informational_completeness(measurement_matrix(jsi, MeasurementSpace::kSingleQudit));
    EXPECT_EQ(c.rank, 4);
    EXPECT_FALSE(c.complete);

    for (int d : {2, 3, 5}) {
        const Completeness m = informational_completeness(measurement_matrix_from_transfers(testing::prime_mub_bases(d)));
        EXPECT_EQ(m.rank, d * d);
        EXPECT_TRUE(m.complete);
    }

    const Completeness single =
        informational_completeness(measurement_matrix(random_settings(5, 2, 2.0, 3).first(1), MeasurementSpace::kSingleQudit));
    EXPECT_LE(single.rank, 5);
    EXPECT_FALSE(single.complete);

    const Completeness rich =
        informational_completeness(measurement_matrix(random_settings(3, 12, 3.0, 4), MeasurementSpace::kSingleQudit));
    EXPECT_TRUE(rich.complete);
}

} // namespace
} // namespace bfc
