// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The stokesdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "stokesdd/channel.hpp"
#include "stokesdd/frontend.hpp"
#include "stokesdd/gaussian_stats.hpp"
#include "stokesdd/moment_oracle.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace {

using namespace stokesdd;

TEST(GaussianStats, NoiselessLimitHasZeroCovarianceAndNoiselessMean) {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const cplx kx = standard_complex_normal(rng), ky = standard_complex_normal(rng);
        const auto st = gaussian_stats_dims123(kx, ky, 0.0);
        EXPECT_EQ(st.cov, Eigen::Matrix4d::Zero());
        EXPECT_LT((st.mean - frontend_full({kx, ky}, {}).stokes()).norm(), 1e-12);
        const auto s4 = gaussian_stats_dim4(kx, ky, 0.0);
        EXPECT_EQ(s4.cov, Eigen::Matrix2d::Zero());
        const auto w = frontend_full({kx, 0.0}, {0.0, ky});
        EXPECT_LT((s4.mean - Eigen::Vector2d(w.w5, w.w6)).norm(), 1e-12);
    }
}

TEST(GaussianStats, UnitFieldOnXWithUnitNoise) {
    const auto st = gaussian_stats_dims123({1, 0}, {0, 0}, 1.0);
    EXPECT_TRUE(st.mean.isApprox(Eigen::Vector4d(3, 2, 0, 0)));
    Eigen::Matrix4d want = Eigen::Vector4d(8, 4, 12, 12).asDiagonal();
    EXPECT_EQ(st.cov, want);
}

TEST(GaussianStats, FourthDimensionSubstitution) {
    const auto st = gaussian_stats_dim4({1, 0}, {1, 0}, 1.0);
    EXPECT_TRUE(st.mean.isApprox(Eigen::Vector2d(2, 0)));
    EXPECT_EQ(st.cov, (16.0 * Eigen::Matrix2d::Identity()).eval());
}

TEST(GaussianStats, CovariancesAreSymmetricPsdAndDim4IsIsotropic) {
    Rng rng(2);
    for (int i = 0; i < 2000; ++i) {
        const cplx kx = standard_complex_normal(rng), ky = standard_complex_normal(rng);
        const double s2 = std::exp(std::uniform_real_distribution<double>(-8.0, 1.0)(rng));
        const auto st = gaussian_stats_dims123(kx, ky, s2);
        EXPECT_LT((st.cov - st.cov.transpose()).norm(), 1e-12);
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(st.cov);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9 * std::max(1.0, st.cov.norm()));
        const auto s4 = gaussian_stats_dim4(kx, ky, s2);
        EXPECT_EQ(s4.cov(0, 1), 0.0);
        EXPECT_EQ(s4.cov(1, 0), 0.0);
        EXPECT_EQ(s4.cov(0, 0), s4.cov(1, 1));
        EXPECT_GE(s4.cov(0, 0), 0.0);
    }
}

TEST(GaussianStats, PlainMonteCarloAgreesWithinTwoPercent) {
    struct Case {
        cplx kx, ky;
        double osnr;
    };
    const Case cases[] = {{{0.6, 0.2}, {-0.3, 0.5}, 10.0}, {{0.1, -0.8}, {0.4, 0.4}, 18.0}, {{0.7, 0}, {0, 0.2}, 3.0}};
    Rng rng(77);
    for (const auto &cs : cases) {
        const JonesChannel noise_only{{1, 0}, {0, 0}, osnr_to_sigma2(cs.osnr)};
        const auto theory = gaussian_stats_dims123(cs.kx, cs.ky, noise_only.sigma2);
        Eigen::Vector4d s = Eigen::Vector4d::Zero();
        Eigen::Matrix4d ss = Eigen::Matrix4d::Zero();
        const int n = 1000000;
        for (int i = 0; i < n; ++i) {
            const auto f = propagate(noise_only, {cs.kx, cs.ky}, rng).noisy;
            const Eigen::Vector4d w = frontend_full(f, {}).stokes();
            s += w;
            ss += w * w.transpose();
        }
        const Eigen::Vector4d mean = s / n;
        const Eigen::Matrix4d cov = ss / n - mean * mean.transpose();
        const double mtop = theory.mean.cwiseAbs().maxCoeff(), ctop = theory.cov.cwiseAbs().maxCoeff();
        for (int r = 0; r < 4; ++r) {
            if (std::abs(theory.mean(r)) > 0.05 * mtop) {
                EXPECT_NEAR(mean(r), theory.mean(r), 0.02 * std::abs(theory.mean(r))) << "mean " << r;
            }
            for (int c = 0; c < 4; ++c) {
                if (std::abs(theory.cov(r, c)) > 0.05 * ctop) {
                    EXPECT_NEAR(cov(r, c), theory.cov(r, c), 0.02 * std::abs(theory.cov(r, c)))
                        << "cov " << r << c;
                }
            }
        }
    }
}

TEST(GaussianStats, RqmcOracleMatchesOnRandomConfigurations) {
    const auto cases = random_oracle_cases(10, 5);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto &oc = cases[i];
        const auto e123 = sample_moments_dims123(oc.kx, oc.ky, oc.sigma2, 200000, NoiseSampler::rqmc, 100 + i);
        EXPECT_LT(max_relative_deviation(gaussian_stats_dims123(oc.kx, oc.ky, oc.sigma2), e123), 0.02) << i;
        const auto e4 = sample_moments_dim4(oc.kx_now, oc.ky_prev, oc.sigma2, 200000, NoiseSampler::rqmc, 200 + i);
        EXPECT_LT(max_relative_deviation(gaussian_stats_dim4(oc.kx_now, oc.ky_prev, oc.sigma2), e4), 0.02) << i;
    }
}

TEST(GaussianStats, RelativeDeviationIgnoresEntriesBelowFloor) {
    Stats2 t;
    t.mean << 1.0, 0.01;
    t.cov = Eigen::Matrix2d::Identity();
    EmpiricalMoments<2> e;
    e.mean << 1.01, 0.5;
    e.cov = Eigen::Matrix2d::Identity();
    EXPECT_NEAR(max_relative_deviation(t, e), 0.01, 1e-12);
    EXPECT_NEAR(max_relative_deviation(t, e, 0.0), 49.0, 1e-9);
}

TEST(GaussianLogDensity, MatchesClosedFormAndRejectsSingular) {
    Stats2 st;
    st.mean << 1.0, -2.0;
    st.cov << 4.0, 0.0, 0.0, 0.25;
    const auto g = GaussianLogDensity<2>::make(st);
    ASSERT_TRUE(g.has_value());
    const Eigen::Vector2d x(2.0, -1.5);
    const double want = -std::log(2 * std::numbers::pi * 2.0 * 0.5) - 0.5 * (1.0 / 4.0 + 0.25 / 0.25);
    EXPECT_NEAR((*g)(x), want, 1e-12);
    st.cov.setZero();
    EXPECT_FALSE(GaussianLogDensity<2>::make(st).has_value());
}

} // namespace
