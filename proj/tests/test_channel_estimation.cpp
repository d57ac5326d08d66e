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


#include "stokesdd/channel_estimation.hpp"
#include "stokesdd/simulation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using namespace stokesdd;

// Noiseless training where the received fields are exp(i phi) J E.
TrainingObservations phased_training(const JonesChannel &ch, double phi) {
    TrainingObservations t;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto kk = ch.apply(training_pilots()[k]);
        const DualPolSymbol f{std::polar(1.0, phi) * kk.x, std::polar(1.0, phi) * kk.y};
        t[k].push_back(frontend_full(f, f));
    }
    return t;
}

TEST(ChannelEstimation, PilotsAreTheThreeTrainingSymbols) {
    const auto &p = training_pilots();
    EXPECT_EQ(p[0].x, cplx(1, 0));
    EXPECT_EQ(p[0].y, cplx(0, 0));
    EXPECT_EQ(p[1].x, cplx(1, 0));
    EXPECT_EQ(p[1].y, cplx(1, 0));
    EXPECT_EQ(p[2].x, cplx(0, 1));
    EXPECT_EQ(p[2].y, cplx(1, 0));
}

TEST(ChannelEstimation, IdentityChannelFirstPilotReadsOneZeroZeroZero) {
    const auto t = simulate_training(JonesChannel{}, 1, std::vector<cplx>(6));
    EXPECT_EQ(t[0][0].w1, 1.0);
    EXPECT_EQ(t[0][0].w2, 0.0);
    EXPECT_EQ(t[0][0].w3, 0.0);
    EXPECT_EQ(t[0][0].w4, 0.0);
}

TEST(ChannelEstimation, NoiselessRecoveryUpToSign) {
    Rng rng(1);
    std::vector<JonesChannel> channels{{{1, 0}, {0, 0}, 0}, {{0, 0}, {1, 0}, 0}, {{0, 0}, {0, -1}, 0},
                                       {{0, 1}, {0, 0}, 0}, {{-1, 0}, {0, 0}, 0}};
    for (int i = 0; i < 10000; ++i) channels.push_back(haar_random_channel(rng, 0.0));
    for (const auto &ch : channels) {
        const auto est = estimate_channel(simulate_training(ch, 1, std::vector<cplx>(6)));
        EXPECT_LT(sign_aligned_error(est.a_hat, est.b_hat, ch.a, ch.b), 1e-9) << ch.a << " " << ch.b;
        EXPECT_LT(est.residual, 1e-9);
        EXPECT_NEAR(std::norm(est.a_hat) + std::norm(est.b_hat), 1.0, 1e-12);
        EXPECT_TRUE(est.a_hat.real() > 0 || (est.a_hat.real() == 0 && est.a_hat.imag() >= 0) ||
                    std::abs(est.a_hat) < 1e-9);
    }
}

TEST(ChannelEstimation, FieldGlobalPhaseDoesNotChangeTheEstimate) {
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        const auto ch = haar_random_channel(rng, 0.0);
        const auto ref = estimate_channel(phased_training(ch, 0.0));
        const auto rot = estimate_channel(phased_training(ch, std::uniform_real_distribution<double>(-3, 3)(rng)));
        EXPECT_LT(std::abs(ref.a_hat - rot.a_hat), 1e-9);
        EXPECT_LT(std::abs(ref.b_hat - rot.b_hat), 1e-9);
    }
}

// A common phase on (a, b) is seen by the photocurrents, so the estimate
// follows it instead of being pinned to real a.
TEST(ChannelEstimation, CommonPhaseOnParametersIsTracked) {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        JonesChannel ch = haar_random_channel(rng, 0.0);
        const cplx u = std::polar(1.0, std::uniform_real_distribution<double>(-3, 3)(rng));
        ch.a *= u;
        ch.b *= u;
        const auto est = estimate_channel(simulate_training(ch, 1, std::vector<cplx>(6)));
        EXPECT_LT(sign_aligned_error(est.a_hat, est.b_hat, ch.a, ch.b), 1e-9);
    }
}

TEST(ChannelEstimation, TwentyDbWithTenThousandRepeatsIsWithinOnePercent) {
    Rng rng(4);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto ch = haar_random_channel(rng, osnr_to_sigma2(20.0));
        const auto est = estimate_channel(simulate_training(ch, 10000, rng));
        worst = std::max(worst, sign_aligned_error(est.a_hat, est.b_hat, ch.a, ch.b));
    }
    EXPECT_LT(worst, 0.01);
}

TEST(ChannelEstimation, InconsistentObservablesAreReported) {
    TrainingObservations t;
    for (std::size_t k = 0; k < 3; ++k) t[k].push_back(FrontendOutputs{1.0, 1.0, 0.4, -0.2, 0, 0, 0});
    const auto est = estimate_channel(t);
    EXPECT_GT(est.residual, 0.1);
    EXPECT_THROW(estimate_channel(t, 1e-3), ChannelEstimationError);
    TrainingObservations empty;
    EXPECT_THROW(estimate_channel(empty), std::invalid_argument);
    EXPECT_THROW(simulate_training(JonesChannel{}, 2, std::vector<cplx>(6)), std::invalid_argument);
}

TEST(ChannelEstimation, EstimatedChannelDetectsAlmostAsWellAsTheTrueOne) {
    const RingPskConstellation c(2, 4);
    const std::vector<double> grid{16.0, 20.0};
    LinkSetup est;
    est.channel_mode = ChannelMode::estimated;
    est.training_repeats = 10000;
    const SweepSetup sweep{5000, 6, 9, 0};
    const auto a = simulate_ser(c, LinkSetup{}, grid, sweep);
    const auto b = simulate_ser(c, est, grid, sweep);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (int d = 0; d < 4; ++d) EXPECT_NEAR(b[i].ser(d), a[i].ser(d), 0.15 * a[i].ser(d) + 2e-3);
}

} // namespace
