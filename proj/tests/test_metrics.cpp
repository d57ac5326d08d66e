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


#include "stokesdd/metrics.hpp"
#include "stokesdd/simulation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

using namespace stokesdd;

std::vector<Decision> as_decisions(const std::vector<SymbolIndices> &idx) {
    std::vector<Decision> d(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) d[i].indices = idx[i];
    return d;
}

std::vector<SymbolIndices> random_stream(const RingPskConstellation &c, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SymbolIndices> v(n);
    for (auto &s : v) s = random_indices(c, rng);
    return v;
}

std::vector<double> grid(double a, double b, double step) {
    std::vector<double> g;
    for (double o = a; o <= b + 1e-9; o += step) g.push_back(o);
    return g;
}

TEST(AccumulateSer, IdenticalStreamsHaveNoErrors) {
    const auto truth = random_stream(RingPskConstellation(2, 4), 100, 1);
    const auto r = accumulate_ser(truth, as_decisions(truth));
    for (int d = 0; d < 4; ++d) EXPECT_EQ(r.errors[static_cast<std::size_t>(d)], 0u);
    EXPECT_EQ(r.trials[0], 100u);
    EXPECT_EQ(r.trials[3], 99u);
}

TEST(AccumulateSer, OneFlippedEtaInHundredSymbols) {
    const auto truth = random_stream(RingPskConstellation(2, 4), 100, 2);
    auto dec = as_decisions(truth);
    dec[37].indices.e = (dec[37].indices.e + 1) % 4;
    const auto r = accumulate_ser(truth, dec);
    EXPECT_DOUBLE_EQ(r.ser(3), 1.0 / 99.0);
    EXPECT_EQ(r.ser(0) + r.ser(1) + r.ser(2), 0.0);
}

TEST(AccumulateSer, PilotEtaIsNotCountedAndErasuresAre) {
    const auto truth = random_stream(RingPskConstellation(2, 4), 10, 3);
    auto dec = as_decisions(truth);
    dec[0].indices.e = (truth[0].e + 1) % 4;
    EXPECT_EQ(accumulate_ser(truth, dec).errors[3], 0u);
    dec[4].eta_erased = true;
    EXPECT_EQ(accumulate_ser(truth, dec).errors[3], 1u);
}

TEST(AccumulateSer, LengthMismatchThrows) {
    const auto truth = random_stream(RingPskConstellation(1, 4), 10, 4);
    const auto dec = as_decisions(std::vector<SymbolIndices>(9));
    EXPECT_THROW(accumulate_ser(truth, dec), std::invalid_argument);
}

TEST(AccumulateSer, MergedReportsAddCounts) {
    SerReport a, b;
    a.errors = {1, 2, 3, 4};
    a.trials = {10, 10, 10, 9};
    b.errors = {0, 1, 0, 1};
    b.trials = {5, 5, 5, 4};
    a += b;
    EXPECT_EQ(a.errors[1], 3u);
    EXPECT_EQ(a.trials[3], 13u);
    EXPECT_DOUBLE_EQ(a.ser(3), 5.0 / 13.0);
    EXPECT_EQ(SerReport{}.ser(0), 0.0);
}

TEST(AccumulateSer, NoiselessEndToEndReportIsZero) {
    const RingPskConstellation c(2, 4);
    const std::vector<double> g{300.0};
    const auto r = simulate_ser(c, LinkSetup{}, g, SweepSetup{2000, 4, 5, 0});
    for (int d = 0; d < 4; ++d) EXPECT_EQ(r[0].errors[static_cast<std::size_t>(d)], 0u);
}

TEST(JointHistogram, DeterministicChannelGivesLogM) {
    JointHistogram h(4, 8);
    for (int x = 0; x < 4; ++x) h.add(x, static_cast<std::size_t>(2 * x), 10 + x);
    EXPECT_NEAR(h.mutual_information(), 2.0, 1e-12);
    EXPECT_NEAR(h.map_error_rate(), 0.0, 1e-12);
}

TEST(JointHistogram, IndependentOutputGivesZero) {
    JointHistogram h(4, 3);
    for (int x = 0; x < 4; ++x)
        for (std::size_t y = 0; y < 3; ++y) h.add(x, y, 7 * (x + 1) * (y + 1));
    EXPECT_NEAR(h.mutual_information(), 0.0, 1e-12);
    EXPECT_NEAR(h.map_error_rate(), 0.75, 1e-12);
}

TEST(JointHistogram, SingletonInputCarriesNothing) {
    JointHistogram h(1, 5);
    h.add(0, 1, 3);
    h.add(0, 4, 9);
    EXPECT_EQ(h.mutual_information(), 0.0);
}

// Oracle: direct evaluation of sum p(x, y) log2 p(x, y) / (p(x) p(y)) with
// the uniform input law.
TEST(JointHistogram, MatchesDirectFormulaAndStaysInBounds) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + trial % 6;
        const std::size_t cells = 1 + static_cast<std::size_t>(trial % 11);
        JointHistogram h(m, cells);
        std::uniform_int_distribution<int> cnt(0, 20);
        for (int x = 0; x < m; ++x) {
            h.add(x, 0, 1);
            for (std::size_t y = 0; y < cells; ++y) h.add(x, y, static_cast<std::uint64_t>(cnt(rng)));
        }
        std::vector<double> rows(static_cast<std::size_t>(m), 0.0);
        for (int x = 0; x < m; ++x)
            for (std::size_t y = 0; y < cells; ++y) rows[static_cast<std::size_t>(x)] += double(h.count(x, y));
        double mi = 0.0;
        for (std::size_t y = 0; y < cells; ++y) {
            double py = 0.0;
            for (int x = 0; x < m; ++x) py += double(h.count(x, y)) / rows[static_cast<std::size_t>(x)] / m;
            for (int x = 0; x < m; ++x) {
                const double pxy = double(h.count(x, y)) / rows[static_cast<std::size_t>(x)] / m;
                if (pxy > 0) mi += pxy * std::log2(pxy / (py / m));
            }
        }
        EXPECT_NEAR(h.mutual_information(), std::clamp(mi, 0.0, std::log2(double(m))), 1e-12);
        EXPECT_GE(h.mutual_information(), 0.0);
        EXPECT_LE(h.mutual_information(), std::log2(double(m)) + 1e-15);
        // Fano: the MAP error on the same joint law bounds the information.
        EXPECT_GE(h.mutual_information() + 1e-12, fano_rate_bound(h.map_error_rate(), m));
    }
}

TEST(JointHistogram, MergeEqualsJointAccumulation) {
    JointHistogram a(3, 4), b(3, 4), both(3, 4);
    for (int i = 0; i < 30; ++i) {
        const int x = i % 3;
        const std::size_t y = static_cast<std::size_t>((i * 7) % 4);
        (i % 2 ? a : b).add(x, y);
        both.add(x, y);
    }
    a += b;
    EXPECT_EQ(a.counts(), both.counts());
    EXPECT_THROW(a += JointHistogram(2, 4), std::invalid_argument);
}

TEST(FanoBound, KnownValues) {
    EXPECT_DOUBLE_EQ(fano_rate_bound(0.0, 4), 2.0);
    EXPECT_NEAR(fano_rate_bound(0.75, 4), 0.0, 1e-12);
    EXPECT_EQ(fano_rate_bound(0.3, 1), 0.0);
}

TEST(Binning, EdgesAndClamping) {
    EXPECT_EQ(bin_of(-1.0, 1.0, 4), 0u);
    EXPECT_EQ(bin_of(-0.51, 1.0, 4), 0u);
    EXPECT_EQ(bin_of(-0.5, 1.0, 4), 1u);
    EXPECT_EQ(bin_of(0.99, 1.0, 4), 3u);
    EXPECT_EQ(bin_of(1.0, 1.0, 4), 3u);
    EXPECT_EQ(bin_of(50.0, 1.0, 4), 3u);
    EXPECT_EQ(bin_of(-50.0, 1.0, 4), 0u);
}

TEST(Spread, RobustScaleOfGaussianDeviations) {
    Rng rng(6);
    std::normal_distribution<double> n01(0.0, 0.05);
    std::vector<LabeledSample> s;
    for (int i = 0; i < 200000; ++i) {
        const int e = i % 4;
        s.push_back({e, std::polar(1.0, e * kTwoPi / 4) + cplx(n01(rng), n01(rng))});
    }
    EXPECT_NEAR(statistic_spread(s, kTwoPi / 4), 0.05, 0.001);
    EXPECT_NEAR(histogram_half_width(s, kTwoPi / 4), 1.2, 0.005);
}

TEST(MiDim4, NoiselessLimitIsExactlyLogNp) {
    for (int np : {2, 4, 8}) {
        const RingPskConstellation c(2, np);
        LinkSetup genie;
        genie.mode = DetectionMode::genie;
        const std::vector<double> g{400.0};
        const auto est = estimate_mi_dim4(c, genie, g, SweepSetup{3000, 4, 7, 0}, 32);
        EXPECT_DOUBLE_EQ(est[0].bits_per_channel_use, std::log2(double(np))) << np;
        EXPECT_EQ(est[0].n_samples, 4u * 2999u);
    }
}

TEST(MiDim4, SingletonPhaseAlphabetGivesZeroEverywhere) {
    const RingPskConstellation c(1, 1);
    LinkSetup genie;
    genie.mode = DetectionMode::genie;
    const auto g = grid(0, 30, 10);
    for (const auto &e : estimate_mi_dim4(c, genie, g, SweepSetup{2000, 2, 8, 0}, 32))
        EXPECT_EQ(e.bits_per_channel_use, 0.0);
}

TEST(MiDim4, BoundedAndNearlyTwoBitsAroundTwentyDb) {
    const RingPskConstellation c(2, 4);
    LinkSetup genie;
    genie.mode = DetectionMode::genie;
    const auto g = grid(0, 30, 2);
    const auto est = estimate_mi_dim4(c, genie, g, SweepSetup{10000, 20, 9, 0}, 64);
    double best_18_24 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_GE(est[i].bits_per_channel_use, 0.0);
        EXPECT_LE(est[i].bits_per_channel_use, 2.0);
        if (g[i] >= 18 && g[i] <= 24) best_18_24 = std::max(best_18_24, est[i].bits_per_channel_use);
    }
    EXPECT_GE(best_18_24, 1.8);
    EXPECT_GT(est.back().bits_per_channel_use, 2.0 - 0.05);
}

// Monotone within 3 bootstrap standard deviations over block batches.
TEST(MiDim4, NonDecreasingInOsnrWithinBootstrapSpread) {
    const RingPskConstellation c(2, 4);
    LinkSetup genie;
    genie.mode = DetectionMode::genie;
    const auto g = grid(4, 28, 4);
    const std::size_t batches = 10, per_batch = 4;
    const auto samples = simulate_dim4_samples(c, genie, g, SweepSetup{5000, batches * per_batch, 10, 0});
    const std::size_t per_block = 4999;
    std::vector<double> mi(g.size()), sd(g.size());
    Rng rng(11);
    for (std::size_t i = 0; i < g.size(); ++i) {
        mi[i] = mi_from_samples(samples[i], 4, 64).bits_per_channel_use;
        double s = 0, s2 = 0;
        const int reps = 30;
        for (int r = 0; r < reps; ++r) {
            std::vector<LabeledSample> boot;
            for (std::size_t b = 0; b < batches; ++b) {
                const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, batches - 1)(rng);
                const auto first = samples[i].begin() + static_cast<std::ptrdiff_t>(pick * per_batch * per_block);
                boot.insert(boot.end(), first, first + static_cast<std::ptrdiff_t>(per_batch * per_block));
            }
            const double v = mi_from_samples(boot, 4, 64).bits_per_channel_use;
            s += v;
            s2 += v * v;
        }
        sd[i] = std::sqrt(std::max(s2 / reps - (s / reps) * (s / reps), 0.0));
    }
    for (std::size_t i = 1; i < g.size(); ++i)
        EXPECT_GE(mi[i] + 3.0 * std::hypot(sd[i], sd[i - 1]), mi[i - 1]) << g[i] << " dB";
}

TEST(MiDim4, BinRefinementChangesLittleAtTwentyDb) {
    const RingPskConstellation c(2, 4);
    LinkSetup genie;
    genie.mode = DetectionMode::genie;
    const std::vector<double> g{20.0};
    const auto samples = simulate_dim4_samples(c, genie, g, SweepSetup{10000, 30, 12, 0});
    const double m32 = mi_from_samples(samples[0], 4, 32).bits_per_channel_use;
    const double m64 = mi_from_samples(samples[0], 4, 64).bits_per_channel_use;
    EXPECT_LT(std::abs(m64 - m32), 0.05);
}

// Fano between the measured genie dim-4 SER and the rate estimate.
TEST(MiDim4, FanoHoldsAgainstMeasuredSer) {
    const RingPskConstellation c(2, 4);
    LinkSetup genie;
    genie.mode = DetectionMode::genie;
    const auto g = grid(4, 26, 2);
    const SweepSetup sweep{10000, 20, 13, 0};
    const auto ser = simulate_ser(c, genie, g, sweep);
    const auto mi = estimate_mi_dim4(c, genie, g, sweep, 64);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_GE(mi[i].bits_per_channel_use, fano_rate_bound(ser[i].ser(3), 4)) << g[i] << " dB";
        EXPECT_GE(mi[i].bits_per_channel_use + 1e-12, fano_rate_bound(mi[i].histogram.map_error_rate(), 4));
    }
}

TEST(MiDims123, DiagnosticIsBoundedByLogOfHypothesisCount) {
    const RingPskConstellation c(2, 4);
    const auto g = grid(10, 30, 10);
    const auto mi = estimate_mi_dims123(c, g, SweepSetup{5000, 4, 14, 0}, 8);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_GE(mi[i], 0.0);
        EXPECT_LE(mi[i], 4.0);
    }
    EXPECT_GT(mi.back(), mi.front());
}

} // namespace
