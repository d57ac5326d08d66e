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

#pragma once

#include "stokesdd/channel.hpp"
#include "stokesdd/channel_estimation.hpp"
#include "stokesdd/constellation.hpp"
#include "stokesdd/frontend.hpp"
#include "stokesdd/metrics.hpp"
#include "stokesdd/parallel.hpp"
#include "stokesdd/receiver.hpp"
#include "stokesdd/rng.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace stokesdd {

enum class ChannelMode { true_channel, estimated };

inline std::string_view to_string(ChannelMode m) { return m == ChannelMode::true_channel ? "true" : "estimated"; }

/// How a block is received: frontend variant, channel knowledge and the
/// detection context for the fourth dimension.
struct LinkSetup {
    ReceiverVariant variant = ReceiverVariant::full;
    ChannelMode channel_mode = ChannelMode::true_channel;
    std::size_t training_repeats = 10000;
    DetectionMode mode = DetectionMode::decision_directed;
};

/*
  Everything random about one coherence block, drawn once and reused at every
  noise level: the Haar channel, the symbol stream (slot 0 is the all-zero
  pilot), unit-variance noise for the payload and for the training burst.
  Reusing the draws across the OSNR grid keeps the curves smooth.
*/
struct BlockDraw {
    JonesChannel channel;
    std::vector<SymbolIndices> indices;
    std::vector<DualPolSymbol> tx;
    std::vector<cplx> unit_noise;      // 2 per slot (x, y)
    std::vector<cplx> training_noise;  // 6 per training repeat
};

inline BlockDraw draw_block(const RingPskConstellation &c, std::size_t n_symbols, std::size_t training_repeats,
                            Rng &rng) {
    BlockDraw b;
    b.channel = haar_random_channel(rng, 0.0);
    b.indices.resize(n_symbols);
    for (std::size_t n = 1; n < n_symbols; ++n) b.indices[n] = random_indices(c, rng);
    b.tx = encode_sequence(c, b.indices);
    b.unit_noise.resize(2 * n_symbols);
    for (auto &z : b.unit_noise) z = standard_complex_normal(rng);
    b.training_noise.resize(6 * training_repeats);
    for (auto &z : b.training_noise) z = standard_complex_normal(rng);
    return b;
}

struct ReceivedBlock {
    std::vector<FrontendOutputs> frames;
    JonesChannel receiver_channel;  // true or estimated, carrying sigma2
};

inline ReceivedBlock receive_block(const BlockDraw &b, const LinkSetup &link, double sigma2) {
    JonesChannel ch = b.channel;
    ch.sigma2 = sigma2;
    std::vector<DualPolSymbol> fields;
    fields.reserve(b.tx.size());
    for (std::size_t n = 0; n < b.tx.size(); ++n)
        fields.push_back(propagate_with_unit_noise(ch, b.tx[n], b.unit_noise[2 * n], b.unit_noise[2 * n + 1]).noisy);

    ReceivedBlock r;
    r.frames = detect_sequence(fields, link.variant);
    if (link.channel_mode == ChannelMode::true_channel) {
        r.receiver_channel = ch;
    } else {
        const TrainingObservations tr = simulate_training(ch, link.training_repeats, b.training_noise);
        r.receiver_channel = estimate_channel(tr).to_channel(sigma2);
    }
    return r;
}

inline SerReport block_ser(const BlockDraw &b, const RingPskConstellation &c, const LinkSetup &link, double sigma2) {
    const ReceivedBlock r = receive_block(b, link, sigma2);
    ReceiverOptions opt;
    opt.mode = link.mode;
    opt.pilot = b.indices.front();
    opt.truth = b.indices;
    const auto decisions = run_successive_receiver(r.frames, r.receiver_channel, c, opt);
    return accumulate_ser(b.indices, decisions);
}

/// Normalized fourth-dimension statistics of one block (slots 1..L-1),
/// labeled with the true eta. The normalizing context is the truth (genie)
/// or the receiver's own decisions.
inline std::vector<LabeledSample> block_dim4_samples(const BlockDraw &b, const RingPskConstellation &c,
                                                     const LinkSetup &link, double sigma2) {
    const ReceivedBlock r = receive_block(b, link, sigma2);
    std::vector<Decision> decisions;
    if (link.mode == DetectionMode::decision_directed) {
        ReceiverOptions opt;
        opt.pilot = b.indices.front();
        decisions = run_successive_receiver(r.frames, r.receiver_channel, c, opt);
    }
    std::vector<LabeledSample> out;
    out.reserve(b.indices.size());
    for (std::size_t n = 1; n < b.indices.size(); ++n) {
        SymbolIndices now = b.indices[n], prev = b.indices[n - 1];
        if (link.mode == DetectionMode::decision_directed) {
            now = decisions[n].indices;
            prev = n == 1 ? b.indices[0] : decisions[n - 1].indices;
        }
        const cplx gain = beat_gain(r.receiver_channel, c, now, prev);
        const auto s = normalized_beat(r.frames[n].w5, r.frames[n].w6, gain);
        out.push_back({b.indices[n].e, s.value_or(cplx{})});
    }
    return out;
}

/// Monte Carlo layout shared by the experiments.
struct SweepSetup {
    std::size_t symbols_per_block = 10000;
    std::size_t blocks = 10;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

/// Per-OSNR SER reports. Block b always uses the stream keyed by (seed, b).
inline std::vector<SerReport> simulate_ser(const RingPskConstellation &c, const LinkSetup &link,
                                           std::span<const double> osnr_db, const SweepSetup &sweep) {
    const std::size_t repeats = link.channel_mode == ChannelMode::estimated ? link.training_repeats : 0;
    std::vector<std::vector<SerReport>> per_block(sweep.blocks);
    parallel_for_index(sweep.blocks, sweep.threads, [&](std::size_t blk) {
        Rng rng = make_stream(sweep.seed, {blk});
        const BlockDraw b = draw_block(c, sweep.symbols_per_block, repeats, rng);
        per_block[blk].reserve(osnr_db.size());
        for (double o : osnr_db) per_block[blk].push_back(block_ser(b, c, link, osnr_to_sigma2(o)));
    });
    std::vector<SerReport> out(osnr_db.size());
    for (std::size_t i = 0; i < osnr_db.size(); ++i) {
        out[i].osnr_db = osnr_db[i];
        out[i].constellation_id = c.id();
        out[i].mode = link.mode;
        for (std::size_t blk = 0; blk < sweep.blocks; ++blk) out[i] += per_block[blk][i];
    }
    return out;
}

/// Labeled dim-4 statistics for each OSNR point, concatenated in block order.
inline std::vector<std::vector<LabeledSample>> simulate_dim4_samples(const RingPskConstellation &c,
                                                                     const LinkSetup &link,
                                                                     std::span<const double> osnr_db,
                                                                     const SweepSetup &sweep) {
    const std::size_t repeats = link.channel_mode == ChannelMode::estimated ? link.training_repeats : 0;
    std::vector<std::vector<std::vector<LabeledSample>>> per_block(sweep.blocks);
    parallel_for_index(sweep.blocks, sweep.threads, [&](std::size_t blk) {
        Rng rng = make_stream(sweep.seed, {blk});
        const BlockDraw b = draw_block(c, sweep.symbols_per_block, repeats, rng);
        for (double o : osnr_db) per_block[blk].push_back(block_dim4_samples(b, c, link, osnr_to_sigma2(o)));
    });
    std::vector<std::vector<LabeledSample>> out(osnr_db.size());
    for (std::size_t i = 0; i < osnr_db.size(); ++i)
        for (std::size_t blk = 0; blk < sweep.blocks; ++blk)
            out[i].insert(out[i].end(), per_block[blk][i].begin(), per_block[blk][i].end());
    return out;
}

/*
  Achievable rate of the fourth dimension: plug-in I(eta; binned statistic)
  per OSNR point, with the statistic normalized by its context so that all
  channels and symbol contexts share one histogram. Pooling the blocks
  averages over the Haar channel distribution. OSNR points are processed one
  at a time; block draws are regenerated from their keyed streams.
*/
inline std::vector<MiEstimate> estimate_mi_dim4(const RingPskConstellation &c, const LinkSetup &link,
                                                std::span<const double> osnr_db, const SweepSetup &sweep,
                                                int n_bins) {
    if (n_bins < 1) throw std::invalid_argument("estimate_mi_dim4: n_bins must be >= 1");
    std::vector<MiEstimate> out;
    out.reserve(osnr_db.size());
    for (std::size_t i = 0; i < osnr_db.size(); ++i) {
        const auto samples = simulate_dim4_samples(c, link, osnr_db.subspan(i, 1), sweep);
        out.push_back(mi_from_samples(samples[0], c.n_phases(), n_bins));
    }
    return out;
}

/*
  Diagnostic rate of dimensions 1-3: the observed (w1..w4) are mapped back
  through the inverse Stokes matrix of the true channel and the resulting
  transmit Stokes estimate is binned on a coarse 4D grid, input being the
  (rx, ry, t) hypothesis index.
*/
inline std::vector<double> estimate_mi_dims123(const RingPskConstellation &c, std::span<const double> osnr_db,
                                               const SweepSetup &sweep, int bins_per_axis) {
    if (bins_per_axis < 1) throw std::invalid_argument("estimate_mi_dims123: bins_per_axis must be >= 1");
    const LinkSetup link{};
    std::vector<std::vector<std::vector<std::pair<int, Eigen::Vector4d>>>> per_block(sweep.blocks);
    parallel_for_index(sweep.blocks, sweep.threads, [&](std::size_t blk) {
        Rng rng = make_stream(sweep.seed, {blk});
        const BlockDraw b = draw_block(c, sweep.symbols_per_block, 0, rng);
        const Eigen::Matrix4d inv = stokes_matrix(b.channel).inverse();
        for (double o : osnr_db) {
            const ReceivedBlock r = receive_block(b, link, osnr_to_sigma2(o));
            std::vector<std::pair<int, Eigen::Vector4d>> v;
            v.reserve(r.frames.size());
            for (std::size_t n = 0; n < r.frames.size(); ++n) {
                const auto &s = b.indices[n];
                v.emplace_back((s.rx * c.n_rings() + s.ry) * c.n_phases() + s.t, inv * r.frames[n].stokes());
            }
            per_block[blk].push_back(std::move(v));
        }
    });

    // Box per axis: span of the noiseless transmit Stokes vectors, padded by
    // a quarter of that span.
    Eigen::Vector4d lo = Eigen::Vector4d::Constant(1e300), hi = Eigen::Vector4d::Constant(-1e300);
    for (int rx = 0; rx < c.n_rings(); ++rx)
        for (int ry = 0; ry < c.n_rings(); ++ry)
            for (int t = 0; t < c.n_phases(); ++t) {
                const auto s = stokes_vector({std::polar(c.radius(rx), t * c.phase_step()), c.radius(ry)});
                lo = lo.cwiseMin(s);
                hi = hi.cwiseMax(s);
            }
    const Eigen::Vector4d pad = ((hi - lo) * 0.25).cwiseMax(Eigen::Vector4d::Constant(0.25));
    lo -= pad;
    hi += pad;

    const std::size_t nb = static_cast<std::size_t>(bins_per_axis);
    std::vector<double> out;
    for (std::size_t i = 0; i < osnr_db.size(); ++i) {
        JointHistogram h(c.n_stokes_hypotheses(), nb * nb * nb * nb);
        for (std::size_t blk = 0; blk < sweep.blocks; ++blk)
            for (const auto &[input, x] : per_block[blk][i]) {
                std::size_t cell = 0;
                for (int k = 0; k < 4; ++k) {
                    const double half = 0.5 * (hi[k] - lo[k]);
                    const double mid = 0.5 * (hi[k] + lo[k]);
                    cell = cell * nb + bin_of(x[k] - mid, half, bins_per_axis);
                }
                h.add(input, cell);
            }
        out.push_back(h.mutual_information());
    }
    return out;
}

} // namespace stokesdd
