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

#include "stokesdd/detection.hpp"
#include "stokesdd/receiver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokesdd {

// ---------------------------------------------------------------------------
// Symbol error rates
// ---------------------------------------------------------------------------

struct SerReport {
    // index 0..3 -> |E_x|, |E_y|, theta, eta
    std::array<std::uint64_t, 4> errors{};
    std::array<std::uint64_t, 4> trials{};
    double osnr_db = 0.0;
    std::string constellation_id;
    DetectionMode mode = DetectionMode::decision_directed;

    double ser(int dim) const {
        const auto k = static_cast<std::size_t>(dim);
        return trials[k] == 0 ? 0.0 : double(errors[k]) / double(trials[k]);
    }

    SerReport &operator+=(const SerReport &o) {
        for (std::size_t k = 0; k < 4; ++k) {
            errors[k] += o.errors[k];
            trials[k] += o.trials[k];
        }
        return *this;
    }
};

/// Per-dimension mismatch counts. Slot 0 is the pilot and is left out of the
/// eta count; an erased eta counts as an error.
inline SerReport accumulate_ser(std::span<const SymbolIndices> truth, std::span<const Decision> decisions) {
    if (truth.size() != decisions.size())
        throw std::invalid_argument("accumulate_ser: length mismatch (" + std::to_string(truth.size()) + " vs " +
                                    std::to_string(decisions.size()) + ")");
    SerReport r;
    for (std::size_t n = 0; n < truth.size(); ++n) {
        const SymbolIndices &t = truth[n];
        const SymbolIndices &d = decisions[n].indices;
        r.errors[0] += t.rx != d.rx;
        r.errors[1] += t.ry != d.ry;
        r.errors[2] += t.t != d.t;
        r.trials[0]++;
        r.trials[1]++;
        r.trials[2]++;
        if (n == 0) continue;
        r.errors[3] += decisions[n].eta_erased || t.e != d.e;
        r.trials[3]++;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Plug-in mutual information on a discretized observation space
// ---------------------------------------------------------------------------

/*
  Joint histogram of a uniform discrete input (n_inputs symbols) and a binned
  output (n_cells cells). Mergeable by addition.

  mutual_information() evaluates I(X; Y) for the *uniform* input law with the
  empirical conditionals p(y|x) = c(x, y) / c(x):

      I = (1/M) sum_x sum_y p(y|x) log2( p(y|x) / ((1/M) sum_x' p(y|x')) )

  Using the known input law keeps the estimate in [0, log2 M] and makes a
  deterministic channel give exactly log2 M. Inputs never observed are
  dropped from the average.
*/
class JointHistogram {
public:
    JointHistogram(int n_inputs, std::size_t n_cells)
        : n_inputs_(n_inputs), n_cells_(n_cells), counts_(static_cast<std::size_t>(n_inputs) * n_cells, 0) {
        if (n_inputs < 1) throw std::invalid_argument("JointHistogram: n_inputs must be >= 1");
        if (n_cells < 1) throw std::invalid_argument("JointHistogram: n_cells must be >= 1");
    }

    void add(int input, std::size_t cell, std::uint64_t count = 1) {
        counts_.at(static_cast<std::size_t>(input) * n_cells_ + cell) += count;
    }

    JointHistogram &operator+=(const JointHistogram &o) {
        if (o.n_inputs_ != n_inputs_ || o.n_cells_ != n_cells_)
            throw std::invalid_argument("JointHistogram: shape mismatch in merge");
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
        return *this;
    }

    int n_inputs() const { return n_inputs_; }
    std::size_t n_cells() const { return n_cells_; }
    std::uint64_t count(int input, std::size_t cell) const {
        return counts_[static_cast<std::size_t>(input) * n_cells_ + cell];
    }
    std::uint64_t total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }
    const std::vector<std::uint64_t> &counts() const { return counts_; }

    double mutual_information() const {
        std::vector<double> row_total(static_cast<std::size_t>(n_inputs_), 0.0);
        int active = 0;
        for (int x = 0; x < n_inputs_; ++x) {
            for (std::size_t y = 0; y < n_cells_; ++y) row_total[static_cast<std::size_t>(x)] += double(count(x, y));
            active += row_total[static_cast<std::size_t>(x)] > 0.0;
        }
        if (active <= 1) return 0.0;
        const double w = 1.0 / active;
        double mi = 0.0;
        for (std::size_t y = 0; y < n_cells_; ++y) {
            double py = 0.0;
            for (int x = 0; x < n_inputs_; ++x) {
                const double rt = row_total[static_cast<std::size_t>(x)];
                if (rt > 0.0) py += w * double(count(x, y)) / rt;
            }
            if (py <= 0.0) continue;
            for (int x = 0; x < n_inputs_; ++x) {
                const double rt = row_total[static_cast<std::size_t>(x)];
                const auto c = count(x, y);
                if (rt <= 0.0 || c == 0) continue;  // 0 log 0 = 0
                const double pyx = double(c) / rt;
                mi += w * pyx * std::log2(pyx / py);
            }
        }
        return std::clamp(mi, 0.0, std::log2(double(active)));
    }

    /// Error rate of the MAP decision on the binned output (uniform prior).
    double map_error_rate() const {
        std::vector<double> row_total(static_cast<std::size_t>(n_inputs_), 0.0);
        int active = 0;
        for (int x = 0; x < n_inputs_; ++x) {
            for (std::size_t y = 0; y < n_cells_; ++y) row_total[static_cast<std::size_t>(x)] += double(count(x, y));
            active += row_total[static_cast<std::size_t>(x)] > 0.0;
        }
        if (active == 0) return 0.0;
        double correct = 0.0;
        for (std::size_t y = 0; y < n_cells_; ++y) {
            double best = 0.0;
            for (int x = 0; x < n_inputs_; ++x) {
                const double rt = row_total[static_cast<std::size_t>(x)];
                if (rt > 0.0) best = std::max(best, double(count(x, y)) / rt);
            }
            correct += best / active;
        }
        return 1.0 - correct;
    }

private:
    int n_inputs_;
    std::size_t n_cells_;
    std::vector<std::uint64_t> counts_;
};

/// Lower bound on I(X; Y) in bits implied by Fano's inequality for an M-ary
/// uniform input decided with error probability pe.
inline double fano_rate_bound(double pe, int m) {
    if (m <= 1) return 0.0;
    auto h2 = [](double p) { return (p <= 0.0 || p >= 1.0) ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); };
    const double bound = std::log2(double(m)) - h2(pe) - pe * std::log2(double(m - 1));
    return bound;
}

/// Labeled complex statistic: the input symbol index and the normalized
/// observation (w5 + i w6) / (2 l^T v).
struct LabeledSample {
    int input = 0;
    cplx value{};
};

struct MiEstimate {
    double bits_per_channel_use = 0.0;
    std::size_t n_samples = 0;
    int n_bins = 0;
    double half_width = 0.0;  // histogram box is [-half_width, half_width]^2
    JointHistogram histogram{1, 1};
};

/// Robust spread of the normalized statistic around its noiseless point:
/// 1.4826 * median absolute deviation, pooled over real and imaginary parts.
inline double statistic_spread(std::span<const LabeledSample> samples, double phase_step) {
    if (samples.empty()) return 0.0;
    std::vector<double> dev;
    dev.reserve(2 * samples.size());
    for (const auto &s : samples) {
        const cplx d = s.value - std::polar(1.0, s.input * phase_step);
        dev.push_back(std::abs(d.real()));
        dev.push_back(std::abs(d.imag()));
    }
    auto mid = dev.begin() + static_cast<std::ptrdiff_t>(dev.size() / 2);
    std::nth_element(dev.begin(), mid, dev.end());
    return 1.4826 * *mid;
}

/// Histogram box half-width: unit circle plus four spreads.
inline double histogram_half_width(std::span<const LabeledSample> samples, double phase_step) {
    return 1.0 + 4.0 * statistic_spread(samples, phase_step);
}

inline std::size_t bin_of(double v, double half_width, int n_bins) {
    const double u = (v + half_width) / (2.0 * half_width) * n_bins;
    const double clamped = std::clamp(std::floor(u), 0.0, double(n_bins - 1));
    return static_cast<std::size_t>(clamped);
}

/// Bins the labeled samples on an n_bins x n_bins grid over
/// [-half_width, half_width]^2; points outside land in the edge bins.
inline JointHistogram bin_samples(std::span<const LabeledSample> samples, int n_inputs, int n_bins,
                                  double half_width) {
    if (n_bins < 1) throw std::invalid_argument("bin_samples: n_bins must be >= 1");
    JointHistogram h(n_inputs, static_cast<std::size_t>(n_bins) * static_cast<std::size_t>(n_bins));
    for (const auto &s : samples) {
        const std::size_t ix = bin_of(s.value.real(), half_width, n_bins);
        const std::size_t iy = bin_of(s.value.imag(), half_width, n_bins);
        h.add(s.input, ix * static_cast<std::size_t>(n_bins) + iy);
    }
    return h;
}

/// Plug-in MI between a uniform N_p-ary eta and the binned normalized
/// statistic, box chosen from the data.
inline MiEstimate mi_from_samples(std::span<const LabeledSample> samples, int n_phases, int n_bins) {
    MiEstimate est;
    est.n_samples = samples.size();
    est.n_bins = n_bins;
    est.half_width = histogram_half_width(samples, kTwoPi / n_phases);
    est.histogram = bin_samples(samples, n_phases, n_bins, est.half_width);
    est.bits_per_channel_use = est.histogram.mutual_information();
    return est;
}

} // namespace stokesdd
