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

#include "stokesdd/config.hpp"
#include "stokesdd/metrics.hpp"
#include "stokesdd/simulation.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokesdd {

inline constexpr std::string_view kSerCsvHeader = "osnr_db,dim,ser,trials,mode";
inline constexpr std::string_view kRateCsvHeader = "osnr_db,mi_bits,n_samples,n_bins";

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string ser_csv(const std::vector<SerReport> &reports) {
    std::ostringstream os;
    os << kSerCsvHeader << '\n';
    for (const auto &r : reports)
        for (int dim = 0; dim < 4; ++dim)
            os << format_double(r.osnr_db) << ',' << dim + 1 << ',' << format_double(r.ser(dim)) << ','
               << r.trials[static_cast<std::size_t>(dim)] << ',' << to_string(r.mode) << '\n';
    return os.str();
}

inline std::string rate_csv(std::span<const double> osnr_db, const std::vector<MiEstimate> &estimates) {
    std::ostringstream os;
    os << kRateCsvHeader << '\n';
    for (std::size_t i = 0; i < estimates.size(); ++i)
        os << format_double(osnr_db[i]) << ',' << format_double(estimates[i].bits_per_channel_use) << ','
           << estimates[i].n_samples << ',' << estimates[i].n_bins << '\n';
    return os.str();
}

inline std::vector<SerReport> run_ser_reports(const ExperimentConfig &cfg, unsigned threads = 0) {
    cfg.validate();
    const RingPskConstellation c(cfg.n_rings, cfg.n_phases);
    const auto grid = cfg.osnr.points();
    return simulate_ser(c, cfg.link(), grid, cfg.sweep(threads));
}

/// One CSV row per (OSNR, dimension); identical for any thread count.
inline std::string run_ser_experiment(const ExperimentConfig &cfg, unsigned threads = 0) {
    return ser_csv(run_ser_reports(cfg, threads));
}

inline std::vector<MiEstimate> run_rate_estimates(const ExperimentConfig &cfg, unsigned threads = 0) {
    cfg.validate();
    const RingPskConstellation c(cfg.n_rings, cfg.n_phases);
    const auto grid = cfg.osnr.points();
    return estimate_mi_dim4(c, cfg.link(), grid, cfg.sweep(threads), cfg.n_bins);
}

/// One CSV row per OSNR point with the fourth-dimension rate.
inline std::string run_rate_experiment(const ExperimentConfig &cfg, unsigned threads = 0) {
    const auto grid = cfg.osnr.points();
    return rate_csv(grid, run_rate_estimates(cfg, threads));
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace stokesdd
