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

// stokesdd: command-line driver for the Stokes-space direct-detection
// simulator.
//
//   stokesdd ser   [--config FILE] [overrides] [--out CSV] [--plot-script PY]
//   stokesdd rate  [--config FILE] [overrides] [--out CSV] [--plot-script PY]
//   stokesdd calibrate-cov [--configs N] [--draws N] [--sampler mc|rqmc]
//   stokesdd estimate-channel-demo [--osnr DB] [--repeats N]
//   stokesdd plot CSV --kind ser|rate [--out PY]

#include "stokesdd/stokesdd.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace stokesdd;

constexpr const char *kSeedEnv = "STOKESDD_SEED";

std::optional<std::uint64_t> seed_from_env() {
    const char *v = std::getenv(kSeedEnv);
    if (v == nullptr || *v == '\0') return std::nullopt;
    try {
        std::size_t used = 0;
        const unsigned long long s = std::stoull(v, &used, 0);
        if (used != std::string(v).size()) throw std::invalid_argument("trailing characters");
        return s;
    } catch (const std::exception &) {
        throw ConfigError("seed", std::string("environment variable ") + kSeedEnv + "='" + v +
                                      "' is not an unsigned integer");
    }
}

/// Flags that override the config file, all optional.
struct Overrides {
    std::string config_path;
    std::optional<int> n_rings, n_phases, n_bins;
    std::optional<double> osnr_start, osnr_stop, osnr_step;
    std::optional<std::size_t> symbols_per_block, blocks, training_repeats;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> receiver_variant, channel_mode, detection_mode;

    void attach(CLI::App *app, bool with_bins) {
        app->add_option("-c,--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
        app->add_option("--rings", n_rings, "number of rings N_r");
        app->add_option("--phases", n_phases, "number of phases N_p");
        app->add_option("--osnr-start", osnr_start, "first OSNR point [dB]");
        app->add_option("--osnr-stop", osnr_stop, "last OSNR point [dB]");
        app->add_option("--osnr-step", osnr_step, "OSNR step [dB]");
        app->add_option("--symbols", symbols_per_block, "symbols per block (one channel draw per block)");
        app->add_option("--blocks", blocks, "number of blocks");
        app->add_option("--seed", seed, std::string("master seed (default: $") + kSeedEnv + " or 1)");
        app->add_option("--variant", receiver_variant, "receiver variant: full | reduced");
        app->add_option("--channel", channel_mode, "channel at the receiver: true | estimated");
        app->add_option("--training-repeats", training_repeats, "pilot repeats for channel estimation");
        app->add_option("--detection", detection_mode, "detection mode: genie | decision-directed");
        if (with_bins) app->add_option("--bins", n_bins, "histogram bins per axis");
    }

    ExperimentConfig resolve(ExperimentKind kind) const {
        ExperimentConfig cfg = ExperimentConfig::defaults(kind);
        if (auto s = seed_from_env()) cfg.seed = *s;
        if (!config_path.empty()) {
            cfg = parse_config(read_text_file(config_path), cfg.seed);
            if (cfg.experiment != kind)
                throw ConfigError("experiment", "config file is for '" + std::string(to_string(cfg.experiment)) +
                                                    "' but the subcommand is '" + std::string(to_string(kind)) + "'");
        }
        if (n_rings) cfg.n_rings = *n_rings;
        if (n_phases) cfg.n_phases = *n_phases;
        if (n_bins) cfg.n_bins = *n_bins;
        if (osnr_start) cfg.osnr.start = *osnr_start;
        if (osnr_stop) cfg.osnr.stop = *osnr_stop;
        if (osnr_step) cfg.osnr.step = *osnr_step;
        if (symbols_per_block) cfg.symbols_per_block = *symbols_per_block;
        if (blocks) cfg.blocks = *blocks;
        if (training_repeats) cfg.training_repeats = *training_repeats;
        if (seed) cfg.seed = *seed;
        if (receiver_variant) cfg.receiver_variant = parse_variant(*receiver_variant);
        if (channel_mode) cfg.channel_mode = parse_channel_mode(*channel_mode);
        if (detection_mode) cfg.detection_mode = parse_detection_mode(*detection_mode);
        cfg.validate();
        return cfg;
    }
};

struct OutputOptions {
    std::string out;
    std::string plot_script;
    std::string dump_config;
    unsigned threads = 0;

    void attach(CLI::App *app) {
        app->add_option("-o,--out", out, "CSV output path (default: stdout)");
        app->add_option("--plot-script", plot_script, "also write a matplotlib script for the CSV (needs --out)");
        app->add_option("--dump-config", dump_config, "write the resolved config as JSON");
        app->add_option("-j,--threads", threads, "worker threads (0 = all cores); results do not depend on it");
    }

    void emit(const ExperimentConfig &cfg, const std::string &csv, PlotKind kind) const {
        if (!dump_config.empty()) write_text_file(dump_config, serialize_config(cfg));
        if (out.empty()) {
            std::cout << csv;
        } else {
            write_text_file(out, csv);
            std::cerr << "wrote " << out << '\n';
        }
        if (!plot_script.empty()) {
            if (out.empty()) throw std::invalid_argument("--plot-script needs --out");
            emit_plot_script(out, kind, plot_script, "(" + std::to_string(cfg.n_rings) + ", " +
                                                         std::to_string(cfg.n_phases) + ")");
            std::cerr << "wrote " << plot_script << '\n';
        }
    }
};

int run_calibrate(std::size_t configs, std::size_t draws, const std::string &sampler_name, std::uint64_t seed,
                  unsigned threads) {
    const NoiseSampler sampler = sampler_name == "mc" ? NoiseSampler::monte_carlo : NoiseSampler::rqmc;
    const auto cases = random_oracle_cases(configs, seed);
    std::vector<double> dev123(cases.size()), dev4(cases.size());
    parallel_for_index(cases.size(), threads, [&](std::size_t i) {
        const OracleCase &oc = cases[i];
        const std::uint64_t s = stream_seed(seed, {i});
        dev123[i] = max_relative_deviation(gaussian_stats_dims123(oc.kx, oc.ky, oc.sigma2),
                                           sample_moments_dims123(oc.kx, oc.ky, oc.sigma2, draws, sampler, s));
        dev4[i] = max_relative_deviation(
            gaussian_stats_dim4(oc.kx_now, oc.ky_prev, oc.sigma2),
            sample_moments_dim4(oc.kx_now, oc.ky_prev, oc.sigma2, draws, sampler, splitmix64(s)));
    });
    std::size_t worst = 0;
    double max123 = 0.0, max4 = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (std::max(dev123[i], dev4[i]) > std::max(dev123[worst], dev4[worst])) worst = i;
        max123 = std::max(max123, dev123[i]);
        max4 = std::max(max4, dev4[i]);
    }
    std::cout << "sampler " << to_string(sampler) << ", " << configs << " configurations x " << draws << " draws\n"
              << "max relative deviation (w1..w4): " << format_double(max123) << '\n'
              << "max relative deviation (w5, w6): " << format_double(max4) << '\n';
    if (!cases.empty())
        std::cout << "worst configuration: #" << worst << " at OSNR " << format_double(cases[worst].osnr_db)
                  << " dB\n";
    return 0;
}

int run_channel_demo(double osnr_db, std::size_t repeats, std::uint64_t seed) {
    Rng rng = make_stream(seed, {0xdeadULL});
    const JonesChannel truth = haar_random_channel(rng, osnr_to_sigma2(osnr_db));
    const auto training = simulate_training(truth, repeats, rng);
    const ChannelEstimate est = estimate_channel(training);
    cplx a = truth.a, b = truth.b;
    fix_channel_sign(a, b);
    auto show = [](const cplx &z) {
        return "(" + format_double(z.real()) + ", " + format_double(z.imag()) + ")";
    };
    std::cout << "OSNR " << format_double(osnr_db) << " dB, sigma^2 " << format_double(truth.sigma2) << ", "
              << repeats << " repeats per pilot\n"
              << "true      a = " << show(a) << "  b = " << show(b) << '\n'
              << "estimated a = " << show(est.a_hat) << "  b = " << show(est.b_hat) << '\n'
              << "max component error (sign aligned): "
              << format_double(sign_aligned_error(est.a_hat, est.b_hat, truth.a, truth.b)) << '\n'
              << "fit residual: " << format_double(est.residual) << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Stokes-space direct-detection transceiver simulator"};
    app.require_subcommand(1);

    Overrides ser_over, rate_over;
    OutputOptions ser_out, rate_out;
    CLI::App *ser = app.add_subcommand("ser", "per-dimension symbol error rate vs OSNR");
    ser_over.attach(ser, false);
    ser_out.attach(ser);

    CLI::App *rate = app.add_subcommand("rate", "achievable rate of the fourth dimension vs OSNR");
    rate_over.attach(rate, true);
    rate_out.attach(rate);
    std::string dims123_out;
    int dims123_bins = 8;
    rate->add_option("--dims123-out", dims123_out, "also write the coarse dims 1-3 rate diagnostic CSV");
    rate->add_option("--dims123-bins", dims123_bins, "bins per axis for the dims 1-3 diagnostic")
        ->check(CLI::Range(1, 16));

    std::size_t cal_configs = 100, cal_draws = 1000000;
    std::string cal_sampler = "rqmc";
    std::optional<std::uint64_t> cal_seed;
    unsigned cal_threads = 0;
    CLI::App *cal = app.add_subcommand("calibrate-cov", "Monte Carlo check of the Gaussian moment formulas");
    cal->add_option("--configs", cal_configs, "random (K, sigma^2) configurations");
    cal->add_option("--draws", cal_draws, "noise draws per configuration");
    cal->add_option("--sampler", cal_sampler, "noise sampler")->check(CLI::IsMember({"mc", "rqmc"}));
    cal->add_option("--seed", cal_seed, "master seed");
    cal->add_option("-j,--threads", cal_threads, "worker threads (0 = all cores)");

    double demo_osnr = 20.0;
    std::size_t demo_repeats = 10000;
    std::optional<std::uint64_t> demo_seed;
    CLI::App *demo = app.add_subcommand("estimate-channel-demo", "pilot-based channel estimate on a random channel");
    demo->add_option("--osnr", demo_osnr, "OSNR [dB]");
    demo->add_option("--repeats", demo_repeats, "repeats per pilot")->check(CLI::PositiveNumber);
    demo->add_option("--seed", demo_seed, "master seed");

    std::string plot_csv, plot_kind, plot_out;
    CLI::App *plot = app.add_subcommand("plot", "write a matplotlib script for an existing CSV");
    plot->add_option("csv", plot_csv, "CSV from `ser` or `rate`")->required();
    plot->add_option("--kind", plot_kind, "ser | rate")->required()->check(CLI::IsMember({"ser", "rate"}));
    plot->add_option("-o,--out", plot_out, "script path (default: CSV path with .py)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ser->parsed()) {
            const ExperimentConfig cfg = ser_over.resolve(ExperimentKind::ser);
            ser_out.emit(cfg, run_ser_experiment(cfg, ser_out.threads), PlotKind::ser);
        } else if (rate->parsed()) {
            const ExperimentConfig cfg = rate_over.resolve(ExperimentKind::rate);
            rate_out.emit(cfg, run_rate_experiment(cfg, rate_out.threads), PlotKind::rate);
            if (!dims123_out.empty()) {
                const RingPskConstellation c(cfg.n_rings, cfg.n_phases);
                const auto grid = cfg.osnr.points();
                const auto mi = estimate_mi_dims123(c, grid, cfg.sweep(rate_out.threads), dims123_bins);
                std::string csv = "osnr_db,mi_bits_dims123,bins_per_axis\n";
                for (std::size_t i = 0; i < grid.size(); ++i)
                    csv += format_double(grid[i]) + "," + format_double(mi[i]) + "," + std::to_string(dims123_bins) +
                           "\n";
                write_text_file(dims123_out, csv);
                std::cerr << "wrote " << dims123_out << '\n';
            }
        } else if (cal->parsed()) {
            const std::uint64_t seed = cal_seed ? *cal_seed : seed_from_env().value_or(1);
            return run_calibrate(cal_configs, cal_draws, cal_sampler, seed, cal_threads);
        } else if (demo->parsed()) {
            const std::uint64_t seed = demo_seed ? *demo_seed : seed_from_env().value_or(1);
            return run_channel_demo(demo_osnr, demo_repeats, seed);
        } else if (plot->parsed()) {
            if (plot_out.empty()) plot_out = std::filesystem::path(plot_csv).replace_extension(".py").string();
            emit_plot_script(plot_csv, parse_plot_kind(plot_kind), plot_out);
            std::cerr << "wrote " << plot_out << '\n';
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
