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

#include "stokesdd/frontend.hpp"
#include "stokesdd/receiver.hpp"
#include "stokesdd/simulation.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stokesdd {

/// Raised for invalid experiment configuration; the message starts with the
/// offending field name.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string &field, const std::string &what)
        : std::invalid_argument(field + ": " + what), field_(field) {}
    const std::string &field() const { return field_; }

private:
    std::string field_;
};

enum class ExperimentKind { ser, rate };

inline std::string_view to_string(ExperimentKind k) { return k == ExperimentKind::ser ? "ser" : "rate"; }

struct OsnrGrid {
    double start = 10.0;
    double stop = 26.0;
    double step = 2.0;

    /// start, start + step, ... up to stop (inclusive within rounding).
    std::vector<double> points() const {
        std::vector<double> out;
        const double span = (stop - start) / step;
        const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
        out.reserve(n);
        for (std::size_t k = 0; k < n; ++k) out.push_back(start + double(k) * step);
        return out;
    }
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::ser;
    int n_rings = 2;
    int n_phases = 4;
    OsnrGrid osnr{};
    std::size_t symbols_per_block = 10000;
    std::size_t blocks = 10;
    std::uint64_t seed = 1;
    ReceiverVariant receiver_variant = ReceiverVariant::full;
    ChannelMode channel_mode = ChannelMode::true_channel;
    std::size_t training_repeats = 10000;
    DetectionMode detection_mode = DetectionMode::decision_directed;
    int n_bins = 64;  // rate experiment, per axis

    /// Defaults per experiment: the SER sweep is decision-directed over
    /// 10-26 dB, the rate sweep uses genie context over 0-30 dB with 10^6
    /// samples.
    static ExperimentConfig defaults(ExperimentKind kind) {
        ExperimentConfig c;
        c.experiment = kind;
        if (kind == ExperimentKind::rate) {
            c.osnr = {0.0, 30.0, 2.0};
            c.blocks = 100;
            c.detection_mode = DetectionMode::genie;
        }
        return c;
    }

    void validate() const {
        if (n_rings < 1) throw ConfigError("n_rings", "must be >= 1");
        if (n_phases < 1) throw ConfigError("n_phases", "must be >= 1");
        if (!std::isfinite(osnr.start)) throw ConfigError("osnr_db.start", "must be finite");
        if (!std::isfinite(osnr.stop)) throw ConfigError("osnr_db.stop", "must be finite");
        if (!(osnr.step > 0.0) || !std::isfinite(osnr.step)) throw ConfigError("osnr_db.step", "must be > 0");
        if (osnr.stop < osnr.start) throw ConfigError("osnr_db.stop", "must be >= osnr_db.start (empty grid)");
        if (symbols_per_block < 2) throw ConfigError("symbols_per_block", "must be >= 2");
        if (blocks < 1) throw ConfigError("blocks", "must be >= 1");
        if (channel_mode == ChannelMode::estimated && training_repeats < 1)
            throw ConfigError("training_repeats", "must be >= 1 with an estimated channel");
        if (n_bins < 1) throw ConfigError("n_bins", "must be >= 1");
    }

    LinkSetup link() const { return {receiver_variant, channel_mode, training_repeats, detection_mode}; }
    SweepSetup sweep(unsigned threads) const { return {symbols_per_block, blocks, seed, threads}; }
};

namespace detail {

template <class Enum>
struct EnumName {
    Enum value;
    std::string_view name;
};

template <class Enum, std::size_t N>
Enum parse_enum(const std::string &field, const std::string &text, const EnumName<Enum> (&table)[N]) {
    for (const auto &e : table)
        if (e.name == text) return e.value;
    std::string allowed;
    for (const auto &e : table) allowed += (allowed.empty() ? "" : ", ") + std::string(e.name);
    throw ConfigError(field, "unknown value '" + text + "' (expected one of: " + allowed + ")");
}

inline constexpr EnumName<ExperimentKind> kExperimentNames[] = {{ExperimentKind::ser, "ser"},
                                                                {ExperimentKind::rate, "rate"}};
inline constexpr EnumName<ReceiverVariant> kVariantNames[] = {{ReceiverVariant::full, "full"},
                                                              {ReceiverVariant::reduced, "reduced"}};
inline constexpr EnumName<ChannelMode> kChannelNames[] = {{ChannelMode::true_channel, "true"},
                                                          {ChannelMode::estimated, "estimated"}};
inline constexpr EnumName<DetectionMode> kDetectionNames[] = {{DetectionMode::genie, "genie"},
                                                              {DetectionMode::decision_directed, "decision-directed"}};

} // namespace detail

inline ExperimentKind parse_experiment(const std::string &s) {
    return detail::parse_enum("experiment", s, detail::kExperimentNames);
}
inline ReceiverVariant parse_variant(const std::string &s) {
    return detail::parse_enum("receiver_variant", s, detail::kVariantNames);
}
inline ChannelMode parse_channel_mode(const std::string &s) {
    return detail::parse_enum("channel_mode", s, detail::kChannelNames);
}
inline DetectionMode parse_detection_mode(const std::string &s) {
    return detail::parse_enum("detection_mode", s, detail::kDetectionNames);
}

inline nlohmann::ordered_json to_json(const ExperimentConfig &c) {
    nlohmann::ordered_json j;
    j["experiment"] = std::string(to_string(c.experiment));
    j["n_rings"] = c.n_rings;
    j["n_phases"] = c.n_phases;
    j["osnr_db"] = {{"start", c.osnr.start}, {"stop", c.osnr.stop}, {"step", c.osnr.step}};
    j["symbols_per_block"] = c.symbols_per_block;
    j["blocks"] = c.blocks;
    j["seed"] = c.seed;
    j["receiver_variant"] = std::string(to_string(c.receiver_variant));
    j["channel_mode"] = std::string(to_string(c.channel_mode));
    j["training_repeats"] = c.training_repeats;
    j["detection_mode"] = std::string(to_string(c.detection_mode));
    j["n_bins"] = c.n_bins;
    return j;
}

/// Applies the keys present in `j` on top of `base`. Unknown keys are
/// rejected.
inline ExperimentConfig apply_json(ExperimentConfig base, const nlohmann::json &j) {
    if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
    auto get = [&](const nlohmann::json &obj, const std::string &key, const std::string &field, auto &out) {
        if (!obj.contains(key)) return;
        try {
            obj.at(key).get_to(out);
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError(field, std::string("bad value: ") + e.what());
        }
    };
    auto as_string = [](const std::string &field, const nlohmann::json &v) {
        if (!v.is_string()) throw ConfigError(field, "must be a string");
        return v.get<std::string>();
    };
    for (const auto &[key, value] : j.items()) {
        if (key == "experiment") {
            base.experiment = parse_experiment(as_string(key, value));
        } else if (key == "n_rings") {
            get(j, key, key, base.n_rings);
        } else if (key == "n_phases") {
            get(j, key, key, base.n_phases);
        } else if (key == "osnr_db") {
            if (!value.is_object()) throw ConfigError("osnr_db", "must be an object {start, stop, step}");
            for (const auto &[sub, _] : value.items())
                if (sub != "start" && sub != "stop" && sub != "step") throw ConfigError("osnr_db." + sub, "unknown key");
            get(value, "start", "osnr_db.start", base.osnr.start);
            get(value, "stop", "osnr_db.stop", base.osnr.stop);
            get(value, "step", "osnr_db.step", base.osnr.step);
        } else if (key == "symbols_per_block") {
            get(j, key, key, base.symbols_per_block);
        } else if (key == "blocks") {
            get(j, key, key, base.blocks);
        } else if (key == "seed") {
            get(j, key, key, base.seed);
        } else if (key == "receiver_variant") {
            base.receiver_variant = parse_variant(as_string(key, value));
        } else if (key == "channel_mode") {
            base.channel_mode = parse_channel_mode(as_string(key, value));
        } else if (key == "training_repeats") {
            get(j, key, key, base.training_repeats);
        } else if (key == "detection_mode") {
            base.detection_mode = parse_detection_mode(as_string(key, value));
        } else if (key == "n_bins") {
            get(j, key, key, base.n_bins);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    return base;
}

/// Parses a JSON config on top of the defaults for its experiment kind;
/// `default_seed` applies when the document has no "seed" key.
inline ExperimentConfig parse_config(const std::string &text, std::uint64_t default_seed = 1) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    ExperimentKind kind = ExperimentKind::ser;
    if (j.is_object() && j.contains("experiment") && j["experiment"].is_string())
        kind = parse_experiment(j["experiment"].get<std::string>());
    ExperimentConfig base = ExperimentConfig::defaults(kind);
    base.seed = default_seed;
    return apply_json(base, j);
}

inline std::string serialize_config(const ExperimentConfig &c) { return to_json(c).dump(2) + "\n"; }

} // namespace stokesdd
