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

#include "stokesdd/experiment.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stokesdd {

enum class PlotKind { ser, rate };

inline PlotKind parse_plot_kind(const std::string &s) {
    if (s == "ser") return PlotKind::ser;
    if (s == "rate") return PlotKind::rate;
    throw std::invalid_argument("plot kind must be 'ser' or 'rate', got '" + s + "'");
}

namespace detail {

inline constexpr std::string_view kSerPlot = R"PY(
import csv
import sys
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = defaultdict(list)
with open(CSV_PATH, newline="") as f:
    for r in csv.DictReader(f):
        rows[int(r["dim"])].append((float(r["osnr_db"]), float(r["ser"])))

labels = {1: "|E_x|", 2: "|E_y|", 3: "theta", 4: "eta"}
markers = {1: "o", 2: "s", 3: "^", 4: "d"}
fig, ax = plt.subplots(figsize=(5, 4))
for dim in sorted(rows):
    pts = sorted(p for p in rows[dim] if p[1] > 0)
    if pts:
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], marker=markers.get(dim, "o"),
                    label="dim %d %s" % (dim, labels.get(dim, "")))
ax.set_xlabel("OSNR [dB]")
ax.set_ylabel("SER")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else CSV_PATH.rsplit(".", 1)[0] + ".png"
fig.savefig(out, dpi=150)
print(out)
)PY";

inline constexpr std::string_view kRatePlot = R"PY(
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

xs, ys = [], []
with open(CSV_PATH, newline="") as f:
    for r in csv.DictReader(f):
        xs.append(float(r["osnr_db"]))
        ys.append(float(r["mi_bits"]))

fig, ax = plt.subplots(figsize=(5, 4))
ax.plot(xs, ys, marker="o", label=LABEL)
ax.set_xlabel("OSNR [dB]")
ax.set_ylabel("achievable rate of eta [bits/channel use]")
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else CSV_PATH.rsplit(".", 1)[0] + ".png"
fig.savefig(out, dpi=150)
print(out)
)PY";

inline std::string python_string(const std::string &s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '\\' || ch == '"') out += '\\';
        out += ch;
    }
    return out + "\"";
}

} // namespace detail

/// Writes a standalone matplotlib script for a CSV produced by the `ser` or
/// `rate` experiment: log-scale SER per dimension, or linear rate vs OSNR.
/// Throws if the CSV is missing or its header does not match the kind.
inline void emit_plot_script(const std::string &csv_path, PlotKind kind, const std::string &script_path,
                             const std::string &label = "") {
    const std::string text = read_text_file(csv_path);
    const auto eol = text.find('\n');
    std::string header = text.substr(0, eol);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const std::string_view expected = kind == PlotKind::ser ? kSerCsvHeader : kRateCsvHeader;
    if (header != expected)
        throw std::invalid_argument("'" + csv_path + "' is not a " + (kind == PlotKind::ser ? "ser" : "rate") +
                                    " CSV (header '" + header + "', expected '" + std::string(expected) + "')");
    if (eol == std::string::npos || text.find_first_not_of("\r\n", eol) == std::string::npos)
        throw std::invalid_argument("'" + csv_path + "' has no data rows");

    const std::string abs_csv = std::filesystem::absolute(csv_path).string();
    std::string script = "#!/usr/bin/env python3\n# Generated by stokesdd.\n";
    script += "CSV_PATH = " + detail::python_string(abs_csv) + "\n";
    if (kind == PlotKind::rate)
        script += "LABEL = " + detail::python_string(label.empty() ? "dim 4" : label) + "\n";
    script += kind == PlotKind::ser ? detail::kSerPlot : detail::kRatePlot;
    write_text_file(script_path, script);
}

} // namespace stokesdd
