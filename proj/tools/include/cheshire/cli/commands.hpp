// Copyright 2026 The Cheshire Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cheshire/analysis.hpp"
#include "cheshire/cli/config.hpp"
#include "cheshire/cli/io.hpp"

namespace cheshire::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs one subcommand. Never throws; errors become a single
/// "error: ..." line on `err` and the matching exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Results of fitting one counts file, plus weak values when enough context is given.
struct CountsAnalysis {
    FringeFit fit;
    CountSummary summary;
    std::optional<Measurement> pi_weak;
    std::optional<Measurement> sigma_weak;
    std::optional<Measurement> sigma_weak_first_order;
    std::optional<Arm> arm;
};

/// `reference` holds no-filter counts. A presence weak value needs the config's filter arm;
/// a polarization weak value needs a rotation in exactly one arm.
CountsAnalysis analyze_counts(const RunConfig& cfg, const std::vector<CountRecord>& counts,
                              const std::vector<CountRecord>* reference);

struct TableRow {
    std::string quantity;
    double predicted = 0.0;
    double simulated_mean = 0.0;
    double simulated_sd = 0.0;
    std::optional<double> published;
    std::optional<double> published_uncertainty;
};

/// Seed-ensemble comparison of simulated estimators against predictions and the
/// published measurements. Uses cfg.ensemble_seeds datasets derived from `seed`.
std::vector<TableRow> comparison_table(const RunConfig& cfg, std::uint64_t seed);

std::string table_csv(const std::vector<TableRow>& rows);
std::string table_markdown(const std::vector<TableRow>& rows);

}  // namespace cheshire::cli
