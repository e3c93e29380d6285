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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cheshire/experiment.hpp"
#include "cheshire/montecarlo.hpp"

namespace cheshire::cli {

/// Malformed input data. what() is a single line with the file and line number.
class InputError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

/// Header: phase_rad,probability
void write_sweep_csv(std::ostream& out, const SweepCurve& curve);
/// Header: phase_rad,counts,duration_s
void write_counts_csv(std::ostream& out, std::span<const CountRecord> records);

nlohmann::json sweep_json(const SweepCurve& curve);
nlohmann::json counts_json(std::span<const CountRecord> records);

void write_sweep(std::ostream& out, const SweepCurve& curve, Format format);
void write_counts(std::ostream& out, std::span<const CountRecord> records, Format format);

/// Parses a counts CSV. Throws InputError on a wrong header or an unparsable row.
std::vector<CountRecord> read_counts_csv(std::istream& in, const std::string& source = "<counts>");
std::vector<CountRecord> load_counts_csv(const std::string& path);

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

/// Provenance written next to every output file.
struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string version;
    /// ISO 8601, UTC, second resolution.
    std::string timestamp_utc;
    std::vector<std::string> outputs;

    /// Fills version and timestamp.
    static RunManifest now(std::string command, std::string digest, std::uint64_t seed);
    nlohmann::json to_json() const;
};

/// Writes `contents` to `path`, creating parent directories. Throws std::runtime_error.
void write_file(const std::string& path, const std::string& contents);

/// `path` with its extension replaced (or appended) by `suffix`, e.g. ".svg".
std::string sibling_path(const std::string& path, const std::string& suffix);

}  // namespace cheshire::cli
