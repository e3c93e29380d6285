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

#include "cheshire/cli/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#ifndef CHESHIRE_VERSION
#define CHESHIRE_VERSION "0.0.0"
#endif

namespace cheshire::cli {

std::string format_number(double v) { return fmt::format("{}", v); }

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
    out << "phase_rad,probability\n";
    for (const SweepPoint& p : curve.points) {
        out << format_number(p.phase) << ',' << format_number(p.probability) << '\n';
    }
}

void write_counts_csv(std::ostream& out, std::span<const CountRecord> records) {
    out << "phase_rad,counts,duration_s\n";
    for (const CountRecord& r : records) {
        out << format_number(r.phase) << ',' << r.counts << ',' << format_number(r.duration) << '\n';
    }
}

nlohmann::json sweep_json(const SweepCurve& curve) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepPoint& p : curve.points) {
        rows.push_back({{"phase_rad", p.phase}, {"probability", p.probability}});
    }
    return rows;
}

nlohmann::json counts_json(std::span<const CountRecord> records) {
    nlohmann::json rows = nlohmann::json::array();
    for (const CountRecord& r : records) {
        rows.push_back({{"phase_rad", r.phase}, {"counts", r.counts}, {"duration_s", r.duration}});
    }
    return rows;
}

void write_sweep(std::ostream& out, const SweepCurve& curve, Format format) {
    if (format == Format::Csv) {
        write_sweep_csv(out, curve);
    } else {
        out << sweep_json(curve).dump(2) << '\n';
    }
}

void write_counts(std::ostream& out, std::span<const CountRecord> records, Format format) {
    if (format == Format::Csv) {
        write_counts_csv(out, records);
    } else {
        out << counts_json(records).dump(2) << '\n';
    }
}

namespace {

template <typename T>
bool parse_field(std::string_view field, T& value) {
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<CountRecord> read_counts_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    const auto error = [&](const std::string& msg) {
        return InputError(fmt::format("{}:{}: {}", source, line_no, msg));
    };
    if (!std::getline(in, line)) {
        throw InputError(source + ": empty file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "phase_rad,counts,duration_s") {
        throw error("expected header 'phase_rad,counts,duration_s'");
    }
    std::vector<CountRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
            throw error("expected 3 fields");
        }
        const std::string_view view(line);
        CountRecord r;
        if (!parse_field(view.substr(0, c1), r.phase)) throw error("bad phase_rad");
        if (!parse_field(view.substr(c1 + 1, c2 - c1 - 1), r.counts)) throw error("bad counts");
        if (!parse_field(view.substr(c2 + 1), r.duration) || !(r.duration > 0.0)) throw error("bad duration_s");
        records.push_back(r);
    }
    return records;
}

std::vector<CountRecord> load_counts_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path + ": cannot open counts file");
    }
    return read_counts_csv(in, path);
}

RunManifest RunManifest::now(std::string command, std::string digest, std::uint64_t seed) {
    RunManifest m;
    m.command = std::move(command);
    m.config_digest = std::move(digest);
    m.seed = seed;
    m.version = CHESHIRE_VERSION;
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    m.timestamp_utc = buf;
    return m;
}

nlohmann::json RunManifest::to_json() const {
    return {{"tool", "cheshire"},        {"version", version}, {"command", command},
            {"config_sha256", config_digest}, {"seed", seed},       {"timestamp_utc", timestamp_utc},
            {"outputs", outputs}};
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw std::runtime_error(path + ": cannot create directory: " + ec.message());
    }
    std::ofstream out(p, std::ios::binary);
    out << contents;
    if (!out) {
        throw std::runtime_error(path + ": write failed");
    }
}

std::string sibling_path(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    p.replace_extension(suffix);
    return p.string();
}

}  // namespace cheshire::cli
