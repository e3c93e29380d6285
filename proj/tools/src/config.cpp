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

#include "cheshire/cli/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

namespace cheshire::cli {

namespace {

double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

constexpr std::array<const char*, 4> kJitterNames = {"theta1", "theta2", "delta1", "delta2"};

class Reader {
 public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Mark& mark, const std::string& msg) const {
        if (mark.is_null()) {
            throw ConfigError(source_ + ": " + msg);
        }
        throw ConfigError(fmt::format("{}:{}:{}: {}", source_, mark.line + 1, mark.column + 1, msg));
    }

    void only_keys(const YAML::Node& map, const std::string& section, std::initializer_list<const char*> keys) const {
        if (!map.IsMap()) {
            fail(map.Mark(), "'" + section + "' must be a mapping");
        }
        for (const auto& kv : map) {
            const std::string k = kv.first.as<std::string>();
            if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
                fail(kv.first.Mark(), "unknown key '" + k + "' in '" + section + "'");
            }
        }
    }

    double number(const YAML::Node& map, const char* key, double value) const {
        const YAML::Node n = map[key];
        if (!n) return value;
        try {
            const double v = n.as<double>();
            if (!std::isfinite(v)) fail(n.Mark(), std::string("'") + key + "' must be finite");
            return v;
        } catch (const YAML::BadConversion&) {
            fail(n.Mark(), std::string("'") + key + "' must be a number");
        }
    }

    std::uint64_t count(const YAML::Node& map, const char* key, std::uint64_t value) const {
        const YAML::Node n = map[key];
        if (!n) return value;
        const std::string raw = n.IsScalar() ? n.Scalar() : "";
        if (raw.empty() || raw[0] == '-') fail(n.Mark(), std::string("'") + key + "' must be a non-negative integer");
        try {
            return n.as<std::uint64_t>();
        } catch (const YAML::BadConversion&) {
            fail(n.Mark(), std::string("'") + key + "' must be a non-negative integer");
        }
    }

    bool boolean(const YAML::Node& map, const char* key, bool value) const {
        const YAML::Node n = map[key];
        if (!n) return value;
        try {
            return n.as<bool>();
        } catch (const YAML::BadConversion&) {
            fail(n.Mark(), std::string("'") + key + "' must be true or false");
        }
    }

    std::string text(const YAML::Node& map, const char* key, const std::string& value) const {
        const YAML::Node n = map[key];
        if (!n) return value;
        if (!n.IsScalar()) fail(n.Mark(), std::string("'") + key + "' must be a string");
        return n.Scalar();
    }

    std::vector<double> numbers(const YAML::Node& map, const char* key, std::vector<double> value) const {
        const YAML::Node n = map[key];
        if (!n) return value;
        if (!n.IsSequence()) fail(n.Mark(), std::string("'") + key + "' must be a list of numbers");
        value.clear();
        for (const auto& item : n) {
            try {
                value.push_back(item.as<double>());
            } catch (const YAML::BadConversion&) {
                fail(item.Mark(), std::string("'") + key + "' entries must be numbers");
            }
        }
        return value;
    }

    std::vector<std::string> strings(const YAML::Node& map, const char* key, std::vector<std::string> value) const {
        const YAML::Node n = map[key];
        if (!n) return value;
        if (!n.IsSequence()) fail(n.Mark(), std::string("'") + key + "' must be a list");
        value.clear();
        for (const auto& item : n) {
            if (!item.IsScalar()) fail(item.Mark(), std::string("'") + key + "' entries must be strings");
            value.push_back(item.Scalar());
        }
        return value;
    }

    void check(bool ok, const YAML::Node& map, const char* key, const std::string& msg) const {
        if (ok) return;
        const YAML::Node n = map[key];
        fail(n ? n.Mark() : map.Mark(), std::string("'") + key + "' " + msg);
    }

 private:
    std::string source_;
};

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

SlideGeometry RunConfig::slide() const {
    SlideGeometry g;
    g.refractive_index = refractive_index;
    g.incidence_angle = incidence_deg ? to_rad(*incidence_deg) : brewster_angle(refractive_index);
    g.filtered_arm = filter_arm;
    g.two_interfaces = two_interfaces;
    return g;
}

ExperimentConfig RunConfig::experiment_config() const {
    ExperimentConfig cfg;
    cfg.t1 = t1;
    cfg.t2 = t2;
    if (filter_arm) {
        (*filter_arm == Arm::One ? cfg.t1 : cfg.t2) *= slide_transmission(slide());
    }
    cfg.theta1 = to_rad(theta1_deg);
    cfg.theta2 = to_rad(theta2_deg);
    cfg.delta1 = to_rad(delta1_deg);
    cfg.delta2 = to_rad(delta2_deg);
    cfg.phase_grid = uniform_phase_grid(to_rad(phase_start_deg), to_rad(phase_stop_deg), phase_points);
    cfg.visibility_scale = visibility_scale;
    cfg.source_mean = baseline_mean;
    cfg.bin_seconds = bin_seconds;
    cfg.actuator = {actuator_offset, actuator_scale};
    return cfg;
}

SourceModel RunConfig::source_model() const {
    SourceModel src = SourceModel::anchored(baseline_mean, bin_seconds, efficiency_idler, efficiency_signal);
    src.accidental_rate = accidental_rate;
    return src;
}

JitterModel RunConfig::jitter_model() const {
    JitterModel j;
    j.waveplate_sigma = to_rad(jitter_sigma_deg);
    j.apply_to = 0;
    for (const std::string& t : jitter_targets) {
        for (std::size_t i = 0; i < kJitterNames.size(); ++i) {
            if (t == kJitterNames[i]) j.apply_to |= 1u << i;
        }
    }
    return j;
}

AnalysisOptions RunConfig::analysis_options() const {
    AnalysisOptions o;
    SlideGeometry g = slide();
    g.filtered_arm = Arm::One;
    o.reflectance = 1.0 - slide_transmission(g);
    o.visibility_scale = visibility_scale;
    o.method = method;
    o.delta_sigma = to_rad(delta_sigma_deg);
    o.residual_visibility_floor = residual_visibility_floor;
    return o;
}

DatasetPlan RunConfig::dataset_plan() const {
    RunConfig bare = *this;
    bare.filter_arm.reset();
    bare.theta1_deg = 0.0;
    bare.theta2_deg = 0.0;
    DatasetPlan plan;
    plan.base = bare.experiment_config();
    SlideGeometry g = slide();
    g.filtered_arm = Arm::One;
    plan.filter_transmission = slide_transmission(g);
    for (double a : rotation_angles_deg) plan.rotation_angles.push_back(to_rad(a));
    return plan;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
    const Reader r(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        r.fail(e.mark, e.msg);
    }
    RunConfig c;
    if (!root || root.IsNull()) {
        return c;
    }
    r.only_keys(root, "<root>", {"experiment", "phase", "filter", "source", "jitter", "analysis", "actuator", "seed"});

    if (const YAML::Node e = root["experiment"]) {
        r.only_keys(e, "experiment",
                    {"transmission_arm1", "transmission_arm2", "rotation_arm1_deg", "rotation_arm2_deg",
                     "offset_delta1_deg", "offset_delta2_deg", "visibility_scale"});
        c.t1 = r.number(e, "transmission_arm1", c.t1);
        c.t2 = r.number(e, "transmission_arm2", c.t2);
        c.theta1_deg = r.number(e, "rotation_arm1_deg", c.theta1_deg);
        c.theta2_deg = r.number(e, "rotation_arm2_deg", c.theta2_deg);
        c.delta1_deg = r.number(e, "offset_delta1_deg", c.delta1_deg);
        c.delta2_deg = r.number(e, "offset_delta2_deg", c.delta2_deg);
        c.visibility_scale = r.number(e, "visibility_scale", c.visibility_scale);
        r.check(c.t1 >= 0.0 && c.t1 <= 1.0, e, "transmission_arm1", "must lie in [0, 1]");
        r.check(c.t2 >= 0.0 && c.t2 <= 1.0, e, "transmission_arm2", "must lie in [0, 1]");
        r.check(std::abs(c.delta1_deg) < 22.5, e, "offset_delta1_deg", "must satisfy |delta| < 22.5");
        r.check(std::abs(c.delta2_deg) < 22.5, e, "offset_delta2_deg", "must satisfy |delta| < 22.5");
        r.check(c.visibility_scale > 0.0 && c.visibility_scale <= 1.0, e, "visibility_scale", "must lie in (0, 1]");
    }

    if (const YAML::Node p = root["phase"]) {
        r.only_keys(p, "phase", {"start_deg", "stop_deg", "points"});
        c.phase_start_deg = r.number(p, "start_deg", c.phase_start_deg);
        c.phase_stop_deg = r.number(p, "stop_deg", c.phase_stop_deg);
        c.phase_points = r.count(p, "points", c.phase_points);
        r.check(c.phase_stop_deg > c.phase_start_deg, p, "stop_deg", "must exceed start_deg");
        r.check(c.phase_points >= 1, p, "points", "must be at least 1");
    }

    if (const YAML::Node f = root["filter"]) {
        r.only_keys(f, "filter", {"arm", "refractive_index", "incidence_deg", "two_interfaces"});
        const std::string arm = r.text(f, "arm", "none");
        if (arm == "1") {
            c.filter_arm = Arm::One;
        } else if (arm == "2") {
            c.filter_arm = Arm::Two;
        } else {
            r.check(arm == "none", f, "arm", "must be none, 1 or 2");
        }
        c.refractive_index = r.number(f, "refractive_index", c.refractive_index);
        r.check(c.refractive_index > 0.0, f, "refractive_index", "must be positive");
        const std::string inc = r.text(f, "incidence_deg", "brewster");
        if (inc != "brewster") {
            c.incidence_deg = r.number(f, "incidence_deg", 0.0);
            r.check(*c.incidence_deg >= 0.0 && *c.incidence_deg < 90.0, f, "incidence_deg",
                    "must lie in [0, 90) or be 'brewster'");
            r.check(std::sin(to_rad(*c.incidence_deg)) / c.refractive_index <= 1.0, f, "incidence_deg",
                    "gives no refracted ray for this refractive_index");
        }
        c.two_interfaces = r.boolean(f, "two_interfaces", c.two_interfaces);
    }

    if (const YAML::Node s = root["source"]) {
        r.only_keys(s, "source",
                    {"baseline_mean", "bin_seconds", "efficiency_idler", "efficiency_signal", "accidental_rate"});
        c.baseline_mean = r.number(s, "baseline_mean", c.baseline_mean);
        c.bin_seconds = r.number(s, "bin_seconds", c.bin_seconds);
        c.efficiency_idler = r.number(s, "efficiency_idler", c.efficiency_idler);
        c.efficiency_signal = r.number(s, "efficiency_signal", c.efficiency_signal);
        c.accidental_rate = r.number(s, "accidental_rate", c.accidental_rate);
        r.check(c.baseline_mean > 0.0, s, "baseline_mean", "must be positive");
        r.check(c.bin_seconds > 0.0, s, "bin_seconds", "must be positive");
        r.check(c.efficiency_idler > 0.0 && c.efficiency_idler <= 1.0, s, "efficiency_idler", "must lie in (0, 1]");
        r.check(c.efficiency_signal > 0.0 && c.efficiency_signal <= 1.0, s, "efficiency_signal",
                "must lie in (0, 1]");
        r.check(c.accidental_rate >= 0.0, s, "accidental_rate", "must be non-negative");
    }

    if (const YAML::Node j = root["jitter"]) {
        r.only_keys(j, "jitter", {"waveplate_sigma_deg", "targets"});
        c.jitter_sigma_deg = r.number(j, "waveplate_sigma_deg", c.jitter_sigma_deg);
        r.check(c.jitter_sigma_deg >= 0.0, j, "waveplate_sigma_deg", "must be non-negative");
        c.jitter_targets = r.strings(j, "targets", c.jitter_targets);
        for (const std::string& t : c.jitter_targets) {
            r.check(std::find(kJitterNames.begin(), kJitterNames.end(), t) != kJitterNames.end(), j, "targets",
                    "entries must be theta1, theta2, delta1 or delta2");
        }
    }

    if (const YAML::Node a = root["analysis"]) {
        r.only_keys(a, "analysis",
                    {"method", "delta_sigma_deg", "residual_visibility_floor", "rotation_angles_deg",
                     "ensemble_seeds"});
        const std::string m = r.text(a, "method", to_string(c.method));
        if (m == "quadratic") {
            c.method = SigmaMethod::Quadratic;
        } else {
            r.check(m == "first_order", a, "method", "must be quadratic or first_order");
            c.method = SigmaMethod::FirstOrder;
        }
        c.delta_sigma_deg = r.number(a, "delta_sigma_deg", c.delta_sigma_deg);
        r.check(c.delta_sigma_deg >= 0.0, a, "delta_sigma_deg", "must be non-negative");
        c.residual_visibility_floor = r.number(a, "residual_visibility_floor", c.residual_visibility_floor);
        r.check(c.residual_visibility_floor >= 0.0 && c.residual_visibility_floor < 1.0, a,
                "residual_visibility_floor", "must lie in [0, 1)");
        c.rotation_angles_deg = r.numbers(a, "rotation_angles_deg", c.rotation_angles_deg);
        for (double v : c.rotation_angles_deg) {
            r.check(v != 0.0 && std::abs(v) < 90.0, a, "rotation_angles_deg", "entries must be nonzero and below 90");
        }
        c.ensemble_seeds = r.count(a, "ensemble_seeds", c.ensemble_seeds);
        r.check(c.ensemble_seeds >= 1, a, "ensemble_seeds", "must be at least 1");
    }

    if (const YAML::Node act = root["actuator"]) {
        r.only_keys(act, "actuator", {"offset", "scale"});
        c.actuator_offset = r.number(act, "offset", c.actuator_offset);
        c.actuator_scale = r.number(act, "scale", c.actuator_scale);
        r.check(c.actuator_scale != 0.0, act, "scale", "must be nonzero");
    }

    c.seed = r.count(root, "seed", c.seed);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    const auto line = [&out](std::string_view s) {
        out += s;
        out += '\n';
    };
    line("experiment:");
    line("  transmission_arm1: " + num(c.t1));
    line("  transmission_arm2: " + num(c.t2));
    line("  rotation_arm1_deg: " + num(c.theta1_deg));
    line("  rotation_arm2_deg: " + num(c.theta2_deg));
    line("  offset_delta1_deg: " + num(c.delta1_deg));
    line("  offset_delta2_deg: " + num(c.delta2_deg));
    line("  visibility_scale: " + num(c.visibility_scale));
    line("phase:");
    line("  start_deg: " + num(c.phase_start_deg));
    line("  stop_deg: " + num(c.phase_stop_deg));
    line("  points: " + std::to_string(c.phase_points));
    line("filter:");
    line(std::string("  arm: ") + (!c.filter_arm ? "none" : *c.filter_arm == Arm::One ? "1" : "2"));
    line("  refractive_index: " + num(c.refractive_index));
    line("  incidence_deg: " + (c.incidence_deg ? num(*c.incidence_deg) : std::string("brewster")));
    line(std::string("  two_interfaces: ") + (c.two_interfaces ? "true" : "false"));
    line("source:");
    line("  baseline_mean: " + num(c.baseline_mean));
    line("  bin_seconds: " + num(c.bin_seconds));
    line("  efficiency_idler: " + num(c.efficiency_idler));
    line("  efficiency_signal: " + num(c.efficiency_signal));
    line("  accidental_rate: " + num(c.accidental_rate));
    line("jitter:");
    line("  waveplate_sigma_deg: " + num(c.jitter_sigma_deg));
    line(fmt::format("  targets: [{}]", fmt::join(c.jitter_targets, ", ")));
    line("analysis:");
    line(std::string("  method: ") + to_string(c.method));
    line("  delta_sigma_deg: " + num(c.delta_sigma_deg));
    line("  residual_visibility_floor: " + num(c.residual_visibility_floor));
    std::vector<std::string> angles;
    for (double a : c.rotation_angles_deg) angles.push_back(num(a));
    line(fmt::format("  rotation_angles_deg: [{}]", fmt::join(angles, ", ")));
    line("  ensemble_seeds: " + std::to_string(c.ensemble_seeds));
    line("actuator:");
    line("  offset: " + num(c.actuator_offset));
    line("  scale: " + num(c.actuator_scale));
    line("seed: " + std::to_string(c.seed));
    return out;
}

std::string config_digest(const RunConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("config_digest: SHA-256 failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

}  // namespace cheshire::cli
