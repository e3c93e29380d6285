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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheshire/analysis.hpp"
#include "cheshire/elements.hpp"
#include "cheshire/experiment.hpp"
#include "cheshire/montecarlo.hpp"

namespace cheshire::cli {

/// Bad or unreadable configuration. what() is a single line, prefixed with
/// "<source>:<line>:<column>: " when the position is known.
class ConfigError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Everything a run needs, as written in the file. Angles are kept in degrees so that
/// serialize(parse(text)) reproduces the same numbers bit for bit; the *_config()
/// accessors convert to radians.
struct RunConfig {
    double t1 = 1.0;
    double t2 = 1.0;
    double theta1_deg = 0.0;
    double theta2_deg = 0.0;
    double delta1_deg = 0.0;
    double delta2_deg = 0.0;
    double visibility_scale = kApparatusVisibilityScale;

    double phase_start_deg = 0.0;
    double phase_stop_deg = 720.0;
    std::uint64_t phase_points = 50;

    /// Brewster slide; no arm means no slide in the beam.
    std::optional<Arm> filter_arm;
    double refractive_index = 1.5;
    /// Unset means Brewster incidence for `refractive_index`.
    std::optional<double> incidence_deg;
    bool two_interfaces = false;

    double baseline_mean = kApparatusBaselineMean;
    double bin_seconds = kApparatusBinSeconds;
    double efficiency_idler = 0.30;
    double efficiency_signal = 0.30;
    double accidental_rate = 0.0;

    double jitter_sigma_deg = 0.0;
    std::vector<std::string> jitter_targets = {"theta1", "theta2", "delta1", "delta2"};

    SigmaMethod method = SigmaMethod::Quadratic;
    double delta_sigma_deg = 2.0;
    double residual_visibility_floor = 0.0;
    std::vector<double> rotation_angles_deg = {10.0, 20.0};
    std::uint64_t ensemble_seeds = 50;

    double actuator_offset = 0.0;
    double actuator_scale = 1.0;

    std::uint64_t seed = 1;

    SlideGeometry slide() const;
    /// Quantum-optics knobs in radians, with the slide folded into the transmissions.
    ExperimentConfig experiment_config() const;
    SourceModel source_model() const;
    JitterModel jitter_model() const;
    AnalysisOptions analysis_options() const;
    DatasetPlan dataset_plan() const;
};

/// Parses YAML text. Unknown keys, wrong types and out-of-range values raise ConfigError.
/// `source` names the text in messages.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Reads and parses a file; a missing file raises ConfigError.
RunConfig load_config(const std::string& path);

/// Canonical YAML: fixed key order, every key present, shortest round-trip numbers.
std::string serialize_config(const RunConfig& cfg);

/// Lower-case hex SHA-256 of serialize_config(cfg).
std::string config_digest(const RunConfig& cfg);

}  // namespace cheshire::cli
