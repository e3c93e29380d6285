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

#include <cstddef>
#include <vector>

#include "cheshire/elements.hpp"
#include "cheshire/state.hpp"
#include "cheshire/weak_theory.hpp"

namespace cheshire {

/// Maximum visibility observed with the real apparatus; applied only when
/// comparing to measured visibilities.
inline constexpr double kApparatusVisibilityScale = 0.72;
/// Coincidences per 5 s bin with no filter and no rotation.
inline constexpr double kApparatusBaselineMean = 2526.0;
inline constexpr double kApparatusBinSeconds = 5.0;

/// Cosmetic map from phase to actuator position for axis labels: pos = offset + scale * phase.
struct ActuatorAxis {
    double offset = 0.0;
    double scale = 1.0;
    double position(double phase) const { return offset + scale * phase; }
};

/// Every physical knob of one interferometer run. Angles in radians.
struct ExperimentConfig {
    double t1 = 1.0;
    double t2 = 1.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    std::vector<double> phase_grid;
    double visibility_scale = 1.0;
    /// Expected coincidences per bin for the no-filter, no-rotation reference.
    double source_mean = kApparatusBaselineMean;
    double bin_seconds = kApparatusBinSeconds;
    ActuatorAxis actuator;

    /// Throws std::invalid_argument on an empty or non-increasing grid, source_mean <= 0,
    /// visibility_scale outside (0, 1], bin_seconds <= 0 or transmissions outside [0, 1].
    void validate() const;

    ArmSettings arms() const { return {t1, t2, theta1, theta2}; }
};

/// `points` phases from `start`, spaced (stop - start) / points apart (stop excluded).
std::vector<double> uniform_phase_grid(double start, double stop, std::size_t points);

/// Ideal configuration over two fringe periods with 50 bins, no filter, no rotation.
ExperimentConfig baseline_config();

/// (1/sqrt 2)[|1>(cos d1 |V> + sin d1 |H>) + e^{i phi}|2>|H>], built by passing
/// |H>(|1> + |2>)/sqrt 2 through the arm-one half-wave plate and the arm-two phase shifter.
PolPathState preselect(const ExperimentConfig& cfg, double phi);

/// (1/sqrt 2)(|1> + |2>)(cos d2 |H> + sin d2 |V>).
PolPathState postselector(const ExperimentConfig& cfg);

/// Weak interactions in canonical order: rotation arm 1, rotation arm 2, absorber arm 1,
/// absorber arm 2.
std::vector<Channel> interaction_chain(const ExperimentConfig& cfg);

/// State just before recombination.
PolPathState evolve(const ExperimentConfig& cfg, double phi);

/// |<postselector|evolve(cfg, phi)>|^2.
double run_pipeline(const ExperimentConfig& cfg, double phi);

struct SweepPoint {
    double phase;
    double probability;
};

struct SweepCurve {
    std::vector<SweepPoint> points;

    double min_probability() const;
    double max_probability() const;
    double mean_probability() const;
    /// (max - min) / (max + min) over the sampled points.
    double contrast() const;
};

/// run_pipeline at every grid phase, in grid order.
SweepCurve sweep(const ExperimentConfig& cfg);

}  // namespace cheshire
