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

#include "cheshire/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cheshire {

void ExperimentConfig::validate() const {
    if (phase_grid.empty()) {
        throw std::invalid_argument("phase grid is empty");
    }
    for (std::size_t i = 1; i < phase_grid.size(); ++i) {
        if (!(phase_grid[i] > phase_grid[i - 1])) {
            throw std::invalid_argument("phase grid must be strictly increasing");
        }
    }
    if (!(t1 >= 0.0 && t1 <= 1.0) || !(t2 >= 0.0 && t2 <= 1.0)) {
        throw std::invalid_argument("transmissions must lie in [0, 1]");
    }
    if (!(source_mean > 0.0)) {
        throw std::invalid_argument("source mean must be positive");
    }
    if (!(visibility_scale > 0.0 && visibility_scale <= 1.0)) {
        throw std::invalid_argument("visibility scale must lie in (0, 1]");
    }
    if (!(bin_seconds > 0.0)) {
        throw std::invalid_argument("bin duration must be positive");
    }
}

std::vector<double> uniform_phase_grid(double start, double stop, std::size_t points) {
    if (points == 0 || !(stop > start)) {
        throw std::invalid_argument("uniform_phase_grid: need points > 0 and stop > start");
    }
    std::vector<double> grid(points);
    const double step = (stop - start) / static_cast<double>(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = start + step * static_cast<double>(i);
    }
    return grid;
}

ExperimentConfig baseline_config() {
    ExperimentConfig cfg;
    cfg.phase_grid = uniform_phase_grid(0.0, 4.0 * std::numbers::pi, 50);
    cfg.visibility_scale = kApparatusVisibilityScale;
    return cfg;
}

PolPathState preselect(const ExperimentConfig& cfg, double phi) {
    const double r = 1.0 / std::sqrt(2.0);
    const PolPathState psi0 = PolPathState::from_arms(Vector2(r, 0.0), Vector2(r, 0.0));
    // H -> cos(d1) V + sin(d1) H is a rotation by pi/2 - d1.
    const Channel hwp = rotation_channel(Arm::One, std::numbers::pi / 2 - cfg.delta1);
    return phase_channel(Arm::Two, phi).apply(hwp.apply(psi0));
}

PolPathState postselector(const ExperimentConfig& cfg) {
    const double r = 1.0 / std::sqrt(2.0);
    const Vector2 pol(r * std::cos(cfg.delta2), r * std::sin(cfg.delta2));
    return PolPathState::from_arms(pol, pol);
}

std::vector<Channel> interaction_chain(const ExperimentConfig& cfg) {
    std::vector<Channel> chain;
    chain.reserve(4);
    chain.push_back(rotation_channel(Arm::One, cfg.theta1));
    chain.push_back(rotation_channel(Arm::Two, cfg.theta2));
    chain.push_back(absorber_channel(Arm::One, cfg.t1));
    chain.push_back(absorber_channel(Arm::Two, cfg.t2));
    return chain;
}

PolPathState evolve(const ExperimentConfig& cfg, double phi) {
    PolPathState psi = preselect(cfg, phi);
    for (const Channel& ch : interaction_chain(cfg)) {
        psi = ch.apply(psi);
    }
    return psi;
}

double run_pipeline(const ExperimentConfig& cfg, double phi) {
    return std::norm(inner_product(postselector(cfg), evolve(cfg, phi)));
}

double SweepCurve::min_probability() const {
    return std::min_element(points.begin(), points.end(), [](auto& a, auto& b) {
               return a.probability < b.probability;
           })->probability;
}

double SweepCurve::max_probability() const {
    return std::max_element(points.begin(), points.end(), [](auto& a, auto& b) {
               return a.probability < b.probability;
           })->probability;
}

double SweepCurve::mean_probability() const {
    const double sum = std::accumulate(points.begin(), points.end(), 0.0,
                                       [](double acc, const SweepPoint& p) { return acc + p.probability; });
    return sum / static_cast<double>(points.size());
}

double SweepCurve::contrast() const {
    const double lo = min_probability();
    const double hi = max_probability();
    return hi + lo > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
}

SweepCurve sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepCurve curve;
    curve.points.reserve(cfg.phase_grid.size());
    for (double phi : cfg.phase_grid) {
        curve.points.push_back({phi, run_pipeline(cfg, phi)});
    }
    return curve;
}

}  // namespace cheshire
