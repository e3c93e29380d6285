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

#include "cheshire/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace cheshire {

namespace {

// Stream id reserved for the per-sweep angle offsets.
constexpr std::uint64_t kJitterStream = 0xA5A5'5A5A'C3C3'3C3Cull;

}  // namespace

SourceModel SourceModel::anchored(double baseline_mean, double bin_seconds, double efficiency_idler,
                                  double efficiency_signal) {
    SourceModel src;
    src.bin_seconds = bin_seconds;
    src.efficiency_idler = efficiency_idler;
    src.efficiency_signal = efficiency_signal;
    const double per_pair = bin_seconds * efficiency_idler * efficiency_signal;
    if (!(per_pair > 0.0) || !(baseline_mean >= 0.0)) {
        throw std::invalid_argument("SourceModel::anchored: need positive efficiencies, bin and mean");
    }
    src.pair_rate = baseline_mean / per_pair;
    return src;
}

SourceModel SourceModel::from_config(const ExperimentConfig& cfg) {
    return anchored(cfg.source_mean, cfg.bin_seconds);
}

void SourceModel::validate() const {
    if (!(pair_rate >= 0.0) || !(accidental_rate >= 0.0) || !(coincidence_window >= 0.0)) {
        throw std::invalid_argument("SourceModel: rates must be non-negative");
    }
    if (!(efficiency_idler >= 0.0 && efficiency_idler <= 1.0) ||
        !(efficiency_signal >= 0.0 && efficiency_signal <= 1.0)) {
        throw std::invalid_argument("SourceModel: efficiencies must lie in [0, 1]");
    }
    if (!(bin_seconds > 0.0)) {
        throw std::invalid_argument("SourceModel: bin_seconds must be positive");
    }
}

double SourceModel::expected_counts(double p_detect) const {
    return pair_rate * bin_seconds * efficiency_idler * efficiency_signal * (p_detect / kReferenceProbability) +
           accidental_rate * bin_seconds;
}

JitterModel JitterModel::apparatus() {
    return {2.0 * std::numbers::pi / 180.0, kJitterAll};
}

void JitterModel::validate() const {
    if (!(waveplate_sigma >= 0.0)) {
        throw std::invalid_argument("JitterModel: sigma must be non-negative");
    }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E37'79B9'7F4A'7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58'476D'1CE4'E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D0'49BB'1331'11EBull;
    return z ^ (z >> 31);
}

CountRecord simulate_bin(double p_detect, const SourceModel& src, std::uint64_t rng_seed, double phase) {
    if (!(p_detect >= 0.0 && p_detect <= 1.0)) {
        throw std::domain_error("simulate_bin: detection probability " + std::to_string(p_detect) +
                                " outside [0, 1]");
    }
    src.validate();
    const double mean = src.expected_counts(p_detect);
    CountRecord rec{phase, 0, src.bin_seconds, rng_seed};
    if (mean > 0.0) {
        std::mt19937_64 rng(rng_seed);
        std::poisson_distribution<std::uint64_t> poisson(mean);
        rec.counts = poisson(rng);
    }
    return rec;
}

ExperimentConfig jittered_config(const ExperimentConfig& cfg, const JitterModel& jitter, std::uint64_t rng_seed) {
    jitter.validate();
    ExperimentConfig out = cfg;
    if (jitter.waveplate_sigma == 0.0 || jitter.apply_to == 0) {
        return out;
    }
    std::mt19937_64 rng(derive_seed(rng_seed, kJitterStream));
    std::normal_distribution<double> offset(0.0, jitter.waveplate_sigma);
    // Draw all four offsets regardless of targets so each angle keeps its own stream slot.
    const double d_theta1 = offset(rng);
    const double d_theta2 = offset(rng);
    const double d_delta1 = offset(rng);
    const double d_delta2 = offset(rng);
    if (jitter.apply_to & kJitterTheta1) out.theta1 += d_theta1;
    if (jitter.apply_to & kJitterTheta2) out.theta2 += d_theta2;
    if (jitter.apply_to & kJitterDelta1) out.delta1 += d_delta1;
    if (jitter.apply_to & kJitterDelta2) out.delta2 += d_delta2;
    return out;
}

std::vector<CountRecord> simulate_sweep(const ExperimentConfig& cfg, const SourceModel& src,
                                        const JitterModel& jitter, std::uint64_t rng_seed) {
    cfg.validate();
    src.validate();
    const ExperimentConfig actual = jittered_config(cfg, jitter, rng_seed);
    std::vector<CountRecord> records(cfg.phase_grid.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double phi = cfg.phase_grid[i];
        // Rounding can push a unit-probability pipeline a hair above one.
        const double p = std::clamp(run_pipeline(actual, phi), 0.0, 1.0);
        records[i] = simulate_bin(p, src, derive_seed(rng_seed, i), phi);
    }
    return records;
}

OracleResult density_oracle_detail(const ExperimentConfig& cfg, double phi) {
    OpenState state{DensityMatrix::from_pure(preselect(cfg, phi)), 0.0};
    for (const Channel& ch : interaction_chain(cfg)) {
        state = ch.apply(state);
    }
    return {state.rho.overlap_probability(postselector(cfg)), state.lost, state.rho.trace()};
}

double density_oracle(const ExperimentConfig& cfg, double phi) {
    return density_oracle_detail(cfg, phi).probability;
}

}  // namespace cheshire
