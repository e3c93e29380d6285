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
#include <vector>

#include "cheshire/experiment.hpp"

namespace cheshire {

/// Detection probability that maps to the configured baseline mean.
inline constexpr double kReferenceProbability = 0.25;

/// Heralded-pair source and coincidence counter.
struct SourceModel {
    double pair_rate = 0.0;  // pairs / s
    double efficiency_idler = 0.30;
    double efficiency_signal = 0.30;
    double coincidence_window = 8e-9;  // s
    double accidental_rate = 0.0;      // coincidences / s
    double bin_seconds = kApparatusBinSeconds;

    /// Chooses pair_rate so that a detection probability of 0.25 yields `baseline_mean`
    /// coincidences per bin.
    static SourceModel anchored(double baseline_mean, double bin_seconds = kApparatusBinSeconds,
                                double efficiency_idler = 0.30, double efficiency_signal = 0.30);
    static SourceModel from_config(const ExperimentConfig& cfg);

    /// Throws std::invalid_argument on negative rates, efficiencies outside [0, 1],
    /// or bin_seconds <= 0.
    void validate() const;

    /// Poisson mean of one bin at detection probability `p_detect`.
    double expected_counts(double p_detect) const;
};

struct CountRecord {
    double phase = 0.0;
    std::uint64_t counts = 0;
    double duration = 0.0;
    std::uint64_t seed_tag = 0;
};

/// Which angles receive the per-sweep wave-plate offset.
enum JitterTarget : unsigned {
    kJitterTheta1 = 1u << 0,
    kJitterTheta2 = 1u << 1,
    kJitterDelta1 = 1u << 2,
    kJitterDelta2 = 1u << 3,
    kJitterAll = 0xFu,
};

struct JitterModel {
    double waveplate_sigma = 0.0;  // rad
    unsigned apply_to = kJitterAll;

    /// 2 degree rotation uncertainty applied to every angle.
    static JitterModel apparatus();
    void validate() const;
};

/// splitmix64 finalizer over (seed, stream). Streams are independent per bin index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// One counting bin. Counts are Poisson with mean src.expected_counts(p_detect).
/// Throws std::domain_error unless 0 <= p_detect <= 1.
CountRecord simulate_bin(double p_detect, const SourceModel& src, std::uint64_t rng_seed, double phase = 0.0);

/// Configuration with the jitter offsets for this sweep added. The offsets are drawn
/// once per sweep from a stream separate from the bin streams.
ExperimentConfig jittered_config(const ExperimentConfig& cfg, const JitterModel& jitter, std::uint64_t rng_seed);

/// One CountRecord per grid phase. Bin i uses derive_seed(rng_seed, i), so the result
/// does not depend on evaluation order.
std::vector<CountRecord> simulate_sweep(const ExperimentConfig& cfg, const SourceModel& src,
                                        const JitterModel& jitter, std::uint64_t rng_seed);

/// Result of the density-matrix evolution.
struct OracleResult {
    double probability;
    /// Probability removed by the loss branches.
    double absorbed;
    /// Trace of the surviving density operator.
    double trace;
};

OracleResult density_oracle_detail(const ExperimentConfig& cfg, double phi);

/// Brute-force detection probability: evolves rho through every Kraus branch and
/// returns Tr(|post><post| rho').
double density_oracle(const ExperimentConfig& cfg, double phi);

}  // namespace cheshire
