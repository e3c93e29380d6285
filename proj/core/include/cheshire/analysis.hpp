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
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cheshire/elements.hpp"
#include "cheshire/montecarlo.hpp"

namespace cheshire {

class FitError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// The visibility cannot be produced by any weak value at this rotation angle.
class NoSolution : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

/// Least-squares fit of N(phi) = A (1 - V cos(phi - phi0)).
struct FringeFit {
    double mean_level = 0.0;    // A
    double visibility = 0.0;    // V, in [0, 1]
    double phase_offset = 0.0;  // phi0, in (-pi, pi]
    double residual_rms = 0.0;
    struct {
        double mean_level = 0.0;
        double visibility = 0.0;
        double phase_offset = 0.0;
    } stderr_;

    double evaluate(double phi) const;
};

/// Fits arbitrary samples. The model is linear in (A, -AV cos phi0, -AV sin phi0), so it is
/// solved exactly by QR; standard errors come from the residual covariance.
/// Throws FitError with fewer than 5 points, a rank-deficient phase set, or A <= 0.
FringeFit fit_fringe(std::span<const double> phases, std::span<const double> values);
FringeFit fit_fringe(std::span<const CountRecord> records);

/// Value with a one-sigma uncertainty.
struct Measurement {
    double value = 0.0;
    double uncertainty = 0.0;
};

/// Mean count per bin and its standard deviation of the mean.
struct CountSummary {
    double mean = 0.0;
    double sdm = 0.0;
    std::size_t bins = 0;
};

CountSummary summarize(std::span<const CountRecord> records);

/// Systematic error from a polarization offset of delta_sigma.
struct DeltaUncertainty {
    /// Bound on Re<Pi_k>_w, from the linearized generalized weak value |delta e^{-i phi}|.
    double pi_weak = 0.0;
    /// Same offset expressed as a fraction of the predicted intensity change R Re<Pi>_w.
    double intensity_change = 0.0;
};

DeltaUncertainty propagate_delta_uncertainty(double delta_sigma, double phi = 0.0);

/// Re<Pi_k>_w = (1/R)(N0 - Nk)/N0. The uncertainty combines the count SDMs with the
/// polarization-offset systematic in quadrature.
/// Throws std::domain_error if R <= 0 or N0 <= 0.
Measurement estimate_pi_weak(const CountSummary& no_filter, const CountSummary& filtered, double reflectance,
                             double delta_sigma = 0.0);
Measurement estimate_pi_weak(double mean_no_filter, double mean_filtered, double reflectance);

enum class SigmaMethod {
    /// |W| = (V / V_m) / (2 theta).
    FirstOrder,
    /// Inverts V' = 2 g s |W| / (g^2 + s^2 |W|^2) with s = sin theta and
    /// g = 1 - (1 - cos theta) Re<Pi>_w, the exact-rotation form of the second-order
    /// expression 2 theta |W| / (1 - theta^2 Re<Pi>_w + theta^2 |W|^2).
    Quadratic,
};

const char* to_string(SigmaMethod m);

/// |<sigma_circ Pi_k>_w| from a fringe visibility measured with rotation `theta` in arm k.
/// The uncertainty propagates `visibility_stderr` and a rotation-angle uncertainty
/// `delta_sigma` by central differences.
/// Throws std::domain_error for theta == 0 or visibility_scale outside (0, 1], and
/// NoSolution when the scaled visibility exceeds one under the quadratic method.
Measurement estimate_sigma_weak(double visibility, double theta, double visibility_scale, double pi_weak,
                                SigmaMethod method, double visibility_stderr = 0.0, double delta_sigma = 0.0);

struct WeakValueReport {
    std::optional<Measurement> re_pi_1;
    std::optional<Measurement> re_pi_2;
    std::optional<Measurement> abs_sigma_1;
    std::optional<Measurement> abs_sigma_2;
    /// First-order |W| reported alongside whatever `method` produced.
    std::optional<Measurement> abs_sigma_1_first_order;
    std::optional<Measurement> abs_sigma_2_first_order;
    SigmaMethod method = SigmaMethod::Quadratic;
};

/// One rotation sweep: rotation `theta` applied in `arm`, nothing else.
struct RotationSweep {
    Arm arm = Arm::One;
    double theta = 0.0;
    std::vector<CountRecord> records;
};

/// The count data needed for a full set of weak values.
struct ExperimentDataset {
    std::vector<CountRecord> no_filter;
    std::vector<CountRecord> filter_arm1;
    std::vector<CountRecord> filter_arm2;
    std::vector<RotationSweep> rotations;
};

struct AnalysisOptions {
    double reflectance = fresnel_s_reflectance(1.5, brewster_angle(1.5));
    double visibility_scale = 1.0;
    SigmaMethod method = SigmaMethod::Quadratic;
    /// Polarization-setting uncertainty used for systematic errors (rad).
    double delta_sigma = 0.0;
    /// Residual visibility subtracted in quadrature from fitted visibilities. 0 disables.
    double residual_visibility_floor = 0.0;
};

/// Settings for simulating a complete dataset from one base configuration.
struct DatasetPlan {
    /// Grid, source normalization and polarization offsets. Its rotations and
    /// transmissions should be the ideal ones; each sweep overrides them.
    ExperimentConfig base;
    /// Transmission of the slide when it is inserted in one arm.
    double filter_transmission = 1.0 - fresnel_s_reflectance(1.5, brewster_angle(1.5));
    /// Rotation angles applied in each arm in turn (rad).
    std::vector<double> rotation_angles;
};

/// Simulates the no-filter, filter-arm-1 and filter-arm-2 sweeps followed by one rotation
/// sweep per (arm, angle). Sweep k is seeded with derive_seed(seed, k), so each draws its
/// own angle offsets.
ExperimentDataset simulate_dataset(const DatasetPlan& plan, const SourceModel& src, const JitterModel& jitter,
                                   std::uint64_t seed);

/// sqrt(max(V^2 - floor^2, 0)); identity when floor is 0.
double subtract_residual_visibility(double visibility, double floor);

/// Full estimator chain. Presence weak values come from the filter sweeps; circular
/// polarization weak values are the unweighted mean over all rotation sweeps of each arm,
/// using the measured Re<Pi_k>_w (or the ideal 0 / 1 when filter data are absent).
/// Statistical parts of the uncertainty are combined as independent, the rotation-angle
/// systematic as fully correlated across settings.
WeakValueReport analyze_dataset(const ExperimentDataset& data, const AnalysisOptions& options);

}  // namespace cheshire
