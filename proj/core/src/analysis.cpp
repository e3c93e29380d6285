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

#include "cheshire/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/QR>

#include "cheshire/weak_theory.hpp"

namespace cheshire {

namespace {

constexpr std::size_t kMinFitPoints = 5;

struct SigmaParts {
    double value = 0.0;
    double stat = 0.0;
    double sys = 0.0;
};

double invert_sigma(double scaled_visibility, double theta, double pi_weak, SigmaMethod method) {
    if (method == SigmaMethod::FirstOrder) {
        return scaled_visibility / (2.0 * std::abs(theta));
    }
    const double v = std::abs(scaled_visibility);
    if (v == 0.0) {
        return 0.0;
    }
    if (v > 1.0) {
        throw NoSolution("estimate_sigma_weak: scaled visibility " + std::to_string(v) +
                         " exceeds 1, quadratic has no real root");
    }
    const double s = std::abs(std::sin(theta));
    const double g = 1.0 - (1.0 - std::cos(theta)) * pi_weak;
    if (!(g > 0.0)) {
        throw NoSolution("estimate_sigma_weak: rotation too large for Re<Pi>_w = " + std::to_string(pi_weak));
    }
    // Root of v s^2 x^2 - 2 g s x + v g^2 = 0 continuous with the first-order value as v -> 0,
    // rationalized to avoid cancellation at small v.
    return g * v / (s * (1.0 + std::sqrt(1.0 - v * v)));
}

SigmaParts sigma_parts(double visibility, double theta, double visibility_scale, double pi_weak, SigmaMethod method,
                       double visibility_stderr, double delta_sigma) {
    if (theta == 0.0) {
        throw std::domain_error("estimate_sigma_weak: rotation angle must be nonzero");
    }
    if (!(visibility_scale > 0.0 && visibility_scale <= 1.0)) {
        throw std::domain_error("estimate_sigma_weak: visibility scale must lie in (0, 1]");
    }
    const auto f = [&](double vis, double th) { return invert_sigma(vis / visibility_scale, th, pi_weak, method); };

    SigmaParts out;
    out.value = f(visibility, theta);
    if (visibility_stderr > 0.0) {
        // Central difference, falling back to one-sided near the V' = 1 boundary.
        const double h = 1e-6;
        double slope;
        try {
            slope = (f(visibility + h, theta) - f(std::max(visibility - h, 0.0), theta)) /
                    (visibility + h - std::max(visibility - h, 0.0));
        } catch (const NoSolution&) {
            slope = (out.value - f(visibility - h, theta)) / h;
        }
        out.stat = std::abs(slope) * visibility_stderr;
    }
    if (delta_sigma > 0.0) {
        out.sys = 0.5 * std::abs(f(visibility, theta + delta_sigma) - f(visibility, theta - delta_sigma));
    }
    return out;
}

double canonical_phase(double phi) {
    constexpr double pi = std::numbers::pi;
    phi = std::remainder(phi, 2.0 * pi);
    return phi <= -pi ? phi + 2.0 * pi : phi;
}

}  // namespace

double FringeFit::evaluate(double phi) const {
    return mean_level * (1.0 - visibility * std::cos(phi - phase_offset));
}

FringeFit fit_fringe(std::span<const double> phases, std::span<const double> values) {
    if (phases.size() != values.size()) {
        throw FitError("fit_fringe: phase and value counts differ");
    }
    const auto n = static_cast<Eigen::Index>(phases.size());
    if (phases.size() < kMinFitPoints) {
        throw FitError("fit_fringe: need at least 5 points, got " + std::to_string(phases.size()));
    }
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(phases[i]);
        design(i, 2) = std::sin(phases[i]);
        y[i] = values[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) {
        throw FitError("fit_fringe: phases do not determine a sinusoid (degenerate grid)");
    }
    const Eigen::Vector3d c = qr.solve(y);
    const double a = c[0];
    if (!(a > 0.0)) {
        throw FitError("fit_fringe: non-positive mean level");
    }
    const double amp = std::hypot(c[1], c[2]);

    FringeFit fit;
    fit.mean_level = a;
    fit.visibility = std::min(amp / a, 1.0);
    fit.phase_offset = amp > 0.0 ? canonical_phase(std::atan2(-c[2], -c[1])) : 0.0;

    const Eigen::VectorXd resid = y - design * c;
    const double rss = resid.squaredNorm();
    fit.residual_rms = std::sqrt(rss / static_cast<double>(n));

    const double s2 = rss / static_cast<double>(n - 3);
    const Eigen::Matrix3d cov = s2 * (design.transpose() * design).inverse();
    fit.stderr_.mean_level = std::sqrt(cov(0, 0));
    if (amp > 0.0) {
        const Eigen::Vector3d dv(-amp / (a * a), c[1] / (amp * a), c[2] / (amp * a));
        const Eigen::Vector3d dphi(0.0, -c[2] / (amp * amp), c[1] / (amp * amp));
        fit.stderr_.visibility = std::sqrt(std::max(dv.dot(cov * dv), 0.0));
        fit.stderr_.phase_offset = std::sqrt(std::max(dphi.dot(cov * dphi), 0.0));
    } else {
        fit.stderr_.visibility = std::sqrt(0.5 * (cov(1, 1) + cov(2, 2))) / a;
        fit.stderr_.phase_offset = std::numbers::pi;
    }
    return fit;
}

FringeFit fit_fringe(std::span<const CountRecord> records) {
    std::vector<double> phases;
    std::vector<double> counts;
    phases.reserve(records.size());
    counts.reserve(records.size());
    for (const CountRecord& r : records) {
        phases.push_back(r.phase);
        counts.push_back(static_cast<double>(r.counts));
    }
    return fit_fringe(phases, counts);
}

CountSummary summarize(std::span<const CountRecord> records) {
    CountSummary out;
    out.bins = records.size();
    if (records.empty()) {
        return out;
    }
    double sum = 0.0;
    for (const CountRecord& r : records) sum += static_cast<double>(r.counts);
    out.mean = sum / static_cast<double>(records.size());
    if (records.size() > 1) {
        double ss = 0.0;
        for (const CountRecord& r : records) {
            const double d = static_cast<double>(r.counts) - out.mean;
            ss += d * d;
        }
        const double var = ss / static_cast<double>(records.size() - 1);
        out.sdm = std::sqrt(var / static_cast<double>(records.size()));
    }
    return out;
}

DeltaUncertainty propagate_delta_uncertainty(double delta_sigma, double phi) {
    if (!(delta_sigma >= 0.0)) {
        throw std::domain_error("propagate_delta_uncertainty: delta_sigma must be non-negative");
    }
    const double bound = std::abs(generalized_weak_values({delta_sigma, 0.0}, phi).pi1_small_angle);
    return {bound, bound};
}

Measurement estimate_pi_weak(const CountSummary& no_filter, const CountSummary& filtered, double reflectance,
                             double delta_sigma) {
    if (!(reflectance > 0.0)) {
        throw std::domain_error("estimate_pi_weak: reflectance must be positive");
    }
    if (!(no_filter.mean > 0.0)) {
        throw std::domain_error("estimate_pi_weak: reference count mean must be positive");
    }
    const double n0 = no_filter.mean;
    const double nk = filtered.mean;
    const double value = (n0 - nk) / (n0 * reflectance);
    const double d_n0 = nk / (n0 * n0 * reflectance);
    const double d_nk = -1.0 / (n0 * reflectance);
    const double stat = std::hypot(d_n0 * no_filter.sdm, d_nk * filtered.sdm);
    const double sys = delta_sigma > 0.0 ? propagate_delta_uncertainty(delta_sigma).pi_weak : 0.0;
    return {value, std::hypot(stat, sys)};
}

Measurement estimate_pi_weak(double mean_no_filter, double mean_filtered, double reflectance) {
    return estimate_pi_weak(CountSummary{mean_no_filter, 0.0, 0}, CountSummary{mean_filtered, 0.0, 0}, reflectance);
}

const char* to_string(SigmaMethod m) {
    return m == SigmaMethod::FirstOrder ? "first_order" : "quadratic";
}

Measurement estimate_sigma_weak(double visibility, double theta, double visibility_scale, double pi_weak,
                                SigmaMethod method, double visibility_stderr, double delta_sigma) {
    const SigmaParts p =
        sigma_parts(visibility, theta, visibility_scale, pi_weak, method, visibility_stderr, delta_sigma);
    return {p.value, std::hypot(p.stat, p.sys)};
}

ExperimentDataset simulate_dataset(const DatasetPlan& plan, const SourceModel& src, const JitterModel& jitter,
                                   std::uint64_t seed) {
    ExperimentDataset data;
    std::uint64_t stream = 0;
    const auto run = [&](const ExperimentConfig& cfg) {
        return simulate_sweep(cfg, src, jitter, derive_seed(seed, stream++));
    };
    data.no_filter = run(plan.base);
    ExperimentConfig cfg = plan.base;
    cfg.t1 = plan.filter_transmission;
    data.filter_arm1 = run(cfg);
    cfg = plan.base;
    cfg.t2 = plan.filter_transmission;
    data.filter_arm2 = run(cfg);
    for (const Arm arm : {Arm::One, Arm::Two}) {
        for (double theta : plan.rotation_angles) {
            cfg = plan.base;
            (arm == Arm::One ? cfg.theta1 : cfg.theta2) = theta;
            data.rotations.push_back({arm, theta, run(cfg)});
        }
    }
    return data;
}

double subtract_residual_visibility(double visibility, double floor) {
    if (floor <= 0.0) {
        return visibility;
    }
    return std::sqrt(std::max(visibility * visibility - floor * floor, 0.0));
}

WeakValueReport analyze_dataset(const ExperimentDataset& data, const AnalysisOptions& options) {
    WeakValueReport report;
    report.method = options.method;

    if (!data.no_filter.empty()) {
        const CountSummary n0 = summarize(data.no_filter);
        if (!data.filter_arm1.empty()) {
            report.re_pi_1 = estimate_pi_weak(n0, summarize(data.filter_arm1), options.reflectance,
                                              options.delta_sigma);
        }
        if (!data.filter_arm2.empty()) {
            report.re_pi_2 = estimate_pi_weak(n0, summarize(data.filter_arm2), options.reflectance,
                                              options.delta_sigma);
        }
    }

    for (const Arm arm : {Arm::One, Arm::Two}) {
        const std::optional<Measurement>& measured_pi = arm == Arm::One ? report.re_pi_1 : report.re_pi_2;
        const double pi_weak = measured_pi ? measured_pi->value : (arm == Arm::One ? 0.0 : 1.0);

        std::vector<SigmaParts> chosen;
        std::vector<SigmaParts> first;
        for (const RotationSweep& rs : data.rotations) {
            if (rs.arm != arm) continue;
            const FringeFit fit = fit_fringe(rs.records);
            const double vis = subtract_residual_visibility(fit.visibility, options.residual_visibility_floor);
            chosen.push_back(sigma_parts(vis, rs.theta, options.visibility_scale, pi_weak, options.method,
                                         fit.stderr_.visibility, options.delta_sigma));
            first.push_back(sigma_parts(vis, rs.theta, options.visibility_scale, pi_weak, SigmaMethod::FirstOrder,
                                        fit.stderr_.visibility, options.delta_sigma));
        }
        if (chosen.empty()) continue;

        const auto average = [](const std::vector<SigmaParts>& parts) {
            const double n = static_cast<double>(parts.size());
            double value = 0.0, stat2 = 0.0, sys = 0.0;
            for (const SigmaParts& p : parts) {
                value += p.value;
                stat2 += p.stat * p.stat;
                sys += p.sys;
            }
            return Measurement{value / n, std::hypot(std::sqrt(stat2) / n, sys / n)};
        };
        (arm == Arm::One ? report.abs_sigma_1 : report.abs_sigma_2) = average(chosen);
        (arm == Arm::One ? report.abs_sigma_1_first_order : report.abs_sigma_2_first_order) = average(first);
    }
    return report;
}

}  // namespace cheshire
