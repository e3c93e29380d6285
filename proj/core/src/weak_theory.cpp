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

#include "cheshire/weak_theory.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace cheshire {

namespace {

constexpr double kNormalizationTolerance = 1e-9;
constexpr double kMinOverlap = 1e-9;

void check_transmissions(const ArmSettings& s) {
    if (!(s.t1 >= 0.0 && s.t1 <= 1.0) || !(s.t2 >= 0.0 && s.t2 <= 1.0)) {
        throw std::domain_error("transmissions must lie in [0, 1]");
    }
}

}  // namespace

PrePostPair::PrePostPair(PolPathState pre, PolPathState post)
    : pre_(std::move(pre)), post_(std::move(post)), overlap_(inner_product(post_, pre_)) {
    if (std::abs(pre_.norm_squared() - 1.0) > kNormalizationTolerance ||
        std::abs(post_.norm_squared() - 1.0) > kNormalizationTolerance) {
        throw std::invalid_argument("PrePostPair: states must be normalized");
    }
    if (std::abs(overlap_) <= kMinOverlap) {
        throw DegeneratePostselection("PrePostPair: pre- and postselected states are orthogonal");
    }
}

Complex weak_value(const Observable& obs, const PrePostPair& pair) {
    const Complex numerator = pair.post().amplitudes().dot(obs.matrix() * pair.pre().amplitudes());
    return numerator / pair.overlap();
}

double predicted_absorber_shift(Complex pi_weak, double reflectance) {
    return reflectance * pi_weak.real();
}

double predicted_absorber_shift_sqrt(Complex pi_weak, double transmission) {
    return 2.0 * (1.0 - std::sqrt(transmission)) * pi_weak.real();
}

double predicted_rotation_probability(Complex sigma_weak, Complex pi_weak, double theta, double base) {
    const double t2 = theta * theta;
    return base * (1.0 + 2.0 * theta * sigma_weak.imag() - t2 * pi_weak.real() + t2 * std::norm(sigma_weak));
}

void ImperfectionAngles::validate() const {
    constexpr double limit = std::numbers::pi / 8;
    if (!(std::abs(delta1) < limit && std::abs(delta2) < limit)) {
        throw std::domain_error("ImperfectionAngles: offsets must satisfy |delta| < pi/8");
    }
}

GeneralizedWeakValues generalized_weak_values(const ImperfectionAngles& imp, double phi) {
    imp.validate();
    // Written as sin(d) / (sin(d) + e^{i phi} cos(d2)) so that d = 0 gives exactly zero.
    const double sd = std::sin(imp.total());
    const Complex pi1 = sd / (sd + std::polar(std::cos(imp.delta2), phi));
    return {pi1, 1.0 - pi1, imp.total() * std::polar(1.0, -phi)};
}

double exact_detection_probability(const ArmSettings& s, double phi) {
    check_transmissions(s);
    const double s1 = std::sin(s.theta1);
    const double c2 = std::cos(s.theta2);
    return 0.25 * (s.t1 * s1 * s1 + s.t2 * c2 * c2 - 2.0 * std::sqrt(s.t1 * s.t2) * c2 * s1 * std::cos(phi));
}

double exact_mean_probability(const ArmSettings& s) {
    check_transmissions(s);
    const double s1 = std::sin(s.theta1);
    const double c2 = std::cos(s.theta2);
    return 0.25 * (s.t1 * s1 * s1 + s.t2 * c2 * c2);
}

double exact_visibility(const ArmSettings& s) {
    check_transmissions(s);
    const double s1 = std::sin(s.theta1);
    const double c2 = std::cos(s.theta2);
    const double denom = s.t1 * s1 * s1 + s.t2 * c2 * c2;
    if (!(denom > 0.0)) {
        throw UndefinedVisibility("exact_visibility: no light reaches the postselected port");
    }
    return std::abs(2.0 * std::sqrt(s.t1 * s.t2) * c2 * s1) / denom;
}

}  // namespace cheshire
