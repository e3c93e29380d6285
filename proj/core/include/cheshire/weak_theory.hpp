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

#include <stdexcept>

#include "cheshire/state.hpp"

namespace cheshire {

/// Raised when pre- and postselected states are (nearly) orthogonal.
class DegeneratePostselection : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

/// Raised when the fringe visibility denominator vanishes.
class UndefinedVisibility : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

/// Documented validity windows of the perturbative predictors. Advisory only.
inline constexpr double kAbsorberExpansionMaxR = 0.2;
inline constexpr double kRotationExpansionMaxTheta = 0.5;

/// Normalized preselected and postselected states with a non-vanishing overlap.
class PrePostPair {
 public:
    /// Throws std::invalid_argument if either state is not normalized and
    /// DegeneratePostselection if |<post|pre>| <= 1e-9.
    PrePostPair(PolPathState pre, PolPathState post);

    const PolPathState& pre() const { return pre_; }
    const PolPathState& post() const { return post_; }
    Complex overlap() const { return overlap_; }

 private:
    PolPathState pre_;
    PolPathState post_;
    Complex overlap_;
};

/// <post|A|pre> / <post|pre>.
Complex weak_value(const Observable& obs, const PrePostPair& pair);

/// First-order relative drop in detection probability from an absorber of reflectance R:
/// R * Re<Pi_k>_w.
double predicted_absorber_shift(Complex pi_weak, double reflectance);

/// The unexpanded form 2 (1 - sqrt(T)) Re<Pi_k>_w, of which the R form is the weak limit.
double predicted_absorber_shift_sqrt(Complex pi_weak, double transmission);

/// Detection probability after a rotation by theta, to second order in theta:
/// base (1 + 2 theta Im W - theta^2 Re Pi + theta^2 |W|^2).
double predicted_rotation_probability(Complex sigma_weak, Complex pi_weak, double theta, double base);

/// Polarization offsets of the imperfect pre- (delta1) and postselection (delta2).
struct ImperfectionAngles {
    double delta1 = 0.0;
    double delta2 = 0.0;

    /// Throws std::domain_error unless |delta1|, |delta2| < pi/8.
    void validate() const;
    double total() const { return delta1 + delta2; }
};

struct GeneralizedWeakValues {
    Complex pi1;
    Complex pi2;
    /// delta e^{-i phi}, valid for small offsets.
    Complex pi1_small_angle;
};

/// Presence weak values for the imperfect states:
/// <Pi_1>_w = [1 + e^{i phi} cos(delta2) / sin(delta1 + delta2)]^{-1}, <Pi_2>_w = 1 - <Pi_1>_w.
GeneralizedWeakValues generalized_weak_values(const ImperfectionAngles& imp, double phi);

/// Transmissions and rotation angles of the two arms.
struct ArmSettings {
    double t1 = 1.0;
    double t2 = 1.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

/// Closed-form P_H = (1/4)[T1 sin^2 theta1 + T2 cos^2 theta2 - 2 sqrt(T1 T2) cos theta2 sin theta1 cos phi].
double exact_detection_probability(const ArmSettings& s, double phi);

/// Phase-averaged P_H (the constant term of the fringe).
double exact_mean_probability(const ArmSettings& s);

/// |2 sqrt(T1 T2) cos theta2 sin theta1| / (T1 sin^2 theta1 + T2 cos^2 theta2).
/// Throws UndefinedVisibility when the denominator is zero.
double exact_visibility(const ArmSettings& s);

}  // namespace cheshire
