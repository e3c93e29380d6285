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

#include <optional>
#include <vector>

#include "cheshire/state.hpp"

namespace cheshire {

/// Density operator plus the probability that has left the interferometer modes.
struct OpenState {
    DensityMatrix rho;
    double lost = 0.0;
};

/// An optical element as a set of Kraus operators.
///
/// Operators are split into two groups. `kept` operators leave the photon in the
/// four interferometer modes; `loss` operators describe the photon being scattered
/// out of the beam. Together they satisfy sum K^dagger K <= 1. The pure-state fast
/// path follows the single kept operator and never renormalizes.
class Channel {
 public:
    Channel(std::vector<Matrix4> kept, std::vector<Matrix4> loss);

    static Channel identity();
    /// Throws std::invalid_argument if `u` is not unitary to 1e-12.
    static Channel unitary(const Matrix4& u);

    const std::vector<Matrix4>& kept_operators() const { return kept_; }
    const std::vector<Matrix4>& loss_operators() const { return loss_; }
    std::vector<Matrix4> kraus_operators() const;

    /// sum K^dagger K over all operators.
    Matrix4 completeness() const;
    bool is_unitary() const;

    /// Applies the surviving branch. Requires exactly one kept operator.
    PolPathState apply(const PolPathState& s) const;
    /// Applies every branch; loss branches accumulate into `lost`.
    OpenState apply(const OpenState& s) const;

 private:
    std::vector<Matrix4> kept_;
    std::vector<Matrix4> loss_;
};

/// Weak absorber in `arm`: surviving branch 1 - (1 - sqrt(T)) Pi_k, loss branch sqrt(1 - T) Pi_k.
/// Throws std::domain_error unless 0 <= T <= 1.
Channel absorber_channel(Arm arm, double transmission);

/// Rotates linear polarization in `arm` by `theta`: U = ((cos, -sin), (sin, cos)) in (H, V).
Channel rotation_channel(Arm arm, double theta);

/// Multiplies the amplitudes of `arm` by e^{i phi}.
Channel phase_channel(Arm arm, double phi);

/// 50:50 recombination with beam-splitter phases absorbed into the variable phase.
/// Output port one carries (|1> + |2>)/sqrt(2).
Channel beam_splitter_channel();

/// s-polarized power reflectance of an air-to-dielectric interface.
/// Throws std::domain_error when sin(theta_i)/n > 1 or n <= 0.
double fresnel_s_reflectance(double n, double theta_i);

/// p-polarized counterpart; vanishes at Brewster incidence.
double fresnel_p_reflectance(double n, double theta_i);

/// arctan(n). Throws std::domain_error for n <= 0.
double brewster_angle(double n);

/// Glass slide used as a polarization-selective absorber.
struct SlideGeometry {
    double refractive_index = 1.5;
    double incidence_angle = brewster_angle(1.5);
    /// Arm whose light is s-polarized at the slide; nullopt means no slide.
    std::optional<Arm> filtered_arm;
    /// Count both glass-air interfaces. Off by default: the quoted R = 0.148 is a
    /// single-interface figure.
    bool two_interfaces = false;

    /// Throws std::domain_error on n <= 1 or angle outside [0, pi/2).
    void validate() const;
};

/// Transmission of the s-polarized arm through the slide.
double slide_transmission(const SlideGeometry& geometry);

/// Absorber on the filtered arm with T = 1 - R_s, or identity if no arm is filtered.
Channel brewster_filter_channel(const SlideGeometry& geometry);

/// (|1> + |2>)|H>/sqrt(2): horizontal polarization at output port one.
PolPathState postselection_state();

struct Postselected {
    PolPathState state;
    double probability;
};

/// Projects onto horizontal polarization at output port one.
Postselected postselect_H_port1(const PolPathState& s);

}  // namespace cheshire
