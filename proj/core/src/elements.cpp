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

#include "cheshire/elements.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace cheshire {

namespace {

constexpr double kCompletenessTolerance = 1e-10;

Matrix4 arm_projector(Arm arm) { return Observable::path_projector(arm).matrix(); }

}  // namespace

Channel::Channel(std::vector<Matrix4> kept, std::vector<Matrix4> loss)
    : kept_(std::move(kept)), loss_(std::move(loss)) {
    if (kept_.empty()) {
        throw std::invalid_argument("Channel: at least one kept Kraus operator is required");
    }
    const Matrix4 defect = Matrix4::Identity() - completeness();
    Eigen::SelfAdjointEigenSolver<Matrix4> eig(defect, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kCompletenessTolerance) {
        throw std::invalid_argument("Channel: Kraus operators are not trace non-increasing");
    }
}

Channel Channel::identity() { return Channel({Matrix4::Identity()}, {}); }

Channel Channel::unitary(const Matrix4& u) {
    if (!cheshire::is_unitary(u)) {
        throw std::invalid_argument("Channel::unitary: matrix is not unitary");
    }
    return Channel({u}, {});
}

std::vector<Matrix4> Channel::kraus_operators() const {
    std::vector<Matrix4> all = kept_;
    all.insert(all.end(), loss_.begin(), loss_.end());
    return all;
}

Matrix4 Channel::completeness() const {
    Matrix4 sum = Matrix4::Zero();
    for (const auto& k : kept_) sum += k.adjoint() * k;
    for (const auto& k : loss_) sum += k.adjoint() * k;
    return sum;
}

bool Channel::is_unitary() const {
    return kept_.size() == 1 && loss_.empty() && cheshire::is_unitary(kept_.front());
}

PolPathState Channel::apply(const PolPathState& s) const {
    if (kept_.size() != 1) {
        throw std::logic_error("Channel::apply: pure-state path needs exactly one kept operator");
    }
    return apply_matrix(kept_.front(), s);
}

OpenState Channel::apply(const OpenState& s) const {
    const Matrix4& rho = s.rho.matrix();
    Matrix4 next = Matrix4::Zero();
    for (const auto& k : kept_) next += k * rho * k.adjoint();
    double lost = s.lost;
    for (const auto& k : loss_) lost += (k * rho * k.adjoint()).trace().real();
    // Kraus sums are Hermitian only up to rounding.
    next = 0.5 * (next + next.adjoint()).eval();
    return {DensityMatrix(next), lost};
}

Channel absorber_channel(Arm arm, double transmission) {
    if (!(transmission >= 0.0 && transmission <= 1.0)) {
        throw std::domain_error("absorber_channel: transmission " + std::to_string(transmission) +
                                " outside [0, 1]");
    }
    const Matrix4 p = arm_projector(arm);
    const Matrix4 survive = Matrix4::Identity() - (1.0 - std::sqrt(transmission)) * p;
    if (transmission == 1.0) {
        return Channel({survive}, {});
    }
    return Channel({survive}, {std::sqrt(1.0 - transmission) * p});
}

Channel rotation_channel(Arm arm, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Matrix2 u;
    u << c, -s, s, c;
    return Channel::unitary(embed_on_arm(arm, u));
}

Channel phase_channel(Arm arm, double phi) {
    const Matrix2 u = std::polar(1.0, phi) * Matrix2::Identity();
    return Channel::unitary(embed_on_arm(arm, u));
}

Channel beam_splitter_channel() {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix2 h;
    h << r, r, r, -r;
    return Channel::unitary(embed(h, Matrix2::Identity()));
}

double fresnel_s_reflectance(double n, double theta_i) {
    if (!(n > 0.0)) {
        throw std::domain_error("fresnel_s_reflectance: refractive index must be positive");
    }
    const double sin_t = std::sin(theta_i) / n;
    if (std::abs(sin_t) > 1.0) {
        throw std::domain_error("fresnel_s_reflectance: total internal reflection");
    }
    const double cos_i = std::cos(theta_i);
    const double cos_t = std::sqrt(1.0 - sin_t * sin_t);
    const double r = (cos_i - n * cos_t) / (cos_i + n * cos_t);
    return r * r;
}

double fresnel_p_reflectance(double n, double theta_i) {
    if (!(n > 0.0)) {
        throw std::domain_error("fresnel_p_reflectance: refractive index must be positive");
    }
    const double sin_t = std::sin(theta_i) / n;
    if (std::abs(sin_t) > 1.0) {
        throw std::domain_error("fresnel_p_reflectance: total internal reflection");
    }
    const double cos_i = std::cos(theta_i);
    const double cos_t = std::sqrt(1.0 - sin_t * sin_t);
    const double r = (n * cos_i - cos_t) / (n * cos_i + cos_t);
    return r * r;
}

double brewster_angle(double n) {
    if (!(n > 0.0)) {
        throw std::domain_error("brewster_angle: refractive index must be positive");
    }
    return std::atan(n);
}

void SlideGeometry::validate() const {
    if (!(refractive_index > 1.0)) {
        throw std::domain_error("SlideGeometry: refractive index must exceed 1");
    }
    if (!(incidence_angle >= 0.0 && incidence_angle < std::numbers::pi / 2)) {
        throw std::domain_error("SlideGeometry: incidence angle must lie in [0, pi/2)");
    }
}

double slide_transmission(const SlideGeometry& geometry) {
    geometry.validate();
    // Exit face sees the refracted angle; Stokes relations give the same R_s there.
    const double t = 1.0 - fresnel_s_reflectance(geometry.refractive_index, geometry.incidence_angle);
    return geometry.two_interfaces ? t * t : t;
}

Channel brewster_filter_channel(const SlideGeometry& geometry) {
    if (!geometry.filtered_arm) {
        geometry.validate();
        return Channel::identity();
    }
    return absorber_channel(*geometry.filtered_arm, slide_transmission(geometry));
}

PolPathState postselection_state() {
    const double r = 1.0 / std::sqrt(2.0);
    return PolPathState::from_arms(Vector2(r, 0.0), Vector2(r, 0.0));
}

Postselected postselect_H_port1(const PolPathState& s) {
    const PolPathState phi = postselection_state();
    const Complex overlap = inner_product(phi, s);
    return {PolPathState(overlap * phi.amplitudes()), std::norm(overlap)};
}

}  // namespace cheshire
