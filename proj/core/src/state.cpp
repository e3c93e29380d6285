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

#include "cheshire/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cheshire {

namespace {

constexpr double kPsdTolerance = 1e-10;

Matrix2 arm_projector_2(Arm arm) {
    Matrix2 p = Matrix2::Zero();
    p(static_cast<int>(arm), static_cast<int>(arm)) = 1.0;
    return p;
}

}  // namespace

Matrix4 embed(const Matrix2& path, const Matrix2& pol) {
    Matrix4 out;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            out.block<2, 2>(2 * a, 2 * b) = path(a, b) * pol;
        }
    }
    return out;
}

Matrix4 embed_on_arm(Arm arm, const Matrix2& pol) {
    return embed(arm_projector_2(arm), pol) + embed(arm_projector_2(other(arm)), Matrix2::Identity());
}

bool is_hermitian(const Matrix4& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix4& m, double tol) {
    return (m.adjoint() * m - Matrix4::Identity()).cwiseAbs().maxCoeff() <= tol;
}

PolPathState::PolPathState(const Vector4& amplitudes) : amps_(amplitudes) {
    const double n2 = amps_.squaredNorm();
    if (!std::isfinite(n2) || n2 > 1.0 + kExactTolerance) {
        throw std::invalid_argument("PolPathState: squared norm " + std::to_string(n2) + " exceeds 1");
    }
}

PolPathState PolPathState::basis(Arm arm, Pol pol) {
    Vector4 v = Vector4::Zero();
    v[basis_index(arm, pol)] = 1.0;
    return PolPathState(v);
}

PolPathState PolPathState::from_arms(const Vector2& arm1, const Vector2& arm2) {
    Vector4 v;
    v << arm1, arm2;
    return PolPathState(v);
}

Complex inner_product(const PolPathState& a, const PolPathState& b) {
    return a.amplitudes().dot(b.amplitudes());
}

PolPathState apply_matrix(const Matrix4& m, const PolPathState& s) {
    return PolPathState(m * s.amplitudes());
}

Observable::Observable(const Matrix4& m) : m_(m) {
    if (!is_hermitian(m_)) {
        throw std::invalid_argument("Observable: matrix is not Hermitian");
    }
}

Observable Observable::identity() { return Observable(Matrix4::Identity()); }

Observable Observable::path_projector(Arm arm) {
    return Observable(embed(arm_projector_2(arm), Matrix2::Identity()));
}

Observable Observable::sigma_circ() {
    return Observable(embed(Matrix2::Identity(), sigma_circ_matrix()));
}

Observable Observable::sigma_circ_projector(Arm arm) {
    return Observable(embed(arm_projector_2(arm), sigma_circ_matrix()));
}

Matrix2 sigma_circ_matrix() {
    const Complex i(0.0, 1.0);
    Matrix2 s;
    s << 0.0, -i, i, 0.0;
    return s;
}

CircularBasis sigma_circ_eigenbasis() {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    return {Vector2(r, i * r), Vector2(r, -i * r)};
}

DensityMatrix::DensityMatrix(const Matrix4& rho) : rho_(rho) {
    if (!is_hermitian(rho_)) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    const double tr = rho_.trace().real();
    if (tr < -kExactTolerance || tr > 1.0 + kExactTolerance) {
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " outside [0, 1]");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4> eig(rho_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::from_pure(const PolPathState& s) {
    return DensityMatrix(s.amplitudes() * s.amplitudes().adjoint());
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::overlap_probability(const PolPathState& phi) const {
    return (phi.amplitudes().adjoint() * rho_ * phi.amplitudes())(0, 0).real();
}

}  // namespace cheshire
