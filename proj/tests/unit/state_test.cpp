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

#include <random>

#include "gtest/gtest.h"

#include "cheshire/experiment.hpp"
#include "oracles.hpp"

using namespace cheshire;

namespace {

PolPathState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector4 v;
    for (int i = 0; i < 4; ++i) v[i] = Complex(g(rng), g(rng));
    return PolPathState(v.normalized());
}

Matrix4 random_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Matrix4> qr(m);
    return qr.householderQ();
}

}  // namespace

TEST(state, basis_ordering_is_path_major) {
    EXPECT_EQ(basis_index(Arm::One, Pol::H), 0);
    EXPECT_EQ(basis_index(Arm::One, Pol::V), 1);
    EXPECT_EQ(basis_index(Arm::Two, Pol::H), 2);
    EXPECT_EQ(basis_index(Arm::Two, Pol::V), 3);
    auto s = PolPathState::basis(Arm::Two, Pol::V);
    EXPECT_EQ(s.amplitudes()[3], Complex(1.0));
}

TEST(state, rejects_super_normalized_amplitudes) {
    EXPECT_THROW(PolPathState(Vector4(1.0, 1.0, 0.0, 0.0)), std::invalid_argument);
    EXPECT_NO_THROW(PolPathState(Vector4(0.5, 0.0, 0.0, 0.0)));
}

TEST(state, inner_product_examples) {
    std::mt19937_64 rng(11);
    auto psi = random_state(rng);
    EXPECT_NEAR(std::abs(inner_product(psi, psi) - 1.0), 0.0, kExactTolerance);

    EXPECT_EQ(inner_product(PolPathState::basis(Arm::One, Pol::H), PolPathState::basis(Arm::Two, Pol::V)),
              Complex(0.0));

    // <phi|psi> for the ideal pair at phase 0: (1/2)(<1H| + <2H|)(|1V> + |2H>) = 1/2.
    ExperimentConfig cfg;
    const Complex overlap = inner_product(postselector(cfg), preselect(cfg, 0.0));
    EXPECT_NEAR(overlap.real(), 0.5, kExactTolerance);
    EXPECT_NEAR(overlap.imag(), 0.0, kExactTolerance);
    EXPECT_NEAR(std::norm(overlap), 0.25, kExactTolerance);
}

TEST(state, inner_product_conjugates_first_argument) {
    const Complex i(0.0, 1.0);
    auto a = PolPathState(Vector4(i, 0.0, 0.0, 0.0));
    auto b = PolPathState::basis(Arm::One, Pol::H);
    EXPECT_EQ(inner_product(a, b), -i);
    EXPECT_EQ(inner_product(b, a), i);
}

TEST(state, apply_matrix_examples) {
    std::mt19937_64 rng(12);
    auto s = random_state(rng);
    EXPECT_TRUE(apply_matrix(Matrix4::Identity(), s).amplitudes().isApprox(s.amplitudes()));

    const double r = 1.0 / std::sqrt(2.0);
    auto mixed = PolPathState::from_arms(Vector2(0.0, r), Vector2(r, 0.0));
    auto projected = apply_matrix(Observable::path_projector(Arm::One).matrix(), mixed);
    EXPECT_NEAR((projected.amplitudes() - Vector4(0.0, r, 0.0, 0.0)).norm(), 0.0, kExactTolerance);

    // sigma_circ (1, 0) = (0, i) in each arm.
    const Complex i(0.0, 1.0);
    for (Arm arm : {Arm::One, Arm::Two}) {
        auto h = PolPathState::basis(arm, Pol::H);
        auto out = apply_matrix(Observable::sigma_circ().matrix(), h);
        EXPECT_NEAR(std::abs(out.amplitude(arm, Pol::V) - i), 0.0, kExactTolerance);
        EXPECT_NEAR(std::abs(out.amplitude(arm, Pol::H)), 0.0, kExactTolerance);
    }
}

TEST(state, sigma_circ_eigenbasis) {
    const auto basis = sigma_circ_eigenbasis();
    const Matrix2 s = sigma_circ_matrix();
    EXPECT_NEAR((s * basis.plus - basis.plus).norm(), 0.0, kExactTolerance);
    EXPECT_NEAR((s * basis.minus + basis.minus).norm(), 0.0, kExactTolerance);
    EXPECT_NEAR(std::abs(basis.plus.dot(basis.minus)), 0.0, kExactTolerance);
    EXPECT_NEAR(basis.plus.norm(), 1.0, kExactTolerance);
}

TEST(state, observables_are_hermitian_and_rejects_others) {
    for (Arm arm : {Arm::One, Arm::Two}) {
        EXPECT_TRUE(is_hermitian(Observable::path_projector(arm).matrix()));
        EXPECT_TRUE(is_hermitian(Observable::sigma_circ_projector(arm).matrix()));
    }
    Matrix4 bad = Matrix4::Zero();
    bad(0, 1) = 1.0;
    EXPECT_THROW(Observable{bad}, std::invalid_argument);
}

TEST(state, projector_algebra) {
    const Matrix4 p1 = Observable::path_projector(Arm::One).matrix();
    const Matrix4 p2 = Observable::path_projector(Arm::Two).matrix();
    EXPECT_NEAR((p1 + p2 - Matrix4::Identity()).cwiseAbs().maxCoeff(), 0.0, kExactTolerance);
    EXPECT_NEAR((p1 * p1 - p1).cwiseAbs().maxCoeff(), 0.0, kExactTolerance);
    EXPECT_NEAR((p2 * p2 - p2).cwiseAbs().maxCoeff(), 0.0, kExactTolerance);
    for (Arm arm : {Arm::One, Arm::Two}) {
        const Matrix4 sp = Observable::sigma_circ_projector(arm).matrix();
        const Matrix4 p = Observable::path_projector(arm).matrix();
        EXPECT_NEAR((sp * sp - p).cwiseAbs().maxCoeff(), 0.0, kExactTolerance);
        Eigen::SelfAdjointEigenSolver<Matrix4> eig(sp);
        // Eigenvalues 0, 0, -1, +1.
        EXPECT_NEAR(eig.eigenvalues()[0], -1.0, kExactTolerance);
        EXPECT_NEAR(eig.eigenvalues()[3], 1.0, kExactTolerance);
    }
}

TEST(state, unitaries_preserve_norm) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix4 u = random_unitary(rng);
        ASSERT_TRUE(is_unitary(u, 1e-12));
        auto s = random_state(rng);
        EXPECT_NEAR(apply_matrix(u, s).norm_squared(), s.norm_squared(), kExactTolerance);
    }
}

TEST(state, density_matrix_from_pure_state) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_state(rng);
        std::uniform_real_distribution<double> scale(0.1, 1.0);
        auto sub = PolPathState(std::sqrt(scale(rng)) * s.amplitudes());
        auto rho = DensityMatrix::from_pure(sub);
        EXPECT_NEAR(rho.trace(), sub.norm_squared(), kExactTolerance);
        // Pure: Tr(rho^2) = (Tr rho)^2.
        EXPECT_NEAR(rho.purity(), rho.trace() * rho.trace(), kExactTolerance);
        auto phi = random_state(rng);
        EXPECT_NEAR(rho.overlap_probability(phi), std::norm(inner_product(phi, sub)), kExactTolerance);
    }
}

TEST(state, density_matrix_validation) {
    Matrix4 neg = Matrix4::Zero();
    neg(0, 0) = 0.5;
    neg(1, 1) = -0.1;
    EXPECT_THROW(DensityMatrix{neg}, std::invalid_argument);
    EXPECT_THROW(DensityMatrix{2.0 * Matrix4::Identity()}, std::invalid_argument);
    EXPECT_NO_THROW(DensityMatrix{0.25 * Matrix4::Identity()});
}
