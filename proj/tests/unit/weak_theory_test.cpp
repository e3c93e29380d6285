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

#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "cheshire/experiment.hpp"
#include "oracles.hpp"

using namespace cheshire;
using oracle::deg;

namespace {

PolPathState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector4 v;
    for (int i = 0; i < 4; ++i) v[i] = Complex(g(rng), g(rng));
    return PolPathState(v.normalized());
}

PrePostPair ideal_pair(double phi) {
    ExperimentConfig cfg;
    return PrePostPair(preselect(cfg, phi), postselector(cfg));
}

}  // namespace

TEST(weak_value, cheshire_values_at_zero_phase) {
    const auto pair = ideal_pair(0.0);
    EXPECT_NEAR(std::abs(weak_value(Observable::path_projector(Arm::One), pair)), 0.0, kExactTolerance);
    EXPECT_NEAR(std::abs(weak_value(Observable::path_projector(Arm::Two), pair) - 1.0), 0.0, kExactTolerance);
    EXPECT_NEAR(std::abs(weak_value(Observable::sigma_circ_projector(Arm::One), pair)), 1.0, kExactTolerance);
    EXPECT_NEAR(std::abs(weak_value(Observable::sigma_circ_projector(Arm::Two), pair)), 0.0, kExactTolerance);
}

TEST(weak_value, sigma_circ_arm_one_phase_dependence) {
    for (int i = 0; i < 64; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / 64.0;
        const Complex w = weak_value(Observable::sigma_circ_projector(Arm::One), ideal_pair(phi));
        EXPECT_NEAR(std::abs(w), 1.0, kExactTolerance);
        EXPECT_NEAR(w.imag(), -std::cos(phi), kExactTolerance);
    }
}

TEST(weak_value, pre_equal_post_gives_expectation_value) {
    std::mt19937_64 rng(31);
    const auto s = random_state(rng);
    const PrePostPair pair(s, s);
    const Observable p1 = Observable::path_projector(Arm::One);
    const Complex w = weak_value(p1, pair);
    EXPECT_NEAR(w.real(), s.arm(Arm::One).squaredNorm(), kExactTolerance);
    EXPECT_NEAR(w.imag(), 0.0, kExactTolerance);
}

TEST(weak_value, projector_completeness) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 200; ++i) {
        const PrePostPair pair(random_state(rng), random_state(rng));
        const Complex sum = weak_value(Observable::path_projector(Arm::One), pair) +
                            weak_value(Observable::path_projector(Arm::Two), pair);
        EXPECT_NEAR(std::abs(sum - 1.0), 0.0, 1e-10);
    }
}

TEST(pre_post_pair, rejects_orthogonal_and_unnormalized) {
    EXPECT_THROW(PrePostPair(PolPathState::basis(Arm::One, Pol::H), PolPathState::basis(Arm::One, Pol::V)),
                 DegeneratePostselection);
    EXPECT_THROW(PrePostPair(PolPathState(Vector4(0.5, 0.0, 0.0, 0.0)), PolPathState::basis(Arm::One, Pol::H)),
                 std::invalid_argument);
}

TEST(predictors, absorber_examples) {
    EXPECT_NEAR(predicted_absorber_shift(1.0, 0.148), 0.148, kExactTolerance);
    EXPECT_NEAR(predicted_absorber_shift(0.0, 0.148), 0.0, kExactTolerance);
    EXPECT_NEAR(predicted_absorber_shift_sqrt(1.0, 0.852), 2.0 * (1.0 - std::sqrt(0.852)), kExactTolerance);
}

TEST(predictors, absorber_expansion_bound) {
    // Relative drop at the postselected port with an arm-2 absorber, for several pairs.
    for (int i = 1; i <= 15; ++i) {
        const double r = 0.01 * i;
        const double t = 1.0 - r;
        for (double phi : {0.0, 0.7, 2.0}) {
            ExperimentConfig base;
            ExperimentConfig filtered = base;
            filtered.t2 = t;
            const double p0 = run_pipeline(base, phi);
            const double drop = (p0 - run_pipeline(filtered, phi)) / p0;
            const Complex pi2 = weak_value(Observable::path_projector(Arm::Two), ideal_pair(phi));
            const double bound = 2.0 * std::abs(1.0 - std::sqrt(t) - r / 2.0);
            EXPECT_LE(std::abs(drop - predicted_absorber_shift(pi2, r)), bound + 1e-15);
        }
    }
}

TEST(predictors, rotation_expansion_is_third_order) {
    for (Arm arm : {Arm::One, Arm::Two}) {
        for (int i = 1; i <= 10; ++i) {
            const double theta = 0.005 * i;
            for (double phi : {0.0, 0.4, 1.3, 3.0}) {
                const auto pair = ideal_pair(phi);
                const Complex sw = weak_value(Observable::sigma_circ_projector(arm), pair);
                const Complex pw = weak_value(Observable::path_projector(arm), pair);
                const double base = std::norm(pair.overlap());
                ArmSettings s;
                (arm == Arm::One ? s.theta1 : s.theta2) = theta;
                const double exact = exact_detection_probability(s, phi);
                EXPECT_LE(std::abs(predicted_rotation_probability(sw, pw, theta, base) - exact),
                          5.0 * theta * theta * theta * base);
            }
        }
    }
}

TEST(generalized_weak_values, zero_offset_is_ideal) {
    const auto g = generalized_weak_values({0.0, 0.0}, 0.3);
    EXPECT_EQ(g.pi1, Complex(0.0));
    EXPECT_NEAR(std::abs(g.pi2 - 1.0), 0.0, kExactTolerance);
    EXPECT_EQ(g.pi1_small_angle, Complex(0.0));
}

TEST(generalized_weak_values, examples) {
    // sin(2 deg) / (sin(2 deg) + cos(1 deg)) = 0.0337276...
    const auto g = generalized_weak_values({deg(1.0), deg(1.0)}, 0.0);
    EXPECT_NEAR(g.pi1.real(), 0.0337276, 1e-6);
    EXPECT_NEAR(g.pi1.imag(), 0.0, kExactTolerance);
    EXPECT_NEAR(std::abs(g.pi1_small_angle), deg(2.0), kExactTolerance);
    EXPECT_NEAR(std::abs(g.pi1 + g.pi2 - 1.0), 0.0, kExactTolerance);
}

TEST(generalized_weak_values, matches_weak_value_of_imperfect_pair) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> d(-deg(20.0), deg(20.0));
    std::uniform_real_distribution<double> p(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 100; ++i) {
        ExperimentConfig cfg;
        cfg.delta1 = d(rng);
        cfg.delta2 = d(rng);
        const double phi = p(rng);
        const PrePostPair pair(preselect(cfg, phi), postselector(cfg));
        const auto g = generalized_weak_values({cfg.delta1, cfg.delta2}, phi);
        EXPECT_NEAR(std::abs(weak_value(Observable::path_projector(Arm::One), pair) - g.pi1), 0.0, 1e-10);
    }
}

TEST(generalized_weak_values, rejects_large_offsets) {
    EXPECT_THROW(generalized_weak_values({deg(23.0), 0.0}, 0.0), std::domain_error);
}

TEST(exact_formulae, examples) {
    ArmSettings s;
    EXPECT_NEAR(exact_detection_probability(s, 1.234), 0.25, kExactTolerance);
    EXPECT_NEAR(exact_visibility(s), 0.0, kExactTolerance);
    s.theta1 = deg(10.0);
    EXPECT_NEAR(exact_detection_probability(s, 0.0), 0.1707143, 1e-7);
    EXPECT_NEAR(exact_detection_probability(s, std::numbers::pi / 2), 0.25 * (1.0 + std::pow(std::sin(deg(10.0)), 2)), 1e-12);
    EXPECT_NEAR(exact_visibility(s), 0.3371306231658866, 1e-12);
    s.theta1 = deg(20.0);
    EXPECT_NEAR(exact_visibility(s), 0.6124027709901022, 1e-12);
    s.t2 = 0.852;
    EXPECT_NEAR(exact_visibility(s), 0.6516098793194466, 1e-12);
    s.theta1 = deg(10.0);
    EXPECT_NEAR(exact_visibility(s), 0.3633923397064567, 1e-12);
}

TEST(exact_formulae, undefined_visibility) {
    ArmSettings s;
    s.t2 = 0.0;
    EXPECT_THROW(exact_visibility(s), UndefinedVisibility);
    s.t2 = 1.2;
    EXPECT_THROW(exact_detection_probability(s, 0.0), std::domain_error);
}

TEST(exact_formulae, agree_with_hand_written_amplitudes) {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> p(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 500; ++i) {
        const auto k = oracle::random_knobs(rng);
        const double phi = p(rng);
        const ArmSettings s{k.t1, k.t2, k.theta1, k.theta2};
        EXPECT_NEAR(exact_detection_probability(s, phi), oracle::detection_probability(k, phi), 1e-12);
    }
}

TEST(exact_formulae, visibility_matches_dense_contrast) {
    std::mt19937_64 rng(35);
    for (int i = 0; i < 20; ++i) {
        const auto k = oracle::random_knobs(rng);
        const ArmSettings s{k.t1, k.t2, k.theta1, k.theta2};
        if (exact_mean_probability(s) < 1e-3) continue;
        // Grid hits phi = 0 and pi exactly, so the sampled extrema are exact.
        const double c = oracle::dense_contrast([&](double phi) { return oracle::detection_probability(k, phi); }, 2000);
        EXPECT_NEAR(exact_visibility(s), c, 1e-9);
    }
}
