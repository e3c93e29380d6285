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

#include <complex>

#include <Eigen/Dense>

namespace cheshire {

using Complex = std::complex<double>;
using Vector2 = Eigen::Vector2cd;
using Vector4 = Eigen::Vector4cd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

/// Absolute tolerance for the closed-form 4-dimensional algebra.
inline constexpr double kExactTolerance = 1e-12;

/// Interferometer arm. Arm one carries V after preselection, arm two carries H.
enum class Arm : int { One = 0, Two = 1 };

enum class Pol : int { H = 0, V = 1 };

constexpr Arm other(Arm a) { return a == Arm::One ? Arm::Two : Arm::One; }

/// Index into the fixed basis (|1,H>, |1,V>, |2,H>, |2,V>). Path is the major index.
constexpr int basis_index(Arm a, Pol p) { return 2 * static_cast<int>(a) + static_cast<int>(p); }

/// Kronecker product path (x) polarization in the fixed basis ordering.
Matrix4 embed(const Matrix2& path, const Matrix2& pol);

/// Operator acting as `pol` on the polarization of `arm` and as identity on the other arm.
Matrix4 embed_on_arm(Arm arm, const Matrix2& pol);

bool is_hermitian(const Matrix4& m, double tol = kExactTolerance);
bool is_unitary(const Matrix4& m, double tol = kExactTolerance);

/// Pure path (x) polarization state. Amplitudes may be sub-normalized after lossy
/// evolution; the squared norm never exceeds one.
class PolPathState {
 public:
  PolPathState() : amps_(Vector4::Zero()) {}
  /// Throws std::invalid_argument if the squared norm exceeds 1 + 1e-12.
  explicit PolPathState(const Vector4& amplitudes);

  static PolPathState basis(Arm arm, Pol pol);
  /// Amplitudes of arm one and arm two given as (H, V) polarization factors.
  static PolPathState from_arms(const Vector2& arm1, const Vector2& arm2);

  const Vector4& amplitudes() const { return amps_; }
  Complex amplitude(Arm arm, Pol pol) const { return amps_[basis_index(arm, pol)]; }
  Vector2 arm(Arm a) const { return amps_.segment<2>(2 * static_cast<int>(a)); }
  double norm_squared() const { return amps_.squaredNorm(); }

 private:
  Vector4 amps_;
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const PolPathState& a, const PolPathState& b);

/// m * s with no renormalization.
PolPathState apply_matrix(const Matrix4& m, const PolPathState& s);

/// Hermitian operator on the 4-dimensional space.
class Observable {
 public:
  /// Throws std::invalid_argument if `m` is not Hermitian to 1e-12.
  explicit Observable(const Matrix4& m);

  static Observable identity();
  /// Projector Pi_k onto arm k.
  static Observable path_projector(Arm arm);
  /// sigma_circ acting on the polarization of both arms.
  static Observable sigma_circ();
  /// sigma_circ Pi_k: circular polarization restricted to arm k.
  static Observable sigma_circ_projector(Arm arm);

  const Matrix4& matrix() const { return m_; }

 private:
  Matrix4 m_;
};

/// The 2x2 circular-polarization observable ((0, -i), (i, 0)) in the (H, V) basis.
Matrix2 sigma_circ_matrix();

/// Circular polarization eigenvectors |+-> = (|H> +- i|V>)/sqrt(2).
struct CircularBasis {
  Vector2 plus;
  Vector2 minus;
};

CircularBasis sigma_circ_eigenbasis();

/// Density operator used by the brute-force oracle. Trace may drop below one
/// when photons are lost from the modes.
class DensityMatrix {
 public:
  /// Validates hermiticity (1e-12), eigenvalues >= -1e-10 and trace in [0, 1 + 1e-12].
  explicit DensityMatrix(const Matrix4& rho);

  static DensityMatrix from_pure(const PolPathState& s);

  const Matrix4& matrix() const { return rho_; }
  double trace() const { return rho_.trace().real(); }
  /// Tr(rho^2).
  double purity() const;
  /// <phi|rho|phi>, i.e. Tr(|phi><phi| rho).
  double overlap_probability(const PolPathState& phi) const;

 private:
  Matrix4 rho_;
};

}  // namespace cheshire
