// Copyright 2026 The polcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact 2x2 complex algebra for a single polarization qubit.
// Basis convention: |0> = H (horizontal), |1> = V (vertical).

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string_view>

namespace polcomm {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr Complex kI{0.0, 1.0};

enum class Axis { x, y, z };

std::string_view to_string(Axis axis);

/// A 2x2 complex operator with finite entries. Value type.
class Operator2 {
 public:
  Operator2() : m_(Matrix2::Zero()) {}
  explicit Operator2(const Matrix2& m);
  Operator2(Complex a00, Complex a01, Complex a10, Complex a11);

  static Operator2 identity() { return Operator2(Matrix2::Identity()); }
  static Operator2 zero() { return Operator2(); }

  const Matrix2& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Operator2 adjoint() const { return Operator2(m_.adjoint()); }
  Complex trace() const { return m_.trace(); }
  Complex determinant() const { return m_.determinant(); }

  /// Largest entrywise modulus of (*this - other).
  double max_abs_diff(const Operator2& other) const;
  bool approx_equal(const Operator2& other, double tol = kDefaultTol) const {
    return max_abs_diff(other) <= tol;
  }

  bool is_unitary(double tol = kDefaultTol) const;
  bool is_hermitian(double tol = kDefaultTol) const;
  bool is_zero(double tol = kDefaultTol) const;

  friend Operator2 operator+(const Operator2& a, const Operator2& b) { return Operator2(a.m_ + b.m_); }
  friend Operator2 operator-(const Operator2& a, const Operator2& b) { return Operator2(a.m_ - b.m_); }
  friend Operator2 operator*(const Operator2& a, const Operator2& b) { return Operator2(a.m_ * b.m_); }
  friend Operator2 operator*(Complex s, const Operator2& a) { return Operator2(s * a.m_); }
  friend Operator2 operator*(const Operator2& a, Complex s) { return Operator2(s * a.m_); }
  friend Operator2 operator-(const Operator2& a) { return Operator2(-a.m_); }

 private:
  Matrix2 m_;
};

/// Normalized polarization Jones vector alpha|H> + beta|V>.
class PureState {
 public:
  /// Throws std::invalid_argument unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
  PureState(Complex alpha, Complex beta);

  /// Rescales (alpha, beta) to unit norm; throws std::invalid_argument on a null vector.
  static PureState normalized(Complex alpha, Complex beta);
  static PureState normalized(const Vector2& v) { return normalized(v(0), v(1)); }

  static PureState H();
  static PureState V();
  static PureState D();  // (H + V)/sqrt2
  static PureState A();  // (H - V)/sqrt2
  static PureState R();  // (H - iV)/sqrt2
  static PureState L();  // (H + iV)/sqrt2

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  Vector2 vector() const { return Vector2(alpha_, beta_); }

  /// |<this|other>|^2 >= 1 - tol, i.e. equal up to a global phase.
  bool equal_up_to_phase(const PureState& other, double tol = kDefaultTol) const;

 private:
  Complex alpha_;
  Complex beta_;
};

/// Hermitian, positive semidefinite, unit-trace 2x2 matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity and unit trace within 1e-9 and eigenvalues >= -1e-9.
  /// Throws std::invalid_argument otherwise.
  explicit DensityMatrix(const Matrix2& m);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed();
  /// Divides a nonzero PSD matrix by its trace, symmetrizing away round-off.
  static DensityMatrix from_unnormalized(const Matrix2& m);

  const Matrix2& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  /// Ascending.
  std::array<double, 2> eigenvalues() const;
  double purity() const;
  /// Bloch vector (<sx>, <sy>, <sz>).
  std::array<double, 3> bloch() const;

 private:
  Matrix2 m_;
};

/// The exact Pauli matrix for the axis.
Operator2 pauli(Axis axis);

/// Process-tomography operator basis in fixed order (I, sx, sy, sz).
const std::array<Operator2, 4>& pauli_basis();

/// Levi-Civita symbol over axis indices (x=0, y=1, z=2).
int levi_civita(int j, int k, int l);

Operator2 commutator(const Operator2& a, const Operator2& b);
Operator2 anticommutator(const Operator2& a, const Operator2& b);

/// Matrix-vector product; the result is not renormalized.
Vector2 apply(const Operator2& m, const PureState& psi);

/// Eigenvalues of a Hermitian 2x2 matrix in ascending order (closed form).
std::array<double, 2> hermitian_eigenvalues(const Matrix2& m);

struct StateDistances {
  double fidelity;        // Uhlmann, squared convention: (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
  double trace_distance;  // 0.5 * ||rho - sigma||_1
};

StateDistances state_distances(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace polcomm
