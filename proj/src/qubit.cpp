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

#include "polcomm/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polcomm {

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::x:
      return "x";
    case Axis::y:
      return "y";
    case Axis::z:
      return "z";
  }
  return "?";
}

Operator2::Operator2(const Matrix2& m) : m_(m) {
  if (!m_.allFinite()) {
    throw std::invalid_argument("Operator2: non-finite entry");
  }
}

Operator2::Operator2(Complex a00, Complex a01, Complex a10, Complex a11) {
  Matrix2 m;
  m << a00, a01, a10, a11;
  *this = Operator2(m);
}

double Operator2::max_abs_diff(const Operator2& other) const {
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

bool Operator2::is_unitary(double tol) const {
  return (m_.adjoint() * m_ - Matrix2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

bool Operator2::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool Operator2::is_zero(double tol) const { return m_.cwiseAbs().maxCoeff() <= tol; }

PureState::PureState(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("PureState: amplitudes are not normalized");
  }
}

PureState PureState::normalized(Complex alpha, Complex beta) {
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("PureState::normalized: null or non-finite vector");
  }
  return PureState(alpha / norm, beta / norm);
}

PureState PureState::H() { return PureState(1.0, 0.0); }
PureState PureState::V() { return PureState(0.0, 1.0); }
PureState PureState::D() { return normalized(1.0, 1.0); }
PureState PureState::A() { return normalized(1.0, -1.0); }
PureState PureState::R() { return normalized(1.0, -kI); }
PureState PureState::L() { return normalized(1.0, kI); }

bool PureState::equal_up_to_phase(const PureState& other, double tol) const {
  const Complex overlap = std::conj(alpha_) * other.alpha_ + std::conj(beta_) * other.beta_;
  return std::norm(overlap) >= 1.0 - tol;
}

std::array<double, 2> hermitian_eigenvalues(const Matrix2& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double half_trace = 0.5 * (a + d);
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
  return {half_trace - half_gap, half_trace + half_gap};
}

DensityMatrix::DensityMatrix(const Matrix2& m) : m_(m) {
  if (!m_.allFinite()) {
    throw std::invalid_argument("DensityMatrix: non-finite entry");
  }
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(m_.trace() - Complex(1.0)) > 1e-9) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
  if (hermitian_eigenvalues(m_)[0] < -1e-9) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const Vector2 v = psi.vector();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed() { return DensityMatrix(0.5 * Matrix2::Identity()); }

DensityMatrix DensityMatrix::from_unnormalized(const Matrix2& m) {
  const Matrix2 herm = 0.5 * (m + m.adjoint());
  const double tr = herm.trace().real();
  if (!(tr > 0.0)) {
    throw std::invalid_argument("DensityMatrix::from_unnormalized: non-positive trace");
  }
  return DensityMatrix(herm / tr);
}

std::array<double, 2> DensityMatrix::eigenvalues() const { return hermitian_eigenvalues(m_); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

std::array<double, 3> DensityMatrix::bloch() const {
  return {2.0 * m_(0, 1).real(), -2.0 * m_(0, 1).imag(), (m_(0, 0) - m_(1, 1)).real()};
}

Operator2 pauli(Axis axis) {
  switch (axis) {
    case Axis::x:
      return Operator2(0.0, 1.0, 1.0, 0.0);
    case Axis::y:
      return Operator2(0.0, -kI, kI, 0.0);
    case Axis::z:
      return Operator2(1.0, 0.0, 0.0, -1.0);
  }
  throw std::invalid_argument("pauli: invalid axis");
}

const std::array<Operator2, 4>& pauli_basis() {
  static const std::array<Operator2, 4> basis = {Operator2::identity(), pauli(Axis::x),
                                                 pauli(Axis::y), pauli(Axis::z)};
  return basis;
}

int levi_civita(int j, int k, int l) {
  if (j == k || k == l || j == l) return 0;
  // Even permutations of (0, 1, 2) are cyclic shifts.
  return ((k - j + 3) % 3 == 1) ? 1 : -1;
}

Operator2 commutator(const Operator2& a, const Operator2& b) { return a * b - b * a; }

Operator2 anticommutator(const Operator2& a, const Operator2& b) { return a * b + b * a; }

Vector2 apply(const Operator2& m, const PureState& psi) { return m.matrix() * psi.vector(); }

StateDistances state_distances(const DensityMatrix& rho, const DensityMatrix& sigma) {
  // Qubit closed form: F = Tr(rho sigma) + 2 sqrt(det rho det sigma).
  const double overlap = (rho.matrix() * sigma.matrix()).trace().real();
  const double det_product =
      std::max(0.0, rho.matrix().determinant().real()) * std::max(0.0, sigma.matrix().determinant().real());
  const double fidelity = std::clamp(overlap + 2.0 * std::sqrt(det_product), 0.0, 1.0);

  const auto ev = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
  const double distance = std::clamp(0.5 * (std::abs(ev[0]) + std::abs(ev[1])), 0.0, 1.0);
  return {fidelity, distance};
}

}  // namespace polcomm
