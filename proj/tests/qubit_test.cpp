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

#include "gtest/gtest.h"

#include "test_util.hpp"

#include <cmath>

using namespace polcomm;

namespace {

// Reference fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 via eigendecomposition.
double fidelity_by_eigendecomposition(const Matrix2& rho, const Matrix2& sigma) {
  auto sqrtm = [](const Matrix2& m) {
    Eigen::SelfAdjointEigenSolver<Matrix2> eig(m);
    const Eigen::Vector2d roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return Matrix2(eig.eigenvectors() * roots.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint());
  };
  const Matrix2 s = sqrtm(rho);
  const Matrix2 inner = s * sigma * s;
  const Matrix2 root = sqrtm(0.5 * (inner + inner.adjoint()));
  const double tr = root.trace().real();
  return tr * tr;
}

double trace_distance_by_eigendecomposition(const Matrix2& rho, const Matrix2& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(rho - sigma);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

const Operator2 kX = pauli(Axis::x);
const Operator2 kY = pauli(Axis::y);
const Operator2 kZ = pauli(Axis::z);
const Operator2 kIdentity = Operator2::identity();

}  // namespace

TEST(pauli, exact_matrices) {
  EXPECT_TRUE(kZ.approx_equal(Operator2(1.0, 0.0, 0.0, -1.0), 0.0));
  EXPECT_TRUE(kX.approx_equal(Operator2(0.0, 1.0, 1.0, 0.0), 0.0));
  EXPECT_TRUE(kY.approx_equal(Operator2(0.0, -kI, kI, 0.0), 0.0));
}

TEST(pauli, hermitian_unitary_traceless_involutions) {
  for (const Axis a : {Axis::x, Axis::y, Axis::z}) {
    const Operator2 p = pauli(a);
    EXPECT_TRUE(p.is_hermitian(1e-15)) << to_string(a);
    EXPECT_TRUE(p.is_unitary(1e-15)) << to_string(a);
    EXPECT_EQ(p.trace(), Complex(0.0)) << to_string(a);
    EXPECT_TRUE((p * p).approx_equal(kIdentity, 1e-15)) << to_string(a);
  }
}

TEST(pauli, basis_order) {
  const auto& basis = pauli_basis();
  EXPECT_TRUE(basis[0].approx_equal(kIdentity, 0.0));
  EXPECT_TRUE(basis[1].approx_equal(kX, 0.0));
  EXPECT_TRUE(basis[2].approx_equal(kY, 0.0));
  EXPECT_TRUE(basis[3].approx_equal(kZ, 0.0));
}

TEST(commutator, examples) {
  EXPECT_TRUE(commutator(kZ, kX).approx_equal(2.0 * kI * kY, 1e-15));
  EXPECT_TRUE(commutator(kZ, kZ).is_zero(0.0));
  EXPECT_TRUE(commutator(kX, kY).approx_equal(2.0 * kI * kZ, 1e-15));
}

TEST(anticommutator, examples) {
  EXPECT_TRUE(anticommutator(kZ, kX).is_zero(0.0));
  EXPECT_TRUE(anticommutator(kZ, kZ).approx_equal(2.0 * kIdentity, 0.0));
  EXPECT_TRUE(anticommutator(kX, kX).approx_equal(2.0 * kIdentity, 0.0));
}

TEST(commutator, levi_civita_structure_for_all_pairs) {
  const std::array<Axis, 3> axes = {Axis::x, Axis::y, Axis::z};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      Operator2 expected_comm;
      for (int l = 0; l < 3; ++l) {
        expected_comm = expected_comm + (2.0 * kI * static_cast<double>(levi_civita(j, k, l))) * pauli(axes[l]);
      }
      const Operator2 expected_anti = (j == k ? 2.0 : 0.0) * kIdentity;
      EXPECT_TRUE(commutator(pauli(axes[j]), pauli(axes[k])).approx_equal(expected_comm, 1e-12)) << j << k;
      EXPECT_TRUE(anticommutator(pauli(axes[j]), pauli(axes[k])).approx_equal(expected_anti, 1e-12)) << j << k;
    }
  }
}

TEST(levi_civita, signs) {
  EXPECT_EQ(levi_civita(0, 1, 2), 1);
  EXPECT_EQ(levi_civita(1, 2, 0), 1);
  EXPECT_EQ(levi_civita(2, 0, 1), 1);
  EXPECT_EQ(levi_civita(0, 2, 1), -1);
  EXPECT_EQ(levi_civita(2, 1, 0), -1);
  EXPECT_EQ(levi_civita(0, 0, 1), 0);
}

TEST(apply, ordered_products) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState psi = testutil::random_pure_state(rng);
    const Complex a = psi.alpha();
    const Complex b = psi.beta();
    const Vector2 zx = apply(kZ * kX, psi);
    const Vector2 xz = apply(kX * kZ, psi);
    EXPECT_LT(std::abs(zx(0) - b) + std::abs(zx(1) + a), 1e-15);
    EXPECT_LT(std::abs(xz(0) + b) + std::abs(xz(1) - a), 1e-15);
    EXPECT_LT((apply(kIdentity, psi) - psi.vector()).norm(), 1e-15);
    // sz sx = i sy and sx sz = -i sy on the state.
    EXPECT_LT((zx - kI * apply(kY, psi)).norm(), 1e-15);
    EXPECT_LT((xz + kI * apply(kY, psi)).norm(), 1e-15);
  }
}

TEST(apply, unitary_preserves_norm) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Operator2 u = testutil::random_unitary(rng);
    ASSERT_TRUE(u.is_unitary(1e-12));
    const PureState psi = testutil::random_pure_state(rng);
    EXPECT_NEAR(apply(u, psi).squaredNorm(), 1.0, 1e-12);
  }
}

TEST(operator2, predicates_and_validation) {
  EXPECT_THROW(Operator2(NAN, 0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Operator2(INFINITY, 0.0, 0.0, 1.0), std::invalid_argument);
  const Operator2 almost = kIdentity + Operator2(1e-10, 0.0, 0.0, 0.0);
  EXPECT_TRUE(almost.is_unitary());
  EXPECT_FALSE(almost.is_unitary(1e-12));
  EXPECT_FALSE(Operator2(0.0, 1.0, 0.0, 0.0).is_hermitian());
  EXPECT_TRUE(Operator2(1e-12, 0.0, 0.0, 0.0).is_zero());
  EXPECT_FALSE(Operator2(1e-12, 0.0, 0.0, 0.0).is_zero(1e-13));
}

TEST(pure_state, normalization_is_enforced) {
  EXPECT_THROW(PureState(1.0, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(PureState(1.0, 1e-7));  // |beta|^2 = 1e-14 is inside the 1e-12 band
  EXPECT_THROW(PureState::normalized(0.0, 0.0), std::invalid_argument);
  const PureState d = PureState::normalized(3.0, 3.0);
  EXPECT_TRUE(d.equal_up_to_phase(PureState::D()));
  EXPECT_TRUE(PureState::normalized(kI, kI).equal_up_to_phase(PureState::D()));
  EXPECT_FALSE(PureState::H().equal_up_to_phase(PureState::V()));
}

TEST(density_matrix, validation) {
  Matrix2 m;
  m << 0.5, 0.6, 0.6, 0.5;  // eigenvalue -0.1
  EXPECT_THROW(DensityMatrix{m}, std::invalid_argument);
  m << 0.6, 0.0, 0.0, 0.6;
  EXPECT_THROW(DensityMatrix{m}, std::invalid_argument);
  m << 0.5, Complex(0.1, 0.1), Complex(0.1, 0.1), 0.5;  // not Hermitian
  EXPECT_THROW(DensityMatrix{m}, std::invalid_argument);
  EXPECT_NEAR(DensityMatrix::maximally_mixed().purity(), 0.5, 1e-15);
  EXPECT_NEAR(DensityMatrix::from_pure(PureState::R()).purity(), 1.0, 1e-15);
}

TEST(density_matrix, bloch_vector_of_axis_states) {
  const auto r = DensityMatrix::from_pure(PureState::R()).bloch();
  EXPECT_NEAR(r[0], 0.0, 1e-15);
  EXPECT_NEAR(r[1], -1.0, 1e-15);
  EXPECT_NEAR(r[2], 0.0, 1e-15);
  const auto d = DensityMatrix::from_pure(PureState::D()).bloch();
  EXPECT_NEAR(d[0], 1.0, 1e-15);
}

TEST(state_distances, examples) {
  const auto rho = DensityMatrix::from_pure(PureState::D());
  const auto self = state_distances(rho, rho);
  EXPECT_NEAR(self.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(self.trace_distance, 0.0, 1e-12);

  const auto h = DensityMatrix::from_pure(PureState::H());
  const auto v = DensityMatrix::from_pure(PureState::V());
  const auto orth = state_distances(h, v);
  EXPECT_NEAR(orth.fidelity, 0.0, 1e-12);
  EXPECT_NEAR(orth.trace_distance, 1.0, 1e-12);

  const auto mixed = DensityMatrix::maximally_mixed();
  const auto hm = state_distances(h, mixed);
  EXPECT_NEAR(fidelity_by_eigendecomposition(h.matrix(), mixed.matrix()), 0.5, 1e-12);
  EXPECT_NEAR(trace_distance_by_eigendecomposition(h.matrix(), mixed.matrix()), 0.5, 1e-12);
  EXPECT_NEAR(hm.fidelity, 0.5, 1e-12);
  EXPECT_NEAR(hm.trace_distance, 0.5, 1e-12);
}

TEST(state_distances, closed_form_matches_eigendecomposition) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const DensityMatrix rho = testutil::random_density(rng);
    const DensityMatrix sigma = testutil::random_density(rng);
    const auto d = state_distances(rho, sigma);
    EXPECT_NEAR(d.fidelity, fidelity_by_eigendecomposition(rho.matrix(), sigma.matrix()), 1e-7);
    EXPECT_NEAR(d.trace_distance, trace_distance_by_eigendecomposition(rho.matrix(), sigma.matrix()), 1e-12);
    EXPECT_GE(d.fidelity, 0.0);
    EXPECT_LE(d.fidelity, 1.0);
    // Fuchs-van de Graaf.
    EXPECT_LE(1.0 - std::sqrt(d.fidelity), d.trace_distance + 1e-9);
    EXPECT_LE(d.trace_distance, std::sqrt(1.0 - d.fidelity) + 1e-9);
  }
}
