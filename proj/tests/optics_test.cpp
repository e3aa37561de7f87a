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

#include "polcomm/optics.hpp"

#include "polcomm/errors.hpp"

#include "gtest/gtest.h"

#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace polcomm;
using namespace polcomm::optics;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent retarder construction: rotate a diagonal retarder so that its
// fast axis sits at angle psi from horizontal, psi = pi/2 + t for a fast axis
// t counterclockwise from vertical. The fast component picks up e^{iG}.
Matrix2 rotated_retarder(double retardance, double angle_from_vertical) {
  const double psi = kPi / 2.0 + angle_from_vertical;
  Eigen::Matrix2d rot;
  rot << std::cos(psi), -std::sin(psi), std::sin(psi), std::cos(psi);
  Matrix2 diag = Matrix2::Zero();
  diag(0, 0) = std::polar(1.0, retardance);  // fast axis along the rotated x direction
  diag(1, 1) = 1.0;
  return rot.cast<Complex>() * diag * rot.transpose().cast<Complex>();
}

const Operator2 kX = pauli(Axis::x);
const Operator2 kY = pauli(Axis::y);
const Operator2 kZ = pauli(Axis::z);

InterferometerConfig random_config(std::mt19937_64& rng) {
  InterferometerConfig cfg;
  cfg.sigma1 = WavePlate::half_wave(testutil::uniform(rng, 0.0, kPi));
  cfg.sigma2 = WavePlate::half_wave(testutil::uniform(rng, 0.0, kPi));
  cfg.sigma3 = WavePlate::half_wave(testutil::uniform(rng, 0.0, kPi));
  cfg.sigma4 = WavePlate::half_wave(testutil::uniform(rng, 0.0, kPi));
  cfg.phi = testutil::uniform(rng, -2.0 * kPi, 2.0 * kPi);
  return cfg;
}

}  // namespace

TEST(waveplate, invariants) {
  EXPECT_THROW(WavePlate(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(WavePlate(2.0 * kPi, 0.0), std::invalid_argument);
  EXPECT_THROW(WavePlate(kPi, NAN), std::invalid_argument);
  EXPECT_NEAR(WavePlate::half_wave(-deg(30.0)).angle(), deg(150.0), 1e-15);
  EXPECT_NEAR(WavePlate::half_wave(deg(200.0)).angle(), deg(20.0), 1e-14);
  EXPECT_EQ(WavePlate::half_wave(kPi).angle(), 0.0);
}

TEST(waveplate_matrix, half_wave_anchors) {
  EXPECT_TRUE(waveplate_matrix(WavePlate::half_wave(0.0)).approx_equal(kZ, 1e-15));
  EXPECT_TRUE(waveplate_matrix(WavePlate::half_wave(deg(45.0))).approx_equal(kX, 1e-15));
  const Operator2 mid = waveplate_matrix(WavePlate::half_wave(deg(22.5)));
  EXPECT_TRUE(mid.approx_equal((1.0 / std::sqrt(2.0)) * (kZ + kX), 1e-15));
  EXPECT_TRUE(mid.is_unitary(1e-15));
  EXPECT_TRUE(mid.is_hermitian(1e-15));
}

TEST(waveplate_matrix, matches_rotated_retarder) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const double retardance = testutil::uniform(rng, 0.01, 2.0 * kPi - 0.01);
    const double angle = testutil::uniform(rng, -kPi, 2.0 * kPi);
    const Operator2 j = waveplate_matrix(WavePlate(retardance, angle));
    EXPECT_LT((j.matrix() - rotated_retarder(retardance, angle)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(waveplate_matrix, unitary_and_half_wave_involution) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const double angle = testutil::uniform(rng, 0.0, kPi);
    const Operator2 q = waveplate_matrix(WavePlate::quarter_wave(angle));
    const Operator2 h = waveplate_matrix(WavePlate::half_wave(angle));
    EXPECT_TRUE(q.is_unitary(1e-12));
    EXPECT_TRUE(h.is_unitary(1e-12));
    EXPECT_TRUE(h.is_hermitian(1e-12));
    // H^2 proportional to I: off-diagonals vanish, diagonals agree.
    const Operator2 h2 = h * h;
    EXPECT_LT(std::abs(h2(0, 1)) + std::abs(h2(1, 0)) + std::abs(h2(0, 0) - h2(1, 1)), 1e-12);
    // Two quarter-wave plates at the same angle make a half-wave plate.
    EXPECT_TRUE((q * q).approx_equal(h, 1e-12));
  }
}

TEST(prepare_state, examples) {
  using WP = WavePlate;
  EXPECT_TRUE(prepare_state(WP::half_wave(deg(45.0)), WP::quarter_wave(0.0)).equal_up_to_phase(PureState::H(), 1e-12));
  EXPECT_TRUE(prepare_state(WP::half_wave(0.0), WP::quarter_wave(0.0)).equal_up_to_phase(PureState::V(), 1e-12));
  // HWP(22.5) takes |V> to A; a QWP with its axis on V/H turns that into R,
  // a QWP with its axis on the diagonal leaves it alone.
  EXPECT_TRUE(prepare_state(WP::half_wave(deg(22.5)), WP::quarter_wave(0.0)).equal_up_to_phase(PureState::R(), 1e-12));
  EXPECT_TRUE(prepare_state(WP::half_wave(deg(22.5)), WP::quarter_wave(deg(45.0))).equal_up_to_phase(PureState::A(), 1e-12));
  EXPECT_TRUE(prepare_state(WP::half_wave(deg(-22.5)), WP::quarter_wave(deg(45.0))).equal_up_to_phase(PureState::D(), 1e-12));
  EXPECT_TRUE(prepare_state(WP::half_wave(deg(-22.5)), WP::quarter_wave(0.0)).equal_up_to_phase(PureState::L(), 1e-12));
}

TEST(port_operator, case_examples) {
  EXPECT_TRUE(port_operator(InterferometerConfig::case_one(), Port::D2).is_zero(1e-15));
  EXPECT_TRUE(port_operator(InterferometerConfig::case_one(), Port::D1).approx_equal(kI * Operator2::identity(), 1e-15));
  EXPECT_TRUE(port_operator(InterferometerConfig::case_two(), Port::D2).approx_equal(kI * kY, 1e-15));
  // Anticommutator port is null in case II.
  EXPECT_TRUE(port_operator(InterferometerConfig::case_two(), Port::D1).is_zero(1e-15));
}

TEST(port_operator, arm_blocking) {
  auto cfg = InterferometerConfig::case_two();
  cfg.block_transmitted = true;
  // Only -B/2 = -(sx sz)/2 = (i/2) sy remains.
  EXPECT_TRUE(port_operator(cfg, Port::D2).approx_equal(0.5 * kI * kY, 1e-15));
  cfg.block_transmitted = false;
  cfg.block_reflected = true;
  EXPECT_TRUE(port_operator(cfg, Port::D2).approx_equal(0.5 * (kZ * kX), 1e-15));
  cfg.block_transmitted = true;
  EXPECT_TRUE(port_operator(cfg, Port::D2).is_zero(0.0));
  EXPECT_EQ(detection_probability(cfg, Port::D1, PureState::D()), 0.0);
}

TEST(port_operator, lossless_apparatus_is_unitary) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const InterferometerConfig cfg = random_config(rng);
    const Operator2 d1 = port_operator(cfg, Port::D1);
    const Operator2 d2 = port_operator(cfg, Port::D2);
    EXPECT_TRUE((d1.adjoint() * d1 + d2.adjoint() * d2).approx_equal(Operator2::identity(), 1e-12));
    const PureState psi = testutil::random_pure_state(rng);
    EXPECT_NEAR(detection_probability(cfg, Port::D1, psi) + detection_probability(cfg, Port::D2, psi), 1.0, 1e-12);
  }
}

TEST(detection_probability, case_examples) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState psi = testutil::random_pure_state(rng);
    EXPECT_NEAR(detection_probability(InterferometerConfig::case_one(), Port::D1, psi), 1.0, 1e-12);
    EXPECT_NEAR(detection_probability(InterferometerConfig::case_one(), Port::D2, psi), 0.0, 1e-12);
    EXPECT_NEAR(detection_probability(InterferometerConfig::case_two(), Port::D1, psi), 0.0, 1e-12);
    EXPECT_NEAR(detection_probability(InterferometerConfig::case_two(), Port::D2, psi), 1.0, 1e-12);
  }
}

TEST(detection_probability, zero_visibility_removes_interference) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto cfg = random_config(rng);
    cfg.visibility = 0.0;
    const PureState psi = testutil::random_pure_state(rng);
    const double a2 = apply(cfg.transmitted_operator(), psi).squaredNorm();
    const double b2 = apply(cfg.reflected_operator(), psi).squaredNorm();
    EXPECT_NEAR(detection_probability(cfg, Port::D1, psi), 0.5 * (a2 + b2) / 2.0, 1e-12);
    EXPECT_NEAR(detection_probability(cfg, Port::D2, psi), 0.5 * (a2 + b2) / 2.0, 1e-12);
  }
}

TEST(detection_probability, case_one_fringes_are_cos_and_sin_squared) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState psi = testutil::random_pure_state(rng);
    for (double phi = -2.0 * kPi; phi <= 2.0 * kPi; phi += 0.1) {
      const auto cfg = InterferometerConfig::case_one(phi);
      EXPECT_NEAR(detection_probability(cfg, Port::D1, psi), std::pow(std::cos(phi / 2.0), 2), 1e-12);
      EXPECT_NEAR(detection_probability(cfg, Port::D2, psi), std::pow(std::sin(phi / 2.0), 2), 1e-12);
    }
  }
}

TEST(detection_probability, case_two_is_case_one_shifted_by_pi) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState psi = testutil::random_pure_state(rng);
    const double visibility = testutil::uniform(rng, 0.0, 1.0);
    for (double phi = -2.0 * kPi; phi <= 2.0 * kPi; phi += 0.05) {
      auto two = InterferometerConfig::case_two(phi);
      auto one = InterferometerConfig::case_one(phi + kPi);
      two.visibility = one.visibility = visibility;
      for (const Port port : {Port::D1, Port::D2}) {
        EXPECT_NEAR(detection_probability(two, port, psi), detection_probability(one, port, psi), 1e-12);
      }
    }
  }
}

TEST(detection_probability, rejects_bad_visibility) {
  auto cfg = InterferometerConfig::case_one();
  cfg.visibility = 1.5;
  EXPECT_THROW(detection_probability(cfg, Port::D1, PureState::H()), std::invalid_argument);
  cfg.visibility = -0.1;
  EXPECT_THROW(port_operator(cfg, Port::D1), std::invalid_argument);
}

TEST(conditional_output_state, examples) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState psi = testutil::random_pure_state(rng);
    const DensityMatrix rho = DensityMatrix::from_pure(psi);
    auto two = InterferometerConfig::case_two();
    two.visibility = testutil::uniform(rng, 0.01, 1.0);
    const Matrix2 expected = kY.matrix() * rho.matrix() * kY.matrix();
    EXPECT_LT((conditional_output_state(two, Port::D2, rho).matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);

    auto one = InterferometerConfig::case_one();
    one.visibility = testutil::uniform(rng, 0.0, 1.0);
    EXPECT_LT((conditional_output_state(one, Port::D1, rho).matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
  const auto dark = InterferometerConfig::case_one();
  EXPECT_THROW(conditional_output_state(dark, Port::D2, DensityMatrix::from_pure(PureState::D())), ZeroProbability);
}

TEST(conditional_output_state, trace_equals_detection_probability) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    auto cfg = random_config(rng);
    cfg.visibility = testutil::uniform(rng, 0.0, 1.0);
    cfg.block_transmitted = trial % 7 == 0;
    cfg.block_reflected = trial % 11 == 0;
    const PureState psi = testutil::random_pure_state(rng);
    for (const Port port : {Port::D1, Port::D2}) {
      const Matrix2 out = unnormalized_output(cfg, port, DensityMatrix::from_pure(psi));
      EXPECT_NEAR(out.trace().real(), detection_probability(cfg, port, psi), 1e-12);
    }
  }
}

TEST(conditional_output_state, independent_of_visibility_for_proportional_arms) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    // sigma4 sigma3 = sigma2 sigma1 up to a phase: mirror the transmitted arm.
    InterferometerConfig cfg;
    cfg.sigma1 = WavePlate::half_wave(testutil::uniform(rng, 0.0, kPi));
    cfg.sigma2 = WavePlate::half_wave(testutil::uniform(rng, 0.0, kPi));
    cfg.sigma3 = cfg.sigma1;
    cfg.sigma4 = cfg.sigma2;
    cfg.phi = testutil::uniform(rng, 0.1, 2.0 * kPi - 0.1);
    const DensityMatrix rho = testutil::random_density(rng);
    for (const Port port : {Port::D1, Port::D2}) {
      cfg.visibility = 1.0;
      const DensityMatrix full = conditional_output_state(cfg, port, rho);
      cfg.visibility = testutil::uniform(rng, 0.0, 1.0);
      const DensityMatrix partial = conditional_output_state(cfg, port, rho);
      EXPECT_LT((full.matrix() - partial.matrix()).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}
