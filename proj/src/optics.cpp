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

#include <cmath>
#include <stdexcept>

namespace polcomm::optics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDarkTrace = 1e-15;

double sign_of(Port port) { return port == Port::D1 ? 1.0 : -1.0; }

}  // namespace

WavePlate::WavePlate(double retardance, double angle) : retardance_(retardance) {
  if (!(retardance > 0.0 && retardance < kTwoPi)) {
    throw std::invalid_argument("WavePlate: retardance must lie in (0, 2pi)");
  }
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("WavePlate: non-finite angle");
  }
  angle_ = std::fmod(angle, std::numbers::pi);
  if (angle_ < 0.0) angle_ += std::numbers::pi;
  if (angle_ >= std::numbers::pi) angle_ = 0.0;
}

Operator2 waveplate_matrix(const WavePlate& wp) {
  // Fast axis unit vector, counterclockwise from vertical: (-sin t, cos t).
  const double s = std::sin(wp.angle());
  const double c = std::cos(wp.angle());
  Matrix2 p_fast;
  p_fast << s * s, -s * c, -s * c, c * c;
  const Matrix2 p_slow = Matrix2::Identity() - p_fast;
  const Complex retard = std::polar(1.0, wp.retardance());
  return Operator2(p_slow + retard * p_fast);
}

PureState prepare_state(const WavePlate& hwp, const WavePlate& qwp) {
  const Vector2 out =
      waveplate_matrix(qwp).matrix() * waveplate_matrix(hwp).matrix() * PureState::V().vector();
  return PureState::normalized(out);
}

std::string_view to_string(Port port) { return port == Port::D1 ? "D1" : "D2"; }

InterferometerConfig InterferometerConfig::case_one(double phi) {
  InterferometerConfig cfg;
  cfg.phi = phi;
  return cfg;
}

InterferometerConfig InterferometerConfig::case_two(double phi) {
  InterferometerConfig cfg;
  cfg.sigma1 = sigma_x_plate();
  cfg.sigma4 = sigma_x_plate();
  cfg.phi = phi;
  return cfg;
}

void InterferometerConfig::validate() const {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("InterferometerConfig: visibility must lie in [0, 1]");
  }
  if (!std::isfinite(phi)) {
    throw std::invalid_argument("InterferometerConfig: non-finite phase");
  }
}

Operator2 InterferometerConfig::transmitted_operator() const {
  return waveplate_matrix(sigma2) * waveplate_matrix(sigma1);
}

Operator2 InterferometerConfig::reflected_operator() const {
  return waveplate_matrix(sigma4) * waveplate_matrix(sigma3);
}

Operator2 port_operator(const InterferometerConfig& cfg, Port port) {
  cfg.validate();
  const Operator2 a = cfg.block_transmitted ? Operator2::zero() : cfg.transmitted_operator();
  const Operator2 b = cfg.block_reflected ? Operator2::zero() : cfg.reflected_operator();
  const Complex phase = std::polar(1.0, cfg.phi);
  if (port == Port::D1) {
    return (0.5 * kI) * (phase * a + b);
  }
  return 0.5 * (phase * a - b);
}

double superposed_probability(const Operator2& a, const Operator2& b, double phase, double visibility,
                              double sign, const PureState& psi) {
  const Vector2 a_psi = apply(a, psi);
  const Vector2 b_psi = apply(b, psi);
  const Complex cross = std::polar(1.0, phase) * b_psi.dot(a_psi);  // dot() conjugates the left side
  const double p = 0.25 * (a_psi.squaredNorm() + b_psi.squaredNorm() + 2.0 * sign * visibility * cross.real());
  return std::max(0.0, p);
}

double detection_probability(const InterferometerConfig& cfg, Port port, const PureState& psi0) {
  cfg.validate();
  const Operator2 a = cfg.block_transmitted ? Operator2::zero() : cfg.transmitted_operator();
  const Operator2 b = cfg.block_reflected ? Operator2::zero() : cfg.reflected_operator();
  return std::min(1.0, superposed_probability(a, b, cfg.phi, cfg.visibility, sign_of(port), psi0));
}

Matrix2 unnormalized_output(const InterferometerConfig& cfg, Port port, const DensityMatrix& rho_in) {
  cfg.validate();
  const Matrix2 a = cfg.block_transmitted ? Matrix2::Zero() : cfg.transmitted_operator().matrix();
  const Matrix2 b = cfg.block_reflected ? Matrix2::Zero() : cfg.reflected_operator().matrix();
  const Matrix2& rho = rho_in.matrix();
  const Complex phase = std::polar(1.0, cfg.phi);
  const Matrix2 cross = phase * a * rho * b.adjoint() + std::conj(phase) * b * rho * a.adjoint();
  return 0.25 * (a * rho * a.adjoint() + b * rho * b.adjoint() + sign_of(port) * cfg.visibility * cross);
}

DensityMatrix conditional_output_state(const InterferometerConfig& cfg, Port port,
                                       const DensityMatrix& rho_in) {
  const Matrix2 out = unnormalized_output(cfg, port, rho_in);
  if (out.trace().real() < kDarkTrace) {
    throw ZeroProbability("optics::conditional_output_state",
                          std::string("port ") + std::string(to_string(port)) + " is dark");
  }
  return DensityMatrix::from_unnormalized(out);
}

}  // namespace polcomm::optics
