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

// Jones-calculus model of the single-photon Mach-Zehnder apparatus.
//
// Wave-plate convention: the fast-axis angle is measured counterclockwise
// from the vertical polarization axis, and the Jones matrix of a retarder
// with retardance G is
//
//     J = P_slow + exp(iG) P_fast,
//
// with P_fast/P_slow the projectors onto the fast/slow axes. A half-wave plate
// at angle t is then the Hermitian reflection cos(2t) sz + sin(2t) sx, so
// HWP(0) = sz and HWP(45 deg) = sx exactly, with no residual global phase.
//
// Arm labels: the "transmitted" arm applies sigma1 then sigma2 (operator
// A = sigma2 sigma1); the "reflected" arm applies sigma3 then sigma4
// (B = sigma4 sigma3). Blocking the transmitted arm leaves only B (the N_u
// sub-measurement of the |k| protocol); blocking the reflected arm leaves
// only A (N_l). Which physical arm is "upper" or "lower" is inferred from the
// amplitudes assigned to each sub-measurement, not from a drawing.

#include "polcomm/qubit.hpp"

#include <numbers>
#include <string_view>

namespace polcomm::optics {

inline constexpr double kHalfWave = std::numbers::pi;
inline constexpr double kQuarterWave = std::numbers::pi / 2.0;

inline constexpr double deg(double degrees) { return degrees * std::numbers::pi / 180.0; }

class WavePlate {
 public:
  /// retardance in (0, 2pi); the angle is wrapped into [0, pi).
  WavePlate(double retardance, double angle);

  static WavePlate half_wave(double angle) { return WavePlate(kHalfWave, angle); }
  static WavePlate quarter_wave(double angle) { return WavePlate(kQuarterWave, angle); }

  double retardance() const { return retardance_; }
  double angle() const { return angle_; }

  /// Same plate rotated by delta radians.
  WavePlate rotated(double delta) const { return WavePlate(retardance_, angle_ + delta); }

 private:
  double retardance_;
  double angle_;
};

Operator2 waveplate_matrix(const WavePlate& wp);

/// Half-wave settings realizing sz and sx.
inline WavePlate sigma_z_plate() { return WavePlate::half_wave(0.0); }
inline WavePlate sigma_x_plate() { return WavePlate::half_wave(deg(45.0)); }

/// Heralded photon starts in |V>; returns normalize(QWP * HWP * |V>).
PureState prepare_state(const WavePlate& hwp, const WavePlate& qwp);

enum class Port { D1, D2 };

std::string_view to_string(Port port);

struct InterferometerConfig {
  WavePlate sigma1 = sigma_z_plate();
  WavePlate sigma2 = sigma_z_plate();
  WavePlate sigma3 = sigma_z_plate();
  WavePlate sigma4 = sigma_z_plate();
  double phi = 0.0;
  double visibility = 1.0;
  bool block_transmitted = false;
  bool block_reflected = false;

  /// sigma1..4 = sz.
  static InterferometerConfig case_one(double phi = 0.0);
  /// sigma1 = sigma4 = sx, sigma2 = sigma3 = sz.
  static InterferometerConfig case_two(double phi = 0.0);

  /// Throws std::invalid_argument on visibility outside [0, 1] or non-finite phi.
  void validate() const;

  Operator2 transmitted_operator() const;  // A = sigma2 sigma1
  Operator2 reflected_operator() const;    // B = sigma4 sigma3
};

/// D1 -> (i/2)(A e^{i phi} + B), D2 -> (1/2)(A e^{i phi} - B); a blocked arm drops its term.
Operator2 port_operator(const InterferometerConfig& cfg, Port port);

/// Detection probability of the photon superposed over two paths with
/// partial coherence:
///   1/4 (|a psi|^2 + |b psi|^2 + 2 sign visibility Re(e^{i phase} <b psi|a psi>)).
/// The 1/4 reflects the two 50:50 splitters.
double superposed_probability(const Operator2& a, const Operator2& b, double phase, double visibility,
                              double sign, const PureState& psi);

double detection_probability(const InterferometerConfig& cfg, Port port, const PureState& psi0);

/// Unnormalized post-selected state at the port; its trace equals the
/// detection probability.
Matrix2 unnormalized_output(const InterferometerConfig& cfg, Port port, const DensityMatrix& rho_in);

/// Normalized state found at the port. Throws ZeroProbability when the port is
/// dark (trace below 1e-15).
DensityMatrix conditional_output_state(const InterferometerConfig& cfg, Port port,
                                       const DensityMatrix& rho_in);

}  // namespace polcomm::optics
