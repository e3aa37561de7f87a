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

#include "polcomm/optics.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polcomm::stats {

/// Heralded single-photon source seen as a Poissonian herald stream. The
/// defaults (1e4 pairs/s, 1 s per setting) are simulation choices, not
/// measured values.
struct SourceModel {
  double pair_rate = 1.0e4;       // heralded pairs per second
  double integration_time = 1.0;  // seconds per setting

  void validate() const;
};

struct DetectorModel {
  double efficiency = 1.0;  // [0, 1]
  double dark_rate = 0.0;   // accidental coincidences per second

  void validate() const;
};

/// One detector's coincidence count at one apparatus setting. `counts` is
/// integer-valued when sampled and holds the expectation value in
/// exact-probability mode.
struct CountRecord {
  std::string setting_label;
  double phi = 0.0;
  optics::Port port = optics::Port::D1;
  double duration = 1.0;
  double counts = 0.0;

  double rate() const { return counts / duration; }
};

/// rate = pair_rate * efficiency * p + dark_rate.
double expected_rate(double p, const SourceModel& src, const DetectorModel& det);

/// Stable per-setting seed: splitmix64 chain over the master seed, the 64-bit
/// FNV-1a hash of `label`, and `index`:
///   s = mix(mix(mix(master) ^ fnv1a(label)) ^ index).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

/// Portable random stream: mt19937_64 bits turned into doubles by hand so the
/// sequence does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal via Box-Muller; each call consumes two uniforms.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// One Poisson draw by CDF inversion. Means above 1e6 use a rounded normal
/// approximation.
std::uint64_t sample_poisson(double mean, Rng& rng);

/// Poisson draw with mean rate * duration, reproducible for a given seed.
std::uint64_t sample_counts(double rate, double duration, std::uint64_t seed);

/// Least-squares fit of N(phi) = offset + amplitude cos(phi - phase).
struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;  // >= 0
  double phase = 0.0;      // (-pi, pi]
  double fringe_visibility = 0.0;
  double offset_stderr = 0.0;
  double amplitude_stderr = 0.0;
  double phase_stderr = 0.0;
  double residual_rms = 0.0;
  /// All counts agree with their mean within 3 sqrt(mean); visibility is then 0.
  bool flat = false;
};

/// Throws DegenerateScan for fewer than 5 distinct phases, a span below pi, or
/// mismatched inputs.
SinusoidFit fit_sinusoid(std::span<const double> phis, std::span<const double> counts);

struct PhaseCalibration {
  double phi0 = 0.0;
  double stderr = 0.0;
  double from_d1 = 0.0;  // D1 maximum
  double from_d2 = 0.0;  // D2 minimum
  SinusoidFit d1;
  SinusoidFit d2;
};

/// Mirror phase where the fitted D1 fringe peaks and the fitted D2 fringe
/// vanishes, taking the 2pi alias nearest the scan midpoint. The two
/// estimates must agree within `tolerance_sigmas` combined standard errors,
/// otherwise CalibrationInconsistent is thrown.
PhaseCalibration calibrate_phase(std::span<const CountRecord> scan, double tolerance_sigmas = 5.0);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// CSV with header `setting,phi,port,duration,counts`.
std::string to_csv(std::span<const CountRecord> records);

}  // namespace polcomm::stats
