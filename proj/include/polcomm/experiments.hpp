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

// Scripted end-to-end runs of the commutator interferometer: phase scan and
// calibration, case I/II contrast, process tomography of the commutator port,
// the |k| path-blocking protocol, the proposed arg(k) measurement and the
// noise calibration against a target process fidelity.
//
// Every run is deterministic given its NoiseProfile: sampled counts use
// per-setting seeds derived from master_seed and a setting label, and each
// run draws one angle offset per interferometer plate from
// derive_seed(master_seed, "plate-angles", 0).

#include "polcomm/optics.hpp"
#include "polcomm/photon_stats.hpp"
#include "polcomm/tomography.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polcomm::experiments {

enum class Sampling {
  poisson,  // Poisson-sampled counts
  exact,    // expected counts, no shot noise
};

struct NoiseProfile {
  /// Standard deviation of the Gaussian angle offset of each of the four
  /// interferometer plates, drawn once per run.
  double waveplate_angle_sigma = 0.0;
  /// Mirror setting at which the true interferometer phase vanishes.
  double phase_offset_error = 0.0;
  double visibility = 1.0;
  stats::DetectorModel detector;
  stats::SourceModel source;
  std::uint64_t master_seed = 1;
  Sampling sampling = Sampling::poisson;

  void validate() const;
};

struct Quantity {
  double value = 0.0;
  std::optional<double> stderr;
};

struct ExperimentReport {
  std::string experiment_id;
  nlohmann::ordered_json inputs;
  std::vector<stats::CountRecord> records;
  /// Insertion-ordered.
  std::vector<std::pair<std::string, Quantity>> derived;
  std::optional<tomo::ChiMatrix> chi;

  void set(const std::string& name, double value, std::optional<double> stderr = std::nullopt);
  bool has(const std::string& name) const;
  /// Throws std::out_of_range for an unknown name.
  const Quantity& at(const std::string& name) const;
  double value(const std::string& name) const { return at(name).value; }
};

/// Angle offsets of sigma1..sigma4 for one run.
std::array<double, 4> draw_plate_offsets(const NoiseProfile& noise);

/// Rotates each plate by its offset.
optics::InterferometerConfig perturbed(optics::InterferometerConfig cfg, const std::array<double, 4>& offsets);

/// Counts for one setting: expectation in exact mode, otherwise a Poisson
/// draw seeded by derive_seed(master_seed, label, index).
double measure_counts(const NoiseProfile& noise, double probability, const std::string& label,
                      std::uint64_t index);

/// Case-I plates, mirror scanned over [-2pi, 2pi], sinusoidal fits
/// of both ports and the calibrated mirror phase phi0.
ExperimentReport run_phase_scan(const NoiseProfile& noise, int n_points = 40,
                                const PureState& psi0 = PureState::V());

struct CaseComparisonOptions {
  bool block_transmitted = false;
  bool block_reflected = false;
};

/// Normalized rates of both ports in case I and case II at the
/// calibrated phase, and a verdict on the port exchange.
ExperimentReport run_case_comparison(const NoiseProfile& noise, const PureState& psi0 = PureState::V(),
                                     const CaseComparisonOptions& options = {});

/// Six-setting tomography of the D2 (commutator) output for inputs H, V, D, R,
/// chi reconstruction and process fidelity against sigma_y.
ExperimentReport run_commutator_qpt(const NoiseProfile& noise);

struct KMagnitude {
  double k_abs = 0.0;
  double stderr = 0.0;
  ExperimentReport report;
};

/// |k| = N / (N_u + N_l) from three D2 sub-runs: both arms open, transmitted
/// arm blocked (N_u), reflected arm blocked (N_l). Dark counts are subtracted
/// before the ratio. Throws ZeroDenominator if N_u + N_l <= 0.
KMagnitude estimate_k_magnitude(const NoiseProfile& noise, const PureState& psi0 = PureState::V());

struct PhaseOfKOptions {
  int n_points = 40;
  /// Visibility of the outer interferometer; defaults to the profile's.
  std::optional<double> outer_visibility;
  /// Run the reference scan twice (sanity check, expect zero phase).
  bool reference_only = false;
};

/// Extended interferometer: an outer arm carrying sigma_y psi0 interferes with
/// the D2 output. Scans the outer phase once with the commutator apparatus and
/// once with a single sigma_y in its place; arg(k) is the fringe-phase
/// difference. Throws DegenerateScan on a flat fringe.
ExperimentReport run_phase_of_k(const NoiseProfile& noise, const PureState& psi0 = PureState::V(),
                                const PhaseOfKOptions& options = {});

struct FidelityStudy {
  double mean = 0.0;
  double stderr = 0.0;  // standard error of the mean
  std::vector<double> per_seed;
  /// Seeds dropped because the mirror calibration failed (fringe washed out
  /// by plate misalignment).
  int failed_calibrations = 0;
};

/// Mean commutator process fidelity over n_seeds runs whose master seeds are
/// derive_seed(noise.master_seed, "fidelity-study", i). Runs in parallel.
/// Seeds whose calibration fails are skipped and counted; DegenerateScan if
/// all of them fail.
FidelityStudy fidelity_study(const NoiseProfile& noise, int n_seeds);

struct NoiseCalibration {
  double waveplate_angle_sigma = 0.0;
  FidelityStudy study;
  int iterations = 0;
  NoiseProfile profile;
};

/// Bisection on waveplate_angle_sigma until the mean fidelity over n_seeds is
/// within tol of target. The other noise knobs are taken from `base`.
NoiseCalibration calibrate_noise(const NoiseProfile& base, double target = 0.94, int n_seeds = 50,
                                 double tol = 0.005);

}  // namespace polcomm::experiments
