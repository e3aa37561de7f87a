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

#include "polcomm/experiments.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace polcomm::cli {

enum class Experiment { phase_scan, case_compare, qpt, estimate_k, phase_of_k, calibrate_noise };
enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitExperimentError = 3;

struct InputState {
  double hwp_angle_deg = 0.0;
  double qwp_angle_deg = 0.0;
};

struct RunConfig {
  Experiment experiment = Experiment::phase_scan;
  experiments::NoiseProfile noise;
  /// Preparation plates acting on the heralded |V>; unset means |V> itself.
  std::optional<InputState> input_state;
  std::filesystem::path output_dir = "polcomm-out";
  Format format = Format::csv;
  int n_points = 40;
  int n_seeds = 50;
  double target_fidelity = 0.94;
};

/// Throws std::invalid_argument on an unknown name.
Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment experiment);

/// Parses a JSON run manifest; fields missing from the file keep `defaults`.
RunConfig config_from_json(const std::string& text, const RunConfig& defaults = {});

/// Entry point: returns kExitOk, kExitConfigError or kExitExperimentError.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace polcomm::cli
