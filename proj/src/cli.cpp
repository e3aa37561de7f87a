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

#include "polcomm/cli.hpp"

#include "polcomm/errors.hpp"
#include "polcomm/serialization.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polcomm::cli {

namespace {

using io::Json;

// Raised for anything that is the caller's fault: bad flags, unreadable
// files, invalid values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("failed writing " + path.string());
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("format must be 'csv' or 'json', got '" + name + "'");
}

void apply_ideal(experiments::NoiseProfile& noise) {
  noise.visibility = 1.0;
  noise.waveplate_angle_sigma = 0.0;
  noise.phase_offset_error = 0.0;
  noise.detector.dark_rate = 0.0;
  noise.detector.efficiency = 1.0;
}

PureState input_state(const RunConfig& cfg) {
  if (!cfg.input_state) return PureState::V();
  return optics::prepare_state(optics::WavePlate::half_wave(optics::deg(cfg.input_state->hwp_angle_deg)),
                               optics::WavePlate::quarter_wave(optics::deg(cfg.input_state->qwp_angle_deg)));
}

std::string format_number(double v) {
  char buf[32];
  if (std::abs(v) < 5e-4) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void print_summary(std::ostream& out, const experiments::ExperimentReport& report) {
  out << "experiment: " << report.experiment_id << "\n";
  std::size_t width = 8;
  for (const auto& [name, q] : report.derived) width = std::max(width, name.size());
  for (const auto& [name, q] : report.derived) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << name << "  " << std::right << std::setw(10)
        << format_number(q.value);
    if (q.stderr) out << " +/- " << format_number(*q.stderr);
    out << "\n";
  }
}

experiments::ExperimentReport execute(const RunConfig& cfg, std::optional<experiments::NoiseProfile>& calibrated) {
  const PureState psi0 = input_state(cfg);
  switch (cfg.experiment) {
    case Experiment::phase_scan:
      return experiments::run_phase_scan(cfg.noise, cfg.n_points, psi0);
    case Experiment::case_compare:
      return experiments::run_case_comparison(cfg.noise, psi0);
    case Experiment::qpt:
      return experiments::run_commutator_qpt(cfg.noise);
    case Experiment::estimate_k:
      return experiments::estimate_k_magnitude(cfg.noise, psi0).report;
    case Experiment::phase_of_k: {
      experiments::PhaseOfKOptions options;
      options.n_points = cfg.n_points;
      return experiments::run_phase_of_k(cfg.noise, psi0, options);
    }
    case Experiment::calibrate_noise: {
      const auto result = experiments::calibrate_noise(cfg.noise, cfg.target_fidelity, cfg.n_seeds);
      experiments::ExperimentReport report;
      report.experiment_id = "calibrate-noise";
      report.inputs = {{"noise", io::to_json(cfg.noise)},
                       {"target_fidelity", cfg.target_fidelity},
                       {"n_seeds", cfg.n_seeds}};
      report.set("waveplate_angle_sigma", result.waveplate_angle_sigma);
      report.set("mean_fidelity", result.study.mean, result.study.stderr);
      report.set("failed_calibrations", result.study.failed_calibrations);
      report.set("iterations", result.iterations);
      calibrated = result.profile;
      return report;
    }
  }
  throw std::logic_error("unhandled experiment");
}

}  // namespace

Experiment parse_experiment(const std::string& name) {
  if (name == "phase-scan") return Experiment::phase_scan;
  if (name == "case-compare") return Experiment::case_compare;
  if (name == "qpt") return Experiment::qpt;
  if (name == "estimate-k") return Experiment::estimate_k;
  if (name == "phase-of-k") return Experiment::phase_of_k;
  if (name == "calibrate-noise") return Experiment::calibrate_noise;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::phase_scan:
      return "phase-scan";
    case Experiment::case_compare:
      return "case-compare";
    case Experiment::qpt:
      return "qpt";
    case Experiment::estimate_k:
      return "estimate-k";
    case Experiment::phase_of_k:
      return "phase-of-k";
    case Experiment::calibrate_noise:
      return "calibrate-noise";
  }
  return "?";
}

RunConfig config_from_json(const std::string& text, const RunConfig& defaults) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  RunConfig cfg = defaults;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") {
        cfg.experiment = parse_experiment(value.get<std::string>());
      } else if (key == "noise") {
        cfg.noise = io::noise_from_json(value, cfg.noise);
      } else if (key == "input_state") {
        InputState s;
        s.hwp_angle_deg = value.value("hwp_angle_deg", 0.0);
        s.qwp_angle_deg = value.value("qwp_angle_deg", 0.0);
        cfg.input_state = s;
      } else if (key == "output_dir") {
        cfg.output_dir = value.get<std::string>();
      } else if (key == "format") {
        cfg.format = parse_format(value.get<std::string>());
      } else if (key == "n_points") {
        cfg.n_points = value.get<int>();
      } else if (key == "n_seeds") {
        cfg.n_seeds = value.get<int>();
      } else if (key == "target_fidelity") {
        cfg.target_fidelity = value.get<double>();
      } else {
        throw std::invalid_argument("unknown config field '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-photon interferometric test of the Pauli commutation relations"};
  app.set_version_flag("--version", "polcomm 1.0");

  std::string positional_experiment;
  std::string flag_experiment;
  std::string config_path;
  std::string noise_path;
  std::optional<std::uint64_t> seed;
  bool ideal = false;
  bool exact = false;
  std::string output_dir;
  std::string format;
  std::optional<int> n_points;
  std::optional<int> n_seeds;
  std::optional<double> target;

  app.add_option("name", positional_experiment,
                 "phase-scan | case-compare | qpt | estimate-k | phase-of-k | calibrate-noise");
  app.add_option("--experiment", flag_experiment, "Experiment to run (alternative to the positional form)");
  app.add_option("--config", config_path, "JSON run manifest");
  app.add_option("--noise", noise_path, "JSON noise profile (e.g. written by calibrate-noise)");
  app.add_option("--seed", seed, "Master seed");
  app.add_flag("--ideal", ideal, "Visibility 1, no angle or phase error, no dark counts");
  app.add_flag("--exact-probabilities", exact, "Use expected counts instead of Poisson draws");
  app.add_option("--output", output_dir, "Output directory");
  app.add_option("--format", format, "csv (report.json + counts.csv) or json (report.json only)");
  app.add_option("--points", n_points, "Points per phase scan");
  app.add_option("--seeds", n_seeds, "Seeds per fidelity estimate (calibrate-noise)");
  app.add_option("--target", target, "Target process fidelity (calibrate-noise)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfigError;
  }

  RunConfig cfg;
  std::optional<experiments::NoiseProfile> calibrated;
  experiments::ExperimentReport report;
  try {
    if (!config_path.empty()) cfg = config_from_json(read_file(config_path));
    if (!noise_path.empty()) cfg.noise = io::noise_from_json(Json::parse(read_file(noise_path)), cfg.noise);
    if (!positional_experiment.empty() && !flag_experiment.empty() && positional_experiment != flag_experiment) {
      throw ConfigError("conflicting experiment names '" + positional_experiment + "' and '" + flag_experiment + "'");
    }
    if (!positional_experiment.empty()) cfg.experiment = parse_experiment(positional_experiment);
    if (!flag_experiment.empty()) cfg.experiment = parse_experiment(flag_experiment);
    if (positional_experiment.empty() && flag_experiment.empty() && config_path.empty()) {
      throw ConfigError("no experiment given");
    }
    if (seed) cfg.noise.master_seed = *seed;
    if (ideal) apply_ideal(cfg.noise);
    if (exact) cfg.noise.sampling = experiments::Sampling::exact;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (!format.empty()) cfg.format = parse_format(format);
    if (n_points) cfg.n_points = *n_points;
    if (n_seeds) cfg.n_seeds = *n_seeds;
    if (target) cfg.target_fidelity = *target;
    cfg.noise.validate();

    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.output_dir)) {
      throw ConfigError("cannot create output directory " + cfg.output_dir.string());
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    report = execute(cfg, calibrated);
  } catch (const Error& e) {
    err << "experiment error in " << e.what() << "\n";
    return kExitExperimentError;
  } catch (const std::exception& e) {
    err << "experiment error: " << e.what() << "\n";
    return kExitExperimentError;
  }

  try {
    write_file(cfg.output_dir / "report.json", io::to_json(report).dump(2) + "\n");
    if (cfg.format == Format::csv && !report.records.empty()) {
      write_file(cfg.output_dir / "counts.csv", stats::to_csv(report.records));
    }
    if (report.chi) write_file(cfg.output_dir / "chi.json", io::to_json(*report.chi).dump(2) + "\n");
    if (calibrated) write_file(cfg.output_dir / "noise_profile.json", io::to_json(*calibrated).dump(2) + "\n");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  print_summary(out, report);
  return kExitOk;
}

}  // namespace polcomm::cli
