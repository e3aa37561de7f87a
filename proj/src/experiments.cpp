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

#include "polcomm/experiments.hpp"

#include "polcomm/errors.hpp"
#include "polcomm/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace polcomm::experiments {

namespace {

using optics::InterferometerConfig;
using optics::Port;
using stats::CountRecord;

constexpr double kPi = std::numbers::pi;
constexpr int kCalibrationPoints = 40;

template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = std::max(1, std::min<int>(static_cast<int>(hw), n));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> scan_grid(int n_points) {
  if (n_points < 5) {
    throw DegenerateScan("experiments::scan_grid", "need at least 5 scan points");
  }
  std::vector<double> grid(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    grid[static_cast<std::size_t>(i)] = -2.0 * kPi + 4.0 * kPi * i / (n_points - 1);
  }
  return grid;
}

bool sampled(const NoiseProfile& noise) { return noise.sampling == Sampling::poisson; }

std::optional<double> uncertainty(const NoiseProfile& noise, double stderr) {
  if (!sampled(noise)) return std::nullopt;
  return stderr;
}

double fringe_visibility_stderr(const stats::SinusoidFit& fit) {
  if (fit.fringe_visibility <= 0.0 || fit.amplitude <= 0.0 || fit.offset <= 0.0) return fit.amplitude_stderr;
  return fit.fringe_visibility *
         std::hypot(fit.amplitude_stderr / fit.amplitude, fit.offset_stderr / fit.offset);
}

InterferometerConfig with_noise(InterferometerConfig cfg, const NoiseProfile& noise,
                                const std::array<double, 4>& offsets) {
  cfg = perturbed(cfg, offsets);
  cfg.visibility = noise.visibility;
  return cfg;
}

// True interferometer phase for a given mirror setting.
double true_phase(const NoiseProfile& noise, double mirror) { return mirror - noise.phase_offset_error; }

struct Calibrated {
  stats::PhaseCalibration cal;
  std::vector<CountRecord> records;
};

// Case-I mirror scan of both ports followed by fringe-based phase calibration.
Calibrated calibrate_mirror(const NoiseProfile& noise, const std::array<double, 4>& offsets,
                            const PureState& psi0, const std::string& label, int n_points) {
  const std::vector<double> grid = scan_grid(n_points);
  Calibrated out;
  out.records.reserve(2 * grid.size());
  for (const Port port : {Port::D1, Port::D2}) {
    const std::string port_label = label + "/" + std::string(optics::to_string(port));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto cfg = with_noise(InterferometerConfig::case_one(true_phase(noise, grid[i])), noise, offsets);
      const double p = optics::detection_probability(cfg, port, psi0);
      out.records.push_back({port_label, grid[i], port, noise.source.integration_time,
                             measure_counts(noise, p, port_label, i)});
    }
  }
  out.cal = stats::calibrate_phase(out.records);
  return out;
}

io::Json echo(const NoiseProfile& noise) { return io::to_json(noise); }

io::Json echo(const PureState& psi) {
  return io::Json::array({io::Json::array({psi.alpha().real(), psi.alpha().imag()}),
                          io::Json::array({psi.beta().real(), psi.beta().imag()})});
}

// Process fidelity against sigma_y from 4x6 tomography counts via linear
// inversion; used only to propagate shot noise into the reported fidelity.
double linear_route_fidelity(const std::array<tomo::SettingCounts, 4>& counts, const tomo::ChiMatrix& ideal) {
  std::array<Matrix2, 4> inputs = {
      DensityMatrix::from_pure(PureState::H()).matrix(), DensityMatrix::from_pure(PureState::V()).matrix(),
      DensityMatrix::from_pure(PureState::D()).matrix(), DensityMatrix::from_pure(PureState::R()).matrix()};
  std::array<Matrix2, 4> outputs;
  for (std::size_t i = 0; i < 4; ++i) outputs[i] = tomo::qst_linear(counts[i]).matrix;
  return tomo::process_fidelity(tomo::qpt_reconstruct(inputs, outputs), ideal).raw;
}

double fidelity_delta_method_stderr(const std::array<tomo::SettingCounts, 4>& counts,
                                    const tomo::ChiMatrix& ideal) {
  double variance = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < tomo::kNumSettings; ++j) {
      const double n = counts[i][j];
      if (n <= 0.0) continue;
      const double h = std::max(0.5, 1e-4 * n);
      auto up = counts;
      auto down = counts;
      up[i][j] += h;
      down[i][j] -= h;
      const double slope = (linear_route_fidelity(up, ideal) - linear_route_fidelity(down, ideal)) / (2.0 * h);
      variance += slope * slope * n;
    }
  }
  return std::sqrt(variance);
}

}  // namespace

void NoiseProfile::validate() const {
  if (!(waveplate_angle_sigma >= 0.0) || !std::isfinite(waveplate_angle_sigma)) {
    throw std::invalid_argument("NoiseProfile: waveplate_angle_sigma must be >= 0");
  }
  if (!std::isfinite(phase_offset_error)) {
    throw std::invalid_argument("NoiseProfile: phase_offset_error must be finite");
  }
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("NoiseProfile: visibility must lie in [0, 1]");
  }
  detector.validate();
  source.validate();
}

void ExperimentReport::set(const std::string& name, double value, std::optional<double> stderr) {
  for (auto& [key, q] : derived) {
    if (key == name) {
      q = Quantity{value, stderr};
      return;
    }
  }
  derived.emplace_back(name, Quantity{value, stderr});
}

bool ExperimentReport::has(const std::string& name) const {
  return std::any_of(derived.begin(), derived.end(), [&](const auto& kv) { return kv.first == name; });
}

const Quantity& ExperimentReport::at(const std::string& name) const {
  for (const auto& [key, q] : derived) {
    if (key == name) return q;
  }
  throw std::out_of_range("ExperimentReport: no derived quantity '" + name + "'");
}

std::array<double, 4> draw_plate_offsets(const NoiseProfile& noise) {
  stats::Rng rng(stats::derive_seed(noise.master_seed, "plate-angles", 0));
  std::array<double, 4> offsets{};
  for (double& d : offsets) d = noise.waveplate_angle_sigma * rng.normal();
  return offsets;
}

InterferometerConfig perturbed(InterferometerConfig cfg, const std::array<double, 4>& offsets) {
  cfg.sigma1 = cfg.sigma1.rotated(offsets[0]);
  cfg.sigma2 = cfg.sigma2.rotated(offsets[1]);
  cfg.sigma3 = cfg.sigma3.rotated(offsets[2]);
  cfg.sigma4 = cfg.sigma4.rotated(offsets[3]);
  return cfg;
}

double measure_counts(const NoiseProfile& noise, double probability, const std::string& label,
                      std::uint64_t index) {
  const double p = std::clamp(probability, 0.0, 1.0);
  const double rate = stats::expected_rate(p, noise.source, noise.detector);
  if (!sampled(noise)) return rate * noise.source.integration_time;
  return static_cast<double>(stats::sample_counts(rate, noise.source.integration_time,
                                                  stats::derive_seed(noise.master_seed, label, index)));
}

ExperimentReport run_phase_scan(const NoiseProfile& noise, int n_points, const PureState& psi0) {
  noise.validate();
  ExperimentReport report;
  report.experiment_id = "phase-scan";
  report.inputs = {{"noise", echo(noise)}, {"n_points", n_points}, {"psi0", echo(psi0)}};

  const auto offsets = draw_plate_offsets(noise);
  Calibrated run = calibrate_mirror(noise, offsets, psi0, "phase-scan", n_points);
  const auto& cal = run.cal;
  report.records = std::move(run.records);

  for (const auto& [name, fit] : {std::pair{"d1", &cal.d1}, std::pair{"d2", &cal.d2}}) {
    const std::string prefix(name);
    report.set(prefix + "_offset", fit->offset, uncertainty(noise, fit->offset_stderr));
    report.set(prefix + "_amplitude", fit->amplitude, uncertainty(noise, fit->amplitude_stderr));
    report.set(prefix + "_phase", fit->phase, uncertainty(noise, fit->phase_stderr));
    report.set(prefix + "_visibility", fit->fringe_visibility, uncertainty(noise, fringe_visibility_stderr(*fit)));
    report.set(prefix + "_residual_rms", fit->residual_rms);
  }
  report.set("d2_minus_d1_phase", std::abs(stats::wrap_angle(cal.d2.phase - cal.d1.phase)),
             uncertainty(noise, std::hypot(cal.d1.phase_stderr, cal.d2.phase_stderr)));
  report.set("phi0", cal.phi0, uncertainty(noise, cal.stderr));
  return report;
}

ExperimentReport run_case_comparison(const NoiseProfile& noise, const PureState& psi0,
                                     const CaseComparisonOptions& options) {
  noise.validate();
  ExperimentReport report;
  report.experiment_id = "case-compare";
  report.inputs = {{"noise", echo(noise)},
                   {"psi0", echo(psi0)},
                   {"block_transmitted", options.block_transmitted},
                   {"block_reflected", options.block_reflected}};

  const auto offsets = draw_plate_offsets(noise);
  Calibrated cal = calibrate_mirror(noise, offsets, psi0, "case-compare/calibration", kCalibrationPoints);
  report.records = std::move(cal.records);
  const double mirror = cal.cal.phi0;
  report.set("phi0", mirror, uncertainty(noise, cal.cal.stderr));

  struct Cell {
    double counts;
    double normalized;
    double normalized_stderr;
  };
  std::array<std::array<Cell, 2>, 2> cells{};  // [case][port]
  const std::array<std::string, 2> case_names = {"caseI", "caseII"};
  for (int c = 0; c < 2; ++c) {
    auto base = c == 0 ? InterferometerConfig::case_one(true_phase(noise, mirror))
                       : InterferometerConfig::case_two(true_phase(noise, mirror));
    auto cfg = with_noise(base, noise, offsets);
    cfg.block_transmitted = options.block_transmitted;
    cfg.block_reflected = options.block_reflected;
    for (const Port port : {Port::D1, Port::D2}) {
      const std::string label = "case-compare/" + case_names[c] + "/" + std::string(optics::to_string(port));
      const double n = measure_counts(noise, optics::detection_probability(cfg, port, psi0), label, 0);
      cells[c][port == Port::D1 ? 0 : 1].counts = n;
      report.records.push_back({label, mirror, port, noise.source.integration_time, n});
    }
    const double total = cells[c][0].counts + cells[c][1].counts;
    for (Cell& cell : cells[c]) {
      cell.normalized = total > 0.0 ? cell.counts / total : 0.0;
      cell.normalized_stderr =
          total > 0.0 ? std::sqrt(cell.normalized * (1.0 - cell.normalized) / total) : 0.0;
    }
  }

  const double t = noise.source.integration_time;
  for (int c = 0; c < 2; ++c) {
    for (int p = 0; p < 2; ++p) {
      const std::string cell_name = case_names[c] + (p == 0 ? "_D1" : "_D2");
      report.set(cell_name, cells[c][p].normalized, uncertainty(noise, cells[c][p].normalized_stderr));
      report.set("rate_" + cell_name, cells[c][p].counts / t, uncertainty(noise, std::sqrt(cells[c][p].counts) / t));
    }
  }

  // Port exchange: case II (D1, D2) matches case I (D2, D1), and case I
  // itself shows a significant contrast.
  auto band = [&](const Cell& a, const Cell& b) {
    return 3.0 * std::hypot(a.normalized_stderr, b.normalized_stderr) + 1e-9;
  };
  const bool exchanged = std::abs(cells[0][0].normalized - cells[1][1].normalized) <= band(cells[0][0], cells[1][1]) &&
                         std::abs(cells[0][1].normalized - cells[1][0].normalized) <= band(cells[0][1], cells[1][0]);
  const bool contrast = cells[0][0].normalized - cells[0][1].normalized > band(cells[0][0], cells[0][1]);
  report.set("pi_shift_verified", exchanged && contrast ? 1.0 : 0.0);
  return report;
}

ExperimentReport run_commutator_qpt(const NoiseProfile& noise) {
  noise.validate();
  ExperimentReport report;
  report.experiment_id = "qpt";
  report.inputs = {{"noise", echo(noise)}};

  const auto offsets = draw_plate_offsets(noise);
  Calibrated cal = calibrate_mirror(noise, offsets, PureState::V(), "qpt/calibration", kCalibrationPoints);
  report.records = std::move(cal.records);
  const double mirror = cal.cal.phi0;
  report.set("phi0", mirror, uncertainty(noise, cal.cal.stderr));

  const auto cfg = with_noise(InterferometerConfig::case_two(true_phase(noise, mirror)), noise, offsets);
  const std::array<std::pair<const char*, PureState>, 4> inputs = {
      {{"H", PureState::H()}, {"V", PureState::V()}, {"D", PureState::D()}, {"R", PureState::R()}}};

  std::array<tomo::SettingCounts, 4> counts{};
  std::vector<DensityMatrix> reconstructed;
  bool all_converged = true;
  const auto& settings = tomo::tomography_settings();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& [name, psi] = inputs[i];
    const Matrix2 out = optics::unnormalized_output(cfg, Port::D2, DensityMatrix::from_pure(psi));
    const double p_port = out.trace().real();
    if (p_port < 1e-15) {
      throw ZeroProbability("experiments::run_commutator_qpt", std::string("D2 is dark for input ") + name);
    }
    const auto q = tomo::setting_probabilities(out / p_port);
    for (std::size_t j = 0; j < tomo::kNumSettings; ++j) {
      const std::string label = std::string("qpt/in=") + name + "/proj=" + std::string(settings[j].label);
      counts[i][j] = measure_counts(noise, p_port * q[j], label, 0);
      report.records.push_back({label, mirror, Port::D2, noise.source.integration_time, counts[i][j]});
    }
    tomo::MleResult mle = tomo::qst_mle(counts[i]);
    all_converged = all_converged && mle.converged;
    reconstructed.push_back(mle.rho);
  }

  const tomo::ChiMatrix chi =
      tomo::qpt_reconstruct(tomo::QptOutputs{reconstructed[0], reconstructed[1], reconstructed[2], reconstructed[3]});
  const tomo::ChiMatrix ideal = tomo::chi_of_unitary(pauli(Axis::y));
  const tomo::FidelityResult fidelity = tomo::process_fidelity(chi, ideal);

  std::optional<double> fidelity_stderr;
  if (sampled(noise)) fidelity_stderr = fidelity_delta_method_stderr(counts, ideal);
  report.set("fidelity", fidelity.value, fidelity_stderr);
  report.set("fidelity_raw", fidelity.raw);
  report.set("fidelity_clamped", fidelity.clamped ? 1.0 : 0.0);
  report.set("chi_yy", chi(2, 2).real());
  report.set("chi_min_eigenvalue", chi.min_eigenvalue());
  report.set("trace_preservation_deviation", chi.trace_preservation_deviation());
  report.set("mle_converged", all_converged ? 1.0 : 0.0);
  report.chi = chi;
  return report;
}

KMagnitude estimate_k_magnitude(const NoiseProfile& noise, const PureState& psi0) {
  noise.validate();
  ExperimentReport report;
  report.experiment_id = "estimate-k";
  report.inputs = {{"noise", echo(noise)}, {"psi0", echo(psi0)}};

  const auto offsets = draw_plate_offsets(noise);
  Calibrated cal = calibrate_mirror(noise, offsets, psi0, "estimate-k/calibration", kCalibrationPoints);
  report.records = std::move(cal.records);
  const double mirror = cal.cal.phi0;
  report.set("phi0", mirror, uncertainty(noise, cal.cal.stderr));

  const auto open = with_noise(InterferometerConfig::case_two(true_phase(noise, mirror)), noise, offsets);
  auto upper_only = open;
  upper_only.block_transmitted = true;  // N_u
  auto lower_only = open;
  lower_only.block_reflected = true;  // N_l

  auto run = [&](const InterferometerConfig& cfg, const std::string& label) {
    const double n = measure_counts(noise, optics::detection_probability(cfg, Port::D2, psi0), label, 0);
    report.records.push_back({label, mirror, Port::D2, noise.source.integration_time, n});
    return n;
  };
  const double n_raw = run(open, "estimate-k/open");
  const double nu_raw = run(upper_only, "estimate-k/block-transmitted");
  const double nl_raw = run(lower_only, "estimate-k/block-reflected");

  const double dark = noise.detector.dark_rate * noise.source.integration_time;
  const double n = n_raw - dark;
  const double denom = (nu_raw - dark) + (nl_raw - dark);
  if (!(denom > 0.0)) {
    throw ZeroDenominator("experiments::estimate_k_magnitude", "N_u + N_l is not positive after dark subtraction");
  }
  const double k = n / denom;
  // Poisson propagation: var(N) = N_raw, var(N_u + N_l) = N_u,raw + N_l,raw.
  const double stderr = std::sqrt(n_raw / (denom * denom) + n * n * (nu_raw + nl_raw) / std::pow(denom, 4));

  report.set("k_abs", k, stderr);
  report.set("N", n_raw / noise.source.integration_time, uncertainty(noise, std::sqrt(n_raw) / noise.source.integration_time));
  report.set("N_u", nu_raw / noise.source.integration_time, uncertainty(noise, std::sqrt(nu_raw) / noise.source.integration_time));
  report.set("N_l", nl_raw / noise.source.integration_time, uncertainty(noise, std::sqrt(nl_raw) / noise.source.integration_time));
  return KMagnitude{k, stderr, std::move(report)};
}

ExperimentReport run_phase_of_k(const NoiseProfile& noise, const PureState& psi0, const PhaseOfKOptions& options) {
  noise.validate();
  const double outer_visibility = options.outer_visibility.value_or(noise.visibility);
  if (!(outer_visibility >= 0.0 && outer_visibility <= 1.0)) {
    throw std::invalid_argument("run_phase_of_k: outer visibility must lie in [0, 1]");
  }
  ExperimentReport report;
  report.experiment_id = "phase-of-k";
  report.inputs = {{"noise", echo(noise)},
                   {"psi0", echo(psi0)},
                   {"n_points", options.n_points},
                   {"outer_visibility", outer_visibility},
                   {"reference_only", options.reference_only}};

  const auto offsets = draw_plate_offsets(noise);
  Calibrated cal = calibrate_mirror(noise, offsets, psi0, "phase-of-k/calibration", kCalibrationPoints);
  report.records = std::move(cal.records);
  const double mirror = cal.cal.phi0;
  report.set("phi0", mirror, uncertainty(noise, cal.cal.stderr));

  const auto inner = with_noise(InterferometerConfig::case_two(true_phase(noise, mirror)), noise, offsets);
  const Operator2 reference = pauli(Axis::y);
  const Operator2 commutator_port = options.reference_only ? reference : optics::port_operator(inner, Port::D2);

  // Outer port amplitude: (1/2)(M psi - e^{i phi_ref} sigma_y psi).
  const std::vector<double> grid = scan_grid(options.n_points);
  auto scan = [&](const Operator2& inner_op, const std::string& label) {
    std::vector<double> counts;
    counts.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double p = optics::superposed_probability(reference, inner_op, grid[i], outer_visibility, -1.0, psi0);
      counts.push_back(measure_counts(noise, p, label, i));
      report.records.push_back({label, grid[i], Port::D2, noise.source.integration_time, counts.back()});
    }
    const stats::SinusoidFit fit = stats::fit_sinusoid(grid, counts);
    if (fit.flat) {
      throw DegenerateScan("experiments::run_phase_of_k", "flat outer fringe in scan '" + label + "'");
    }
    return fit;
  };
  const stats::SinusoidFit with_commutator = scan(commutator_port, "phase-of-k/commutator");
  const stats::SinusoidFit with_reference = scan(reference, "phase-of-k/reference");

  const double arg_k = stats::wrap_angle(with_commutator.phase - with_reference.phase);
  const double arg_se = std::hypot(with_commutator.phase_stderr, with_reference.phase_stderr);
  report.set("arg_k", arg_k, uncertainty(noise, arg_se));
  report.set("arg_k_over_pi", arg_k / kPi, uncertainty(noise, arg_se / kPi));
  report.set("commutator_fringe_phase", with_commutator.phase, uncertainty(noise, with_commutator.phase_stderr));
  report.set("reference_fringe_phase", with_reference.phase, uncertainty(noise, with_reference.phase_stderr));
  report.set("commutator_fringe_visibility", with_commutator.fringe_visibility,
             uncertainty(noise, fringe_visibility_stderr(with_commutator)));
  report.set("reference_fringe_visibility", with_reference.fringe_visibility,
             uncertainty(noise, fringe_visibility_stderr(with_reference)));
  return report;
}

FidelityStudy fidelity_study(const NoiseProfile& noise, int n_seeds) {
  if (n_seeds < 1) throw std::invalid_argument("fidelity_study: n_seeds must be >= 1");
  noise.validate();
  std::vector<std::optional<double>> runs(static_cast<std::size_t>(n_seeds));
  parallel_for(n_seeds, [&](int i) {
    NoiseProfile run = noise;
    run.master_seed = stats::derive_seed(noise.master_seed, "fidelity-study", static_cast<std::uint64_t>(i));
    try {
      runs[static_cast<std::size_t>(i)] = run_commutator_qpt(run).value("fidelity");
    } catch (const DegenerateScan&) {
    } catch (const CalibrationInconsistent&) {
    }
  });
  FidelityStudy study;
  for (const auto& f : runs) {
    if (f) {
      study.per_seed.push_back(*f);
    } else {
      ++study.failed_calibrations;
    }
  }
  if (study.per_seed.empty()) {
    throw DegenerateScan("experiments::fidelity_study", "mirror calibration failed for every seed");
  }
  const double n = static_cast<double>(study.per_seed.size());
  double sum = 0.0;
  for (double f : study.per_seed) sum += f;
  study.mean = sum / n;
  double ss = 0.0;
  for (double f : study.per_seed) ss += (f - study.mean) * (f - study.mean);
  study.stderr = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
  return study;
}

NoiseCalibration calibrate_noise(const NoiseProfile& base, double target, int n_seeds, double tol) {
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("calibrate_noise: target must lie in (0, 1)");
  auto study_at = [&](double sigma) {
    NoiseProfile p = base;
    p.waveplate_angle_sigma = sigma;
    return fidelity_study(p, n_seeds);
  };

  NoiseCalibration result;
  double lo = 0.0;
  double hi = 0.25;
  FidelityStudy hi_study = study_at(hi);
  int iterations = 1;
  while (hi_study.mean > target && hi < 1.5) {
    lo = hi;
    hi *= 2.0;
    hi_study = study_at(hi);
    ++iterations;
  }
  double best_sigma = hi;
  FidelityStudy best = hi_study;
  for (int i = 0; i < 40 && std::abs(best.mean - target) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    FidelityStudy s = study_at(mid);
    ++iterations;
    if (std::abs(s.mean - target) < std::abs(best.mean - target)) {
      best = s;
      best_sigma = mid;
    }
    if (s.mean > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.waveplate_angle_sigma = best_sigma;
  result.study = std::move(best);
  result.iterations = iterations;
  result.profile = base;
  result.profile.waveplate_angle_sigma = best_sigma;
  return result;
}

}  // namespace polcomm::experiments
