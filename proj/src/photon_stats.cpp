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

#include "polcomm/photon_stats.hpp"

#include "polcomm/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>

namespace polcomm::stats {

namespace {

constexpr double kNormalApproxMean = 1.0e6;
constexpr double kSmallMean = 30.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string format_double(double v) {
  if (v == std::floor(v) && std::abs(v) < 9.0e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void SourceModel::validate() const {
  if (!(pair_rate > 0.0) || !(integration_time > 0.0) || !std::isfinite(pair_rate) ||
      !std::isfinite(integration_time)) {
    throw std::invalid_argument("SourceModel: pair_rate and integration_time must be positive");
  }
}

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("DetectorModel: efficiency must lie in [0, 1]");
  }
  if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate)) {
    throw std::invalid_argument("DetectorModel: dark_rate must be >= 0");
  }
}

double expected_rate(double p, const SourceModel& src, const DetectorModel& det) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("photon_stats::expected_rate: probability outside [0, 1]");
  }
  src.validate();
  det.validate();
  return src.pair_rate * det.efficiency * p + det.dark_rate;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ fnv1a(label)) ^ index);
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t sample_poisson(double mean, Rng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("photon_stats::sample_poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  if (mean > kNormalApproxMean) {
    const double draw = std::round(mean + std::sqrt(mean) * rng.normal());
    return draw <= 0.0 ? 0 : static_cast<std::uint64_t>(draw);
  }

  const double u = rng.uniform();
  if (mean < kSmallMean) {
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && p > 0.0) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  // Inversion started at the mode so the search costs O(sqrt(mean)) steps.
  const auto mode = static_cast<std::uint64_t>(std::floor(mean));
  const double m = static_cast<double>(mode);
  double p = std::exp(m * std::log(mean) - mean - std::lgamma(m + 1.0));
  double cdf = boost::math::gamma_q(m + 1.0, mean);
  std::uint64_t k = mode;
  if (u <= cdf) {
    while (k > 0 && u <= cdf - p) {
      cdf -= p;
      p *= static_cast<double>(k) / mean;
      --k;
    }
  } else {
    while (u > cdf && p > 0.0) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
  }
  return k;
}

std::uint64_t sample_counts(double rate, double duration, std::uint64_t seed) {
  if (!(rate >= 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("photon_stats::sample_counts: need rate >= 0 and duration > 0");
  }
  Rng rng(seed);
  return sample_poisson(rate * duration, rng);
}

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

SinusoidFit fit_sinusoid(std::span<const double> phis, std::span<const double> counts) {
  constexpr const char* kWhere = "photon_stats::fit_sinusoid";
  if (phis.size() != counts.size()) {
    throw DegenerateScan(kWhere, "phase and count lists differ in length");
  }
  const std::set<double> distinct(phis.begin(), phis.end());
  if (distinct.size() < 5) {
    throw DegenerateScan(kWhere, "need at least 5 distinct phases");
  }
  if (*distinct.rbegin() - *distinct.begin() < std::numbers::pi) {
    throw DegenerateScan(kWhere, "phase span below pi");
  }

  const auto n = static_cast<Eigen::Index>(phis.size());
  Eigen::MatrixX3d design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(phis[i]);
    design(i, 2) = std::sin(phis[i]);
    y(i) = counts[i];
  }
  const Eigen::Matrix3d normal = design.transpose() * design;
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
  if (lu.rank() < 3) {
    throw DegenerateScan(kWhere, "phases do not resolve a fringe");
  }
  const Eigen::Vector3d beta = lu.solve(design.transpose() * y);
  const Eigen::VectorXd residual = y - design * beta;
  const double rss = residual.squaredNorm();
  const double sigma2 = n > 3 ? rss / static_cast<double>(n - 3) : 0.0;
  const Eigen::Matrix3d cov = sigma2 * lu.inverse();

  SinusoidFit fit;
  fit.offset = beta(0);
  const double u = beta(1);
  const double v = beta(2);
  fit.amplitude = std::hypot(u, v);
  fit.phase = fit.amplitude > 0.0 ? std::atan2(v, u) : 0.0;
  fit.offset_stderr = std::sqrt(std::max(0.0, cov(0, 0)));
  if (fit.amplitude > 0.0) {
    const Eigen::Vector2d g_amp(u / fit.amplitude, v / fit.amplitude);
    const Eigen::Vector2d g_phase(-v / (fit.amplitude * fit.amplitude), u / (fit.amplitude * fit.amplitude));
    const Eigen::Matrix2d cuv = cov.bottomRightCorner<2, 2>();
    fit.amplitude_stderr = std::sqrt(std::max(0.0, g_amp.dot(cuv * g_amp)));
    fit.phase_stderr = std::sqrt(std::max(0.0, g_phase.dot(cuv * g_phase)));
  } else {
    fit.amplitude_stderr = std::sqrt(std::max(0.0, cov(1, 1) + cov(2, 2)));
    fit.phase_stderr = std::numbers::pi;
  }
  fit.residual_rms = std::sqrt(rss / static_cast<double>(n));

  const double mean = y.mean();
  const double shot_band = 3.0 * std::sqrt(std::max(mean, 1.0));
  fit.flat = (y.array() - mean).abs().maxCoeff() <= shot_band;
  if (!fit.flat && fit.offset > 0.0) {
    fit.fringe_visibility = std::clamp(fit.amplitude / fit.offset, 0.0, 1.0);
  }
  return fit;
}

PhaseCalibration calibrate_phase(std::span<const CountRecord> scan, double tolerance_sigmas) {
  constexpr const char* kWhere = "photon_stats::calibrate_phase";
  std::vector<double> phi_d1, n_d1, phi_d2, n_d2;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const CountRecord& r : scan) {
    auto& phis = r.port == optics::Port::D1 ? phi_d1 : phi_d2;
    auto& ns = r.port == optics::Port::D1 ? n_d1 : n_d2;
    phis.push_back(r.phi);
    ns.push_back(r.counts);
    lo = std::min(lo, r.phi);
    hi = std::max(hi, r.phi);
  }

  PhaseCalibration cal;
  cal.d1 = fit_sinusoid(phi_d1, n_d1);
  cal.d2 = fit_sinusoid(phi_d2, n_d2);
  if (cal.d1.flat || cal.d2.flat) {
    throw DegenerateScan(kWhere, "flat fringe, no phase reference");
  }
  cal.from_d1 = cal.d1.phase;
  cal.from_d2 = wrap_angle(cal.d2.phase + std::numbers::pi);

  const double diff = wrap_angle(cal.from_d1 - cal.from_d2);
  const double var1 = cal.d1.phase_stderr * cal.d1.phase_stderr;
  const double var2 = cal.d2.phase_stderr * cal.d2.phase_stderr;
  const double combined = std::sqrt(var1 + var2);
  if (std::abs(diff) > tolerance_sigmas * combined + 1e-9) {
    throw CalibrationInconsistent(kWhere, "D1 maximum and D2 minimum differ by " + std::to_string(diff) +
                                              " rad (combined stderr " + std::to_string(combined) + ")");
  }

  // Inverse-variance mean, expressed as a shift from the D1 estimate.
  const double weight_d2 = (var1 + var2) > 0.0 ? var1 / (var1 + var2) : 0.5;
  double phi0 = cal.from_d1 - weight_d2 * diff;
  const double mid = 0.5 * (lo + hi);
  phi0 = mid + wrap_angle(phi0 - mid);
  cal.phi0 = phi0;
  cal.stderr = (var1 + var2) > 0.0 ? std::sqrt(var1 * var2 / (var1 + var2)) : 0.0;
  return cal;
}

std::string to_csv(std::span<const CountRecord> records) {
  std::string out = "setting,phi,port,duration,counts\n";
  char buf[40];
  for (const CountRecord& r : records) {
    out += r.setting_label;
    out += ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.phi);
    out += buf;
    out += ',';
    out += optics::to_string(r.port);
    out += ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.duration);
    out += buf;
    out += ',';
    out += format_double(r.counts);
    out += '\n';
  }
  return out;
}

}  // namespace polcomm::stats
