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

#include "polcomm/tomography.hpp"

#include "polcomm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace polcomm::tomo {

namespace {

Operator2 projector_onto(const PureState& psi) {
  const Vector2 v = psi.vector();
  return Operator2(v * v.adjoint());
}

double min_eigenvalue_of(const Matrix2& m) { return hermitian_eigenvalues(m)[0]; }

// Clips negative eigenvalues and mixes in a little white noise so the
// optimizer starts strictly inside the state space.
Matrix2 interior_start(const Matrix2& estimate) {
  const Matrix2 herm = 0.5 * (estimate + estimate.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(herm);
  Eigen::Vector2d values = eig.eigenvalues().cwiseMax(0.0);
  if (values.sum() <= 0.0) values.setConstant(0.5);
  values /= values.sum();
  const Matrix2 clipped = eig.eigenvectors() * values.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  return 0.9 * clipped + 0.05 * Matrix2::Identity();
}

// dT/dt_k for T = [[t0, t2 + i t3], [0, t1]].
const std::array<Matrix2, 4>& param_directions() {
  static const std::array<Matrix2, 4> dirs = [] {
    std::array<Matrix2, 4> d;
    for (auto& m : d) m.setZero();
    d[0](0, 0) = 1.0;
    d[1](1, 1) = 1.0;
    d[2](0, 1) = 1.0;
    d[3](0, 1) = kI;
    return d;
  }();
  return dirs;
}

Matrix2 factor_from_params(const detail::Params& t) {
  Matrix2 tm;
  tm << t(0), Complex(t(2), t(3)), 0.0, t(1);
  return tm;
}

}  // namespace

const std::array<MeasurementSetting, kNumSettings>& tomography_settings() {
  static const std::array<MeasurementSetting, kNumSettings> settings = {{
      {Setting::H, "H", projector_onto(PureState::H())},
      {Setting::V, "V", projector_onto(PureState::V())},
      {Setting::D, "D", projector_onto(PureState::D())},
      {Setting::A, "A", projector_onto(PureState::A())},
      {Setting::R, "R", projector_onto(PureState::R())},
      {Setting::L, "L", projector_onto(PureState::L())},
  }};
  return settings;
}

SettingCounts setting_probabilities(const Matrix2& rho) {
  SettingCounts p{};
  const auto& settings = tomography_settings();
  for (std::size_t j = 0; j < kNumSettings; ++j) {
    p[j] = std::max(0.0, (rho * settings[j].projector.matrix()).trace().real());
  }
  return p;
}

LinearEstimate qst_linear(const SettingCounts& counts) {
  auto stokes = [&](Setting plus, Setting minus, const char* pair) {
    const double np = counts[static_cast<std::size_t>(plus)];
    const double nm = counts[static_cast<std::size_t>(minus)];
    if (!(np >= 0.0) || !(nm >= 0.0)) {
      throw EmptyData("tomography::qst_linear", "negative count");
    }
    if (!(np + nm > 0.0)) {
      throw EmptyData("tomography::qst_linear", std::string("basis pair ") + pair + " recorded no counts");
    }
    return (np - nm) / (np + nm);
  };
  const double sz = stokes(Setting::H, Setting::V, "H/V");
  const double sx = stokes(Setting::D, Setting::A, "D/A");
  // <R|sy|R> = -1 with R = (H - iV)/sqrt2.
  const double sy = stokes(Setting::L, Setting::R, "R/L");

  LinearEstimate est;
  est.matrix = 0.5 * (Matrix2::Identity() + sx * pauli(Axis::x).matrix() + sy * pauli(Axis::y).matrix() +
                      sz * pauli(Axis::z).matrix());
  est.min_eigenvalue = min_eigenvalue_of(est.matrix);
  est.physical = est.min_eigenvalue >= -1e-9;
  return est;
}

namespace detail {

Matrix2 rho_from_params(const Params& t) {
  const Matrix2 tm = factor_from_params(t);
  const Matrix2 unnorm = tm.adjoint() * tm;
  return unnorm / unnorm.trace().real();
}

Params params_from_rho(const Matrix2& rho) {
  const double t0 = std::sqrt(std::max(rho(0, 0).real(), 0.0));
  if (!(t0 > 0.0)) {
    throw std::invalid_argument("tomography::params_from_rho: rho_HH must be positive");
  }
  const Complex c = rho(0, 1) / t0;
  const double t1 = std::sqrt(std::max(rho(1, 1).real() - std::norm(c), 0.0));
  return Params(t0, t1, c.real(), c.imag());
}

Objective mle_objective(const Params& t, const SettingCounts& counts) {
  const Matrix2 tm = factor_from_params(t);
  const Matrix2 unnorm = tm.adjoint() * tm;
  const double g = unnorm.trace().real();
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  Objective obj{0.0, Params::Zero()};
  if (!(g > 0.0) || !(total > 0.0)) {
    obj.value = -std::numeric_limits<double>::infinity();
    return obj;
  }

  const auto& dirs = param_directions();
  const Matrix2 tdag = tm.adjoint();
  Params dg;
  for (int k = 0; k < 4; ++k) dg(k) = 2.0 * (tdag * dirs[k]).trace().real();

  const auto& settings = tomography_settings();
  for (std::size_t j = 0; j < kNumSettings; ++j) {
    const double n = counts[j];
    if (n == 0.0) continue;
    const Matrix2& proj = settings[j].projector.matrix();
    const double f = (unnorm * proj).trace().real();
    if (!(f > 0.0)) {
      obj.value = -std::numeric_limits<double>::infinity();
      obj.gradient.setZero();
      return obj;
    }
    obj.value += n * std::log(f / g);
    for (int k = 0; k < 4; ++k) {
      const double df = 2.0 * (tdag * dirs[k] * proj).trace().real();
      obj.gradient(k) += n * (df / f - dg(k) / g);
    }
  }
  obj.value /= total;
  obj.gradient /= total;
  return obj;
}

}  // namespace detail

MleResult qst_mle(const SettingCounts& counts, double tol, int max_iter) {
  using detail::Params;
  const LinearEstimate start = qst_linear(counts);

  Params x = detail::params_from_rho(interior_start(start.matrix));
  detail::Objective cur = detail::mle_objective(x, counts);
  Eigen::Matrix4d inv_hessian = Eigen::Matrix4d::Identity();

  std::vector<double> history{cur.value};
  bool converged = false;
  int iter = 0;

  // Maximize by minimizing f = -L.
  auto try_direction = [&](const Params& dir, Params& x_new, detail::Objective& next) {
    const double slope = -cur.gradient.dot(dir);  // df along dir, negative for descent
    if (!(slope < 0.0)) return false;
    for (double step = 1.0; step > 1e-20; step *= 0.5) {
      x_new = x + step * dir;
      next = detail::mle_objective(x_new, counts);
      if (std::isfinite(next.value) && -next.value <= -cur.value + 1e-4 * step * slope &&
          next.value > cur.value) {
        return true;
      }
    }
    return false;
  };

  for (; iter < max_iter; ++iter) {
    Params x_new;
    detail::Objective next{};
    const Params grad_f = -cur.gradient;
    bool accepted = try_direction(-inv_hessian * grad_f, x_new, next);
    if (!accepted) {
      inv_hessian.setIdentity();
      accepted = try_direction(-grad_f, x_new, next);
    }
    if (!accepted) {
      // No representable improvement left in any descent direction.
      converged = true;
      break;
    }

    const Params s = x_new - x;
    const Params y = -next.gradient - grad_f;
    const double sy = s.dot(y);
    if (sy > 1e-16) {
      const double rho_k = 1.0 / sy;
      const Eigen::Matrix4d ident = Eigen::Matrix4d::Identity();
      inv_hessian = (ident - rho_k * s * y.transpose()) * inv_hessian * (ident - rho_k * y * s.transpose()) +
                    rho_k * s * s.transpose();
    }

    const double improvement = next.value - cur.value;
    x = x_new;
    cur = next;
    history.push_back(cur.value);
    if (improvement < tol && cur.gradient.norm() < 1e-9) {
      converged = true;
      ++iter;
      break;
    }
  }

  return MleResult{DensityMatrix::from_unnormalized(detail::rho_from_params(x)), converged, iter,
                   std::move(history)};
}

ChiMatrix::ChiMatrix(const Eigen::Matrix4cd& m) : m_(0.5 * (m + m.adjoint())) {
  if (!m_.allFinite()) {
    throw std::invalid_argument("ChiMatrix: non-finite entry");
  }
}

double ChiMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(m_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double ChiMatrix::trace_preservation_deviation() const {
  const auto& basis = pauli_basis();
  Matrix2 sum = Matrix2::Zero();
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      sum += m_(m, n) * basis[n].matrix().adjoint() * basis[m].matrix();
    }
  }
  return (sum - Matrix2::Identity()).cwiseAbs().maxCoeff();
}

Matrix2 ChiMatrix::apply(const Matrix2& rho) const {
  const auto& basis = pauli_basis();
  Matrix2 out = Matrix2::Zero();
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      out += m_(m, n) * basis[m].matrix() * rho * basis[n].matrix().adjoint();
    }
  }
  return out;
}

ChiMatrix qpt_reconstruct(std::span<const Matrix2> inputs, std::span<const Matrix2> outputs) {
  constexpr const char* kWhere = "tomography::qpt_reconstruct";
  if (inputs.size() != outputs.size() || inputs.size() < 4) {
    throw SingularSystem(kWhere, "need at least four input/output pairs");
  }
  const auto& basis = pauli_basis();
  const auto rows = static_cast<Eigen::Index>(4 * inputs.size());
  Eigen::MatrixXcd system(rows, 16);
  Eigen::VectorXcd rhs(rows);
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) {
        const Matrix2 image = basis[m].matrix() * inputs[j] * basis[n].matrix().adjoint();
        for (int e = 0; e < 4; ++e) {
          system(static_cast<Eigen::Index>(4 * j) + e, 4 * m + n) = image(e % 2, e / 2);
        }
      }
    }
    for (int e = 0; e < 4; ++e) {
      rhs(static_cast<Eigen::Index>(4 * j) + e) = outputs[j](e % 2, e / 2);
    }
  }

  Eigen::VectorXcd solution;
  if (rows == 16) {
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(system);
    if (lu.rank() < 16) {
      throw SingularSystem(kWhere, "input states do not span the operator space");
    }
    solution = lu.solve(rhs);
  } else {
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(system);
    if (cod.rank() < 16) {
      throw SingularSystem(kWhere, "input states do not span the operator space");
    }
    solution = cod.solve(rhs);
  }

  Eigen::Matrix4cd chi;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) chi(m, n) = solution(4 * m + n);
  }
  return ChiMatrix(chi);
}

ChiMatrix qpt_reconstruct(const QptOutputs& outputs) {
  const std::array<Matrix2, 4> inputs = {
      DensityMatrix::from_pure(PureState::H()).matrix(), DensityMatrix::from_pure(PureState::V()).matrix(),
      DensityMatrix::from_pure(PureState::D()).matrix(), DensityMatrix::from_pure(PureState::R()).matrix()};
  const std::array<Matrix2, 4> outs = {outputs.h.matrix(), outputs.v.matrix(), outputs.d.matrix(),
                                       outputs.r.matrix()};
  return qpt_reconstruct(inputs, outs);
}

ChiMatrix chi_of_unitary(const Operator2& u, double tol) {
  if (!u.is_unitary(tol)) {
    throw NotUnitary("tomography::chi_of_unitary", "operator is not unitary");
  }
  const auto& basis = pauli_basis();
  Eigen::Vector4cd c;
  for (int m = 0; m < 4; ++m) {
    c(m) = 0.5 * (basis[m].matrix().adjoint() * u.matrix()).trace();
  }
  return ChiMatrix(c * c.adjoint());
}

FidelityResult process_fidelity(const ChiMatrix& chi_exp, const ChiMatrix& chi_ideal) {
  FidelityResult r;
  r.raw = (chi_exp.matrix() * chi_ideal.matrix()).trace().real();
  r.value = std::clamp(r.raw, 0.0, 1.0);
  r.clamped = r.value != r.raw;
  return r;
}

}  // namespace polcomm::tomo
