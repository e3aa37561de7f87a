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

#include "polcomm/qubit.hpp"

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace polcomm::tomo {

/// Six-setting polarization analysis: three mutually unbiased bases.
enum class Setting { H = 0, V, D, A, R, L };

inline constexpr std::size_t kNumSettings = 6;

struct MeasurementSetting {
  Setting setting;
  std::string_view label;
  Operator2 projector;
};

/// Projectors onto H, V, D = (H+V)/sqrt2, A = (H-V)/sqrt2, R = (H-iV)/sqrt2,
/// L = (H+iV)/sqrt2, in that order.
const std::array<MeasurementSetting, kNumSettings>& tomography_settings();

/// Counts (or expected counts) per setting, indexed by Setting.
using SettingCounts = std::array<double, kNumSettings>;

/// Tr(rho P) for each setting.
SettingCounts setting_probabilities(const Matrix2& rho);

/// Stokes-parameter inversion. The estimate can have a negative eigenvalue
/// under shot noise; it is returned as-is together with a physicality flag.
struct LinearEstimate {
  Matrix2 matrix;
  double min_eigenvalue = 0.0;
  bool physical = true;

  /// Throws std::invalid_argument if the estimate is not physical.
  DensityMatrix to_density() const { return DensityMatrix(matrix); }
};

/// Throws EmptyData if one of the pairs (H,V), (D,A), (R,L) has zero total.
LinearEstimate qst_linear(const SettingCounts& counts);

struct MleResult {
  DensityMatrix rho;
  bool converged = false;
  int iterations = 0;
  /// Mean log-likelihood per count after each accepted step, starting with
  /// the initial point. Non-decreasing.
  std::vector<double> log_likelihood;
};

/// Maximum-likelihood state under the Poisson model with per-basis
/// intensities profiled out, parameterized as rho = T^dag T / Tr(T^dag T)
/// with T upper-triangular with real diagonal. BFGS with an Armijo
/// backtracking line search. On hitting max_iter the best iterate is returned
/// with converged = false.
MleResult qst_mle(const SettingCounts& counts, double tol = 1e-10, int max_iter = 500);

namespace detail {

using Params = Eigen::Vector4d;

struct Objective {
  double value;  // mean log-likelihood per count; -inf outside the support
  Params gradient;
};

/// T = [[t0, t2 + i t3], [0, t1]]; returns T^dag T / Tr.
Matrix2 rho_from_params(const Params& t);
/// Inverse of rho_from_params for a positive-definite rho with unit trace.
Params params_from_rho(const Matrix2& rho);
Objective mle_objective(const Params& t, const SettingCounts& counts);

}  // namespace detail

/// Process matrix in the fixed operator basis (I, sx, sy, sz):
///   E(rho) = sum_mn chi_mn E_m rho E_n^dag.
class ChiMatrix {
 public:
  /// Hermitizes the input. Positivity and trace preservation are reported,
  /// not enforced.
  explicit ChiMatrix(const Eigen::Matrix4cd& m);

  const Eigen::Matrix4cd& matrix() const { return m_; }
  Complex operator()(int m, int n) const { return m_(m, n); }

  double min_eigenvalue() const;
  /// Max entrywise |sum_mn chi_mn E_n^dag E_m - I|.
  double trace_preservation_deviation() const;
  Matrix2 apply(const Matrix2& rho) const;

 private:
  Eigen::Matrix4cd m_;
};

/// Output states of the process for the inputs H, V, D, R.
struct QptOutputs {
  DensityMatrix h;
  DensityMatrix v;
  DensityMatrix d;
  DensityMatrix r;
};

ChiMatrix qpt_reconstruct(const QptOutputs& outputs);

/// General linear inversion from input/output pairs; throws SingularSystem if
/// the inputs do not span the 2x2 operator space.
ChiMatrix qpt_reconstruct(std::span<const Matrix2> inputs, std::span<const Matrix2> outputs);

/// chi_mn = c_m conj(c_n) with u = sum_m c_m E_m. Throws NotUnitary.
ChiMatrix chi_of_unitary(const Operator2& u, double tol = kDefaultTol);

struct FidelityResult {
  double value = 0.0;  // clamped to [0, 1]
  double raw = 0.0;    // Re Tr(chi_exp chi_ideal)
  bool clamped = false;
};

FidelityResult process_fidelity(const ChiMatrix& chi_exp, const ChiMatrix& chi_ideal);

}  // namespace polcomm::tomo
