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

#include <stdexcept>
#include <string>

namespace polcomm {

/// Base class for every failure raised by the library. `where()` names the
/// module operation that failed, e.g. "tomography::qst_linear".
class Error : public std::runtime_error {
 public:
  Error(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

#define POLCOMM_DEFINE_ERROR(Name)                \
  class Name : public Error {                     \
   public:                                        \
    using Error::Error;                           \
  }

/// A port whose conditional state is requested has (numerically) zero
/// detection probability.
POLCOMM_DEFINE_ERROR(ZeroProbability);
/// A phase scan is too short or too sparse to fit a fringe, or the fringe is
/// flat where one is required.
POLCOMM_DEFINE_ERROR(DegenerateScan);
/// D1 maximum and D2 minimum disagree beyond their fit uncertainty.
POLCOMM_DEFINE_ERROR(CalibrationInconsistent);
/// A tomography basis pair recorded no counts.
POLCOMM_DEFINE_ERROR(EmptyData);
/// The process tomography inputs do not span the operator space.
POLCOMM_DEFINE_ERROR(SingularSystem);
POLCOMM_DEFINE_ERROR(NotUnitary);
/// |k| estimate with no counts in either single-arm sub-run.
POLCOMM_DEFINE_ERROR(ZeroDenominator);

#undef POLCOMM_DEFINE_ERROR

}  // namespace polcomm
