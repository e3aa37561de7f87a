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

// JSON forms of the library's values. Complex matrices are nested arrays of
// [re, im] pairs, row-major, next to a "basis" field naming the row/column
// order.

#include "polcomm/experiments.hpp"
#include "polcomm/qubit.hpp"
#include "polcomm/tomography.hpp"

#include "json.hpp"

namespace polcomm::io {

using Json = nlohmann::ordered_json;

Json to_json(const DensityMatrix& rho);
Json to_json(const tomo::ChiMatrix& chi);
Json to_json(const stats::CountRecord& record);
Json to_json(const experiments::NoiseProfile& noise);
Json to_json(const experiments::ExperimentReport& report);

/// Throws std::invalid_argument on a malformed document.
DensityMatrix density_from_json(const Json& j);
tomo::ChiMatrix chi_from_json(const Json& j);

/// Fields missing from `j` keep their value from `defaults`; unknown fields
/// are rejected.
experiments::NoiseProfile noise_from_json(const Json& j, const experiments::NoiseProfile& defaults = {});

}  // namespace polcomm::io
