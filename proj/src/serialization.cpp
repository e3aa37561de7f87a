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

#include "polcomm/serialization.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace polcomm::io {

namespace {

template <class Mat>
Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Mat>
Mat matrix_from_json(const Json& j, const Json& expected_basis) {
  if (!j.is_object() || !j.contains("basis") || !j.contains("entries")) {
    throw std::invalid_argument("matrix JSON needs 'basis' and 'entries'");
  }
  if (j.at("basis") != expected_basis) {
    throw std::invalid_argument("unexpected basis order " + j.at("basis").dump());
  }
  const Json& rows = j.at("entries");
  Mat m;
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != m.rows()) {
    throw std::invalid_argument("matrix JSON has the wrong number of rows");
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Json& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols()) {
      throw std::invalid_argument("matrix JSON has the wrong number of columns");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Json& z = row.at(static_cast<std::size_t>(c));
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw std::invalid_argument("matrix entries must be [re, im] pairs");
      }
      m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

const Json& state_basis() {
  static const Json basis = Json::array({"H", "V"});
  return basis;
}

const Json& process_basis() {
  static const Json basis = Json::array({"I", "X", "Y", "Z"});
  return basis;
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const char* what) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw std::invalid_argument(std::string("unknown field '") + key + "' in " + what);
    }
  }
}

template <class T>
void read_if(const Json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("field '") + key + "': " + e.what());
    }
  }
}

}  // namespace

Json to_json(const DensityMatrix& rho) {
  return Json{{"basis", state_basis()}, {"entries", matrix_to_json(rho.matrix())}};
}

Json to_json(const tomo::ChiMatrix& chi) {
  return Json{{"basis", process_basis()}, {"entries", matrix_to_json(chi.matrix())}};
}

Json to_json(const stats::CountRecord& record) {
  return Json{{"setting", record.setting_label},
              {"phi", record.phi},
              {"port", std::string(optics::to_string(record.port))},
              {"duration", record.duration},
              {"counts", record.counts}};
}

Json to_json(const experiments::NoiseProfile& noise) {
  return Json{{"waveplate_angle_sigma", noise.waveplate_angle_sigma},
              {"phase_offset_error", noise.phase_offset_error},
              {"visibility", noise.visibility},
              {"detector", {{"efficiency", noise.detector.efficiency}, {"dark_rate", noise.detector.dark_rate}}},
              {"source",
               {{"pair_rate", noise.source.pair_rate}, {"integration_time", noise.source.integration_time}}},
              {"master_seed", noise.master_seed},
              {"sampling", noise.sampling == experiments::Sampling::exact ? "exact" : "poisson"}};
}

Json to_json(const experiments::ExperimentReport& report) {
  Json derived = Json::object();
  for (const auto& [name, q] : report.derived) {
    derived[name] = Json{{"value", q.value}, {"stderr", q.stderr ? Json(*q.stderr) : Json(nullptr)}};
  }
  Json records = Json::array();
  for (const auto& r : report.records) records.push_back(to_json(r));

  Json out{{"experiment_id", report.experiment_id}, {"inputs", report.inputs}, {"derived", derived}};
  if (report.chi) out["chi"] = to_json(*report.chi);
  out["records"] = std::move(records);
  return out;
}

DensityMatrix density_from_json(const Json& j) {
  return DensityMatrix(matrix_from_json<Matrix2>(j, state_basis()));
}

tomo::ChiMatrix chi_from_json(const Json& j) {
  return tomo::ChiMatrix(matrix_from_json<Eigen::Matrix4cd>(j, process_basis()));
}

experiments::NoiseProfile noise_from_json(const Json& j, const experiments::NoiseProfile& defaults) {
  if (!j.is_object()) throw std::invalid_argument("noise profile must be a JSON object");
  reject_unknown(j,
                 {"waveplate_angle_sigma", "phase_offset_error", "visibility", "detector", "source", "master_seed",
                  "sampling"},
                 "noise profile");
  experiments::NoiseProfile noise = defaults;
  read_if(j, "waveplate_angle_sigma", noise.waveplate_angle_sigma);
  read_if(j, "phase_offset_error", noise.phase_offset_error);
  read_if(j, "visibility", noise.visibility);
  read_if(j, "master_seed", noise.master_seed);
  if (j.contains("detector")) {
    const Json& d = j.at("detector");
    if (!d.is_object()) throw std::invalid_argument("'detector' must be an object");
    reject_unknown(d, {"efficiency", "dark_rate"}, "detector");
    read_if(d, "efficiency", noise.detector.efficiency);
    read_if(d, "dark_rate", noise.detector.dark_rate);
  }
  if (j.contains("source")) {
    const Json& s = j.at("source");
    if (!s.is_object()) throw std::invalid_argument("'source' must be an object");
    reject_unknown(s, {"pair_rate", "integration_time"}, "source");
    read_if(s, "pair_rate", noise.source.pair_rate);
    read_if(s, "integration_time", noise.source.integration_time);
  }
  if (j.contains("sampling")) {
    std::string mode;
    read_if(j, "sampling", mode);
    if (mode == "exact") {
      noise.sampling = experiments::Sampling::exact;
    } else if (mode == "poisson") {
      noise.sampling = experiments::Sampling::poisson;
    } else {
      throw std::invalid_argument("sampling must be 'poisson' or 'exact'");
    }
  }
  noise.validate();
  return noise;
}

}  // namespace polcomm::io
