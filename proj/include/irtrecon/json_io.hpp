// Copyright 2026 The irtrecon Authors. All Rights Reserved.
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


#ifndef IRTRECON_JSON_IO_HPP_
#define IRTRECON_JSON_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"

#include "irtrecon/irt.hpp"
#include "irtrecon/matdec.hpp"
#include "irtrecon/metrics.hpp"
#include "irtrecon/svd.hpp"

namespace irtrecon {

using Json = nlohmann::ordered_json;

inline Json vector_json(const Vector& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

inline Vector vector_from_json(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  Vector v(static_cast<Index>(values.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = values[static_cast<std::size_t>(i)];
  return v;
}

// Row-major nested arrays.
inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace irt {

inline Json to_json(const IrtModel& model) {
  return Json{{"scale", model.scale},
              {"abilities", vector_json(model.abilities)},
              {"discriminations", vector_json(model.discriminations)},
              {"difficulties", vector_json(model.difficulties)}};
}

inline IrtModel model_from_json(const Json& j) {
  IrtModel model;
  model.scale = j.at("scale").get<double>();
  model.abilities = vector_from_json(j.at("abilities"));
  model.discriminations = vector_from_json(j.at("discriminations"));
  model.difficulties = vector_from_json(j.at("difficulties"));
  check_model(model);
  return model;
}

inline Json to_json(const FitReport& report) {
  return Json{{"iterations", report.iterations},
              {"log_likelihood", report.log_likelihood},
              {"log_posterior", report.log_posterior},
              {"converged", report.converged},
              {"max_change", report.max_change}};
}

}  // namespace irt

namespace svd {

inline Json to_json(const SvdFactors& f) {
  return Json{{"sigma", vector_json(f.sigma)}, {"U", matrix_json(f.U)}, {"V", matrix_json(f.V)}};
}

}  // namespace svd

namespace matdec {

inline Json to_json(const FactorPair& f) {
  return Json{{"k", f.depth()}, {"U", matrix_json(f.U)}, {"V", matrix_json(f.V)}};
}

inline Json to_json(const FitReport& r) {
  return Json{{"epochs", r.epochs},
              {"objective", r.objective},
              {"converged", r.converged},
              {"max_change", r.max_change},
              {"step_reductions", r.step_reductions},
              {"learning_rate", r.learning_rate}};
}

}  // namespace matdec

namespace metrics {

inline Json to_json(const ComparisonTable& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries) {
    entries.push_back(Json{{"method", method_name(e.method)},
                           {"k", e.k ? Json(*e.k) : Json(nullptr)},
                           {"rmse", e.rmse},
                           {"accuracy", e.accuracy}});
  }
  return Json{{"matrix", t.matrix},
              {"rows", t.rows},
              {"cols", t.cols},
              {"complete", t.complete},
              {"entries", std::move(entries)}};
}

}  // namespace metrics

}  // namespace irtrecon

#endif  // IRTRECON_JSON_IO_HPP_
