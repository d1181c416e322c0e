#pragma once

// JSON file formats for states, POVMs and channels, plus CSV/JSON
// formatting shared by the command-line tool.
//
// matrix   : array of rows, each entry [re, im] (a bare number means im = 0)
// state    : {"dims": [..], "labels": [..], "matrix": M}
// povm     : {"dims": [..], "labels": [..], "elements": [M, ...]}
// channel  : {"input_dims", "input_labels", "output_dims", "output_labels", "kraus": [M, ...]}
//
// "labels" may be omitted; subsystems are then named A, B, C, ...

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdr/core/types.hpp"

namespace mdr::io {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) throw Error("matrix: expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw Error("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw Error("matrix: entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

inline SystemLayout layout_from_json(const Json& j, const std::string& dims_key = "dims",
                                     const std::string& labels_key = "labels") {
  if (!j.contains(dims_key) || !j[dims_key].is_array()) throw Error("missing integer array '" + dims_key + "'");
  std::vector<std::size_t> dims;
  for (const auto& d : j[dims_key]) {
    if (!d.is_number_integer() || d.get<long long>() <= 0) throw Error("'" + dims_key + "' entries must be positive integers");
    dims.push_back(d.get<std::size_t>());
  }
  std::vector<std::string> labels;
  if (j.contains(labels_key)) {
    labels = j[labels_key].get<std::vector<std::string>>();
  } else {
    for (std::size_t k = 0; k < dims.size(); ++k) labels.emplace_back(1, static_cast<char>('A' + k));
  }
  return {labels, dims};
}

inline void layout_to_json(Json& j, const SystemLayout& l, const std::string& dims_key = "dims",
                           const std::string& labels_key = "labels") {
  j[dims_key] = l.dims();
  j[labels_key] = l.labels();
}

inline DensityOperator state_from_json(const Json& j) {
  if (!j.contains("matrix")) throw Error("state: missing 'matrix'");
  return {layout_from_json(j), matrix_from_json(j["matrix"])};
}

inline Json state_to_json(const DensityOperator& rho) {
  Json j;
  layout_to_json(j, rho.layout());
  j["matrix"] = matrix_to_json(rho.matrix());
  return j;
}

inline Povm povm_from_json(const Json& j) {
  if (!j.contains("elements") || !j["elements"].is_array()) throw Error("povm: missing 'elements'");
  std::vector<Matrix> el;
  for (const auto& e : j["elements"]) el.push_back(matrix_from_json(e));
  return {layout_from_json(j), el};
}

inline Json povm_to_json(const Povm& p) {
  Json j;
  layout_to_json(j, p.layout());
  j["elements"] = Json::array();
  for (const auto& e : p.elements()) j["elements"].push_back(matrix_to_json(e));
  return j;
}

inline QuantumChannel channel_from_json(const Json& j) {
  if (!j.contains("kraus") || !j["kraus"].is_array()) throw Error("channel: missing 'kraus'");
  std::vector<Matrix> k;
  for (const auto& e : j["kraus"]) k.push_back(matrix_from_json(e));
  return {layout_from_json(j, "input_dims", "input_labels"), layout_from_json(j, "output_dims", "output_labels"), k};
}

inline Json channel_to_json(const QuantumChannel& c) {
  Json j;
  layout_to_json(j, c.input_layout(), "input_dims", "input_labels");
  layout_to_json(j, c.output_layout(), "output_dims", "output_labels");
  j["kraus"] = Json::array();
  for (const auto& k : c.kraus()) j["kraus"].push_back(matrix_to_json(k));
  return j;
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error("'" + path + "': " + e.what());
  }
}

inline DensityOperator load_state(const std::string& path) { return state_from_json(load_json(path)); }
inline Povm load_povm(const std::string& path) { return povm_from_json(load_json(path)); }
inline QuantumChannel load_channel(const std::string& path) { return channel_from_json(load_json(path)); }

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON cannot hold infinities; they become the strings "inf" / "-inf".
inline Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s;
}

}  // namespace mdr::io
