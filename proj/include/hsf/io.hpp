#pragma once

// JSON and CSV serialization of the domain types and study reports.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hsf/frame.hpp"
#include "hsf/propagation.hpp"
#include "hsf/scale.hpp"
#include "hsf/sequence.hpp"

namespace hsf {

using nlohmann::json;

inline json to_json(const ScaleSpec& s) {
  return json{{"formula", s.weight_formula},
              {"n", s.truncation},
              {"weights", s.weights}};
}

inline ScaleSpec scale_from_json(const json& j) {
  ScaleSpec s = make_scale_explicit(j.at("weights").get<std::vector<double>>());
  s.weight_formula = j.at("formula").get<std::string>();
  if (j.at("n").get<int>() != s.truncation)
    throw std::invalid_argument("scale JSON: n does not match weights length");
  return s;
}

// Columns as arrays of [re, im] pairs.
inline json to_json(const SequenceFamily& f) {
  json cols = json::array();
  for (int k = 0; k < f.count(); ++k) {
    json col = json::array();
    for (int j = 0; j < f.vectors.rows(); ++j)
      col.push_back({f.vectors(j, k).real(), f.vectors(j, k).imag()});
    cols.push_back(std::move(col));
  }
  return json{{"label", f.label},
              {"ambient_index", f.ambient_index},
              {"columns", cols}};
}

inline SequenceFamily sequence_from_json(const json& j) {
  SequenceFamily f;
  f.label = j.at("label").get<std::string>();
  f.ambient_index = j.at("ambient_index").get<int>();
  const json& cols = j.at("columns");
  if (cols.empty()) throw std::invalid_argument("sequence JSON: no columns");
  const int n = static_cast<int>(cols[0].size());
  f.vectors.resize(n, static_cast<int>(cols.size()));
  for (int k = 0; k < f.count(); ++k)
    for (int r = 0; r < n; ++r)
      f.vectors(r, k) = Complex(cols[static_cast<size_t>(k)][static_cast<size_t>(r)][0],
                                cols[static_cast<size_t>(k)][static_cast<size_t>(r)][1]);
  return f;
}

// Coordinate matrix as CSV, one row per coordinate, columns "re_k,im_k".
inline std::string sequence_to_csv(const SequenceFamily& f) {
  std::ostringstream out;
  out.precision(17);
  for (int k = 0; k < f.count(); ++k) {
    out << (k ? "," : "") << "re_" << k + 1 << ",im_" << k + 1;
  }
  out << "\n";
  for (int j = 0; j < f.vectors.rows(); ++j) {
    for (int k = 0; k < f.count(); ++k) {
      out << (k ? "," : "") << f.vectors(j, k).real() << ","
          << f.vectors(j, k).imag();
    }
    out << "\n";
  }
  return out.str();
}

inline json to_json(const FrameBoundsRecord& r) {
  return json{{"lower", r.lower},
              {"upper", r.upper},
              {"lower_on_span", r.lower_on_span},
              {"index", r.index},
              {"truncation", r.truncation},
              {"sequence_label", r.sequence_label}};
}

inline json to_json(const CompletenessRecord& r) {
  return json{{"numerical_rank", r.numerical_rank},
              {"tolerance_used", r.tolerance_used},
              {"complete", r.complete}};
}

inline json to_json(const ClassificationRecord& r) {
  return json{{"truncations", r.truncations},
              {"lower_bounds", r.lower_bounds},
              {"upper_bounds", r.upper_bounds},
              {"verdict", to_string(r.verdict)},
              {"slope_lower", r.slope_lower},
              {"slope_upper", r.slope_upper}};
}

inline json to_json(const PropagationCheck& c) {
  return json{{"claim", c.claim},
              {"indices", c.indices},
              {"value", c.value},
              {"pass", c.pass}};
}

inline json to_json(const TransferReport& r) {
  json residuals = json::object();
  for (const auto& [name, v] : r.identity_residuals) residuals[name] = v;
  return json{{"identity_residuals", residuals},
              {"bounds_at_p", to_json(r.bound_pairs.at_p)},
              {"bounds_transformed_at_r", to_json(r.bound_pairs.transformed_at_r)},
              {"pass", r.pass},
              {"tolerance", r.tolerance}};
}

inline json to_json(const PropagationReport& r) {
  json bounds = json::array();
  for (const auto& b : r.bounds_table) bounds.push_back(to_json(b));
  json mono = json::array();
  for (const auto& c : r.monotonicity_checks) mono.push_back(to_json(c));
  json comp = json::array();
  for (const auto& c : r.completeness_checks) comp.push_back(to_json(c));
  return json{{"bounds_table", bounds},
              {"monotonicity_checks", mono},
              {"completeness_checks", comp},
              {"pass", r.pass}};
}

inline json to_json(const CollapseReport& r) {
  return json{{"truncations", r.truncations},
              {"lower_bound_at_q", r.lower_bound_at_q},
              {"upper_bound_at_p", r.upper_bound_at_p},
              {"iota_inverse_norms", r.iota_inverse_norms},
              {"bound_ratio_trend", r.bound_ratio_trend},
              {"interpretation", r.interpretation}};
}

inline json to_json(const DualityReport& r) {
  json checks = json::array();
  for (const auto& c : r.bessel_checks) checks.push_back(to_json(c));
  return json{{"max_reconstruction_residual", r.max_reconstruction_residual},
              {"bessel_checks", checks},
              {"pass", r.pass},
              {"tolerance", r.tolerance}};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hsf
