#pragma once

// Experiment plans: a versioned JSON schema describing a scale, named
// sequence generators, and a list of studies; plus the runner that turns
// a plan into a report bundle and the CSV/JSON emitters.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsf/io.hpp"

namespace hsf {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

struct SequenceDescriptor {
  std::string name;
  std::string kind;  // canonical_basis | orthonormal_basis | weighted_basis |
                     // random_bessel | riesz_diagonal
  SpaceIndex m = 0;
  double s = 0.0;         // weighted_basis exponent / riesz_diagonal power
  int count = 0;          // random_bessel
  std::uint64_t seed = 0; // random_bessel
};

struct StudyDescriptor {
  std::string kind;  // frame_bounds | transfer | propagation | collapse |
                     // duality | classification
  std::string sequence;       // named sequence (where applicable)
  std::string sequence_kind;  // generator for multi-truncation studies
  SpaceIndex p = 0, r = 0, m = 0, q = 0;
  int n_random = 100;
  std::vector<int> truncations;
};

struct OutputSpec {
  std::string format = "json";  // json | csv
  std::string path;
};

struct ExperimentPlan {
  json raw;  // validated plan document, echoed into reports
  ScaleSpec scale;
  std::string scale_formula;
  std::vector<SequenceDescriptor> sequences;
  std::vector<StudyDescriptor> studies;
  OutputSpec output;
};

struct StudyResult {
  std::string kind;
  std::string label;
  json report;
  bool pass = false;
  std::string error;  // nonempty when the study itself failed to run
  double wall_time_ms = 0.0;
};

struct ReportBundle {
  json plan_echo;
  std::vector<StudyResult> studies;
  int passed = 0;
  int failed = 0;
  std::string tool_version = kToolVersion;
};

class PlanError : public std::runtime_error {
 public:
  PlanError(const std::string& pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message) {}
};

namespace detail {

inline const json& require(const json& j, const std::string& key,
                           const std::string& pointer) {
  auto it = j.find(key);
  if (it == j.end()) throw PlanError(pointer + "/" + key, "missing field");
  return *it;
}

inline std::vector<int> parse_truncations(const json& j,
                                          const std::string& pointer) {
  auto ts = j.get<std::vector<int>>();
  if (ts.size() < 3)
    throw PlanError(pointer, "need at least 3 truncations");
  for (size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < 1) throw PlanError(pointer, "truncations must be >= 1");
    if (i > 0 && ts[i] <= ts[i - 1])
      throw PlanError(pointer, "truncations must be strictly increasing");
  }
  return ts;
}

}  // namespace detail

inline ExperimentPlan parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PlanError("", std::string("invalid JSON: ") + e.what());
  }

  if (detail::require(doc, "schema", "").get<int>() != kSchemaVersion)
    throw PlanError("/schema", "unsupported schema version");

  ExperimentPlan plan;
  plan.raw = doc;

  const json& js = detail::require(doc, "scale", "");
  std::string formula = detail::require(js, "formula", "/scale").get<std::string>();
  plan.scale_formula = formula;
  try {
    if (formula == "explicit") {
      plan.scale = make_scale_explicit(
          detail::require(js, "weights", "/scale").get<std::vector<double>>());
    } else {
      plan.scale = make_scale(formula, detail::require(js, "n", "/scale").get<int>());
    }
  } catch (const std::invalid_argument& e) {
    throw PlanError("/scale", e.what());
  }

  std::map<std::string, SequenceDescriptor> by_name;
  if (doc.contains("sequences")) {
    const json& seqs = doc.at("sequences");
    for (size_t i = 0; i < seqs.size(); ++i) {
      std::string ptr = "/sequences/" + std::to_string(i);
      const json& s = seqs[i];
      SequenceDescriptor d;
      d.name = detail::require(s, "name", ptr).get<std::string>();
      d.kind = detail::require(s, "kind", ptr).get<std::string>();
      d.m = s.value("m", 0);
      if (d.m < -kMaxIndexMagnitude || d.m > kMaxIndexMagnitude)
        throw PlanError(ptr + "/m", "index out of range");
      if (d.kind == "weighted_basis" || d.kind == "riesz_diagonal")
        d.s = detail::require(s, "s", ptr).get<double>();
      if (d.kind == "random_bessel") {
        d.count = detail::require(s, "count", ptr).get<int>();
        if (d.count < 1) throw PlanError(ptr + "/count", "count must be >= 1");
        d.seed = detail::require(s, "seed", ptr).get<std::uint64_t>();
      }
      if (d.kind != "canonical_basis" && d.kind != "orthonormal_basis" &&
          d.kind != "weighted_basis" && d.kind != "random_bessel" &&
          d.kind != "riesz_diagonal")
        throw PlanError(ptr + "/kind", "unknown sequence kind: " + d.kind);
      if (by_name.count(d.name))
        throw PlanError(ptr + "/name", "duplicate sequence name: " + d.name);
      by_name[d.name] = d;
      plan.sequences.push_back(d);
    }
  }

  const json& studies = detail::require(doc, "studies", "");
  for (size_t i = 0; i < studies.size(); ++i) {
    std::string ptr = "/studies/" + std::to_string(i);
    const json& s = studies[i];
    StudyDescriptor d;
    d.kind = detail::require(s, "kind", ptr).get<std::string>();

    auto check_index_field = [&](const char* name, SpaceIndex v) {
      if (v < -kMaxIndexMagnitude || v > kMaxIndexMagnitude)
        throw PlanError(ptr + "/" + name, "index out of range");
    };
    auto need_sequence = [&]() {
      d.sequence = detail::require(s, "sequence", ptr).get<std::string>();
      if (!by_name.count(d.sequence))
        throw PlanError(ptr + "/sequence", "undefined sequence: " + d.sequence);
    };
    auto need_sequence_kind = [&]() {
      d.sequence_kind = s.value("sequence_kind", std::string("canonical_basis"));
      if (d.sequence_kind != "canonical_basis" &&
          d.sequence_kind != "orthonormal_basis")
        throw PlanError(ptr + "/sequence_kind",
                        "unsupported generator for multi-truncation study");
    };

    if (d.kind == "frame_bounds") {
      need_sequence();
      d.p = detail::require(s, "p", ptr).get<int>();
      check_index_field("p", d.p);
    } else if (d.kind == "transfer") {
      need_sequence();
      d.p = detail::require(s, "p", ptr).get<int>();
      d.r = detail::require(s, "r", ptr).get<int>();
      check_index_field("p", d.p);
      check_index_field("r", d.r);
      d.n_random = s.value("n_random", 100);
    } else if (d.kind == "propagation") {
      need_sequence();
      d.r = detail::require(s, "r", ptr).get<int>();
      d.p = detail::require(s, "p", ptr).get<int>();
      d.m = detail::require(s, "m", ptr).get<int>();
      check_index_field("r", d.r);
      check_index_field("p", d.p);
      check_index_field("m", d.m);
      if (!(d.r <= d.p && d.p <= d.m))
        throw PlanError(ptr, "indices must satisfy r <= p <= m");
    } else if (d.kind == "collapse") {
      d.p = detail::require(s, "p", ptr).get<int>();
      d.q = detail::require(s, "q", ptr).get<int>();
      check_index_field("p", d.p);
      check_index_field("q", d.q);
      if (d.q >= d.p) throw PlanError(ptr, "collapse study needs q < p");
      d.truncations = detail::parse_truncations(
          detail::require(s, "truncations", ptr), ptr + "/truncations");
      need_sequence_kind();
    } else if (d.kind == "duality") {
      need_sequence();
      d.r = detail::require(s, "r", ptr).get<int>();
      d.p = detail::require(s, "p", ptr).get<int>();
      d.m = detail::require(s, "m", ptr).get<int>();
      check_index_field("r", d.r);
      check_index_field("p", d.p);
      check_index_field("m", d.m);
      if (!(d.r <= d.p && d.p <= d.m))
        throw PlanError(ptr, "indices must satisfy r <= p <= m");
      d.n_random = s.value("n_random", 100);
    } else if (d.kind == "classification") {
      d.p = detail::require(s, "p", ptr).get<int>();
      check_index_field("p", d.p);
      d.truncations = detail::parse_truncations(
          detail::require(s, "truncations", ptr), ptr + "/truncations");
      need_sequence_kind();
    } else {
      throw PlanError(ptr + "/kind", "unknown study kind: " + d.kind);
    }
    plan.studies.push_back(d);
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    plan.output.format = out.value("format", std::string("json"));
    if (plan.output.format != "json" && plan.output.format != "csv")
      throw PlanError("/output/format", "format must be json or csv");
    plan.output.path = out.value("path", std::string());
  }
  return plan;
}

inline SequenceFamily instantiate_sequence(const ScaleSpec& scale,
                                           const SequenceDescriptor& d,
                                           std::optional<std::uint64_t> seed_override) {
  if (d.kind == "canonical_basis") return canonical_basis(scale, d.m);
  if (d.kind == "orthonormal_basis") return orthonormal_basis(scale, d.m);
  if (d.kind == "weighted_basis") return weighted_basis(scale, d.m, d.s);
  if (d.kind == "riesz_diagonal") {
    ChainOperator t;
    t.matrix = scale.weight_powers(d.s).cast<Complex>().asDiagonal();
    t.source_index = d.m;
    t.target_index = d.m;
    return riesz_from_operator(scale, d.m, t);
  }
  if (d.kind == "random_bessel")
    return random_bessel(scale, d.m, d.count,
                         seed_override.value_or(d.seed));
  throw std::invalid_argument("unknown sequence kind: " + d.kind);
}

inline ReportBundle run_plan(const ExperimentPlan& plan,
                             std::optional<std::uint64_t> seed_override = {}) {
  ReportBundle bundle;
  bundle.plan_echo = plan.raw;

  std::map<std::string, SequenceFamily> seqs;
  for (const auto& d : plan.sequences)
    seqs[d.name] = instantiate_sequence(plan.scale, d, seed_override);

  auto scale_gen = [&](int n) {
    if (plan.scale_formula == "explicit") {
      if (n != plan.scale.truncation)
        throw std::invalid_argument(
            "explicit scales support only their own truncation");
      return plan.scale;
    }
    return make_scale(plan.scale_formula, n);
  };

  for (size_t i = 0; i < plan.studies.size(); ++i) {
    const auto& d = plan.studies[i];
    StudyResult result;
    result.kind = d.kind;
    result.label = d.kind + "#" + std::to_string(i);
    auto t0 = std::chrono::steady_clock::now();
    try {
      if (d.kind == "frame_bounds") {
        FrameBoundsRecord rec = frame_bounds(plan.scale, seqs.at(d.sequence), d.p);
        result.report = to_json(rec);
        result.report["complete"] =
            completeness(plan.scale, seqs.at(d.sequence), d.p).complete;
        result.pass = true;
      } else if (d.kind == "transfer") {
        TransferReport rep = run_transfer_suite(plan.scale, seqs.at(d.sequence),
                                                d.p, d.r, d.n_random);
        result.report = to_json(rep);
        result.pass = rep.pass;
      } else if (d.kind == "propagation") {
        PropagationReport rep = run_propagation_suite(
            plan.scale, seqs.at(d.sequence), d.r, d.p, d.m);
        result.report = to_json(rep);
        result.pass = rep.pass;
      } else if (d.kind == "collapse") {
        auto seq_gen = [&](const ScaleSpec& s) {
          return d.sequence_kind == "orthonormal_basis"
                     ? orthonormal_basis(s, d.p)
                     : canonical_basis(s, d.p);
        };
        CollapseReport rep =
            run_collapse_study(scale_gen, seq_gen, d.p, d.q, d.truncations);
        result.report = to_json(rep);
        result.pass = true;
        for (size_t k = 1; k < rep.lower_bound_at_q.size(); ++k)
          result.pass = result.pass &&
                        rep.lower_bound_at_q[k] <= rep.lower_bound_at_q[k - 1];
      } else if (d.kind == "duality") {
        DualityReport rep = run_duality_study(plan.scale, seqs.at(d.sequence),
                                              d.r, d.p, d.m, d.n_random);
        result.report = to_json(rep);
        result.pass = rep.pass;
      } else if (d.kind == "classification") {
        auto seq_gen = [&](const ScaleSpec& s) {
          return d.sequence_kind == "orthonormal_basis"
                     ? orthonormal_basis(s, d.p)
                     : canonical_basis(s, d.p);
        };
        ClassificationRecord rec =
            classify(scale_gen, seq_gen, d.p, d.truncations);
        result.report = to_json(rec);
        result.pass = rec.verdict != FrameVerdict::none;
      }
    } catch (const std::exception& e) {
      result.error = e.what();
      result.pass = false;
    }
    auto t1 = std::chrono::steady_clock::now();
    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    bundle.studies.push_back(std::move(result));
  }

  for (const auto& s : bundle.studies) (s.pass ? bundle.passed : bundle.failed)++;
  return bundle;
}

// JSON form of the bundle. Wall times and the timestamp are grouped under
// "timing", the one key excluded from the determinism contract.
inline json bundle_to_json(const ReportBundle& bundle,
                           const std::string& timestamp) {
  json studies = json::array();
  json times = json::array();
  for (const auto& s : bundle.studies) {
    json entry{{"kind", s.kind}, {"label", s.label}, {"pass", s.pass}};
    if (!s.error.empty()) entry["error"] = s.error;
    if (!s.report.is_null()) entry["report"] = s.report;
    studies.push_back(std::move(entry));
    times.push_back(s.wall_time_ms);
  }
  return json{{"plan", bundle.plan_echo},
              {"studies", studies},
              {"summary", {{"passed", bundle.passed}, {"failed", bundle.failed}}},
              {"tool_version", bundle.tool_version},
              {"timing", {{"generated_at", timestamp}, {"per_study_ms", times}}}};
}

namespace detail {

inline void csv_row(std::ostringstream& out, const std::string& study,
                    const std::string& claim, const json& rep,
                    const char* pkey, const char* rkey, const char* mkey,
                    int n, double value, double threshold, bool pass,
                    const StudyDescriptor& d) {
  (void)rep;
  auto idx = [&](const char* key) -> std::string {
    if (!key) return "";
    std::string k(key);
    if (k == "p") return std::to_string(d.p);
    if (k == "r") return std::to_string(d.r);
    if (k == "m") return std::to_string(d.m);
    if (k == "q") return std::to_string(d.q);
    return "";
  };
  out << study << ',' << claim << ',' << idx(pkey) << ',' << idx(rkey) << ','
      << idx(mkey) << ',' << n << ',' << value << ',' << threshold << ','
      << (pass ? "true" : "false") << '\n';
}

}  // namespace detail

// Flat CSV: study, claim, p, r, m, N, value, threshold, pass.
inline std::string bundle_to_csv(const ReportBundle& bundle,
                                 const ExperimentPlan& plan) {
  std::ostringstream out;
  out.precision(17);
  out << "study,claim,p,r,m,N,value,threshold,pass\n";
  for (size_t i = 0; i < bundle.studies.size(); ++i) {
    const auto& s = bundle.studies[i];
    const auto& d = plan.studies[i];
    const int n = plan.scale.truncation;
    if (!s.error.empty()) {
      detail::csv_row(out, s.label, "study_error", s.report, "p", "r", "m", n,
                      0.0, 0.0, false, d);
      continue;
    }
    if (s.kind == "frame_bounds") {
      detail::csv_row(out, s.label, "lower_bound", s.report, "p", nullptr,
                      nullptr, n, s.report.at("lower").get<double>(), 0.0,
                      s.pass, d);
      detail::csv_row(out, s.label, "upper_bound", s.report, "p", nullptr,
                      nullptr, n, s.report.at("upper").get<double>(), 0.0,
                      s.pass, d);
    } else if (s.kind == "transfer") {
      double tol = s.report.at("tolerance").get<double>();
      for (const auto& [name, v] :
           s.report.at("identity_residuals").items()) {
        detail::csv_row(out, s.label, name, s.report, "p", "r", nullptr, n,
                        v.get<double>(), tol, v.get<double>() <= tol, d);
      }
    } else if (s.kind == "propagation") {
      for (const char* key : {"monotonicity_checks", "completeness_checks"}) {
        for (const auto& c : s.report.at(key)) {
          detail::csv_row(out, s.label,
                          c.at("claim").get<std::string>() +
                              c.at("indices").get<std::string>(),
                          s.report, "p", "r", "m", n,
                          c.at("value").get<double>(), 0.0,
                          c.at("pass").get<bool>(), d);
        }
      }
    } else if (s.kind == "collapse") {
      const auto& ts = s.report.at("truncations");
      const auto& lows = s.report.at("lower_bound_at_q");
      for (size_t k = 0; k < ts.size(); ++k)
        detail::csv_row(out, s.label, "lower_bound_at_q", s.report, "p", "q",
                        nullptr, ts[k].get<int>(), lows[k].get<double>(), 0.0,
                        s.pass, d);
      detail::csv_row(out, s.label, "bound_ratio_trend", s.report, "p", "q",
                      nullptr, n, s.report.at("bound_ratio_trend").get<double>(),
                      0.0, s.pass, d);
    } else if (s.kind == "duality") {
      detail::csv_row(out, s.label, "max_reconstruction_residual", s.report,
                      "p", "r", "m", n,
                      s.report.at("max_reconstruction_residual").get<double>(),
                      s.report.at("tolerance").get<double>(), s.pass, d);
    } else if (s.kind == "classification") {
      detail::csv_row(out, s.label,
                      "verdict=" + s.report.at("verdict").get<std::string>(),
                      s.report, "p", nullptr, nullptr, n,
                      s.report.at("slope_lower").get<double>(), 0.0, s.pass, d);
    }
  }
  return out.str();
}

}  // namespace hsf
