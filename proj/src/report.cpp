#include "petrocheck/report.hpp"

#include <iomanip>
#include <sstream>

namespace petrocheck {

std::string input_digest(const std::string& text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Json report_skeleton(const std::string& command, const std::string& digest) {
  Json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["schema_version"] = kReportSchemaVersion;
  doc["command"] = command;
  doc["input_digest"] = digest;
  return doc;
}

Json options_json(const SamplingConfig& sampling, const GeometryConfig& geometry,
                  const std::string& geometry_name) {
  Json j;
  j["geometry"] = geometry_name;
  j["interior_points"] = geometry.interior_points;
  j["boundary_points"] = geometry.boundary_points;
  j["time_values"] = geometry.time_values;
  j["xi_directions"] = sampling.xi_directions;
  j["p_arc_points"] = sampling.p_arc_points;
  j["pure_p_points"] = sampling.pure_p_points;
  j["tangent_directions"] = sampling.tangent_directions;
  j["delta_floor"] = sampling.delta_floor;
  j["im_floor"] = sampling.im_floor;
  j["rank_tol"] = sampling.rank_tol;
  j["cluster_tol"] = sampling.cluster_tol;
  if (sampling.delta1)
    j["delta1"] = *sampling.delta1;
  else
    j["delta1"] = "auto";
  return j;
}

Json witness_json(const Witness& w) {
  Json j;
  j["x"] = w.x;
  j["t"] = w.t;
  j["xi"] = w.xi;
  j["p_re"] = w.p.real();
  j["p_im"] = w.p.imag();
  return j;
}

Json parabolicity_json(const ProblemSpec& spec, const ParabolicityReport& report) {
  Json doc = report_skeleton("check-parabolic", input_digest(spec.source_text));
  doc["options"] = options_json(spec.sampling, spec.geometry, spec.geometry_name);

  Json c1;
  c1["verdict"] = verdict_name(report.condition_i.verdict);
  c1["delta_estimate"] = report.condition_i.delta_estimate;
  c1["delta_floor"] = spec.sampling.delta_floor;
  c1["worst_witness"] = witness_json(report.condition_i.worst_witness);
  c1["note"] = report.condition_i.note;
  doc["condition_i"] = c1;

  Json c2;
  c2["verdict"] = verdict_name(report.condition_ii.verdict);
  c2["tolerance"] = 1e-10;
  c2["violations"] = report.condition_ii.violations;
  doc["condition_ii"] = c2;

  Json c3;
  c3["verdict"] = verdict_name(report.condition_iii.verdict);
  if (report.condition_iii.verdict != Verdict::Skipped) {
    c3["delta1"] = report.delta1_used;
    c3["samples_checked"] = report.condition_iii.samples_checked;
    c3["min_rank_margin"] = report.condition_iii.min_rank_margin;
    c3["rank_tol"] = spec.sampling.rank_tol;
    c3["worst_witness"] = witness_json(report.condition_iii.worst_witness);
  }
  c3["note"] = report.condition_iii.note;
  doc["condition_iii"] = c3;

  doc["overall"] = verdict_name(report.overall);
  doc["unchecked_hypotheses"] = Json::array(
      {"coefficient smoothness on the closed cylinder is assumed, not verified",
       "all verdicts are sampled evidence over finitely many points, not proofs"});
  for (const std::string& w : spec.problem.warnings)
    doc["unchecked_hypotheses"].push_back(w);
  return doc;
}

Json regularity_json(const ProblemSpec& spec, const HypothesisReport& hypotheses,
                     const ClassicalityVerdict& verdict) {
  Json doc = report_skeleton("check-regularity", input_digest(spec.source_text));
  doc["options"] = options_json(spec.sampling, spec.geometry, spec.geometry_name);

  const SigmaThresholds& st = hypotheses.thresholds;
  Json th;
  th["sigma0"] = st.sigma0;
  th["l0"] = st.l0;
  th["sigma1"] = st.sigma1();
  th["sigma2"] = st.sigma2();
  th["sigma3"] = st.sigma3();
  th["sigma2_gt_sigma0"] = st.sigma2_gt_sigma0;
  th["sigma3_gt_sigma0"] = st.sigma3_gt_sigma0;
  doc["thresholds"] = th;

  Json hyp;
  hyp["verdict"] = hypotheses.passed ? "pass" : "fail";
  hyp["failures"] = hypotheses.failures;
  doc["theorem_hypotheses"] = hyp;

  Json cls;
  cls["verdict"] =
      verdict.guaranteed_classical ? "guaranteed-classical" : "not-guaranteed";
  Json details = Json::array();
  for (const ConditionDetail& d : verdict.details) {
    Json dj;
    dj["condition"] = std::string(1, d.condition);
    dj["component"] = d.component;
    dj["passed"] = d.passed;
    dj["required_order"] = d.required;
    if (d.budget)
      dj["budget_p_max"] = *d.budget;
    else
      dj["budget_p_max"] = nullptr;
    details.push_back(dj);
  }
  cls["conditions"] = details;
  cls["failures"] = verdict.failures;
  doc["classicality"] = cls;

  doc["overall"] = (hypotheses.passed && verdict.guaranteed_classical)
                       ? "guaranteed-classical"
                       : "not-guaranteed";
  doc["unchecked_hypotheses"] = Json::array(
      {"regularity claims are trusted inputs (assumed, not verified)",
       "coefficient smoothness on the closed cylinder is assumed, not verified",
       "localized-space dominance extends the full-space embeddings by "
       "monotonicity (one inference step beyond the cited embeddings)",
       "the collar width epsilon is existential; claims are per-region"});
  for (const std::string& w : spec.problem.warnings)
    doc["unchecked_hypotheses"].push_back(w);
  return doc;
}

namespace {

void render_value(const Json& v, int indent, std::ostringstream& os);

void render_object(const Json& v, int indent, std::ostringstream& os) {
  for (const auto& [key, value] : v.items()) {
    os << std::string(indent, ' ') << key << ":";
    if (value.is_object() || (value.is_array() && !value.empty() &&
                              (value[0].is_object() || value[0].is_array()))) {
      os << "\n";
      render_value(value, indent + 2, os);
    } else {
      os << " " << value.dump() << "\n";
    }
  }
}

void render_value(const Json& v, int indent, std::ostringstream& os) {
  if (v.is_object()) {
    render_object(v, indent, os);
  } else if (v.is_array()) {
    for (const auto& item : v) {
      os << std::string(indent, ' ') << "-";
      if (item.is_object() || item.is_array()) {
        os << "\n";
        render_value(item, indent + 2, os);
      } else {
        os << " " << item.dump() << "\n";
      }
    }
  } else {
    os << std::string(indent, ' ') << v.dump() << "\n";
  }
}

}  // namespace

std::string render_human(const Json& doc) {
  std::ostringstream os;
  render_object(doc, 0, os);
  return os.str();
}

}  // namespace petrocheck
