// Command-line front end: check-parabolic, check-regularity, norm, phi-check.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "petrocheck/report.hpp"
#include "petrocheck/spaces.hpp"
#include "petrocheck/specfile.hpp"

namespace {

using namespace petrocheck;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;

struct OutputOptions {
  std::string report_path;
  bool machine = false;
};

void emit(const Json& doc, const OutputOptions& out) {
  if (!out.report_path.empty()) {
    std::ofstream f(out.report_path);
    if (!f) throw InputError("cannot write report to " + out.report_path);
    f << doc.dump(2) << "\n";
  }
  if (out.machine)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << render_human(doc);
}

struct ToleranceOverrides {
  std::optional<double> delta1;
  std::optional<int> samples;
  std::optional<double> delta_floor, im_floor, rank_tol, cluster_tol;

  void apply(ProblemSpec& spec) const {
    if (delta1) spec.sampling.delta1 = *delta1;
    if (delta_floor) spec.sampling.delta_floor = *delta_floor;
    if (im_floor) spec.sampling.im_floor = *im_floor;
    if (rank_tol) spec.sampling.rank_tol = *rank_tol;
    if (cluster_tol) spec.sampling.cluster_tol = *cluster_tol;
    if (samples) {
      spec.geometry.interior_points = *samples;
      spec.geometry.boundary_points = *samples;
      // Regenerate the built-in geometry at the new density.
      if (spec.geometry_name == "ball")
        sample_unit_ball(spec.problem, spec.geometry);
      else if (spec.geometry_name == "half_space")
        sample_half_space(spec.problem, spec.geometry);
      else if (spec.geometry_name == "smoothed_square")
        sample_smoothed_square(spec.problem, spec.geometry);
    }
  }
};

void add_common_flags(CLI::App* cmd, OutputOptions& out, ToleranceOverrides& tol) {
  cmd->add_option("--report", out.report_path,
                  "write the machine-readable report to this path");
  cmd->add_flag("--machine", out.machine,
                "print the machine-readable report to stdout");
  cmd->add_option("--delta1", tol.delta1, "delta1 for condition (iii)");
  cmd->add_option("--samples", tol.samples,
                  "override interior and boundary sample counts");
  cmd->add_option("--delta-floor", tol.delta_floor, "condition (i) floor");
  cmd->add_option("--im-floor", tol.im_floor, "zeta-root axis separation floor");
  cmd->add_option("--rank-tol", tol.rank_tol, "relative rank tolerance");
  cmd->add_option("--cluster-tol", tol.cluster_tol, "root clustering tolerance");
}

int run_check_parabolic(const std::string& path, const OutputOptions& out,
                        const ToleranceOverrides& tol) {
  ProblemSpec spec = parse_problem_file(path);
  tol.apply(spec);
  try {
    const ParabolicityReport report = check_parabolicity(spec.problem, spec.sampling);
    emit(parabolicity_json(spec, report), out);
    switch (report.overall) {
      case Verdict::Pass: return kExitPass;
      case Verdict::Fail: return kExitFail;
      default: return kExitInconclusive;
    }
  } catch (const DegeneracyError& e) {
    std::cerr << "degeneracy: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const SeparationError& e) {
    std::cerr << "separation: " << e.what() << "\n";
    return kExitInconclusive;
  }
}

int run_check_regularity(const std::string& path, const OutputOptions& out,
                         const ToleranceOverrides& tol) {
  ProblemSpec spec = parse_problem_file(path);
  tol.apply(spec);
  const HypothesisReport hyp = check_theorem_hypotheses(spec.problem, spec.claims);
  const ClassicalityVerdict verdict = classify_solution(spec.problem, spec.claims);
  emit(regularity_json(spec, hyp, verdict), out);
  return (hyp.passed && verdict.guaranteed_classical) ? kExitPass : kExitFail;
}

int run_norm(const std::string& grid_path, double s, double gamma,
             const std::string& phi_text, const OutputOptions& out) {
  const AnisoGridFunction w = read_grid_file(grid_path);
  SpaceTag tag;
  tag.s = s;
  tag.gamma = gamma;
  tag.phi = FunctionParameter::parse(phi_text);
  try {
    const double value = norm_full_space(w, tag);
    std::ifstream f(grid_path);
    std::ostringstream raw;
    raw << f.rdbuf();
    Json doc = report_skeleton("norm", input_digest(raw.str()));
    doc["s"] = s;
    doc["gamma"] = gamma;
    doc["phi"] = phi_text;
    doc["norm"] = value;
    if (w.support_t_nonneg)
      doc["note"] =
          "extension-by-zero spectrum: an upper bound for the quotient norm "
          "over extensions supported in t >= 0";
    emit(doc, out);
    return kExitPass;
  } catch (const TruncationError& e) {
    std::cerr << "truncation: " << e.what() << "\n";
    return kExitInconclusive;
  }
}

int run_phi_check(const std::string& phi_text, std::optional<double> theta,
                  const OutputOptions& out) {
  FunctionParameter phi = theta ? FunctionParameter::log_power(*theta)
                                : FunctionParameter::parse(phi_text);
  const ClassMReport m = check_class_M(phi);
  const DiniResult dini = dini_integral(phi);
  Json doc = report_skeleton("phi-check", input_digest(phi.text()));
  doc["phi"] = phi.text();
  Json mj;
  mj["verdict"] = m.consistent ? "consistent with M" : "violates M";
  mj["failures"] = m.failures;
  mj["note"] = m.note;
  doc["class_M"] = mj;
  Json dj;
  dj["verdict"] = dini_verdict_name(dini.verdict);
  if (dini.verdict == DiniVerdict::Converges) dj["value"] = dini.value_estimate;
  dj["closed_form"] = dini.closed_form;
  doc["dini_integral"] = dj;
  const bool pass = m.consistent && dini.verdict == DiniVerdict::Converges;
  doc["overall"] = pass ? "pass" : "fail";
  if (!pass && dini.verdict == DiniVerdict::Diverges)
    doc["reason"] = "Dini integral diverges";
  emit(doc, out);
  if (dini.verdict == DiniVerdict::Inconclusive) return kExitInconclusive;
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Petrovskii parabolic problem analyzer"};
  app.require_subcommand(1);

  std::string spec_path, grid_path, phi_text = "1";
  double s = 0.0, gamma = 0.5;
  std::optional<double> theta;
  OutputOptions out_parab, out_reg, out_norm, out_phi;
  ToleranceOverrides tol_parab, tol_reg;

  auto* parab = app.add_subcommand("check-parabolic",
                                   "verify the Petrovskii parabolicity conditions");
  parab->add_option("spec", spec_path, "problem specification file")->required();
  add_common_flags(parab, out_parab, tol_parab);

  auto* reg = app.add_subcommand(
      "check-regularity", "decide whether declared data regularity guarantees "
                          "a classical solution");
  reg->add_option("spec", spec_path, "problem specification file")->required();
  add_common_flags(reg, out_reg, tol_reg);

  auto* norm = app.add_subcommand("norm", "weighted spectral norm of a grid function");
  norm->add_option("grid", grid_path, "grid function file")->required();
  norm->add_option("--s", s, "number parameter s")->required();
  norm->add_option("--gamma", gamma, "anisotropy gamma = 1/(2b)")->required();
  norm->add_option("--phi", phi_text, "function parameter expression");
  norm->add_option("--report", out_norm.report_path, "write machine report here");
  norm->add_flag("--machine", out_norm.machine, "machine report to stdout");

  auto* phic = app.add_subcommand("phi-check",
                                  "screen a function parameter for class M and "
                                  "the Dini-type integral");
  phic->add_option("--phi", phi_text, "function parameter expression");
  phic->add_option("--theta-form", theta, "use phi = (1+ln r)^theta");
  phic->add_option("--report", out_phi.report_path, "write machine report here");
  phic->add_flag("--machine", out_phi.machine, "machine report to stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (parab->parsed()) return run_check_parabolic(spec_path, out_parab, tol_parab);
    if (reg->parsed()) return run_check_regularity(spec_path, out_reg, tol_reg);
    if (norm->parsed()) return run_norm(grid_path, s, gamma, phi_text, out_norm);
    if (phic->parsed()) return run_phi_check(phi_text, theta, out_phi);
  } catch (const petrocheck::IncompleteInputError& e) {
    std::cerr << "incomplete input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const petrocheck::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const petrocheck::DegeneracyError& e) {
    std::cerr << "degeneracy: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
