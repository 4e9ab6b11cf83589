// Sampled verification of the three Petrovskii parabolicity conditions:
// root negativity of det A^(0), normalization of the pure-time coefficients,
// and the covering (complementing) condition on the boundary.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "petrocheck/problem.hpp"

namespace petrocheck {

struct SeparationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplingConfig {
  int xi_directions = 16;   // unit xi directions per interior sample
  int p_arc_points = 16;    // points on the admissible p-arc per tangent xi
  int pure_p_points = 5;    // p samples at xi = 0, |p| = 1, Re p >= 0
  int tangent_directions = 4;  // tangent xi directions per boundary sample
  double delta_floor = 1e-9;
  double im_floor = 1e-7;
  double rank_tol = 1e-8;
  double cluster_tol = 1e-6;
  std::optional<double> delta1;  // default: delta_estimate / 2
};

enum class Verdict { Pass, Fail, Inconclusive, Skipped };

std::string verdict_name(Verdict v);

struct Witness {
  std::vector<double> x;
  double t = 0.0;
  std::vector<double> xi;
  Complex p{0.0, 0.0};
};

struct Condition1Result {
  Verdict verdict = Verdict::Inconclusive;
  bool passed = false;
  // Largest delta with Re p <= -delta * |xi|^{2b} over all sampled roots.
  double delta_estimate = 0.0;
  Witness worst_witness;
  std::string note;
};

struct Condition2Result {
  Verdict verdict = Verdict::Inconclusive;
  bool passed = false;
  std::vector<std::string> violations;
};

struct CoveringResult {
  Verdict verdict = Verdict::Inconclusive;
  bool passed = false;
  int samples_checked = 0;
  // Smallest ratio of the m-th to the largest singular value across samples.
  double min_rank_margin = 0.0;
  Witness worst_witness;
  std::string note;
};

struct ParabolicityReport {
  Condition1Result condition_i;
  Condition2Result condition_ii;
  CoveringResult condition_iii;
  double delta1_used = 0.0;
  Verdict overall = Verdict::Inconclusive;
};

Condition1Result check_condition_i(const ParabolicProblem& problem,
                                   const SamplingConfig& config);

Condition2Result check_condition_ii(const ParabolicProblem& problem);

// Roots of det A^(0)(x,t,xi + zeta*nu, p) in zeta, split by the sign of the
// imaginary part. Throws SeparationError when a root sits within im_floor of
// the real axis and DegeneracyError when the degree collapses below 2m.
std::pair<RootSet, RootSet> compute_zeta_split(const ParabolicProblem& problem,
                                               const BoundarySample& sample,
                                               std::span<const double> xi_tangent,
                                               Complex p_value,
                                               const SamplingConfig& config);

CoveringResult check_condition_iii(const ParabolicProblem& problem,
                                   double delta1, const SamplingConfig& config);

ParabolicityReport check_parabolicity(const ParabolicProblem& problem,
                                      const SamplingConfig& config);

}  // namespace petrocheck
