// Decision logic for classicality of generalized solutions: sigma thresholds,
// hypothesis validation against declared data regularity, and per-component
// continuous-derivative budgets.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "petrocheck/problem.hpp"
#include "petrocheck/spaces.hpp"

namespace petrocheck {

struct IncompleteInputError : InputError {
  using InputError::InputError;
};

enum class RegionTag { Interior, LateralCollar, BottomCollar, LateralBoundary };

std::string region_name(RegionTag r);

struct RegularityClaim {
  bool is_g = false;  // f_j when false, g_j when true
  int component = 1;  // 1-based
  RegionTag region = RegionTag::Interior;
  double sigma = 0.0;
  FunctionParameter phi;
};

// Half-integer threshold values are kept as doubled integers so the strict
// inequalities and equalities of the theorem stay exact.
struct SigmaThresholds {
  int sigma0 = 0;
  int l0 = 0;
  int twice_sigma1 = 0;  // 2b + n
  int twice_sigma2 = 0;  // 2*l0 + 2b + n
  int twice_sigma3 = 0;  // n - 2b
  int b = 1;
  int n = 2;
  bool sigma2_gt_sigma0 = false;
  bool sigma3_gt_sigma0 = false;

  double sigma1() const { return twice_sigma1 / 2.0; }
  double sigma2() const { return twice_sigma2 / 2.0; }
  double sigma3() const { return twice_sigma3 / 2.0; }
};

SigmaThresholds sigma_thresholds(const ParabolicProblem& problem);

struct HypothesisReport {
  bool passed = false;
  SigmaThresholds thresholds;
  std::vector<std::string> failures;
};

// Validates the hypotheses of the classicality theorem against the declared
// claims: threshold strictness, per-region dominance for every f component,
// the shifted orders for every g component, and Dini convergence where the
// claimed sigma sits exactly at a threshold. Throws IncompleteInputError
// when a required claim is missing.
HypothesisReport check_theorem_hypotheses(
    const ParabolicProblem& problem, const std::vector<RegularityClaim>& claims);

// Largest integer p >= 0 such that the claims on the given region dominate
// the level sigma(p) = p + b + n/2 - 2b*kappa_k and the lower bound
// p + b + n/2 > sigma0 + 2b*kappa_k holds; nullopt when no p qualifies.
std::optional<int> derivative_budget(const ParabolicProblem& problem, int k,
                                     RegionTag region,
                                     const std::vector<RegularityClaim>& claims);

struct ConditionDetail {
  char condition = 'a';  // 'a', 'b', or 'c'
  int component = 1;     // k
  bool passed = false;
  std::optional<int> budget;
  int required = 0;  // needed derivative order; negative means vacuous
};

struct ClassicalityVerdict {
  bool guaranteed_classical = false;
  std::vector<ConditionDetail> details;
  std::vector<std::string> failures;
  SigmaThresholds thresholds;
};

ClassicalityVerdict classify_solution(const ParabolicProblem& problem,
                                      const std::vector<RegularityClaim>& claims);

}  // namespace petrocheck
