#include "petrocheck/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace petrocheck {

std::string region_name(RegionTag r) {
  switch (r) {
    case RegionTag::Interior: return "interior";
    case RegionTag::LateralCollar: return "lateral-collar";
    case RegionTag::BottomCollar: return "bottom-collar";
    case RegionTag::LateralBoundary: return "lateral-boundary";
  }
  return "unknown";
}

SigmaThresholds sigma_thresholds(const ParabolicProblem& problem) {
  const OrderConstants oc = derived_orders(problem);
  SigmaThresholds st;
  st.sigma0 = oc.sigma0;
  st.l0 = oc.l0;
  st.b = problem.b;
  st.n = problem.n;
  st.twice_sigma1 = 2 * problem.b + problem.n;
  st.twice_sigma2 = 2 * oc.l0 + 2 * problem.b + problem.n;
  st.twice_sigma3 = problem.n - 2 * problem.b;
  st.sigma2_gt_sigma0 = st.twice_sigma2 > 2 * oc.sigma0;
  st.sigma3_gt_sigma0 = st.twice_sigma3 > 2 * oc.sigma0;
  return st;
}

namespace {

constexpr double kSigmaEps = 1e-9;

enum class Dominance { Strict, Equal, No };

// Compares a claimed sigma against a half-integer threshold (stored doubled).
Dominance compare_sigma(double claimed, int twice_threshold) {
  const double diff = 2.0 * claimed - twice_threshold;
  if (diff > kSigmaEps) return Dominance::Strict;
  if (diff >= -kSigmaEps) return Dominance::Equal;
  return Dominance::No;
}

// Strict sigma excess admits any class-M parameter via the embeddings;
// at equality the claimed phi itself must make the Dini integral converge.
bool claim_dominates(const RegularityClaim& claim, int twice_threshold,
                     std::string* why_not) {
  switch (compare_sigma(claim.sigma, twice_threshold)) {
    case Dominance::Strict:
      return true;
    case Dominance::Equal: {
      const DiniResult d = dini_integral(claim.phi);
      if (d.verdict == DiniVerdict::Converges) return true;
      if (why_not)
        *why_not = "Dini integral " + dini_verdict_name(d.verdict) +
                   " for phi = " + claim.phi.text() +
                   " at the exact threshold";
      return false;
    }
    case Dominance::No:
      if (why_not) {
        std::ostringstream os;
        os << "claimed sigma " << claim.sigma << " is below the required "
           << twice_threshold / 2.0;
        *why_not = os.str();
      }
      return false;
  }
  return false;
}

const RegularityClaim* find_claim(const std::vector<RegularityClaim>& claims,
                                  bool is_g, int component, RegionTag region) {
  // When several claims cover the same slot, the strongest sigma wins.
  const RegularityClaim* best = nullptr;
  for (const RegularityClaim& c : claims) {
    if (c.is_g != is_g || c.component != component || c.region != region)
      continue;
    if (!best || c.sigma > best->sigma) best = &c;
  }
  return best;
}

const RegularityClaim& require_claim(const std::vector<RegularityClaim>& claims,
                                     bool is_g, int component, RegionTag region) {
  const RegularityClaim* c = find_claim(claims, is_g, component, region);
  if (!c) {
    std::ostringstream os;
    os << "missing claim for " << (is_g ? "g" : "f") << component << " on region "
       << region_name(region);
    throw IncompleteInputError(os.str());
  }
  return *c;
}

void validate_claim_shapes(const ParabolicProblem& problem,
                           const std::vector<RegularityClaim>& claims) {
  const int mm = problem.m();
  for (const RegularityClaim& c : claims) {
    if (c.is_g) {
      if (c.region != RegionTag::LateralBoundary)
        throw InputError("g claims are only meaningful on the lateral boundary");
      if (c.component < 1 || c.component > mm)
        throw InputError("g claim component out of range");
    } else {
      if (c.region == RegionTag::LateralBoundary)
        throw InputError("f claims cannot sit on the lateral boundary");
      if (c.component < 1 || c.component > problem.N)
        throw InputError("f claim component out of range");
    }
  }
}

}  // namespace

HypothesisReport check_theorem_hypotheses(
    const ParabolicProblem& problem,
    const std::vector<RegularityClaim>& claims) {
  validate_claim_shapes(problem, claims);
  HypothesisReport rep;
  rep.thresholds = sigma_thresholds(problem);
  const SigmaThresholds& st = rep.thresholds;

  if (!st.sigma2_gt_sigma0) {
    std::ostringstream os;
    os << "sigma2 > sigma0 violated (sigma2 = " << st.sigma2()
       << ", sigma0 = " << st.sigma0 << ")";
    rep.failures.push_back(os.str());
  }
  if (!st.sigma3_gt_sigma0) {
    std::ostringstream os;
    os << "sigma3 > sigma0 violated (sigma3 = " << st.sigma3()
       << ", sigma0 = " << st.sigma0 << ")";
    rep.failures.push_back(os.str());
  }

  struct Slot {
    RegionTag region;
    int twice_threshold;
    const char* label;
  };
  const Slot f_slots[] = {
      {RegionTag::Interior, st.twice_sigma1, "sigma1"},
      {RegionTag::LateralCollar, st.twice_sigma2, "sigma2"},
      {RegionTag::BottomCollar, st.twice_sigma3, "sigma3"},
  };
  for (int comp = 1; comp <= problem.N; ++comp) {
    for (const Slot& slot : f_slots) {
      const RegularityClaim& c =
          require_claim(claims, false, comp, slot.region);
      std::string why;
      if (!claim_dominates(c, slot.twice_threshold, &why)) {
        std::ostringstream os;
        os << "f" << comp << " on " << region_name(slot.region)
           << " does not dominate (" << slot.label << " = "
           << slot.twice_threshold / 2.0 << ", phi): " << why;
        rep.failures.push_back(os.str());
      }
    }
  }
  const int mm = problem.m();
  for (int j = 1; j <= mm; ++j) {
    const RegularityClaim& c =
        require_claim(claims, true, j, RegionTag::LateralBoundary);
    const int twice = st.twice_sigma2 - 2 * problem.ell[j - 1] - 1;
    std::string why;
    if (!claim_dominates(c, twice, &why)) {
      std::ostringstream os;
      os << "g" << j << " does not dominate (sigma2 - l_" << j
         << " - 1/2 = " << twice / 2.0 << ", phi): " << why;
      rep.failures.push_back(os.str());
    }
  }
  rep.passed = rep.failures.empty();
  return rep;
}

std::optional<int> derivative_budget(const ParabolicProblem& problem, int k,
                                     RegionTag region,
                                     const std::vector<RegularityClaim>& claims) {
  if (k < 1 || k > problem.N)
    throw InputError("derivative_budget: component index out of range");
  if (region == RegionTag::LateralBoundary)
    throw InputError("derivative_budget: region must be a solution region");
  validate_claim_shapes(problem, claims);

  const int b = problem.b;
  const int n = problem.n;
  const int kappa_k = problem.kappa[k - 1];
  const OrderConstants oc = derived_orders(problem);
  const int mm = problem.m();

  std::vector<const RegularityClaim*> f_claims;
  for (int comp = 1; comp <= problem.N; ++comp)
    f_claims.push_back(&require_claim(claims, false, comp, region));
  std::vector<const RegularityClaim*> g_claims;
  if (region == RegionTag::LateralCollar) {
    for (int j = 1; j <= mm; ++j)
      g_claims.push_back(&require_claim(claims, true, j, RegionTag::LateralBoundary));
  }

  auto feasible = [&](int p) {
    // twice sigma(p) = 2p + 2b + n - 4b*kappa_k
    const int twice_sigma = 2 * p + 2 * b + n - 4 * b * kappa_k;
    for (const RegularityClaim* c : f_claims)
      if (!claim_dominates(*c, twice_sigma, nullptr)) return false;
    for (int j = 0; j < static_cast<int>(g_claims.size()); ++j) {
      const int twice = twice_sigma - 2 * problem.ell[j] - 1;
      if (!claim_dominates(*g_claims[j], twice, nullptr)) return false;
    }
    return true;
  };

  // Dominance is monotone: once it fails it fails for all larger p.
  std::optional<int> best;
  const int p_cap = 4 * b * (kappa_k + oc.sigma0 + 64);
  for (int p = 0; p <= p_cap; ++p) {
    if (!feasible(p)) break;
    // Lower bound p + b + n/2 > sigma0 + 2b*kappa_k, exact in doubled form.
    if (2 * p + 2 * b + n > 2 * oc.sigma0 + 4 * b * kappa_k) best = p;
  }
  return best;
}

ClassicalityVerdict classify_solution(const ParabolicProblem& problem,
                                      const std::vector<RegularityClaim>& claims) {
  ClassicalityVerdict verdict;
  verdict.thresholds = sigma_thresholds(problem);
  const OrderConstants oc = derived_orders(problem);
  bool all_pass = true;
  for (int k = 1; k <= problem.N; ++k) {
    const int kappa_k = problem.kappa[k - 1];
    struct Case {
      char cond;
      RegionTag region;
      int required;
    };
    const Case cases[] = {
        {'a', RegionTag::Interior, 2 * problem.b * kappa_k},
        {'b', RegionTag::LateralCollar, oc.l0 + 2 * problem.b * kappa_k},
        {'c', RegionTag::BottomCollar, 2 * problem.b * (kappa_k - 1)},
    };
    for (const Case& c : cases) {
      ConditionDetail d;
      d.condition = c.cond;
      d.component = k;
      d.required = c.required;
      if (c.required < 0) {
        // No derivative orders to cover; vacuously satisfied.
        d.passed = true;
      } else {
        d.budget = derivative_budget(problem, k, c.region, claims);
        d.passed = d.budget.has_value() && *d.budget >= c.required;
      }
      if (!d.passed) {
        std::ostringstream os;
        os << "condition (" << c.cond << ") fails for component " << k
           << ": derivative budget ";
        if (d.budget)
          os << "p_max = " << *d.budget;
        else
          os << "is empty";
        os << " < required " << c.required << " on " << region_name(c.region);
        verdict.failures.push_back(os.str());
        all_pass = false;
      }
      verdict.details.push_back(d);
    }
  }
  if (!verdict.thresholds.sigma2_gt_sigma0 ||
      !verdict.thresholds.sigma3_gt_sigma0) {
    // The derivative budgets above already reflect this through the p lower
    // bound; record the threshold failure explicitly as well.
    if (!verdict.thresholds.sigma2_gt_sigma0)
      verdict.failures.push_back("sigma2 > sigma0 violated");
    if (!verdict.thresholds.sigma3_gt_sigma0)
      verdict.failures.push_back("sigma3 > sigma0 violated");
  }
  verdict.guaranteed_classical = all_pass && verdict.failures.empty();
  return verdict;
}

}  // namespace petrocheck
