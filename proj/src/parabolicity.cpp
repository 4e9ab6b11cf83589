#include "petrocheck/parabolicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace petrocheck {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Skipped: return "skipped";
  }
  return "unknown";
}

namespace {

std::string point_str(std::span<const double> x, double t) {
  std::ostringstream os;
  os << "x=(";
  for (size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << "), t=" << t;
  return os.str();
}

int sum_kappa(const ParabolicProblem& problem) {
  int s = 0;
  for (int k : problem.kappa) s += k;
  return s;
}

}  // namespace

Condition1Result check_condition_i(const ParabolicProblem& problem,
                                   const SamplingConfig& config) {
  Condition1Result res;
  if (problem.interior_samples.empty())
    throw InputError("condition (i): no interior samples");
  const auto dirs = unit_sphere_directions(problem.n, config.xi_directions);
  const int p_degree = sum_kappa(problem);

  double delta = std::numeric_limits<double>::infinity();
  for (const InteriorSample& s : problem.interior_samples) {
    const auto a0 = principal_matrix_A(problem, s.x, s.t);
    const PolySymbol det = det_poly_matrix(a0);
    for (const auto& xi : dirs) {
      const UniPoly in_p = specialize_to_p(det, xi);
      const double maxc = [&] {
        double m = 0.0;
        for (const auto& c : in_p.coeffs()) m = std::max(m, std::abs(c));
        return m;
      }();
      if (in_p.degree() != p_degree ||
          std::abs(in_p.leading()) <= 1e-9 * maxc) {
        throw DegeneracyError(
            "condition (i): degree of det A^(0) in p collapsed at sample " +
            point_str(s.x, s.t));
      }
      const RootSet roots = poly_roots(in_p, config.cluster_tol);
      for (const auto& [root, mult] : roots.roots) {
        const double d = -root.real();  // |xi| = 1, so -Re p / |xi|^{2b}
        if (d < delta) {
          delta = d;
          res.worst_witness = Witness{s.x, s.t, xi, root};
        }
      }
    }
  }
  res.delta_estimate = delta;
  res.passed = delta > config.delta_floor;
  res.verdict = res.passed ? Verdict::Pass : Verdict::Fail;
  res.note = "sampled evidence over " +
             std::to_string(problem.interior_samples.size()) +
             " interior points x " + std::to_string(dirs.size()) +
             " xi directions; not a proof";
  return res;
}

Condition2Result check_condition_ii(const ParabolicProblem& problem) {
  Condition2Result res;
  for (const InteriorSample& s : problem.interior_samples) {
    for (int j = 1; j <= problem.N; ++j) {
      for (int k = 1; k <= problem.N; ++k) {
        // Coefficient of the pure-time term alpha = 0, beta = kappa_k.
        Complex c{0.0};
        for (const PDOTerm& term : problem.A_terms[j - 1][k - 1]) {
          if (term.beta != problem.kappa[k - 1]) continue;
          bool pure = true;
          for (int a : term.alpha) pure = pure && a == 0;
          if (pure) c += term.coeff.eval(s.x, s.t);
        }
        const Complex want = (j == k) ? Complex(1.0) : Complex(0.0);
        if (std::abs(c - want) > 1e-10) {
          std::ostringstream os;
          os << "A[" << j << "][" << k << "] pure-time coefficient is ("
             << c.real() << "," << c.imag() << ") instead of "
             << (j == k ? "1" : "0") << " at " << point_str(s.x, s.t);
          res.violations.push_back(os.str());
        }
      }
    }
  }
  res.passed = res.violations.empty();
  res.verdict = res.passed ? Verdict::Pass : Verdict::Fail;
  return res;
}

std::pair<RootSet, RootSet> compute_zeta_split(const ParabolicProblem& problem,
                                               const BoundarySample& sample,
                                               std::span<const double> xi_tangent,
                                               Complex p_value,
                                               const SamplingConfig& config) {
  const int n = problem.n;
  if (static_cast<int>(xi_tangent.size()) != n)
    throw InputError("compute_zeta_split: xi has wrong dimension");
  double dot = 0.0, xi_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    dot += xi_tangent[i] * sample.normal[i];
    xi_norm += xi_tangent[i] * xi_tangent[i];
  }
  xi_norm = std::sqrt(xi_norm);
  if (std::abs(dot) > 1e-10)
    throw InputError("compute_zeta_split: xi is not tangent to the boundary");
  if (xi_norm + std::abs(p_value) == 0.0)
    throw InputError("compute_zeta_split: |xi| + |p| must be nonzero");

  const auto a0 = principal_matrix_A(problem, sample.x, sample.t);
  const PolySymbol det = det_poly_matrix(a0);
  const UniPoly in_zeta =
      specialize_to_zeta(det, xi_tangent, sample.normal, p_value);
  const int expected = 2 * problem.m();
  double maxc = 0.0;
  for (const auto& c : in_zeta.coeffs()) maxc = std::max(maxc, std::abs(c));
  if (in_zeta.degree() != expected ||
      std::abs(in_zeta.leading()) <= 1e-9 * maxc)
    throw DegeneracyError(
        "zeta polynomial degree is not 2m at " + point_str(sample.x, sample.t));

  const RootSet all = poly_roots(in_zeta, config.cluster_tol);
  RootSet plus, minus;
  for (const auto& [root, mult] : all.roots) {
    if (std::abs(root.imag()) < config.im_floor)
      throw SeparationError(
          "zeta root too close to the real axis at " +
          point_str(sample.x, sample.t) + " (Im = " +
          std::to_string(root.imag()) + ")");
    if (root.imag() > 0.0)
      plus.roots.emplace_back(root, mult);
    else
      minus.roots.emplace_back(root, mult);
  }
  plus.residual = minus.residual = all.residual;
  if (plus.total_multiplicity() != problem.m() ||
      minus.total_multiplicity() != problem.m())
    throw SeparationError(
        "zeta roots do not split m/m across the real axis at " +
        point_str(sample.x, sample.t));
  return {plus, minus};
}

namespace {

struct FreqSample {
  std::vector<double> xi;  // tangent frequency vector (may be zero)
  Complex p;
};

std::vector<FreqSample> admissible_samples(const ParabolicProblem& problem,
                                           const BoundarySample& bs,
                                           double delta1,
                                           const SamplingConfig& config) {
  std::vector<FreqSample> out;
  const int n = problem.n;
  // Tangent directions mapped through the orthonormal frame.
  std::vector<std::vector<double>> tangent_dirs;
  if (n == 2) {
    tangent_dirs.push_back(bs.tangents[0]);
    if (config.tangent_directions > 1) {
      std::vector<double> neg(bs.tangents[0]);
      for (double& v : neg) v = -v;
      tangent_dirs.push_back(std::move(neg));
    }
  } else {
    const auto combos =
        unit_sphere_directions(n - 1, std::max(1, config.tangent_directions));
    for (const auto& c : combos) {
      std::vector<double> d(n, 0.0);
      for (int f = 0; f < n - 1; ++f)
        for (int i = 0; i < n; ++i) d[i] += c[f] * bs.tangents[f][i];
      tangent_dirs.push_back(std::move(d));
    }
  }

  // Anisotropic sphere slice |xi|^{2b} + |p| = 1 with |xi|^{2b} = 1/2.
  const double rho = std::pow(0.5, 1.0 / (2.0 * problem.b));
  const double pmag = 0.5;
  const double theta_max = 0.999 * std::acos(std::clamp(-delta1, -1.0, 1.0));
  for (const auto& dir : tangent_dirs) {
    std::vector<double> xi(dir);
    for (double& v : xi) v *= rho;
    for (int k = 0; k < config.p_arc_points; ++k) {
      const double th = config.p_arc_points == 1
                            ? 0.0
                            : -theta_max + 2.0 * theta_max * k /
                                               (config.p_arc_points - 1);
      out.push_back({xi, pmag * Complex(std::cos(th), std::sin(th))});
    }
  }
  // The pure-p point: xi = 0, |p| = 1, Re p >= 0.
  for (int k = 0; k < config.pure_p_points; ++k) {
    const double span = 0.98 * std::numbers::pi / 2.0;
    const double th = config.pure_p_points == 1
                          ? 0.0
                          : -span + 2.0 * span * k / (config.pure_p_points - 1);
    out.push_back({std::vector<double>(n, 0.0),
                   Complex(std::cos(th), std::sin(th))});
  }
  return out;
}

}  // namespace

CoveringResult check_condition_iii(const ParabolicProblem& problem,
                                   double delta1,
                                   const SamplingConfig& config) {
  CoveringResult res;
  if (problem.boundary_samples.empty())
    throw InputError("condition (iii): no boundary samples");
  if (delta1 <= 0.0)
    throw InputError("condition (iii): delta1 must be positive");
  const int m = problem.m();
  const int N = problem.N;

  res.min_rank_margin = std::numeric_limits<double>::infinity();
  bool all_pass = true;
  for (const BoundarySample& bs : problem.boundary_samples) {
    const auto a0 = principal_matrix_A(problem, bs.x, bs.t);
    const auto b0 = principal_matrix_B(problem, bs.x, bs.t);
    const auto adj = adjugate_poly_matrix(a0);
    for (const FreqSample& fs : admissible_samples(problem, bs, delta1, config)) {
      RootSet plus;
      try {
        auto [zp, zm] = compute_zeta_split(problem, bs, fs.xi, fs.p, config);
        plus = std::move(zp);
      } catch (const SeparationError& e) {
        throw SeparationError(std::string(e.what()) + " while checking (iii)");
      } catch (const DegeneracyError& e) {
        throw DegeneracyError(std::string(e.what()) + " while checking (iii)");
      }
      std::vector<Complex> plus_roots;
      for (const auto& [r, mult] : plus.roots)
        for (int i = 0; i < mult; ++i) plus_roots.push_back(r);
      const UniPoly modulus = UniPoly::from_roots(plus_roots);

      // Specialize B^(0) and the adjugate to zeta, multiply, reduce mod the
      // plus-root factor, and flatten remainders into an m x (m*N) matrix.
      std::vector<std::vector<UniPoly>> bz(m, std::vector<UniPoly>(N));
      std::vector<std::vector<UniPoly>> az(N, std::vector<UniPoly>(N));
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < N; ++k)
          bz[j][k] = specialize_to_zeta(b0[j][k], fs.xi, bs.normal, fs.p);
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          az[j][k] = specialize_to_zeta(adj[j][k], fs.xi, bs.normal, fs.p);

      std::vector<std::vector<Complex>> flat(
          m, std::vector<Complex>(m * N, Complex(0.0)));
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < N; ++k) {
          UniPoly entry;
          for (int q = 0; q < N; ++q) entry = entry + bz[j][q] * az[q][k];
          const UniPoly rem = poly_mod(entry, modulus);
          for (int c = 0; c < m; ++c) flat[j][k * m + c] = rem.coeff(c);
        }
        // Row scaling preserves rank; keeps rows of different boundary
        // orders comparable under one relative tolerance.
        double rmax = 0.0;
        for (const Complex& v : flat[j]) rmax = std::max(rmax, std::abs(v));
        if (rmax > 0.0)
          for (Complex& v : flat[j]) v /= rmax;
      }

      const RankResult rank = numeric_rank(flat, config.rank_tol);
      const double margin =
          (static_cast<int>(rank.singular_values.size()) >= m &&
           rank.singular_values[0] > 0.0)
              ? rank.singular_values[m - 1] / rank.singular_values[0]
              : 0.0;
      ++res.samples_checked;
      if (margin < res.min_rank_margin) {
        res.min_rank_margin = margin;
        res.worst_witness = Witness{bs.x, bs.t, fs.xi, fs.p};
      }
      if (rank.rank != m) all_pass = false;
    }
  }
  res.passed = all_pass;
  res.verdict = all_pass ? Verdict::Pass : Verdict::Fail;
  res.note = "sampled evidence; delta1 = " + std::to_string(delta1) +
             "; smaller delta1 only enlarges the sampled p-set";
  return res;
}

ParabolicityReport check_parabolicity(const ParabolicProblem& problem,
                                      const SamplingConfig& config) {
  ParabolicityReport report;
  report.condition_i = check_condition_i(problem, config);
  report.condition_ii = check_condition_ii(problem);
  if (report.condition_i.passed) {
    report.delta1_used =
        config.delta1.value_or(report.condition_i.delta_estimate / 2.0);
    report.condition_iii =
        check_condition_iii(problem, report.delta1_used, config);
  } else {
    report.condition_iii.verdict = Verdict::Skipped;
    report.condition_iii.note =
        "skipped: condition (i) failed, no admissible delta1";
  }
  const bool any_fail = !report.condition_i.passed ||
                        !report.condition_ii.passed ||
                        report.condition_iii.verdict == Verdict::Fail;
  if (any_fail)
    report.overall = Verdict::Fail;
  else if (report.condition_i.verdict == Verdict::Pass &&
           report.condition_ii.verdict == Verdict::Pass &&
           report.condition_iii.verdict == Verdict::Pass)
    report.overall = Verdict::Pass;
  else
    report.overall = Verdict::Inconclusive;
  return report;
}

}  // namespace petrocheck
