#include "petrocheck/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace petrocheck {

int PDOTerm::aniso_order(int b) const {
  int s = 0;
  for (int a : alpha) s += a;
  return s + 2 * b * beta;
}

int ParabolicProblem::m() const {
  int s = 0;
  for (int k : kappa) s += k;
  return b * s;
}

void ParabolicProblem::validate() {
  if (n < 2) throw InputError("problem: spatial dimension n must be >= 2");
  if (N < 1) throw InputError("problem: N must be >= 1");
  if (N == 1)
    warnings.push_back(
        "N = 1: the scalar specialization of the N >= 2 system theory");
  if (b < 1) throw InputError("problem: b must be a positive integer");
  if (tau <= 0.0) throw InputError("problem: tau must be positive");
  if (static_cast<int>(kappa.size()) != N)
    throw InputError("problem: kappa must list N entries");
  for (int k : kappa)
    if (k < 1) throw InputError("problem: every kappa_k must be positive");
  const int mm = m();
  if (static_cast<int>(ell.size()) != mm)
    throw InputError("problem: ell must list m = b*(kappa_1+...+kappa_N) = " +
                     std::to_string(mm) + " entries, got " +
                     std::to_string(ell.size()));
  if (static_cast<int>(A_terms.size()) != N)
    throw InputError("problem: A term table must have N rows");
  for (int j = 0; j < N; ++j) {
    if (static_cast<int>(A_terms[j].size()) != N)
      throw InputError("problem: A term table row " + std::to_string(j + 1) +
                       " must have N columns");
    for (int k = 0; k < N; ++k) {
      for (const PDOTerm& term : A_terms[j][k]) {
        if (static_cast<int>(term.alpha.size()) != n)
          throw InputError("problem: A[" + std::to_string(j + 1) + "][" +
                           std::to_string(k + 1) + "] term has wrong alpha arity");
        const int ord = term.aniso_order(b);
        const int bound = 2 * b * kappa[k];
        if (ord > bound)
          throw InputError("problem: A[" + std::to_string(j + 1) + "][" +
                           std::to_string(k + 1) + "] term of anisotropic order " +
                           std::to_string(ord) + " exceeds bound " +
                           std::to_string(bound));
      }
    }
  }
  if (static_cast<int>(B_terms.size()) != mm)
    throw InputError("problem: B term table must have m rows");
  for (int j = 0; j < mm; ++j) {
    if (static_cast<int>(B_terms[j].size()) != N)
      throw InputError("problem: B term table row " + std::to_string(j + 1) +
                       " must have N columns");
    for (int k = 0; k < N; ++k) {
      const int bound = ell[j] + 2 * b * kappa[k];
      if (bound < 0 && !B_terms[j][k].empty())
        throw InputError("problem: B[" + std::to_string(j + 1) + "][" +
                         std::to_string(k + 1) +
                         "] must be empty (l_j + 2b*kappa_k < 0)");
      for (const PDOTerm& term : B_terms[j][k]) {
        if (static_cast<int>(term.alpha.size()) != n)
          throw InputError("problem: B[" + std::to_string(j + 1) + "][" +
                           std::to_string(k + 1) + "] term has wrong alpha arity");
        const int ord = term.aniso_order(b);
        if (ord > bound)
          throw InputError("problem: B[" + std::to_string(j + 1) + "][" +
                           std::to_string(k + 1) + "] term of anisotropic order " +
                           std::to_string(ord) + " exceeds bound " +
                           std::to_string(bound));
      }
    }
  }
  for (const BoundarySample& s : boundary_samples) {
    if (static_cast<int>(s.x.size()) != n ||
        static_cast<int>(s.normal.size()) != n)
      throw InputError("problem: boundary sample has wrong dimension");
    double nn = 0.0;
    for (double v : s.normal) nn += v * v;
    if (std::abs(std::sqrt(nn) - 1.0) > 1e-10)
      throw InputError("problem: boundary normal is not a unit vector");
    for (const auto& tv : s.tangents) {
      if (static_cast<int>(tv.size()) != n)
        throw InputError("problem: tangent vector has wrong dimension");
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += tv[i] * s.normal[i];
      if (std::abs(dot) > 1e-10)
        throw InputError("problem: tangent frame vector not orthogonal to normal");
    }
  }
}

namespace {

PolySymbol symbol_from_terms(const std::vector<PDOTerm>& terms, int n, int b,
                             int exact_order, std::span<const double> x,
                             double t) {
  PolySymbol out(n);
  for (const PDOTerm& term : terms) {
    if (term.aniso_order(b) != exact_order) continue;
    Complex c;
    try {
      c = term.coeff.eval(x, t);
    } catch (const InputError& e) {
      throw InputError(std::string("coefficient '") + term.coeff.text() +
                       "' failed to evaluate: " + e.what());
    }
    ExponentKey key;
    key.xi = term.alpha;
    key.p = term.beta;
    out.add_term(key, c);
  }
  return out;
}

}  // namespace

PolySymbol principal_symbol_A(const ParabolicProblem& problem, int j, int k,
                              std::span<const double> x, double t) {
  if (j < 1 || j > problem.N || k < 1 || k > problem.N)
    throw InputError("principal_symbol_A: index out of range");
  const int order = 2 * problem.b * problem.kappa[k - 1];
  return symbol_from_terms(problem.A_terms[j - 1][k - 1], problem.n, problem.b,
                           order, x, t);
}

PolySymbol principal_symbol_B(const ParabolicProblem& problem, int j, int k,
                              std::span<const double> x, double t) {
  if (j < 1 || j > problem.m() || k < 1 || k > problem.N)
    throw InputError("principal_symbol_B: index out of range");
  const int order = problem.ell[j - 1] + 2 * problem.b * problem.kappa[k - 1];
  if (order < 0) return PolySymbol(problem.n);
  return symbol_from_terms(problem.B_terms[j - 1][k - 1], problem.n, problem.b,
                           order, x, t);
}

std::vector<std::vector<PolySymbol>> principal_matrix_A(
    const ParabolicProblem& problem, std::span<const double> x, double t) {
  std::vector<std::vector<PolySymbol>> out;
  out.reserve(problem.N);
  for (int j = 1; j <= problem.N; ++j) {
    std::vector<PolySymbol> row;
    row.reserve(problem.N);
    for (int k = 1; k <= problem.N; ++k)
      row.push_back(principal_symbol_A(problem, j, k, x, t));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<PolySymbol>> principal_matrix_B(
    const ParabolicProblem& problem, std::span<const double> x, double t) {
  std::vector<std::vector<PolySymbol>> out;
  const int mm = problem.m();
  out.reserve(mm);
  for (int j = 1; j <= mm; ++j) {
    std::vector<PolySymbol> row;
    row.reserve(problem.N);
    for (int k = 1; k <= problem.N; ++k)
      row.push_back(principal_symbol_B(problem, j, k, x, t));
    out.push_back(std::move(row));
  }
  return out;
}

OrderConstants derived_orders(const ParabolicProblem& problem) {
  OrderConstants oc;
  oc.m = problem.m();
  oc.sigma0 = 0;
  if (problem.ell.empty())
    throw InputError("derived_orders: empty boundary order list");
  oc.l0 = problem.ell[0];
  for (int l : problem.ell) {
    oc.sigma0 = std::max(oc.sigma0, l + 1);
    oc.l0 = std::max(oc.l0, l);
  }
  return oc;
}

namespace {

// Portable deterministic generator (splitmix64) so geometry sampling does
// not depend on library distribution internals.
class DetRng {
 public:
  explicit DetRng(uint64_t seed) : state_(seed) {}

  double uniform() {  // in [0,1)
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  double normal() {
    // Box-Muller; uses a cached second value.
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

std::vector<double> unit_sphere_point(DetRng& rng, int n) {
  std::vector<double> v(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = rng.normal();
      norm += v[i] * v[i];
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

// Orthonormal tangent frame completing the unit normal, by Gram-Schmidt on
// the coordinate basis.
std::vector<std::vector<double>> tangent_frame(const std::vector<double>& normal) {
  const int n = static_cast<int>(normal.size());
  std::vector<std::vector<double>> frame;
  std::vector<std::vector<double>> basis{normal};
  for (int axis = 0; axis < n && static_cast<int>(frame.size()) < n - 1; ++axis) {
    std::vector<double> v(n, 0.0);
    v[axis] = 1.0;
    for (const auto& u : basis) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += v[i] * u[i];
      for (int i = 0; i < n; ++i) v[i] -= dot * u[i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm < 1e-12) continue;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    basis.push_back(v);
    frame.push_back(std::move(v));
  }
  return frame;
}

std::vector<double> time_grid(double tau, int count) {
  std::vector<double> ts;
  if (count <= 1) {
    ts.push_back(tau / 2.0);
    return ts;
  }
  for (int i = 0; i < count; ++i)
    ts.push_back(tau * static_cast<double>(i) / (count - 1));
  return ts;
}

}  // namespace

std::vector<std::vector<double>> unit_sphere_directions(int n, int count) {
  std::vector<std::vector<double>> dirs;
  dirs.reserve(count);
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double ang = 2.0 * std::numbers::pi * i / count + 0.1;
      dirs.push_back({std::cos(ang), std::sin(ang)});
    }
  } else {
    DetRng rng(0xd1aec7ULL);
    for (int i = 0; i < count; ++i) dirs.push_back(unit_sphere_point(rng, n));
  }
  return dirs;
}

void sample_unit_ball(ParabolicProblem& problem, const GeometryConfig& cfg) {
  const int n = problem.n;
  DetRng rng(0x5eedULL);
  problem.interior_samples.clear();
  problem.boundary_samples.clear();
  const auto ts = time_grid(problem.tau, cfg.time_values);
  for (int i = 0; i < cfg.interior_points; ++i) {
    InteriorSample s;
    s.x = unit_sphere_point(rng, n);
    const double r = 0.15 + 0.7 * rng.uniform();
    for (double& x : s.x) x *= r;
    s.t = ts[i % ts.size()];
    problem.interior_samples.push_back(std::move(s));
  }
  for (int i = 0; i < cfg.boundary_points; ++i) {
    std::vector<double> x;
    if (n == 2) {
      const double ang = 2.0 * std::numbers::pi * i / cfg.boundary_points + 0.3;
      x = {std::cos(ang), std::sin(ang)};
    } else {
      x = unit_sphere_point(rng, n);
    }
    std::vector<double> nu(x);
    for (double& v : nu) v = -v;  // inward normal of the unit ball
    auto frame = tangent_frame(nu);
    for (double t : ts) {
      BoundarySample s;
      s.x = x;
      s.t = t;
      s.normal = nu;
      s.tangents = frame;
      problem.boundary_samples.push_back(std::move(s));
    }
  }
}

void sample_half_space(ParabolicProblem& problem, const GeometryConfig& cfg) {
  const int n = problem.n;
  DetRng rng(0xc011a5ULL);
  problem.interior_samples.clear();
  problem.boundary_samples.clear();
  const auto ts = time_grid(problem.tau, cfg.time_values);
  std::vector<double> nu(n, 0.0);
  nu[n - 1] = 1.0;  // inward normal of {x_n > 0}
  const auto frame = tangent_frame(nu);
  for (int i = 0; i < cfg.interior_points; ++i) {
    InteriorSample s;
    s.x.resize(n);
    for (int d = 0; d < n - 1; ++d) s.x[d] = 2.0 * rng.uniform() - 1.0;
    s.x[n - 1] = 0.05 + 0.9 * rng.uniform();
    s.t = ts[i % ts.size()];
    problem.interior_samples.push_back(std::move(s));
  }
  for (int i = 0; i < cfg.boundary_points; ++i) {
    std::vector<double> x(n, 0.0);
    for (int d = 0; d < n - 1; ++d) x[d] = 2.0 * rng.uniform() - 1.0;
    for (double t : ts) {
      BoundarySample s;
      s.x = x;
      s.t = t;
      s.normal = nu;
      s.tangents = frame;
      problem.boundary_samples.push_back(std::move(s));
    }
  }
}

void sample_smoothed_square(ParabolicProblem& problem, const GeometryConfig& cfg) {
  if (problem.n != 2)
    throw InputError("smoothed-square geometry requires n = 2");
  DetRng rng(0x54a7eULL);
  problem.interior_samples.clear();
  problem.boundary_samples.clear();
  const auto ts = time_grid(problem.tau, cfg.time_values);
  for (int i = 0; i < cfg.interior_points; ++i) {
    InteriorSample s;
    // Rejection sampling inside |x|^4 + |y|^4 < 0.9.
    for (;;) {
      const double x = 2.0 * rng.uniform() - 1.0;
      const double y = 2.0 * rng.uniform() - 1.0;
      if (std::pow(std::abs(x), 4) + std::pow(std::abs(y), 4) < 0.9) {
        s.x = {x, y};
        break;
      }
    }
    s.t = ts[i % ts.size()];
    problem.interior_samples.push_back(std::move(s));
  }
  for (int i = 0; i < cfg.boundary_points; ++i) {
    const double th = 2.0 * std::numbers::pi * i / cfg.boundary_points + 0.2;
    const double c = std::cos(th), sn = std::sin(th);
    auto sgn = [](double v) { return v < 0.0 ? -1.0 : 1.0; };
    const double x = sgn(c) * std::sqrt(std::abs(c));
    const double y = sgn(sn) * std::sqrt(std::abs(sn));
    // Outward gradient of |x|^4 + |y|^4 is (4 x^3 sgn-consistent, 4 y^3).
    double gx = 4.0 * x * x * x;
    double gy = 4.0 * y * y * y;
    double norm = std::sqrt(gx * gx + gy * gy);
    std::vector<double> nu{-gx / norm, -gy / norm};  // inward
    std::vector<std::vector<double>> frame{{-nu[1], nu[0]}};
    for (double t : ts) {
      BoundarySample s;
      s.x = {x, y};
      s.t = t;
      s.normal = nu;
      s.tangents = frame;
      problem.boundary_samples.push_back(std::move(s));
    }
  }
}

}  // namespace petrocheck
