#include "petrocheck/poly.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace petrocheck {

namespace {

Complex ipow(Complex base, int e) {
  Complex r{1.0};
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace

PolySymbol PolySymbol::constant(int num_spatial_vars, Complex c) {
  ExponentKey key;
  key.xi.assign(num_spatial_vars, 0);
  return monomial(num_spatial_vars, std::move(key), c);
}

PolySymbol PolySymbol::monomial(int num_spatial_vars, ExponentKey key, Complex c) {
  if (static_cast<int>(key.xi.size()) != num_spatial_vars)
    throw InputError("monomial: exponent key has wrong spatial arity");
  PolySymbol out(num_spatial_vars);
  out.add_term(key, c);
  return out;
}

void PolySymbol::add_term(const ExponentKey& key, Complex c) {
  if (static_cast<int>(key.xi.size()) != nvars_)
    throw InputError("add_term: exponent key has wrong spatial arity");
  for (int e : key.xi)
    if (e < 0) throw InputError("add_term: negative exponent");
  if (key.p < 0 || key.zeta < 0) throw InputError("add_term: negative exponent");
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    if (std::abs(c) > kTermPruneTol) terms_.emplace(key, c);
  } else {
    it->second += c;
    if (std::abs(it->second) <= kTermPruneTol) terms_.erase(it);
  }
}

PolySymbol PolySymbol::operator+(const PolySymbol& other) const {
  if (nvars_ != other.nvars_) throw InputError("PolySymbol +: arity mismatch");
  PolySymbol out = *this;
  for (const auto& [key, c] : other.terms_) out.add_term(key, c);
  out.prune();
  return out;
}

PolySymbol PolySymbol::operator-(const PolySymbol& other) const {
  return *this + other * Complex(-1.0);
}

PolySymbol PolySymbol::operator*(const PolySymbol& other) const {
  if (nvars_ != other.nvars_) throw InputError("PolySymbol *: arity mismatch");
  PolySymbol out(nvars_);
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : other.terms_) {
      ExponentKey key = ka;
      for (int i = 0; i < nvars_; ++i) key.xi[i] += kb.xi[i];
      key.p += kb.p;
      key.zeta += kb.zeta;
      auto it = out.terms_.find(key);
      if (it == out.terms_.end())
        out.terms_.emplace(std::move(key), ca * cb);
      else
        it->second += ca * cb;
    }
  }
  out.prune();
  return out;
}

PolySymbol PolySymbol::operator*(Complex scalar) const {
  PolySymbol out(nvars_);
  for (const auto& [key, c] : terms_) out.terms_.emplace(key, c * scalar);
  out.prune();
  return out;
}

Complex PolySymbol::eval(std::span<const Complex> xi, Complex p, Complex zeta) const {
  if (static_cast<int>(xi.size()) != nvars_)
    throw InputError("PolySymbol eval: xi has wrong arity");
  Complex sum{0.0};
  for (const auto& [key, c] : terms_) {
    Complex term = c;
    for (int i = 0; i < nvars_; ++i) term *= ipow(xi[i], key.xi[i]);
    term *= ipow(p, key.p);
    term *= ipow(zeta, key.zeta);
    sum += term;
  }
  return sum;
}

double PolySymbol::max_coeff_magnitude() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string PolySymbol::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
       << "i)";
    for (int i = 0; i < nvars_; ++i)
      if (key.xi[i] != 0) os << "*xi" << (i + 1) << "^" << key.xi[i];
    if (key.p != 0) os << "*p^" << key.p;
    if (key.zeta != 0) os << "*zeta^" << key.zeta;
  }
  return os.str();
}

void PolySymbol::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= kTermPruneTol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

UniPoly::UniPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

UniPoly UniPoly::constant(Complex c) { return UniPoly({c}); }

UniPoly UniPoly::from_roots(std::span<const Complex> roots) {
  std::vector<Complex> c{Complex(1.0)};
  for (Complex r : roots) {
    c.push_back(Complex(0.0));
    for (int i = static_cast<int>(c.size()) - 1; i > 0; --i)
      c[i] = c[i - 1] - r * c[i];
    c[0] = -r * c[0];
  }
  UniPoly out;
  out.coeffs_ = std::move(c);
  return out;
}

Complex UniPoly::eval(Complex z) const {
  Complex r{0.0};
  for (int i = degree(); i >= 0; --i) r = r * z + coeffs_[i];
  return r;
}

UniPoly UniPoly::derivative() const {
  if (degree() < 1) return UniPoly();
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i)
    d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return UniPoly(std::move(d));
}

UniPoly UniPoly::operator+(const UniPoly& other) const {
  std::vector<Complex> c(std::max(coeffs_.size(), other.coeffs_.size()),
                         Complex(0.0));
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < other.coeffs_.size(); ++i) c[i] += other.coeffs_[i];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator*(const UniPoly& other) const {
  if (is_zero() || other.is_zero()) return UniPoly();
  std::vector<Complex> c(coeffs_.size() + other.coeffs_.size() - 1,
                         Complex(0.0));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < other.coeffs_.size(); ++j)
      c[i + j] += coeffs_[i] * other.coeffs_[j];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator*(Complex scalar) const {
  std::vector<Complex> c = coeffs_;
  for (auto& x : c) x *= scalar;
  return UniPoly(std::move(c));
}

void UniPoly::trim() {
  while (!coeffs_.empty() && std::abs(coeffs_.back()) == 0.0)
    coeffs_.pop_back();
}

int RootSet::total_multiplicity() const {
  int s = 0;
  for (const auto& [r, m] : roots) s += m;
  return s;
}

namespace {

// Minor-expansion determinant memoized over (starting row, column subset).
class DetExpander {
 public:
  explicit DetExpander(const std::vector<std::vector<PolySymbol>>& m)
      : m_(m), n_(static_cast<int>(m.size())) {}

  PolySymbol run() { return det(0, (1u << n_) - 1u); }

 private:
  PolySymbol det(int row, unsigned cols) {
    if (row == n_) return PolySymbol::constant(m_[0][0].num_spatial_vars(), 1.0);
    auto it = memo_.find(cols);
    if (it != memo_.end()) return it->second;
    PolySymbol acc(m_[0][0].num_spatial_vars());
    int sign = 1;
    for (int c = 0; c < n_; ++c) {
      if (!(cols & (1u << c))) continue;
      if (!m_[row][c].is_zero()) {
        PolySymbol sub = det(row + 1, cols & ~(1u << c));
        PolySymbol contrib = m_[row][c] * sub;
        acc = (sign > 0) ? acc + contrib : acc - contrib;
      }
      sign = -sign;
    }
    memo_.emplace(cols, acc);
    return acc;
  }

  const std::vector<std::vector<PolySymbol>>& m_;
  int n_;
  std::map<unsigned, PolySymbol> memo_;
};

void check_square(const std::vector<std::vector<PolySymbol>>& m) {
  if (m.empty()) throw InputError("matrix is empty");
  const size_t n = m.size();
  const int nvars = m[0][0].num_spatial_vars();
  for (const auto& row : m) {
    if (row.size() != n) throw InputError("matrix is not square");
    for (const auto& e : row)
      if (e.num_spatial_vars() != nvars)
        throw InputError("matrix entries disagree on spatial arity");
  }
}

}  // namespace

PolySymbol det_poly_matrix(const std::vector<std::vector<PolySymbol>>& m) {
  check_square(m);
  if (m.size() > 24) throw InputError("matrix side too large for determinant");
  DetExpander ex(m);
  return ex.run();
}

std::vector<std::vector<PolySymbol>> adjugate_poly_matrix(
    const std::vector<std::vector<PolySymbol>>& m) {
  check_square(m);
  const int n = static_cast<int>(m.size());
  const int nvars = m[0][0].num_spatial_vars();
  if (n == 1) {
    return {{PolySymbol::constant(nvars, 1.0)}};
  }
  std::vector<std::vector<PolySymbol>> adj(
      n, std::vector<PolySymbol>(n, PolySymbol(nvars)));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      // Minor with row r and column c removed.
      std::vector<std::vector<PolySymbol>> sub;
      sub.reserve(n - 1);
      for (int i = 0; i < n; ++i) {
        if (i == r) continue;
        std::vector<PolySymbol> row;
        row.reserve(n - 1);
        for (int j = 0; j < n; ++j) {
          if (j == c) continue;
          row.push_back(m[i][j]);
        }
        sub.push_back(std::move(row));
      }
      PolySymbol cof = det_poly_matrix(sub);
      if ((r + c) % 2 != 0) cof = cof * Complex(-1.0);
      adj[c][r] = std::move(cof);  // transposed cofactor
    }
  }
  return adj;
}

UniPoly specialize_to_zeta(const PolySymbol& p, std::span<const double> xi0,
                           std::span<const double> nu, Complex p_value) {
  const int n = p.num_spatial_vars();
  if (static_cast<int>(xi0.size()) != n || static_cast<int>(nu.size()) != n)
    throw InputError("specialize_to_zeta: vector arity mismatch");
  double norm2 = 0.0;
  for (double v : nu) norm2 += v * v;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
    throw InputError("specialize_to_zeta: nu is not a unit vector");

  UniPoly acc;
  for (const auto& [key, c] : p.terms()) {
    // (xi0_i + zeta*nu_i)^{a_i} expanded by repeated convolution.
    UniPoly term = UniPoly::constant(c * ipow(p_value, key.p));
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < key.xi[i]; ++e)
        term = term * UniPoly({Complex(xi0[i]), Complex(nu[i])});
    }
    if (key.zeta > 0) {
      std::vector<Complex> z(key.zeta + 1, Complex(0.0));
      z.back() = Complex(1.0);
      term = term * UniPoly(std::move(z));
    }
    acc = acc + term;
  }
  return acc;
}

UniPoly specialize_to_p(const PolySymbol& p, std::span<const double> xi0) {
  const int n = p.num_spatial_vars();
  if (static_cast<int>(xi0.size()) != n)
    throw InputError("specialize_to_p: xi arity mismatch");
  std::vector<Complex> coeffs;
  for (const auto& [key, c] : p.terms()) {
    if (key.zeta != 0)
      throw InputError("specialize_to_p: symbol contains zeta");
    Complex v = c;
    for (int i = 0; i < n; ++i) v *= ipow(Complex(xi0[i]), key.xi[i]);
    if (static_cast<int>(coeffs.size()) <= key.p)
      coeffs.resize(key.p + 1, Complex(0.0));
    coeffs[key.p] += v;
  }
  return UniPoly(std::move(coeffs));
}

namespace {

// Horner evaluation returning both p(z) and the running magnitude sum used
// as a roundoff floor for the stopping test.
std::pair<Complex, double> eval_with_bound(const std::vector<Complex>& c,
                                           Complex z) {
  Complex r{0.0};
  double bound = 0.0;
  const double az = std::abs(z);
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    r = r * z + c[i];
    bound = bound * az + std::abs(c[i]);
  }
  return {r, bound};
}

}  // namespace

RootSet poly_roots(const UniPoly& q, double cluster_tol) {
  const int d = q.degree();
  if (d < 1)
    throw DegeneracyError("poly_roots: polynomial degree < 1");
  double max_mag = 0.0;
  for (const auto& c : q.coeffs()) max_mag = std::max(max_mag, std::abs(c));
  if (std::abs(q.leading()) <= 1e-12 * max_mag)
    throw DegeneracyError("poly_roots: near-zero leading coefficient");

  // Monic normalization.
  std::vector<Complex> c(q.coeffs());
  const Complex lead = c.back();
  for (auto& x : c) x /= lead;

  std::vector<Complex> dc(d);
  for (int i = 1; i <= d; ++i) dc[i - 1] = c[i] * static_cast<double>(i);

  // Cauchy-style radius bound for initial guesses.
  double radius = 0.0;
  for (int i = 0; i < d; ++i) radius = std::max(radius, std::abs(c[i]));
  radius = 1.0 + radius;

  std::vector<Complex> z(d);
  for (int k = 0; k < d; ++k) {
    const double ang =
        2.0 * std::numbers::pi * (k + 0.35) / d + 0.45;  // avoid axes
    z[k] = 0.6 * radius * Complex(std::cos(ang), std::sin(ang));
  }

  std::vector<bool> frozen(d, false);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 800; ++iter) {
    double max_step = 0.0;
    for (int k = 0; k < d; ++k) {
      if (frozen[k]) continue;
      auto [pv, pb] = eval_with_bound(c, z[k]);
      if (std::abs(pv) <= 8.0 * eps * pb) {
        frozen[k] = true;
        continue;
      }
      auto [dv, db] = eval_with_bound(dc, z[k]);
      Complex ratio;
      if (std::abs(dv) > 0.0)
        ratio = pv / dv;
      else
        ratio = Complex(1e-8, 1e-8);
      Complex sum{0.0};
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        Complex diff = z[k] - z[j];
        if (std::abs(diff) < 1e-300) diff = Complex(1e-300);
        sum += Complex(1.0) / diff;
      }
      Complex denom = Complex(1.0) - ratio * sum;
      Complex step = (std::abs(denom) > 1e-300) ? ratio / denom : ratio;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
    }
    bool all_frozen = true;
    for (bool f : frozen) all_frozen = all_frozen && f;
    if (all_frozen || max_step < 1e-15) break;
  }

  // Cluster roots within cluster_tol (transitive closure via union-find).
  std::vector<int> parent(d);
  for (int i = 0; i < d; ++i) parent[i] = i;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(z[i] - z[j]) <= cluster_tol) parent[find(i)] = find(j);

  std::map<int, std::pair<Complex, int>> clusters;
  for (int i = 0; i < d; ++i) {
    auto& [sum, cnt] = clusters[find(i)];
    sum += z[i];
    ++cnt;
  }
  RootSet out;
  for (auto& [root_id, sc] : clusters)
    out.roots.emplace_back(sc.first / static_cast<double>(sc.second), sc.second);
  std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });

  // Residual against the monic input.
  std::vector<Complex> expanded_roots;
  for (const auto& [r, m] : out.roots)
    for (int i = 0; i < m; ++i) expanded_roots.push_back(r);
  UniPoly rebuilt = UniPoly::from_roots(expanded_roots);
  double res = 0.0;
  for (int i = 0; i <= d; ++i)
    res = std::max(res, std::abs(rebuilt.coeff(i) - c[i]));
  out.residual = res;
  return out;
}

UniPoly poly_mod(const UniPoly& row, const UniPoly& modulus) {
  if (modulus.degree() < 1)
    throw InputError("poly_mod: modulus degree must be >= 1");
  if (std::abs(modulus.leading() - Complex(1.0)) > 1e-12)
    throw InputError("poly_mod: modulus must be monic");
  if (row.degree() < modulus.degree()) return row;
  std::vector<Complex> r(row.coeffs());
  const int dm = modulus.degree();
  for (int i = static_cast<int>(r.size()) - 1; i >= dm; --i) {
    Complex q = r[i];
    if (std::abs(q) == 0.0) continue;
    r[i] = Complex(0.0);
    for (int j = 0; j < dm; ++j) r[i - dm + j] -= q * modulus.coeff(j);
  }
  r.resize(dm);
  return UniPoly(std::move(r));
}

RankResult numeric_rank(const std::vector<std::vector<Complex>>& m, double tol) {
  if (m.empty() || m[0].empty()) throw InputError("numeric_rank: empty matrix");
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  Eigen::MatrixXcd a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(m[i].size()) != cols)
      throw InputError("numeric_rank: ragged matrix");
    for (int j = 0; j < cols; ++j) a(i, j) = m[i][j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  RankResult out;
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) out.singular_values.push_back(sv(i));
  const double smax = out.singular_values.empty() ? 0.0 : out.singular_values[0];
  for (double s : out.singular_values)
    if (s > tol * smax && smax > 0.0) ++out.rank;
  return out;
}

}  // namespace petrocheck
