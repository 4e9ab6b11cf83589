// Exact-coefficient polynomial algebra for principal symbols: multivariate
// symbols in (xi_1..xi_n, p, zeta), univariate specializations in zeta,
// determinants and adjugates of symbol matrices, root finding, and the
// numeric rank test used by the covering condition.
#pragma once

#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace petrocheck {

using Complex = std::complex<double>;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Magnitude below which a term is dropped from a symbol after each ring
// operation, keeping the stored form normalized.
inline constexpr double kTermPruneTol = 1e-14;

// Monomial identity: powers of xi_1..xi_n, p and zeta.
struct ExponentKey {
  std::vector<int> xi;
  int p = 0;
  int zeta = 0;

  auto operator<=>(const ExponentKey&) const = default;
};

// Multivariate polynomial with complex coefficients over the frequency
// variables. Immutable in spirit: arithmetic returns new values.
class PolySymbol {
 public:
  explicit PolySymbol(int num_spatial_vars) : nvars_(num_spatial_vars) {}

  static PolySymbol constant(int num_spatial_vars, Complex c);
  static PolySymbol monomial(int num_spatial_vars, ExponentKey key, Complex c);

  int num_spatial_vars() const { return nvars_; }
  const std::map<ExponentKey, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const ExponentKey& key, Complex c);

  PolySymbol operator+(const PolySymbol& other) const;
  PolySymbol operator-(const PolySymbol& other) const;
  PolySymbol operator*(const PolySymbol& other) const;
  PolySymbol operator*(Complex scalar) const;

  Complex eval(std::span<const Complex> xi, Complex p, Complex zeta) const;

  // Largest |coefficient|; 0 for the zero symbol.
  double max_coeff_magnitude() const;

  std::string to_string() const;

 private:
  void prune();

  std::map<ExponentKey, Complex> terms_;
  int nvars_;
};

// Univariate polynomial, coefficients ascending in degree. The zero
// polynomial stores no coefficients and reports degree -1.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Complex> coeffs);

  static UniPoly constant(Complex c);
  // Monic product of (z - roots[i]).
  static UniPoly from_roots(std::span<const Complex> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int k) const {
    return k >= 0 && k <= degree() ? coeffs_[k] : Complex(0.0);
  }
  Complex leading() const { return coeffs_.empty() ? Complex(0.0) : coeffs_.back(); }

  Complex eval(Complex z) const;
  UniPoly derivative() const;

  UniPoly operator+(const UniPoly& other) const;
  UniPoly operator*(const UniPoly& other) const;
  UniPoly operator*(Complex scalar) const;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

struct RootSet {
  // (value, multiplicity) pairs; multiplicities sum to the degree.
  std::vector<std::pair<Complex, int>> roots;
  // Max coefficientwise error of the monic polynomial rebuilt from roots
  // against the monic input.
  double residual = 0.0;

  int total_multiplicity() const;
};

// Determinant by fraction-free minor expansion over the polynomial ring
// (memoized over column subsets). Matrices are row-major vectors of rows.
PolySymbol det_poly_matrix(const std::vector<std::vector<PolySymbol>>& m);

// Transposed cofactor matrix; satisfies M * adj(M) = det(M) * I.
std::vector<std::vector<PolySymbol>> adjugate_poly_matrix(
    const std::vector<std::vector<PolySymbol>>& m);

// Substitutes xi := xi0 + zeta * nu and p := p_value; the result is a
// polynomial in zeta. nu must be a unit vector (within 1e-12).
UniPoly specialize_to_zeta(const PolySymbol& p, std::span<const double> xi0,
                           std::span<const double> nu, Complex p_value);

// Collects P(xi0, p) as a polynomial in p at fixed numeric xi.
UniPoly specialize_to_p(const PolySymbol& p, std::span<const double> xi0);

// All complex roots by Aberth-Ehrlich simultaneous iteration on the monic
// normalization; roots within cluster_tol of each other are merged into a
// single root with multiplicity.
RootSet poly_roots(const UniPoly& q, double cluster_tol = 1e-6);

// Remainder of row modulo a monic polynomial, deg(remainder) < deg(modulus).
UniPoly poly_mod(const UniPoly& row, const UniPoly& modulus);

struct RankResult {
  int rank = 0;
  std::vector<double> singular_values;  // descending
};

// Numeric rank: singular values above tol * (largest singular value).
RankResult numeric_rank(const std::vector<std::vector<Complex>>& m,
                        double tol = 1e-8);

}  // namespace petrocheck
