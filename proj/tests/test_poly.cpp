#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "petrocheck/poly.hpp"

using namespace petrocheck;

namespace {

PolySymbol xi_sq_sum(int n) {
  PolySymbol s(n);
  for (int a = 0; a < n; ++a) {
    ExponentKey key;
    key.xi.assign(n, 0);
    key.xi[a] = 2;
    s.add_term(key, Complex(1.0));
  }
  return s;
}

PolySymbol p_var(int n) {
  ExponentKey key;
  key.xi.assign(n, 0);
  key.p = 1;
  return PolySymbol::monomial(n, key, Complex(1.0));
}

PolySymbol random_symbol(int n, std::mt19937& gen, int max_terms = 4) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> expo(0, 2);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  PolySymbol s(n);
  const int count = nterms(gen);
  for (int i = 0; i < count; ++i) {
    ExponentKey key;
    key.xi.resize(n);
    for (int a = 0; a < n; ++a) key.xi[a] = expo(gen);
    key.p = expo(gen) % 2;
    s.add_term(key, Complex(coeff(gen), coeff(gen)));
  }
  return s;
}

double symbol_max_diff(const PolySymbol& a, const PolySymbol& b) {
  const PolySymbol d = a - b;
  return d.max_coeff_magnitude();
}

}  // namespace

TEST_CASE("symbol arithmetic and evaluation") {
  // p + |xi|^2 is the heat symbol; evaluate at a sample frequency point.
  const int n = 2;
  const PolySymbol heat = p_var(n) + xi_sq_sum(n);
  const Complex xi[] = {Complex(1.0), Complex(2.0)};
  CHECK(std::abs(heat.eval(xi, Complex(-3.0, 1.0), Complex(0.0)) -
                 Complex(2.0, 1.0)) < 1e-12);
  CHECK(std::abs(heat.eval(xi, Complex(0.0), Complex(0.0)) - Complex(5.0)) <
        1e-12);

  // Subtraction prunes to the exact zero symbol.
  CHECK((heat - heat).is_zero());

  // Distributivity on random symbols.
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const PolySymbol a = random_symbol(n, gen);
    const PolySymbol b = random_symbol(n, gen);
    const PolySymbol c = random_symbol(n, gen);
    CHECK(symbol_max_diff(a * (b + c), a * b + a * c) < 1e-10);
    CHECK(symbol_max_diff(a * b, b * a) < 1e-12);
  }
}

TEST_CASE("determinant of diagonal and triangular matrices") {
  const int n = 2;
  const PolySymbol heat = p_var(n) + xi_sq_sum(n);
  std::vector<std::vector<PolySymbol>> m(
      2, std::vector<PolySymbol>(2, PolySymbol(n)));
  m[0][0] = heat;
  m[1][1] = heat;
  const PolySymbol det = det_poly_matrix(m);
  CHECK(symbol_max_diff(det, heat * heat) < 1e-12);

  // Upper-triangular entry does not change the determinant.
  m[0][1] = xi_sq_sum(n);
  CHECK(symbol_max_diff(det_poly_matrix(m), heat * heat) < 1e-12);
}

TEST_CASE("adjugate identity M adj(M) = det(M) I on random matrices") {
  std::mt19937 gen(11);
  const int n = 2;
  for (int trial = 0; trial < 25; ++trial) {
    const int size = 2 + trial % 3;
    std::vector<std::vector<PolySymbol>> m(
        size, std::vector<PolySymbol>(size, PolySymbol(n)));
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) m[r][c] = random_symbol(n, gen, 2);
    const PolySymbol det = det_poly_matrix(m);
    const auto adj = adjugate_poly_matrix(m);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        PolySymbol acc(n);
        for (int k = 0; k < size; ++k) acc = acc + m[r][k] * adj[k][c];
        const PolySymbol expected = r == c ? det : PolySymbol(n);
        const double scale = std::max(1.0, det.max_coeff_magnitude());
        CHECK(symbol_max_diff(acc, expected) / scale < 1e-9);
      }
    }
  }
}

TEST_CASE("specialize_to_zeta on the heat symbol") {
  // P = p + |xi|^2 with xi := xi0 + zeta nu gives
  // p + |xi0|^2 + 2 zeta <xi0, nu> + zeta^2.
  const int n = 2;
  const PolySymbol heat = p_var(n) + xi_sq_sum(n);
  const double xi0[] = {1.0, 0.0};
  const double nu[] = {0.0, 1.0};
  const UniPoly q = specialize_to_zeta(heat, xi0, nu, Complex(-2.0, 0.5));
  REQUIRE(q.degree() == 2);
  CHECK(std::abs(q.coeff(0) - Complex(-1.0, 0.5)) < 1e-12);
  CHECK(std::abs(q.coeff(1)) < 1e-12);
  CHECK(std::abs(q.coeff(2) - Complex(1.0)) < 1e-12);

  // Non-unit direction is rejected.
  const double bad_nu[] = {0.0, 2.0};
  CHECK_THROWS_AS(specialize_to_zeta(heat, xi0, bad_nu, Complex(0.0)),
                  InputError);
}

TEST_CASE("specialize_to_zeta is linear in the symbol") {
  std::mt19937 gen(23);
  const int n = 3;
  const double xi0[] = {0.3, -0.7, 0.2};
  const double nu[] = {0.0, 0.0, 1.0};
  for (int trial = 0; trial < 10; ++trial) {
    const PolySymbol a = random_symbol(n, gen);
    const PolySymbol b = random_symbol(n, gen);
    const Complex p_value(-1.2, 0.4);
    const UniPoly qa = specialize_to_zeta(a, xi0, nu, p_value);
    const UniPoly qb = specialize_to_zeta(b, xi0, nu, p_value);
    const UniPoly qs = specialize_to_zeta(a + b, xi0, nu, p_value);
    const UniPoly sum = qa + qb;
    const int deg = std::max(qs.degree(), sum.degree());
    for (int k = 0; k <= deg; ++k)
      CHECK(std::abs(qs.coeff(k) - sum.coeff(k)) < 1e-10);
  }
}

TEST_CASE("specialize_to_p collects the p-polynomial") {
  const int n = 2;
  const PolySymbol heat = p_var(n) + xi_sq_sum(n);
  const double xi0[] = {1.0, 2.0};
  const UniPoly q = specialize_to_p(heat, xi0);
  REQUIRE(q.degree() == 1);
  CHECK(std::abs(q.coeff(0) - Complex(5.0)) < 1e-12);
  CHECK(std::abs(q.coeff(1) - Complex(1.0)) < 1e-12);
}

TEST_CASE("poly_roots on known factorizations") {
  // (z - 1)(z - 2)(z - 3)
  UniPoly q({Complex(-6.0), Complex(11.0), Complex(-6.0), Complex(1.0)});
  RootSet roots = poly_roots(q);
  REQUIRE(roots.total_multiplicity() == 3);
  std::vector<double> re;
  for (const auto& [z, mult] : roots.roots) {
    CHECK(mult == 1);
    CHECK(std::abs(z.imag()) < 1e-9);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(re[2] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(roots.residual < 1e-8);

  // Multiple root: (z + 1)^3 clusters into one root of multiplicity 3. The
  // attainable accuracy for a triple root is ~eps^(1/3), so the clustering
  // tolerance must sit above that.
  const Complex triple[] = {Complex(-1.0), Complex(-1.0), Complex(-1.0)};
  RootSet rs = poly_roots(UniPoly::from_roots(triple), 1e-4);
  REQUIRE(rs.roots.size() == 1);
  CHECK(rs.roots[0].second == 3);
  CHECK(std::abs(rs.roots[0].first - Complex(-1.0)) < 1e-5);
}

TEST_CASE("poly_roots random reconstruction property") {
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int deg = 2 + trial % 7;
    std::vector<Complex> roots;
    while (static_cast<int>(roots.size()) < deg) {
      Complex z(coord(gen), coord(gen));
      bool separated = true;
      for (const Complex& w : roots)
        if (std::abs(z - w) < 0.2) separated = false;
      if (separated) roots.push_back(z);
    }
    const UniPoly q = UniPoly::from_roots(roots);
    RootSet rs = poly_roots(q);
    REQUIRE(rs.total_multiplicity() == deg);
    CHECK(rs.residual < 1e-8);
    for (const auto& [z, mult] : rs.roots) {
      double best = 1e9;
      for (const Complex& w : roots) best = std::min(best, std::abs(z - w));
      CHECK(best < 1e-7);
    }
  }
}

TEST_CASE("poly_mod remainder identity") {
  // row = z^4, modulus = (z - 1)(z + 1) = z^2 - 1 gives remainder 1.
  UniPoly row({Complex(0.0), Complex(0.0), Complex(0.0), Complex(0.0),
               Complex(1.0)});
  UniPoly modulus({Complex(-1.0), Complex(0.0), Complex(1.0)});
  const UniPoly rem = poly_mod(row, modulus);
  REQUIRE(rem.degree() <= 1);
  CHECK(std::abs(rem.coeff(0) - Complex(1.0)) < 1e-12);
  CHECK(std::abs(rem.coeff(1)) < 1e-12);

  // Evaluation identity at roots of the modulus: rem(z0) == row(z0).
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> mod_roots = {Complex(coord(gen), coord(gen)),
                                      Complex(coord(gen), coord(gen)),
                                      Complex(coord(gen), coord(gen))};
    std::vector<Complex> coeffs(7);
    for (Complex& c : coeffs) c = Complex(coord(gen), coord(gen));
    coeffs.back() += Complex(2.0);  // keep the degree at 6
    const UniPoly r(coeffs);
    const UniPoly m = UniPoly::from_roots(mod_roots);
    const UniPoly q = poly_mod(r, m);
    CHECK(q.degree() < m.degree());
    for (const Complex& z0 : mod_roots)
      CHECK(std::abs(q.eval(z0) - r.eval(z0)) < 1e-8);
  }

  // Non-monic modulus is rejected.
  UniPoly bad({Complex(-1.0), Complex(0.0), Complex(2.0)});
  CHECK_THROWS_AS(poly_mod(row, bad), InputError);
}

TEST_CASE("numeric_rank on exact and near-deficient matrices") {
  // Identity has full rank.
  std::vector<std::vector<Complex>> id = {
      {Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(1.0)}};
  CHECK(numeric_rank(id).rank == 2);

  // A rank-one matrix.
  std::vector<std::vector<Complex>> r1 = {
      {Complex(1.0), Complex(2.0)}, {Complex(2.0), Complex(4.0)}};
  const RankResult res = numeric_rank(r1);
  CHECK(res.rank == 1);
  REQUIRE(res.singular_values.size() == 2);
  CHECK(res.singular_values[0] >= res.singular_values[1]);

  // Tolerance is relative to the largest singular value.
  std::vector<std::vector<Complex>> near = {
      {Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(1e-12)}};
  CHECK(numeric_rank(near, 1e-8).rank == 1);
  CHECK(numeric_rank(near, 1e-14).rank == 2);
}
