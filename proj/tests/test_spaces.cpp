#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "petrocheck/spaces.hpp"

using namespace petrocheck;

namespace {

// Separable Gaussian on a (k+1)-dimensional grid centered in the box.
AnisoGridFunction gaussian_grid(int k, int nx, int nt, double hx, double ht,
                                double width) {
  AnisoGridFunction w;
  w.spatial_dim = k;
  w.spacings.assign(k, hx);
  w.spacings.push_back(ht);
  w.extents.assign(k, nx);
  w.extents.push_back(nt);
  const size_t total = w.sample_count();
  w.samples.resize(total);
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rem = flat;
    double q = 0.0;
    for (int a = k; a >= 0; --a) {
      const int extent = w.extents[a];
      const int i = static_cast<int>(rem % extent);
      rem /= extent;
      const double h = w.spacings[a];
      const double c = h * (i - (extent - 1) / 2.0);
      q += c * c;
    }
    w.samples[flat] = Complex(std::exp(-q / (2.0 * width * width)), 0.0);
  }
  return w;
}

double discrete_l2(const AnisoGridFunction& w) {
  double cell = 1.0;
  for (double h : w.spacings) cell *= h;
  double acc = 0.0;
  for (const Complex& c : w.samples) acc += std::norm(c);
  return std::sqrt(acc * cell);
}

SpaceTag tag(double s, double gamma, const std::string& phi) {
  return SpaceTag{s, gamma, FunctionParameter::parse(phi)};
}

}  // namespace

TEST_CASE("function parameter grammar and screening") {
  const FunctionParameter phi = FunctionParameter::parse("2*(1+ln(r))^0.5");
  CHECK(phi.eval(1.0) == doctest::Approx(2.0));
  CHECK(phi.eval(std::exp(3.0)) == doctest::Approx(4.0));

  CHECK_THROWS_AS(FunctionParameter::parse("q"), InputError);
  CHECK_THROWS_AS(FunctionParameter::parse("(1+ln(r)"), InputError);
  // Parses but fails the positivity screen.
  CHECK_THROWS_AS(FunctionParameter::parse("0-1"), InputError);
  CHECK_THROWS_AS(FunctionParameter::parse("ln(r)"), InputError);  // 0 at r=1
}

TEST_CASE("log_power_form pattern matching") {
  auto lp = FunctionParameter::parse("(1+ln(r))^0.6").log_power_form();
  REQUIRE(lp.has_value());
  CHECK(lp->first == doctest::Approx(1.0));
  CHECK(lp->second == doctest::Approx(0.6));

  lp = FunctionParameter::parse("2*(1+ln(r))^1").log_power_form();
  REQUIRE(lp.has_value());
  CHECK(lp->first == doctest::Approx(2.0));
  CHECK(lp->second == doctest::Approx(1.0));

  lp = FunctionParameter::parse("3").log_power_form();
  REQUIRE(lp.has_value());
  CHECK(lp->first == doctest::Approx(3.0));
  CHECK(lp->second == doctest::Approx(0.0));

  CHECK_FALSE(FunctionParameter::parse("r").log_power_form().has_value());
  CHECK(FunctionParameter::log_power(0.75).log_power_form().has_value());
}

TEST_CASE("weight_r_gamma") {
  const double xi[] = {3.0, 4.0};
  // 1 + 25 + |2|^{2*0.5} = 28.
  CHECK(weight_r_gamma(xi, 2.0, 0.5) == doctest::Approx(std::sqrt(28.0)));
  CHECK(weight_r_gamma(xi, 0.0, 0.25) == doctest::Approx(std::sqrt(26.0)));
  CHECK(weight_r_gamma(std::span<const double>{}, 0.0, 0.5) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(weight_r_gamma(xi, 1.0, 0.0), InputError);
}

TEST_CASE("class M screening") {
  CHECK(check_class_M(FunctionParameter::log_power(0.6)).consistent);
  CHECK(check_class_M(FunctionParameter::log_power(-1.0)).consistent);
  CHECK(check_class_M(FunctionParameter::constant(4.0)).consistent);

  // A positive power of r varies fast: ratio at lambda = 2 is 2^0.5.
  const ClassMReport fast = check_class_M(FunctionParameter::parse("r^0.5"));
  CHECK_FALSE(fast.consistent);
  CHECK_FALSE(fast.failures.empty());
  CHECK_FALSE(fast.note.empty());
}

TEST_CASE("Dini integral closed forms") {
  const DiniResult d1 = dini_integral(FunctionParameter::log_power(1.0));
  CHECK(d1.verdict == DiniVerdict::Converges);
  CHECK(d1.closed_form);
  CHECK(d1.value_estimate == doctest::Approx(1.0).epsilon(1e-12));

  const DiniResult d06 = dini_integral(FunctionParameter::log_power(0.6));
  CHECK(d06.verdict == DiniVerdict::Converges);
  CHECK(d06.value_estimate == doctest::Approx(5.0).epsilon(1e-12));

  CHECK(dini_integral(FunctionParameter::log_power(0.5)).verdict ==
        DiniVerdict::Diverges);
  CHECK(dini_integral(FunctionParameter::log_power(0.4)).verdict ==
        DiniVerdict::Diverges);

  // Scaling phi by c divides the integral by c^2.
  const DiniResult scaled =
      dini_integral(FunctionParameter::parse("2*(1+ln(r))^1"));
  CHECK(scaled.verdict == DiniVerdict::Converges);
  CHECK(scaled.value_estimate == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("Dini integral numeric path") {
  // Not a pure log power syntactically, but equal to (1+ln r)^1 pointwise:
  // numeric quadrature should recover the value 1 within a percent.
  const DiniResult num =
      dini_integral(FunctionParameter::parse("(1+ln(r))^1 + 0"));
  CHECK_FALSE(num.closed_form);
  CHECK(num.verdict == DiniVerdict::Converges);
  CHECK(num.value_estimate == doctest::Approx(1.0).epsilon(0.01));

  // Constant phi through the numeric path: flat blocks, diverges.
  const DiniResult flat =
      dini_integral(FunctionParameter::parse("1 + 0*ln(r)"));
  CHECK_FALSE(flat.closed_form);
  CHECK(flat.verdict == DiniVerdict::Diverges);
}

TEST_CASE("grid validation and file round trip") {
  AnisoGridFunction w = gaussian_grid(1, 16, 12, 0.5, 0.4, 1.0);
  CHECK_NOTHROW(w.validate());

  AnisoGridFunction bad = w;
  bad.samples.pop_back();
  CHECK_THROWS_AS(bad.validate(), InputError);

  AnisoGridFunction neg = w;
  neg.spacings[0] = -0.5;
  CHECK_THROWS_AS(neg.validate(), InputError);

  const std::string path = "roundtrip_test.grid";
  write_grid_file(path, w);
  const AnisoGridFunction back = read_grid_file(path);
  std::remove(path.c_str());
  CHECK(back.spatial_dim == w.spatial_dim);
  CHECK(back.spacings == w.spacings);
  CHECK(back.extents == w.extents);
  REQUIRE(back.samples.size() == w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i)
    CHECK(std::abs(back.samples[i] - w.samples[i]) < 1e-15);

  CHECK_THROWS_AS(read_grid_file("no_such_file.grid"), InputError);
}

TEST_CASE("norm at s = 0, phi = 1 equals the discrete L2 norm") {
  for (int k : {1, 2}) {
    const AnisoGridFunction w = gaussian_grid(k, 16, 16, 0.5, 0.5, 0.45);
    const double norm = norm_full_space(w, tag(0.0, 0.5, "1"));
    CHECK(norm == doctest::Approx(discrete_l2(w)).epsilon(1e-9));
  }
}

TEST_CASE("norm is monotone in s and scales with constant phi") {
  const AnisoGridFunction w = gaussian_grid(1, 20, 16, 0.5, 0.5, 0.45);
  const double n0 = norm_full_space(w, tag(0.0, 0.5, "1"));
  const double n1 = norm_full_space(w, tag(1.0, 0.5, "1"));
  const double n2 = norm_full_space(w, tag(2.0, 0.5, "1"));
  CHECK(n0 > 0.0);
  CHECK(n1 >= n0);  // r_gamma >= 1 everywhere
  CHECK(n2 >= n1);

  const double scaled = norm_full_space(w, tag(1.0, 0.5, "3"));
  CHECK(scaled == doctest::Approx(3.0 * n1).epsilon(1e-12));
}

TEST_CASE("norm rejects non-decaying samples") {
  AnisoGridFunction w = gaussian_grid(1, 10, 8, 0.5, 0.4, 1.0);
  for (Complex& c : w.samples) c = Complex(1.0);  // no edge decay
  CHECK_THROWS_AS(norm_full_space(w, tag(0.0, 0.5, "1")), TruncationError);

  AnisoGridFunction ok = gaussian_grid(1, 24, 20, 0.5, 0.5, 0.5);
  CHECK_NOTHROW(norm_full_space(ok, tag(0.0, 0.5, "1")));
  CHECK_THROWS_AS(norm_full_space(ok, tag(1.0, 2.0, "1")), InputError);
}

TEST_CASE("embedding order between space tags") {
  // Strict order excess dominates any phi.
  CHECK(embedding_order(tag(2.0, 0.5, "1"), tag(1.0, 0.5, "(1+ln(r))^3"))
            .a_inside_b);
  CHECK_FALSE(embedding_order(tag(1.0, 0.5, "(1+ln(r))^3"), tag(2.0, 0.5, "1"))
                  .a_inside_b);

  // Equal s: larger phi means a smaller space.
  const SpaceTag big_phi = tag(1.0, 0.5, "(1+ln(r))^1");
  const SpaceTag small_phi = tag(1.0, 0.5, "(1+ln(r))^0.5");
  CHECK(embedding_order(big_phi, small_phi).a_inside_b);
  CHECK_FALSE(embedding_order(small_phi, big_phi).a_inside_b);
  CHECK(embedding_order(big_phi, big_phi).a_inside_b);

  CHECK_THROWS_AS(embedding_order(tag(1.0, 0.5, "1"), tag(1.0, 0.25, "1")),
                  InputError);
}

TEST_CASE("embedding order is transitive on a chain") {
  const SpaceTag a = tag(3.0, 0.5, "1");
  const SpaceTag b = tag(2.0, 0.5, "(1+ln(r))^2");
  const SpaceTag c = tag(2.0, 0.5, "(1+ln(r))^1");
  CHECK(embedding_order(a, b).a_inside_b);
  CHECK(embedding_order(b, c).a_inside_b);
  CHECK(embedding_order(a, c).a_inside_b);
}
