#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "petrocheck/specfile.hpp"

using namespace petrocheck;

namespace {

const char* kScalarHeat = R"(# scalar heat
[problem]
n = 2
N = 1
b = 1
tau = 1.0
kappa = 1
ell = -2

[operator A 1 1]
term: alpha = 0 0; beta = 1; coeff = 1
term: alpha = 2 0; beta = 0; coeff = 1
term: alpha = 0 2; beta = 0; coeff = 1

[operator B 1 1]
term: alpha = 0 0; beta = 0; coeff = 1

[geometry]
domain = ball
interior_points = 3
boundary_points = 4
time_values = 2

[claims]
claim: target = f1; region = interior; sigma = 2.5; phi = (1+ln(r))^1
claim: target = g1; region = lateral-boundary; sigma = 1.5; phi = 2

[options]
delta1 = 0.25
xi_directions = 8
rank_tol = 1e-7
)";

std::string with_line_replaced(const std::string& text, const std::string& from,
                               const std::string& to) {
  std::string out = text;
  const auto pos = out.find(from);
  REQUIRE(pos != std::string::npos);
  out.replace(pos, from.size(), to);
  return out;
}

}  // namespace

TEST_CASE("a full specification parses into the expected model") {
  const ProblemSpec spec = parse_problem_text(kScalarHeat, "scalar.prob");
  CHECK(spec.problem.n == 2);
  CHECK(spec.problem.N == 1);
  CHECK(spec.problem.b == 1);
  CHECK(spec.problem.tau == doctest::Approx(1.0));
  CHECK(spec.problem.kappa == std::vector<int>{1});
  CHECK(spec.problem.ell == std::vector<int>{-2});
  REQUIRE(spec.problem.A_terms.size() == 1);
  CHECK(spec.problem.A_terms[0][0].size() == 3);
  CHECK(spec.problem.B_terms[0][0].size() == 1);

  CHECK(spec.geometry_name == "ball");
  CHECK(spec.problem.interior_samples.size() == 3);
  CHECK(spec.problem.boundary_samples.size() == 4 * 2);

  REQUIRE(spec.claims.size() == 2);
  CHECK_FALSE(spec.claims[0].is_g);
  CHECK(spec.claims[0].component == 1);
  CHECK(spec.claims[0].region == RegionTag::Interior);
  CHECK(spec.claims[0].sigma == doctest::Approx(2.5));
  CHECK(spec.claims[1].is_g);
  CHECK(spec.claims[1].region == RegionTag::LateralBoundary);

  REQUIRE(spec.sampling.delta1.has_value());
  CHECK(*spec.sampling.delta1 == doctest::Approx(0.25));
  CHECK(spec.sampling.xi_directions == 8);
  CHECK(spec.sampling.rank_tol == doctest::Approx(1e-7));
  // Unset options keep their defaults.
  CHECK(spec.sampling.p_arc_points == 16);

  CHECK(spec.source_text == kScalarHeat);
  // N = 1 is legal but noted.
  CHECK_FALSE(spec.problem.warnings.empty());
}

TEST_CASE("delta1 = auto leaves the override unset") {
  const std::string text =
      with_line_replaced(kScalarHeat, "delta1 = 0.25", "delta1 = auto");
  const ProblemSpec spec = parse_problem_text(text, "auto.prob");
  CHECK_FALSE(spec.sampling.delta1.has_value());
}

TEST_CASE("diagnostics carry the file name and line number") {
  // Line 11 holds the first A term; corrupt its beta value.
  const std::string bad =
      with_line_replaced(kScalarHeat, "beta = 1; coeff = 1", "beta = x; coeff = 1");
  try {
    parse_problem_text(bad, "bad.prob");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.prob:11:") != std::string::npos);
    CHECK(msg.find("integer") != std::string::npos);
  }
}

TEST_CASE("missing required sections are reported") {
  CHECK_THROWS_AS(parse_problem_text("", "empty.prob"), InputError);
  try {
    parse_problem_text("[claims]\n", "noprob.prob");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("[problem]") != std::string::npos);
  }
  try {
    parse_problem_text(
        "[problem]\nn = 2\nN = 1\nb = 1\ntau = 1\nkappa = 1\nell = -2\n",
        "noop.prob");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("[operator") != std::string::npos);
  }
}

TEST_CASE("order-bound violations surface through validate") {
  // An A term of anisotropic order 3 > 2*b*kappa = 2.
  const std::string bad = with_line_replaced(
      kScalarHeat, "term: alpha = 2 0; beta = 0; coeff = 1",
      "term: alpha = 2 1; beta = 0; coeff = 1");
  CHECK_THROWS_AS(parse_problem_text(bad, "order.prob"), InputError);
}

TEST_CASE("operator indices are range-checked") {
  const std::string bad =
      with_line_replaced(kScalarHeat, "[operator B 1 1]", "[operator B 2 1]");
  try {
    parse_problem_text(bad, "range.prob");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("out of range") != std::string::npos);
  }
}

TEST_CASE("claim lines are validated field by field") {
  const std::string no_phi = with_line_replaced(
      kScalarHeat, "claim: target = g1; region = lateral-boundary; sigma = 1.5; phi = 2",
      "claim: target = g1; region = lateral-boundary; sigma = 1.5");
  CHECK_THROWS_AS(parse_problem_text(no_phi, "claims.prob"), InputError);

  const std::string bad_region = with_line_replaced(
      kScalarHeat, "region = interior", "region = nowhere");
  CHECK_THROWS_AS(parse_problem_text(bad_region, "claims.prob"), InputError);

  const std::string bad_target = with_line_replaced(
      kScalarHeat, "target = f1", "target = h1");
  CHECK_THROWS_AS(parse_problem_text(bad_target, "claims.prob"), InputError);
}

TEST_CASE("unknown options are rejected") {
  const std::string bad =
      with_line_replaced(kScalarHeat, "rank_tol = 1e-7", "rank_tolerance = 1e-7");
  CHECK_THROWS_AS(parse_problem_text(bad, "options.prob"), InputError);
}

TEST_CASE("custom geometry takes samples verbatim") {
  const char* text = R"([problem]
n = 2
N = 1
b = 1
tau = 1.0
kappa = 1
ell = -2

[operator A 1 1]
term: alpha = 0 0; beta = 1; coeff = 1
term: alpha = 2 0; beta = 0; coeff = 1
term: alpha = 0 2; beta = 0; coeff = 1

[operator B 1 1]
term: alpha = 0 0; beta = 0; coeff = 1

[geometry]
domain = custom
interior: x = 0.1 0.2; t = 0.5
boundary: x = 1 0; t = 0.5; normal = -1 0; tangent = 0 1
)";
  const ProblemSpec spec = parse_problem_text(text, "custom.prob");
  CHECK(spec.geometry_name == "custom");
  REQUIRE(spec.problem.interior_samples.size() == 1);
  CHECK(spec.problem.interior_samples[0].x == std::vector<double>{0.1, 0.2});
  CHECK(spec.problem.interior_samples[0].t == doctest::Approx(0.5));
  REQUIRE(spec.problem.boundary_samples.size() == 1);
  CHECK(spec.problem.boundary_samples[0].normal ==
        std::vector<double>{-1.0, 0.0});
  REQUIRE(spec.problem.boundary_samples[0].tangents.size() == 1);

  // Explicit samples without domain = custom are rejected.
  const std::string bad = with_line_replaced(text, "domain = custom",
                                             "domain = ball");
  CHECK_THROWS_AS(parse_problem_text(bad, "custom.prob"), InputError);
}
