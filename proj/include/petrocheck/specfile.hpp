// Sectioned plain-text problem specification: problem constants, operator
// term tables, domain geometry, regularity claims, and check options.
#pragma once

#include <string>

#include "petrocheck/parabolicity.hpp"
#include "petrocheck/problem.hpp"
#include "petrocheck/regularity.hpp"

namespace petrocheck {

struct ProblemSpec {
  ParabolicProblem problem;
  std::vector<RegularityClaim> claims;
  SamplingConfig sampling;
  GeometryConfig geometry;
  std::string geometry_name = "ball";
  std::string source_text;  // raw file contents, for the input digest
};

// Parses and fully validates a specification. Diagnostics carry the file
// name and line number. Geometry samples are generated for the named
// built-in domain (or taken verbatim from a custom section).
ProblemSpec parse_problem_file(const std::string& path);
ProblemSpec parse_problem_text(const std::string& text,
                               const std::string& name = "<input>");

}  // namespace petrocheck
