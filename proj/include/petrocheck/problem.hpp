// The initial-boundary-value problem model: PDO term tables with anisotropic
// order bounds, sampled domain geometry, principal-symbol extraction, and the
// derived order constants m, sigma0, l0.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "petrocheck/expr.hpp"
#include "petrocheck/poly.hpp"

namespace petrocheck {

struct PDOTerm {
  std::vector<int> alpha;  // n nonnegative integers
  int beta = 0;
  CoeffExpr coeff;

  int aniso_order(int b) const;
};

struct InteriorSample {
  std::vector<double> x;
  double t = 0.0;
};

struct BoundarySample {
  std::vector<double> x;       // point on Gamma
  double t = 0.0;
  std::vector<double> normal;  // unit inward normal
  std::vector<std::vector<double>> tangents;  // orthonormal frame, n-1 vectors
};

struct OrderConstants {
  int m = 0;
  int sigma0 = 0;
  int l0 = 0;
};

struct ParabolicProblem {
  int n = 2;  // spatial dimension, >= 2
  int N = 1;  // number of unknowns
  int b = 1;  // half the parabolic weight
  double tau = 1.0;
  std::vector<int> kappa;  // size N
  std::vector<int> ell;    // size m
  // A_terms[j][k] and B_terms[j][k] list the PDO terms of entry (j,k).
  std::vector<std::vector<std::vector<PDOTerm>>> A_terms;  // N x N
  std::vector<std::vector<std::vector<PDOTerm>>> B_terms;  // m x N
  std::vector<InteriorSample> interior_samples;
  std::vector<BoundarySample> boundary_samples;
  std::vector<std::string> warnings;  // non-fatal validation notes

  int m() const;

  // Enforces the structural invariants (order bounds, m = b * sum kappa,
  // tangent frame orthogonality). Throws InputError naming the violation.
  void validate();
};

// Principal symbol of A_{j,k} at (x,t): terms of anisotropic order exactly
// 2*b*kappa_k. Indices are 1-based as in the operator tables.
PolySymbol principal_symbol_A(const ParabolicProblem& problem, int j, int k,
                              std::span<const double> x, double t);

// Principal symbol of B_{j,k}: terms of order exactly l_j + 2*b*kappa_k, or
// the zero symbol when that order is negative.
PolySymbol principal_symbol_B(const ParabolicProblem& problem, int j, int k,
                              std::span<const double> x, double t);

// N x N matrix of principal symbols at one interior point.
std::vector<std::vector<PolySymbol>> principal_matrix_A(
    const ParabolicProblem& problem, std::span<const double> x, double t);

// m x N matrix of boundary principal symbols at one boundary point.
std::vector<std::vector<PolySymbol>> principal_matrix_B(
    const ParabolicProblem& problem, std::span<const double> x, double t);

OrderConstants derived_orders(const ParabolicProblem& problem);

// Built-in domain sample generators. Deterministic for fixed inputs.
struct GeometryConfig {
  int interior_points = 5;
  int boundary_points = 8;
  int time_values = 3;
};

// Deterministic set of unit directions in R^n (equal angles for n = 2,
// fixed-seed sphere points otherwise).
std::vector<std::vector<double>> unit_sphere_directions(int n, int count);

// Unit ball in R^n; boundary on the unit sphere with inward normal -x.
void sample_unit_ball(ParabolicProblem& problem, const GeometryConfig& cfg);
// Collar of the half-space {x_n > 0}; flat boundary with normal e_n.
void sample_half_space(ParabolicProblem& problem, const GeometryConfig& cfg);
// Superellipse |x1|^4 + |x2|^4 = 1 (square with smoothed corners), n = 2 only.
void sample_smoothed_square(ParabolicProblem& problem, const GeometryConfig& cfg);

}  // namespace petrocheck
