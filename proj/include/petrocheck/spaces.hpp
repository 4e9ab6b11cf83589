// Anisotropic weight r_gamma, function parameters (slow-variation screening
// and the Dini-type integral), full-space norms of sampled grid functions,
// and embedding-order comparisons between space tags.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "petrocheck/poly.hpp"

namespace petrocheck {

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PhiNode;

// A function parameter phi : [1, inf) -> (0, inf) from a small grammar:
// positive constants, r, ln(...), real powers, products, quotients, sums.
class FunctionParameter {
 public:
  FunctionParameter() = default;

  static FunctionParameter parse(const std::string& text);
  // The constant function c.
  static FunctionParameter constant(double c);
  // (1 + ln r)^theta.
  static FunctionParameter log_power(double theta);

  bool valid() const { return root_ != nullptr; }
  const std::string& text() const { return text_; }

  double eval(double r) const;

  // Detects the pure log-power form c * (1 + ln r)^theta; returns (c, theta).
  std::optional<std::pair<double, double>> log_power_form() const;

 private:
  std::shared_ptr<const PhiNode> root_;
  std::string text_;
};

// r_gamma(xi, eta) = (1 + |xi|^2 + |eta|^{2 gamma})^{1/2}.
double weight_r_gamma(std::span<const double> xi, double eta, double gamma);

struct ClassMReport {
  bool consistent = false;
  std::vector<std::string> failures;
  // Screening is finite sampling of an asymptotic property.
  std::string note = "heuristic: class-M membership screened at finitely many points";
};

struct ClassMConfig {
  double deviation_tol = 0.05;  // slow-variation tolerance at r = 1e6, lambda = 2
};

ClassMReport check_class_M(const FunctionParameter& phi,
                           const ClassMConfig& config = {});

enum class DiniVerdict { Converges, Diverges, Inconclusive };

std::string dini_verdict_name(DiniVerdict v);

struct DiniResult {
  DiniVerdict verdict = DiniVerdict::Inconclusive;
  double value_estimate = 0.0;  // integral value when convergent
  bool closed_form = false;
};

// The integral of 1 / (r * phi(r)^2) over [1, inf): closed form for pure
// log-power parameters, otherwise adaptive quadrature over dyadic blocks in
// u = ln r with geometric-decay detection.
DiniResult dini_integral(const FunctionParameter& phi);

struct SpaceTag {
  double s = 0.0;
  double gamma = 0.5;  // 1 / (2b)
  FunctionParameter phi;
};

struct AnisoGridFunction {
  int spatial_dim = 1;                 // k
  std::vector<double> spacings;        // hx_1..hx_k, ht (k+1 entries)
  std::vector<int> extents;            // per axis, time last
  std::vector<Complex> samples;        // row-major, last (time) axis contiguous
  bool support_t_nonneg = false;

  size_t sample_count() const;
  void validate() const;
};

AnisoGridFunction read_grid_file(const std::string& path);
void write_grid_file(const std::string& path, const AnisoGridFunction& w);

// Weighted spectral norm of the sampled function. The DFT normalization is
// fixed so that the s = 0, phi = 1 value equals the discrete L2 norm
// (grid-cell-weighted) exactly. Throws TruncationError when the samples do
// not decay at the grid edges.
double norm_full_space(const AnisoGridFunction& w, const SpaceTag& tag);

struct EmbeddingResult {
  bool a_inside_b = false;
  std::string reason;
};

// Whether every element of the space tagged A lies in the space tagged B.
EmbeddingResult embedding_order(const SpaceTag& a, const SpaceTag& b);

}  // namespace petrocheck
