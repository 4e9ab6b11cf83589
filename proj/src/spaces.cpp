#include "petrocheck/spaces.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace petrocheck {

struct PhiNode {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Pow, Ln, Neg };
  Kind kind;
  double value = 0.0;     // Number
  double exponent = 0.0;  // Pow
  std::shared_ptr<const PhiNode> lhs, rhs;

  double eval(double r) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Var: return r;
      case Kind::Add: return lhs->eval(r) + rhs->eval(r);
      case Kind::Sub: return lhs->eval(r) - rhs->eval(r);
      case Kind::Mul: return lhs->eval(r) * rhs->eval(r);
      case Kind::Div: {
        const double d = rhs->eval(r);
        if (d == 0.0) throw InputError("phi evaluation: division by zero");
        return lhs->eval(r) / d;
      }
      case Kind::Pow: {
        const double b = lhs->eval(r);
        if (b < 0.0) throw InputError("phi evaluation: negative base under real power");
        return std::pow(b, exponent);
      }
      case Kind::Ln: {
        const double a = lhs->eval(r);
        if (a <= 0.0) throw InputError("phi evaluation: ln of a nonpositive value");
        return std::log(a);
      }
      case Kind::Neg: return -lhs->eval(r);
    }
    throw InputError("phi evaluation: bad node");
  }
};

namespace {

using PhiPtr = std::shared_ptr<const PhiNode>;

PhiPtr make_phi(PhiNode n) { return std::make_shared<const PhiNode>(std::move(n)); }

class PhiParser {
 public:
  explicit PhiParser(const std::string& text) : s_(text) {}

  PhiPtr run() {
    PhiPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("phi expression, column " + std::to_string(pos_ + 1) + ": " +
                     msg + " in '" + s_ + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PhiPtr expr() {
    PhiPtr left = term();
    for (;;) {
      if (eat('+'))
        left = make_phi({.kind = PhiNode::Kind::Add, .lhs = left, .rhs = term()});
      else if (eat('-'))
        left = make_phi({.kind = PhiNode::Kind::Sub, .lhs = left, .rhs = term()});
      else
        return left;
    }
  }

  PhiPtr term() {
    PhiPtr left = unary();
    for (;;) {
      if (eat('*'))
        left = make_phi({.kind = PhiNode::Kind::Mul, .lhs = left, .rhs = unary()});
      else if (eat('/'))
        left = make_phi({.kind = PhiNode::Kind::Div, .lhs = left, .rhs = unary()});
      else
        return left;
    }
  }

  PhiPtr unary() {
    if (eat('-')) return make_phi({.kind = PhiNode::Kind::Neg, .lhs = unary()});
    if (eat('+')) return unary();
    return power();
  }

  PhiPtr power() {
    PhiPtr base = primary();
    if (eat('^')) {
      skip_ws();
      const double e = real_literal();
      return make_phi({.kind = PhiNode::Kind::Pow, .exponent = e, .lhs = base});
    }
    return base;
  }

  double real_literal() {
    skip_ws();
    size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    bool paren = false;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      paren = true;
      ++pos_;
      start = pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    }
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) fail("expected real exponent after '^'");
    double v = 0.0;
    try {
      v = std::stod(s_.substr(start, pos_ - start));
    } catch (const std::exception&) {
      fail("bad exponent literal");
    }
    if (paren && !eat(')')) fail("expected ')' closing exponent");
    return v;
  }

  PhiPtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
        ++pos_;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(start, pos_ - start));
      } catch (const std::exception&) {
        fail("bad numeric literal");
      }
      return make_phi({.kind = PhiNode::Kind::Number, .value = v});
    }
    if (c == '(') {
      ++pos_;
      PhiPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (c == 'r') {
      ++pos_;
      return make_phi({.kind = PhiNode::Kind::Var});
    }
    if (s_.compare(pos_, 2, "ln") == 0) {
      pos_ += 2;
      if (!eat('(')) fail("expected '(' after ln");
      PhiPtr a = expr();
      if (!eat(')')) fail("expected ')'");
      return make_phi({.kind = PhiNode::Kind::Ln, .lhs = a});
    }
    fail("unexpected character");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

bool is_const(const PhiPtr& n, double* out) {
  if (!n) return false;
  if (n->kind == PhiNode::Kind::Number) {
    *out = n->value;
    return true;
  }
  if (n->kind == PhiNode::Kind::Neg) {
    double v;
    if (is_const(n->lhs, &v)) {
      *out = -v;
      return true;
    }
  }
  return false;
}

// Matches 1 + ln(r) up to commutation.
bool is_one_plus_ln_r(const PhiPtr& n) {
  if (!n || n->kind != PhiNode::Kind::Add) return false;
  auto is_ln_r = [](const PhiPtr& x) {
    return x && x->kind == PhiNode::Kind::Ln && x->lhs &&
           x->lhs->kind == PhiNode::Kind::Var;
  };
  double c;
  if (is_const(n->lhs, &c) && std::abs(c - 1.0) < 1e-12 && is_ln_r(n->rhs))
    return true;
  if (is_const(n->rhs, &c) && std::abs(c - 1.0) < 1e-12 && is_ln_r(n->lhs))
    return true;
  return false;
}

std::optional<std::pair<double, double>> match_log_power(const PhiPtr& n) {
  if (!n) return std::nullopt;
  double c;
  if (is_const(n, &c)) {
    if (c > 0.0) return std::make_pair(c, 0.0);
    return std::nullopt;
  }
  if (is_one_plus_ln_r(n)) return std::make_pair(1.0, 1.0);
  if (n->kind == PhiNode::Kind::Pow && is_one_plus_ln_r(n->lhs))
    return std::make_pair(1.0, n->exponent);
  if (n->kind == PhiNode::Kind::Mul) {
    double k;
    if (is_const(n->lhs, &k) && k > 0.0) {
      auto sub = match_log_power(n->rhs);
      if (sub) return std::make_pair(k * sub->first, sub->second);
    }
    if (is_const(n->rhs, &k) && k > 0.0) {
      auto sub = match_log_power(n->lhs);
      if (sub) return std::make_pair(k * sub->first, sub->second);
    }
  }
  return std::nullopt;
}

}  // namespace

FunctionParameter FunctionParameter::parse(const std::string& text) {
  PhiParser p(text);
  FunctionParameter out;
  out.root_ = p.run();
  out.text_ = text;
  // Sanity screen: positive and finite on a few points of [1, 1e12].
  for (double r : {1.0, 2.0, 1e3, 1e6, 1e12}) {
    const double v = out.eval(r);
    if (!std::isfinite(v) || v <= 0.0)
      throw InputError("phi expression '" + text +
                       "' is not positive and finite at r = " + std::to_string(r));
  }
  return out;
}

FunctionParameter FunctionParameter::constant(double c) {
  std::ostringstream os;
  os << c;
  return parse(os.str());
}

FunctionParameter FunctionParameter::log_power(double theta) {
  std::ostringstream os;
  os << "(1+ln(r))^(" << theta << ")";
  return parse(os.str());
}

double FunctionParameter::eval(double r) const {
  if (!root_) throw InputError("evaluating an empty phi expression");
  return root_->eval(r);
}

std::optional<std::pair<double, double>> FunctionParameter::log_power_form() const {
  return match_log_power(root_);
}

double weight_r_gamma(std::span<const double> xi, double eta, double gamma) {
  if (gamma <= 0.0) throw InputError("weight_r_gamma: gamma must be positive");
  double xi2 = 0.0;
  for (double v : xi) xi2 += v * v;
  return std::sqrt(1.0 + xi2 + std::pow(std::abs(eta), 2.0 * gamma));
}

ClassMReport check_class_M(const FunctionParameter& phi,
                           const ClassMConfig& config) {
  ClassMReport rep;
  // (a) two-sided boundedness on compacts [1, d].
  for (double d : {10.0, 1e3}) {
    for (int i = 0; i <= 200; ++i) {
      const double r = std::exp(std::log(d) * i / 200.0);
      double v;
      try {
        v = phi.eval(r);
      } catch (const InputError& e) {
        rep.failures.push_back(std::string("evaluation failed on [1,") +
                               std::to_string(d) + "]: " + e.what());
        break;
      }
      if (!std::isfinite(v) || v <= 0.0 || v > 1e290 || v < 1e-290) {
        rep.failures.push_back("phi or 1/phi unbounded near r = " +
                               std::to_string(r));
        break;
      }
    }
  }
  // (b) slow variation: phi(lambda r)/phi(r) -> 1. The tolerance is scaled
  // by log2(lambda) so multi-octave ratios are judged per octave.
  for (double lambda : {0.5, 2.0, 10.0}) {
    const double tol =
        config.deviation_tol * std::max(1.0, std::abs(std::log2(lambda)));
    std::vector<double> devs;
    for (double r : {1e3, 1e4, 1e5, 1e6}) {
      const double ratio = phi.eval(lambda * r) / phi.eval(r);
      devs.push_back(std::abs(ratio - 1.0));
    }
    if (devs.back() >= tol) {
      std::ostringstream os;
      os << "phi(" << lambda << "*r)/phi(r) = "
         << phi.eval(lambda * 1e6) / phi.eval(1e6) << " at r = 1e6 (deviation "
         << devs.back() << " >= " << tol << ")";
      rep.failures.push_back(os.str());
    }
    for (size_t i = 1; i < devs.size(); ++i) {
      if (devs[i] > devs[i - 1] + 1e-12) {
        std::ostringstream os;
        os << "slow-variation deviation for lambda = " << lambda
           << " does not decrease along r in {1e3..1e6}";
        rep.failures.push_back(os.str());
        break;
      }
    }
  }
  rep.consistent = rep.failures.empty();
  return rep;
}

std::string dini_verdict_name(DiniVerdict v) {
  switch (v) {
    case DiniVerdict::Converges: return "converges";
    case DiniVerdict::Diverges: return "diverges";
    case DiniVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

DiniResult dini_integral(const FunctionParameter& phi) {
  DiniResult res;
  if (auto lp = phi.log_power_form()) {
    const auto [c, theta] = *lp;
    res.closed_form = true;
    if (theta > 0.5) {
      res.verdict = DiniVerdict::Converges;
      res.value_estimate = 1.0 / (c * c * (2.0 * theta - 1.0));
    } else {
      res.verdict = DiniVerdict::Diverges;
      res.value_estimate = std::numeric_limits<double>::infinity();
    }
    return res;
  }

  // Substituted integrand over u = ln r; blocks [0,1], [1,2], [2,4], ...
  auto g = [&phi](double u) {
    const double v = phi.eval(std::exp(u));
    return 1.0 / (v * v);
  };
  std::vector<double> blocks;
  double lo = 0.0, hi = 1.0;
  double partial = 0.0;
  while (hi <= 512.0) {
    double bsum;
    try {
      bsum = integrate(g, lo, hi, 1e-12);
    } catch (const InputError& e) {
      throw InputError(std::string("dini_integral: ") + e.what());
    }
    blocks.push_back(bsum);
    partial += bsum;
    lo = hi;
    hi *= 2.0;
  }
  res.value_estimate = partial;

  // Divergence: 8 consecutive non-decreasing block contributions.
  int run = 0;
  for (size_t i = 1; i < blocks.size(); ++i) {
    if (blocks[i] >= blocks[i - 1] * (1.0 - 1e-10))
      ++run;
    else
      run = 0;
    if (run >= 8) {
      res.verdict = DiniVerdict::Diverges;
      res.value_estimate = std::numeric_limits<double>::infinity();
      return res;
    }
  }
  // Convergence: geometric decay with fitted ratio < 0.95.
  const size_t nb = blocks.size();
  if (nb >= 5 && blocks[nb - 5] > 0.0) {
    const double fitted =
        std::pow(blocks[nb - 1] / blocks[nb - 5], 1.0 / 4.0);
    if (std::isfinite(fitted) && fitted < 0.95) {
      res.verdict = DiniVerdict::Converges;
      res.value_estimate = partial + blocks[nb - 1] * fitted / (1.0 - fitted);
      return res;
    }
  }
  res.verdict = DiniVerdict::Inconclusive;
  return res;
}

size_t AnisoGridFunction::sample_count() const {
  size_t n = 1;
  for (int e : extents) n *= static_cast<size_t>(e);
  return n;
}

void AnisoGridFunction::validate() const {
  if (spatial_dim < 1) throw InputError("grid: spatial_dim must be >= 1");
  if (static_cast<int>(spacings.size()) != spatial_dim + 1)
    throw InputError("grid: expected " + std::to_string(spatial_dim + 1) +
                     " spacings");
  for (double h : spacings)
    if (h <= 0.0) throw InputError("grid: spacings must be positive");
  if (static_cast<int>(extents.size()) != spatial_dim + 1)
    throw InputError("grid: expected " + std::to_string(spatial_dim + 1) +
                     " extents");
  for (int e : extents)
    if (e < 2) throw InputError("grid: every extent must be >= 2");
  if (samples.size() != sample_count())
    throw InputError("grid: sample count " + std::to_string(samples.size()) +
                     " does not match extents product " +
                     std::to_string(sample_count()));
}

AnisoGridFunction read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open grid file: " + path);
  AnisoGridFunction w;
  std::string line;
  int header_fields = 0;
  size_t line_no = 0;
  while (header_fields < 4 && std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "k") {
      if (!(is >> w.spatial_dim))
        throw InputError(path + ":" + std::to_string(line_no) + ": bad k line");
    } else if (key == "spacing") {
      double h;
      while (is >> h) w.spacings.push_back(h);
    } else if (key == "extents") {
      int e;
      while (is >> e) w.extents.push_back(e);
    } else if (key == "support") {
      int s;
      if (!(is >> s))
        throw InputError(path + ":" + std::to_string(line_no) + ": bad support line");
      w.support_t_nonneg = s != 0;
    } else {
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": unknown header key '" + key + "'");
    }
    ++header_fields;
  }
  const size_t want = w.sample_count();
  w.samples.reserve(want);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    double re, im;
    if (!(is >> re >> im))
      throw InputError(path + ":" + std::to_string(line_no) + ": bad sample line");
    w.samples.emplace_back(re, im);
  }
  w.validate();
  return w;
}

void write_grid_file(const std::string& path, const AnisoGridFunction& w) {
  w.validate();
  std::ofstream out(path);
  if (!out) throw InputError("cannot write grid file: " + path);
  out.precision(17);
  out << "k " << w.spatial_dim << "\n";
  out << "spacing";
  for (double h : w.spacings) out << " " << h;
  out << "\nextents";
  for (int e : w.extents) out << " " << e;
  out << "\nsupport " << (w.support_t_nonneg ? 1 : 0) << "\n";
  for (const Complex& c : w.samples) out << c.real() << " " << c.imag() << "\n";
}

namespace {

// Naive DFT along one axis of a row-major multi-dimensional array.
void dft_axis(std::vector<Complex>& data, const std::vector<int>& extents,
              int axis) {
  const int n = extents[axis];
  int inner = 1;
  for (size_t a = axis + 1; a < extents.size(); ++a) inner *= extents[a];
  int outer = 1;
  for (int a = 0; a < axis; ++a) outer *= extents[a];

  std::vector<Complex> twiddle(n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * k * j / n;
      twiddle[k * n + j] = Complex(std::cos(ang), std::sin(ang));
    }

  std::vector<Complex> line(n), out(n);
  for (int o = 0; o < outer; ++o) {
    for (int i = 0; i < inner; ++i) {
      const size_t base = static_cast<size_t>(o) * n * inner + i;
      for (int j = 0; j < n; ++j) line[j] = data[base + static_cast<size_t>(j) * inner];
      for (int k = 0; k < n; ++k) {
        Complex acc{0.0};
        for (int j = 0; j < n; ++j) acc += line[j] * twiddle[k * n + j];
        out[k] = acc;
      }
      for (int k = 0; k < n; ++k) data[base + static_cast<size_t>(k) * inner] = out[k];
    }
  }
}

}  // namespace

double norm_full_space(const AnisoGridFunction& w, const SpaceTag& tag) {
  w.validate();
  if (tag.gamma <= 0.0 || tag.gamma > 1.0)
    throw InputError("norm_full_space: gamma must lie in (0, 1]");
  if (!tag.phi.valid())
    throw InputError("norm_full_space: space tag has no phi");
  const int axes = w.spatial_dim + 1;

  // Edge-decay sanity: boundary samples must be negligible.
  double max_mag = 0.0;
  for (const Complex& c : w.samples) max_mag = std::max(max_mag, std::abs(c));
  if (max_mag > 0.0) {
    double worst_edge = 0.0;
    std::vector<int> idx(axes, 0);
    const size_t total = w.sample_count();
    for (size_t flat = 0; flat < total; ++flat) {
      bool edge = false;
      size_t rem = flat;
      for (int a = axes - 1; a >= 0; --a) {
        const int i = static_cast<int>(rem % w.extents[a]);
        rem /= w.extents[a];
        if (i == 0 || i == w.extents[a] - 1) edge = true;
      }
      if (edge) worst_edge = std::max(worst_edge, std::abs(w.samples[flat]));
    }
    if (worst_edge > 1e-10 * max_mag)
      throw TruncationError(
          "grid samples do not decay at the edges (worst edge magnitude " +
          std::to_string(worst_edge) + " vs max " + std::to_string(max_mag) + ")");
  }

  // Cell-volume-scaled DFT.
  std::vector<Complex> spectrum = w.samples;
  for (int a = 0; a < axes; ++a) dft_axis(spectrum, w.extents, a);
  double cell = 1.0;
  for (double h : w.spacings) cell *= h;
  for (Complex& c : spectrum) c *= cell;

  // Weighted sum over discrete frequencies; the measure per bin is
  // prod_a 1/(N_a h_a), which makes the s=0, phi=1 case the discrete L2 norm.
  double measure = 1.0;
  for (int a = 0; a < axes; ++a) measure /= w.extents[a] * w.spacings[a];

  const size_t total = spectrum.size();
  std::vector<double> freq(axes);
  double acc = 0.0, comp = 0.0;  // Kahan summation
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rem = flat;
    for (int a = axes - 1; a >= 0; --a) {
      int i = static_cast<int>(rem % w.extents[a]);
      rem /= w.extents[a];
      const int half = w.extents[a] / 2;
      const int signed_i = (i <= half) ? i : i - w.extents[a];
      freq[a] = 2.0 * std::numbers::pi * signed_i /
                (w.extents[a] * w.spacings[a]);
    }
    const double rg = weight_r_gamma(
        std::span<const double>(freq.data(), w.spatial_dim), freq[axes - 1],
        tag.gamma);
    const double weight =
        std::pow(rg, 2.0 * tag.s) * std::pow(tag.phi.eval(rg), 2);
    const double term = weight * std::norm(spectrum[flat]) * measure;
    const double y = term - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return std::sqrt(acc);
}

EmbeddingResult embedding_order(const SpaceTag& a, const SpaceTag& b) {
  EmbeddingResult res;
  if (std::abs(a.gamma - b.gamma) > 1e-12)
    throw InputError("embedding_order: tags must share gamma");
  if (a.s > b.s + 1e-12) {
    res.a_inside_b = true;
    res.reason = "strict order excess s_A > s_B dominates any slowly varying factor";
    return res;
  }
  if (a.s < b.s - 1e-12) {
    res.a_inside_b = false;
    res.reason = "s_A < s_B";
    return res;
  }
  // Equal s: need phi_B / phi_A bounded above at large r (heuristic sampling).
  std::vector<double> ratios;
  for (double r : {1.0, 10.0, 1e3, 1e6, 1e9})
    ratios.push_back(b.phi.eval(r) / a.phi.eval(r));
  const double growth = ratios[4] / ratios[2];
  if (growth <= 1.1) {
    res.a_inside_b = true;
    res.reason = "equal s and phi_B/phi_A bounded on sampled r";
  } else {
    res.a_inside_b = false;
    std::ostringstream os;
    os << "equal s but phi_B/phi_A grows (ratio " << ratios[2] << " at r=1e3 vs "
       << ratios[4] << " at r=1e9)";
    res.reason = os.str();
  }
  return res;
}

}  // namespace petrocheck
