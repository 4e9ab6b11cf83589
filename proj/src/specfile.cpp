#include "petrocheck/specfile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace petrocheck {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct Line {
  size_t number;
  std::string text;
};

struct Section {
  std::string header;  // e.g. "problem", "operator A 1 1"
  size_t header_line;
  std::vector<Line> lines;
};

[[noreturn]] void fail(const std::string& name, size_t line, const std::string& msg) {
  throw InputError(name + ":" + std::to_string(line) + ": " + msg);
}

std::vector<Section> split_sections(const std::string& text,
                                    const std::string& name) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos)
      line = line.substr(0, pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(name, line_no, "unterminated section header");
      sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
    } else {
      if (sections.empty())
        fail(name, line_no, "content before any [section] header");
      sections.back().lines.push_back({line_no, line});
    }
  }
  return sections;
}

// key = value pairs within a section; duplicate keys are an error.
std::map<std::string, std::pair<size_t, std::string>> key_values(
    const Section& s, const std::string& name) {
  std::map<std::string, std::pair<size_t, std::string>> kv;
  for (const Line& l : s.lines) {
    const auto pos = l.text.find('=');
    if (pos == std::string::npos)
      fail(name, l.number, "expected 'key = value' in section [" + s.header + "]");
    const std::string key = trim(l.text.substr(0, pos));
    const std::string value = trim(l.text.substr(pos + 1));
    if (kv.count(key))
      fail(name, l.number, "duplicate key '" + key + "'");
    kv[key] = {l.number, value};
  }
  return kv;
}

int to_int(const std::string& v, const std::string& name, size_t line) {
  try {
    size_t used = 0;
    const int r = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    fail(name, line, "expected an integer, got '" + v + "'");
  }
}

double to_double(const std::string& v, const std::string& name, size_t line) {
  try {
    size_t used = 0;
    const double r = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    fail(name, line, "expected a number, got '" + v + "'");
  }
}

std::vector<int> to_int_list(const std::string& v, const std::string& name,
                             size_t line) {
  std::vector<int> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(to_int(tok, name, line));
  return out;
}

std::vector<double> to_double_list(const std::string& v, const std::string& name,
                                   size_t line) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(to_double(tok, name, line));
  return out;
}

// Parses "field = value; field = value; ..." item lines (terms, claims,
// custom geometry entries). Field order is free; the last '=' wins per field.
std::map<std::string, std::string> item_fields(const std::string& body,
                                               const std::string& name,
                                               size_t line) {
  std::map<std::string, std::string> out;
  std::istringstream is(body);
  std::string part;
  while (std::getline(is, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto pos = part.find('=');
    if (pos == std::string::npos)
      fail(name, line, "expected 'field = value' in '" + part + "'");
    out[trim(part.substr(0, pos))] = trim(part.substr(pos + 1));
  }
  return out;
}

PDOTerm parse_term(const std::string& body, int n, const std::string& name,
                   size_t line, const std::string& where) {
  auto fields = item_fields(body, name, line);
  PDOTerm term;
  if (!fields.count("alpha"))
    fail(name, line, where + ": term is missing alpha");
  term.alpha = to_int_list(fields["alpha"], name, line);
  if (static_cast<int>(term.alpha.size()) != n)
    fail(name, line, where + ": alpha must list n = " + std::to_string(n) +
                         " exponents");
  if (!fields.count("beta")) fail(name, line, where + ": term is missing beta");
  term.beta = to_int(fields["beta"], name, line);
  if (term.beta < 0) fail(name, line, where + ": beta must be nonnegative");
  if (!fields.count("coeff"))
    fail(name, line, where + ": term is missing coeff");
  try {
    term.coeff = CoeffExpr::parse(fields["coeff"], n);
  } catch (const InputError& e) {
    fail(name, line, where + ": " + e.what());
  }
  return term;
}

RegionTag parse_region(const std::string& v, const std::string& name,
                       size_t line) {
  if (v == "interior") return RegionTag::Interior;
  if (v == "lateral-collar" || v == "lateral_collar")
    return RegionTag::LateralCollar;
  if (v == "bottom-collar" || v == "bottom_collar")
    return RegionTag::BottomCollar;
  if (v == "lateral-boundary" || v == "lateral_boundary")
    return RegionTag::LateralBoundary;
  fail(name, line, "unknown region '" + v + "'");
}

}  // namespace

ProblemSpec parse_problem_text(const std::string& text, const std::string& name) {
  ProblemSpec spec;
  spec.source_text = text;
  const auto sections = split_sections(text, name);

  const Section* problem_section = nullptr;
  for (const Section& s : sections)
    if (s.header == "problem") problem_section = &s;
  if (!problem_section)
    throw InputError(name + ": missing required section [problem]");

  ParabolicProblem& p = spec.problem;
  {
    auto kv = key_values(*problem_section, name);
    auto need = [&](const char* key) -> std::pair<size_t, std::string> {
      auto it = kv.find(key);
      if (it == kv.end())
        fail(name, problem_section->header_line,
             std::string("[problem] is missing key '") + key + "'");
      return it->second;
    };
    auto [ln_n, v_n] = need("n");
    p.n = to_int(v_n, name, ln_n);
    auto [ln_N, v_N] = need("N");
    p.N = to_int(v_N, name, ln_N);
    auto [ln_b, v_b] = need("b");
    p.b = to_int(v_b, name, ln_b);
    auto [ln_tau, v_tau] = need("tau");
    p.tau = to_double(v_tau, name, ln_tau);
    auto [ln_k, v_k] = need("kappa");
    p.kappa = to_int_list(v_k, name, ln_k);
    auto [ln_l, v_l] = need("ell");
    p.ell = to_int_list(v_l, name, ln_l);
  }
  if (p.N < 1 || p.n < 1 || p.b < 1)
    throw InputError(name + ": [problem] constants must be positive");
  const int mm = p.m();
  p.A_terms.assign(p.N, std::vector<std::vector<PDOTerm>>(p.N));
  p.B_terms.assign(std::max(mm, 0), std::vector<std::vector<PDOTerm>>(p.N));

  bool saw_operator = false;
  for (const Section& s : sections) {
    std::istringstream hs(s.header);
    std::string word;
    hs >> word;
    if (word != "operator") continue;
    std::string which;
    int j = 0, k = 0;
    if (!(hs >> which >> j >> k) || (which != "A" && which != "B"))
      fail(name, s.header_line,
           "operator section header must be [operator A j k] or [operator B j k]");
    saw_operator = true;
    std::vector<std::vector<std::vector<PDOTerm>>>& table =
        (which == "A") ? p.A_terms : p.B_terms;
    const int rows = (which == "A") ? p.N : mm;
    if (j < 1 || j > rows || k < 1 || k > p.N)
      fail(name, s.header_line, "operator " + which + " index (" +
                                    std::to_string(j) + "," + std::to_string(k) +
                                    ") out of range");
    for (const Line& l : s.lines) {
      std::string body = l.text;
      if (body.rfind("term", 0) != 0)
        fail(name, l.number, "expected a 'term: ...' line in [" + s.header + "]");
      body = trim(body.substr(4));
      if (!body.empty() && body.front() == ':') body = trim(body.substr(1));
      table[j - 1][k - 1].push_back(
          parse_term(body, p.n, name, l.number, "[" + s.header + "]"));
    }
  }
  if (!saw_operator)
    throw InputError(name + ": missing required section [operator A j k]");

  // Geometry: built-in generators or a custom sample list.
  const Section* geometry_section = nullptr;
  for (const Section& s : sections)
    if (s.header == "geometry") geometry_section = &s;
  std::string domain = "ball";
  if (geometry_section) {
    std::vector<Line> custom_lines;
    for (const Line& l : geometry_section->lines) {
      if (l.text.rfind("interior:", 0) == 0 || l.text.rfind("boundary:", 0) == 0) {
        custom_lines.push_back(l);
        continue;
      }
      const auto pos = l.text.find('=');
      if (pos == std::string::npos)
        fail(name, l.number, "expected 'key = value' in [geometry]");
      const std::string key = trim(l.text.substr(0, pos));
      const std::string value = trim(l.text.substr(pos + 1));
      if (key == "domain")
        domain = value;
      else if (key == "interior_points")
        spec.geometry.interior_points = to_int(value, name, l.number);
      else if (key == "boundary_points")
        spec.geometry.boundary_points = to_int(value, name, l.number);
      else if (key == "time_values")
        spec.geometry.time_values = to_int(value, name, l.number);
      else
        fail(name, l.number, "unknown geometry key '" + key + "'");
    }
    if (domain == "custom") {
      for (const Line& l : custom_lines) {
        const bool interior = l.text.rfind("interior", 0) == 0;
        std::string body = trim(l.text.substr(interior ? 8 : 8));
        if (!body.empty() && body.front() == ':') body = trim(body.substr(1));
        auto fields = item_fields(body, name, l.number);
        if (!fields.count("x") || !fields.count("t"))
          fail(name, l.number, "custom sample needs x and t");
        if (interior) {
          InteriorSample s;
          s.x = to_double_list(fields["x"], name, l.number);
          s.t = to_double(fields["t"], name, l.number);
          p.interior_samples.push_back(std::move(s));
        } else {
          BoundarySample s;
          s.x = to_double_list(fields["x"], name, l.number);
          s.t = to_double(fields["t"], name, l.number);
          if (!fields.count("normal"))
            fail(name, l.number, "custom boundary sample needs a normal");
          s.normal = to_double_list(fields["normal"], name, l.number);
          if (fields.count("tangent"))
            s.tangents.push_back(
                to_double_list(fields["tangent"], name, l.number));
          p.boundary_samples.push_back(std::move(s));
        }
      }
    } else if (!custom_lines.empty()) {
      fail(name, custom_lines[0].number,
           "explicit samples require domain = custom");
    }
  }
  spec.geometry_name = domain;
  if (domain == "ball")
    sample_unit_ball(p, spec.geometry);
  else if (domain == "half_space")
    sample_half_space(p, spec.geometry);
  else if (domain == "smoothed_square")
    sample_smoothed_square(p, spec.geometry);
  else if (domain != "custom")
    throw InputError(name + ": unknown domain '" + domain + "'");

  // Claims.
  for (const Section& s : sections) {
    if (s.header != "claims") continue;
    for (const Line& l : s.lines) {
      std::string body = l.text;
      if (body.rfind("claim", 0) != 0)
        fail(name, l.number, "expected a 'claim: ...' line in [claims]");
      body = trim(body.substr(5));
      if (!body.empty() && body.front() == ':') body = trim(body.substr(1));
      auto fields = item_fields(body, name, l.number);
      RegularityClaim c;
      if (!fields.count("target")) fail(name, l.number, "claim needs a target");
      const std::string target = fields["target"];
      if (target.size() < 2 || (target[0] != 'f' && target[0] != 'g'))
        fail(name, l.number, "claim target must look like f1 or g2");
      c.is_g = target[0] == 'g';
      c.component = to_int(target.substr(1), name, l.number);
      if (!fields.count("region")) fail(name, l.number, "claim needs a region");
      c.region = parse_region(fields["region"], name, l.number);
      if (!fields.count("sigma")) fail(name, l.number, "claim needs sigma");
      c.sigma = to_double(fields["sigma"], name, l.number);
      if (!fields.count("phi")) fail(name, l.number, "claim needs phi");
      try {
        c.phi = FunctionParameter::parse(fields["phi"]);
      } catch (const InputError& e) {
        fail(name, l.number, e.what());
      }
      spec.claims.push_back(std::move(c));
    }
  }

  // Options.
  for (const Section& s : sections) {
    if (s.header != "options") continue;
    auto kv = key_values(s, name);
    for (const auto& [key, lv] : kv) {
      const auto& [ln, value] = lv;
      if (key == "delta1") {
        if (value != "auto")
          spec.sampling.delta1 = to_double(value, name, ln);
      } else if (key == "xi_directions")
        spec.sampling.xi_directions = to_int(value, name, ln);
      else if (key == "p_arc_points")
        spec.sampling.p_arc_points = to_int(value, name, ln);
      else if (key == "pure_p_points")
        spec.sampling.pure_p_points = to_int(value, name, ln);
      else if (key == "tangent_directions")
        spec.sampling.tangent_directions = to_int(value, name, ln);
      else if (key == "delta_floor")
        spec.sampling.delta_floor = to_double(value, name, ln);
      else if (key == "im_floor")
        spec.sampling.im_floor = to_double(value, name, ln);
      else if (key == "rank_tol")
        spec.sampling.rank_tol = to_double(value, name, ln);
      else if (key == "cluster_tol")
        spec.sampling.cluster_tol = to_double(value, name, ln);
      else
        fail(name, ln, "unknown option '" + key + "'");
    }
  }

  spec.problem.validate();
  return spec;
}

ProblemSpec parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_problem_text(os.str(), path);
}

}  // namespace petrocheck
