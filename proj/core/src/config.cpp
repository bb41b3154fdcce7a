#include "effaction/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "effaction/errors.hpp"

namespace effaction {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const double out = std::strtod(begin, &end);
  if (end != begin + v.size() || v.empty()) fail(line, "malformed number '" + v + "'");
  return out;
}

int parse_int(const std::string& v, int line) {
  const double d = parse_double(v, line);
  const int i = static_cast<int>(d);
  if (double(i) != d) fail(line, "expected an integer, got '" + v + "'");
  return i;
}

std::string parse_quoted(const std::string& v, int line) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"')
    fail(line, "expressions must be double-quoted: " + v);
  return v.substr(1, v.size() - 2);
}

Expression parse_expr(const std::string& v, int line) {
  try {
    return Expression::parse(parse_quoted(v, line));
  } catch (const ParseError& e) {
    fail(line, std::string("bad expression: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  std::set<std::string> seen;
  bool have_mass = false, have_potential = false, have_domain = false;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;

    if (t.front() == '[') {
      if (t.back() != ']') fail(lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section != "problem" && section != "solver" && section != "grid" &&
          section != "integrator" && section != "output")
        fail(lineno, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section.empty()) fail(lineno, "key '" + key + "' outside any section");
    const std::string qualified = section + "." + key;
    if (!seen.insert(qualified).second) fail(lineno, "duplicate key '" + qualified + "'");

    if (section == "problem") {
      if (key == "mass") {
        cfg.problem.mass = parse_expr(value, lineno);
        have_mass = true;
      } else if (key == "potential") {
        cfg.problem.potential = parse_expr(value, lineno);
        have_potential = true;
      } else if (key == "hbar") {
        cfg.problem.hbar = parse_double(value, lineno);
      } else if (key == "kT") {
        cfg.problem.kT = parse_double(value, lineno);
      } else if (key == "domain") {
        std::istringstream ds(value);
        std::string a, b, extra;
        if (!(ds >> a >> b) || (ds >> extra))
          fail(lineno, "domain wants exactly two numbers: lo hi");
        cfg.problem.x_lo = parse_double(a, lineno);
        cfg.problem.x_hi = parse_double(b, lineno);
        have_domain = true;
      } else {
        fail(lineno, "unknown key '" + key + "' in [problem]");
      }
    } else if (section == "solver") {
      if (key == "tolerance")
        cfg.solver.rel_tol = parse_double(value, lineno);
      else if (key == "damping")
        cfg.solver.damping = parse_double(value, lineno);
      else if (key == "max_iter")
        cfg.solver.max_iter = parse_int(value, lineno);
      else
        fail(lineno, "unknown key '" + key + "' in [solver]");
    } else if (section == "grid") {
      if (key == "points")
        cfg.grid_points = parse_int(value, lineno);
      else
        fail(lineno, "unknown key '" + key + "' in [grid]");
    } else if (section == "integrator") {
      if (key == "rel_tol")
        cfg.integrator.rel_tol = parse_double(value, lineno);
      else if (key == "abs_tol")
        cfg.integrator.abs_tol = parse_double(value, lineno);
      else
        fail(lineno, "unknown key '" + key + "' in [integrator]");
    } else if (section == "output") {
      if (key == "path")
        cfg.output_path = value;
      else
        fail(lineno, "unknown key '" + key + "' in [output]");
    }
  }

  if (!have_mass) throw ConfigError("config: [problem] mass is required");
  if (!have_potential) throw ConfigError("config: [problem] potential is required");
  if (!have_domain) throw ConfigError("config: [problem] domain is required");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace effaction
