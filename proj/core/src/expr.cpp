#include "effaction/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>

namespace effaction {

const char* func_name(FuncId f) {
  switch (f) {
    case FuncId::sin: return "sin";
    case FuncId::cos: return "cos";
    case FuncId::exp: return "exp";
    case FuncId::log: return "log";
    case FuncId::sqrt: return "sqrt";
    case FuncId::tanh: return "tanh";
    case FuncId::sinh: return "sinh";
    case FuncId::cosh: return "cosh";
  }
  return "?";
}

namespace {

std::optional<FuncId> func_from_name(std::string_view s) {
  static const std::map<std::string_view, FuncId> table = {
      {"sin", FuncId::sin},   {"cos", FuncId::cos},   {"exp", FuncId::exp},
      {"log", FuncId::log},   {"sqrt", FuncId::sqrt}, {"tanh", FuncId::tanh},
      {"sinh", FuncId::sinh}, {"cosh", FuncId::cosh}};
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::number;
  n->number = v;
  return n;
}

NodePtr make_unary(ExprKind k, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(ExprKind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_call(FuncId f, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::call;
  n->func = f;
  n->lhs = std::move(a);
  return n;
}

// --- recursive-descent parser ----------------------------------------------

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what, std::size_t where) {
    throw ParseError(what + " at position " + std::to_string(where), where);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  NodePtr parse_expression() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (consume('+')) {
        lhs = make_binary(ExprKind::add, std::move(lhs), parse_term());
      } else if (consume('-')) {
        lhs = make_binary(ExprKind::sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (consume('*')) {
        lhs = make_binary(ExprKind::mul, std::move(lhs), parse_unary());
      } else if (consume('/')) {
        lhs = make_binary(ExprKind::div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) return make_unary(ExprKind::negate, parse_unary());
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) {
      // Right-associative; the exponent may carry its own sign.
      return make_binary(ExprKind::pow, std::move(base), parse_unary());
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail("syntax error: unexpected end of input", pos);
    const char c = text[pos];

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();

    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expression();
      if (!consume(')')) fail("syntax error: expected ')'", pos);
      return inner;
    }
    fail(std::string("syntax error: unexpected '") + c + "'", pos);
  }

  NodePtr parse_number() {
    // Scan the decimal/scientific token by hand so that strtod's hex-float
    // extension cannot swallow the variable in inputs like "0x^2".
    const std::size_t start = pos;
    std::size_t i = pos;
    auto digits = [&] {
      std::size_t n = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++n;
      return n;
    };
    std::size_t ndig = digits();
    if (i < text.size() && text[i] == '.') {
      ++i;
      ndig += digits();
    }
    if (ndig == 0) fail("syntax error: malformed number", start);
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
      std::size_t k = j;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      if (k > j) i = k;  // only take the exponent if it has digits
    }
    const std::string token(text.substr(start, i - start));
    const double v = std::strtod(token.c_str(), nullptr);
    pos = i;
    return make_number(v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    const std::string_view name = text.substr(start, pos - start);

    if (peek() == '(') {
      const auto f = func_from_name(name);
      if (!f) fail("unknown function '" + std::string(name) + "'", start);
      ++pos;  // '('
      NodePtr arg = parse_expression();
      if (!consume(')')) fail("syntax error: expected ')'", pos);
      return make_call(*f, std::move(arg));
    }

    if (name == "x") {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::variable;
      return n;
    }
    fail("unknown identifier '" + std::string(name) + "'", start);
  }
};

// --- evaluation --------------------------------------------------------------

double eval_value(const ExprNode* n, double x) {
  switch (n->kind) {
    case ExprKind::number: return n->number;
    case ExprKind::variable: return x;
    case ExprKind::negate: return -eval_value(n->lhs.get(), x);
    case ExprKind::add: return eval_value(n->lhs.get(), x) + eval_value(n->rhs.get(), x);
    case ExprKind::sub: return eval_value(n->lhs.get(), x) - eval_value(n->rhs.get(), x);
    case ExprKind::mul: return eval_value(n->lhs.get(), x) * eval_value(n->rhs.get(), x);
    case ExprKind::div: {
      const double b = eval_value(n->rhs.get(), x);
      if (b == 0.0) throw DomainEvalError("division by zero", x);
      return eval_value(n->lhs.get(), x) / b;
    }
    case ExprKind::pow: {
      const double a = eval_value(n->lhs.get(), x);
      const double b = eval_value(n->rhs.get(), x);
      if (b == std::nearbyint(b) && std::abs(b) <= 1e6) {
        if (a == 0.0 && b < 0) throw DomainEvalError("division by zero", x);
        return std::pow(a, b);
      }
      if (!(a > 0.0))
        throw DomainEvalError("non-integer power of non-positive base", x);
      return std::pow(a, b);
    }
    case ExprKind::call: {
      const double a = eval_value(n->lhs.get(), x);
      switch (n->func) {
        case FuncId::sin: return std::sin(a);
        case FuncId::cos: return std::cos(a);
        case FuncId::exp: return std::exp(a);
        case FuncId::log:
          if (!(a > 0.0)) throw DomainEvalError("log of non-positive value", x);
          return std::log(a);
        case FuncId::sqrt:
          if (a < 0.0) throw DomainEvalError("sqrt of negative value", x);
          return std::sqrt(a);
        case FuncId::tanh: return std::tanh(a);
        case FuncId::sinh: return std::sinh(a);
        case FuncId::cosh: return std::cosh(a);
      }
      break;
    }
  }
  throw Error("corrupt expression tree");
}

// True when the subtree never references x; such subtrees have constant jets.
bool is_constant_subtree(const ExprNode* n) {
  if (n->kind == ExprKind::variable) return false;
  if (n->lhs && !is_constant_subtree(n->lhs.get())) return false;
  if (n->rhs && !is_constant_subtree(n->rhs.get())) return false;
  return true;
}

Jet4 eval_jet(const ExprNode* n, double x) {
  switch (n->kind) {
    case ExprKind::number: return Jet4::constant(n->number);
    case ExprKind::variable: return Jet4::variable(x);
    case ExprKind::negate: return -eval_jet(n->lhs.get(), x);
    case ExprKind::add: return eval_jet(n->lhs.get(), x) + eval_jet(n->rhs.get(), x);
    case ExprKind::sub: return eval_jet(n->lhs.get(), x) - eval_jet(n->rhs.get(), x);
    case ExprKind::mul: return eval_jet(n->lhs.get(), x) * eval_jet(n->rhs.get(), x);
    case ExprKind::div:
      return jet_div(eval_jet(n->lhs.get(), x), eval_jet(n->rhs.get(), x), x);
    case ExprKind::pow: {
      // Constant integral exponents stay exact (and keep negative bases
      // legal) via repeated multiplication; everything else goes through
      // exp(b log a).
      if (is_constant_subtree(n->rhs.get())) {
        const double b = eval_value(n->rhs.get(), x);
        if (b == std::nearbyint(b) && std::abs(b) <= 1e6)
          return jet_powi(eval_jet(n->lhs.get(), x), static_cast<long long>(b), x);
      }
      return jet_pow(eval_jet(n->lhs.get(), x), eval_jet(n->rhs.get(), x), x);
    }
    case ExprKind::call: {
      const Jet4 a = eval_jet(n->lhs.get(), x);
      switch (n->func) {
        case FuncId::sin: return jet_sin(a);
        case FuncId::cos: return jet_cos(a);
        case FuncId::exp: return jet_exp(a);
        case FuncId::log: return jet_log(a, x);
        case FuncId::sqrt: return jet_sqrt(a, x);
        case FuncId::tanh: return jet_tanh(a);
        case FuncId::sinh: return jet_sinh(a);
        case FuncId::cosh: return jet_cosh(a);
      }
      break;
    }
  }
  throw Error("corrupt expression tree");
}

// --- printing ----------------------------------------------------------------

int precedence(const ExprNode* n) {
  switch (n->kind) {
    case ExprKind::add:
    case ExprKind::sub: return 1;
    case ExprKind::mul:
    case ExprKind::div: return 2;
    case ExprKind::negate: return 3;
    case ExprKind::pow: return 4;
    default: return 5;  // atoms
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const ExprNode* n, std::string& out);

void print_child(const ExprNode* c, int min_prec, std::string& out) {
  if (precedence(c) < min_prec) {
    out += '(';
    print_node(c, out);
    out += ')';
  } else {
    print_node(c, out);
  }
}

void print_node(const ExprNode* n, std::string& out) {
  switch (n->kind) {
    case ExprKind::number: out += format_number(n->number); return;
    case ExprKind::variable: out += 'x'; return;
    case ExprKind::negate:
      out += '-';
      print_child(n->lhs.get(), 3, out);
      return;
    case ExprKind::add:
      print_child(n->lhs.get(), 1, out);
      out += '+';
      print_child(n->rhs.get(), 2, out);  // right operand must bind tighter
      return;
    case ExprKind::sub:
      print_child(n->lhs.get(), 1, out);
      out += '-';
      print_child(n->rhs.get(), 2, out);
      return;
    case ExprKind::mul:
      print_child(n->lhs.get(), 2, out);
      out += '*';
      print_child(n->rhs.get(), 3, out);
      return;
    case ExprKind::div:
      print_child(n->lhs.get(), 2, out);
      out += '/';
      print_child(n->rhs.get(), 3, out);
      return;
    case ExprKind::pow:
      print_child(n->lhs.get(), 5, out);  // base: parenthesize anything compound
      out += '^';
      print_child(n->rhs.get(), 3, out);  // exponent may be unary-negated
      return;
    case ExprKind::call:
      out += func_name(n->func);
      out += '(';
      print_node(n->lhs.get(), out);
      out += ')';
      return;
  }
}

// --- polynomial extraction ----------------------------------------------------

constexpr std::size_t kMaxPolyDegree = 64;

using Poly = std::vector<double>;  // coefficients, lowest power first

std::optional<Poly> poly_of(const ExprNode* n);

std::optional<Poly> poly_mul(const Poly& a, const Poly& b) {
  if (a.size() + b.size() > kMaxPolyDegree + 1) return std::nullopt;
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::optional<Poly> poly_of(const ExprNode* n) {
  switch (n->kind) {
    case ExprKind::number: return Poly{n->number};
    case ExprKind::variable: return Poly{0.0, 1.0};
    case ExprKind::negate: {
      auto a = poly_of(n->lhs.get());
      if (!a) return std::nullopt;
      for (double& c : *a) c = -c;
      return a;
    }
    case ExprKind::add:
    case ExprKind::sub: {
      auto a = poly_of(n->lhs.get());
      auto b = poly_of(n->rhs.get());
      if (!a || !b) return std::nullopt;
      const double sign = n->kind == ExprKind::add ? 1.0 : -1.0;
      if (b->size() > a->size()) a->resize(b->size(), 0.0);
      for (std::size_t i = 0; i < b->size(); ++i) (*a)[i] += sign * (*b)[i];
      return a;
    }
    case ExprKind::mul: {
      auto a = poly_of(n->lhs.get());
      auto b = poly_of(n->rhs.get());
      if (!a || !b) return std::nullopt;
      return poly_mul(*a, *b);
    }
    case ExprKind::div: {
      auto a = poly_of(n->lhs.get());
      if (!a || !is_constant_subtree(n->rhs.get())) return std::nullopt;
      double denom;
      try {
        denom = eval_value(n->rhs.get(), 0.0);
      } catch (const Error&) {
        return std::nullopt;
      }
      if (denom == 0.0) return std::nullopt;
      for (double& c : *a) c /= denom;
      return a;
    }
    case ExprKind::pow: {
      auto a = poly_of(n->lhs.get());
      if (!a || !is_constant_subtree(n->rhs.get())) return std::nullopt;
      double b;
      try {
        b = eval_value(n->rhs.get(), 0.0);
      } catch (const Error&) {
        return std::nullopt;
      }
      if (b != std::nearbyint(b) || b < 0 || b > double(kMaxPolyDegree))
        return std::nullopt;
      Poly acc{1.0};
      for (long long k = 0; k < static_cast<long long>(b); ++k) {
        auto next = poly_mul(acc, *a);
        if (!next) return std::nullopt;
        acc = std::move(*next);
      }
      return acc;
    }
    case ExprKind::call: {
      if (!is_constant_subtree(n)) return std::nullopt;
      try {
        return Poly{eval_value(n, 0.0)};
      } catch (const Error&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

Poly trim(Poly p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  return p;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser parser{text};
  if (parser.at_end())
    throw ParseError("syntax error: empty expression at position 0", 0);
  NodePtr root = parser.parse_expression();
  if (!parser.at_end())
    throw ParseError("syntax error: trailing input at position " +
                         std::to_string(parser.pos),
                     parser.pos);
  return Expression(std::move(root));
}

Expression::Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {
  if (auto p = poly_of(root_.get())) poly_ = trim(std::move(*p));
}

double Expression::operator()(double x) const { return eval_value(root_.get(), x); }

Jet4 Expression::jet(double x) const { return eval_jet(root_.get(), x); }

std::string Expression::str() const {
  std::string out;
  print_node(root_.get(), out);
  return out;
}

bool tree_equal(const ExprNode* a, const ExprNode* b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::number: {
      // Bitwise comparison so that -0.0 vs 0.0 round-trip drift is caught.
      return std::memcmp(&a->number, &b->number, sizeof(double)) == 0;
    }
    case ExprKind::variable: return true;
    case ExprKind::call:
      if (a->func != b->func) return false;
      return tree_equal(a->lhs.get(), b->lhs.get());
    case ExprKind::negate: return tree_equal(a->lhs.get(), b->lhs.get());
    default:
      return tree_equal(a->lhs.get(), b->lhs.get()) &&
             tree_equal(a->rhs.get(), b->rhs.get());
  }
}

}  // namespace effaction
