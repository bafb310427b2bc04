#include "singerkit/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace singerkit {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Tanh: return "tanh";
  }
  return "?";
}

std::optional<Func> func_from_name(std::string_view name) {
  if (name == "sin") return Func::Sin;
  if (name == "cos") return Func::Cos;
  if (name == "exp") return Func::Exp;
  if (name == "log") return Func::Log;
  if (name == "sqrt") return Func::Sqrt;
  if (name == "tanh") return Func::Tanh;
  return std::nullopt;
}

static Elem func_elem(Func f) {
  switch (f) {
    case Func::Sin: return Elem::Sin;
    case Func::Cos: return Elem::Cos;
    case Func::Exp: return Elem::Exp;
    case Func::Log: return Elem::Log;
    case Func::Sqrt: return Elem::Sqrt;
    case Func::Tanh: return Elem::Tanh;
  }
  return Elem::Sin;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto punct = [&](TokenKind k) {
    Token t;
    t.kind = k;
    t.pos = i;
    out.push_back(std::move(t));
    ++i;
  };
  while (i < n) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    switch (c) {
      case '+': punct(TokenKind::Plus); continue;
      case '-': punct(TokenKind::Minus); continue;
      case '*': punct(TokenKind::Star); continue;
      case '/': punct(TokenKind::Slash); continue;
      case '^': punct(TokenKind::Caret); continue;
      case '(': punct(TokenKind::LParen); continue;
      case ')': punct(TokenKind::RParen); continue;
      default: break;
    }
    const bool digit = std::isdigit(static_cast<unsigned char>(c)) != 0;
    const bool dot_number =
        c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1]));
    if (digit || dot_number) {
      double value = 0.0;
      const char* first = src.data() + i;
      const char* last = src.data() + n;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc{} || ptr == first)
        throw ParseError(ParseError::Kind::IllegalCharacter, i, "malformed number");
      Token t;
      t.kind = TokenKind::Number;
      t.pos = i;
      t.value = value;
      out.push_back(std::move(t));
      i += static_cast<std::size_t>(ptr - first);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      Token t;
      t.kind = TokenKind::Ident;
      t.pos = i;
      t.text = std::string(src.substr(i, j - i));
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    throw ParseError(ParseError::Kind::IllegalCharacter, i,
                     "illegal character '" + std::string(1, c) + "' at offset " +
                         std::to_string(i));
  }
  return out;
}

bool Ast::contains_var(int node) const {
  if (node == -2) node = root;
  if (node < 0) return false;
  const AstNode& n = nodes[static_cast<std::size_t>(node)];
  if (n.kind == NodeKind::Var) return true;
  if (n.lhs >= 0 && contains_var(n.lhs)) return true;
  if (n.rhs >= 0 && contains_var(n.rhs)) return true;
  return false;
}

std::vector<std::string> Ast::param_names() const {
  std::set<std::string> names;
  for (const AstNode& n : nodes)
    if (n.kind == NodeKind::Param) names.insert(n.name);
  return {names.begin(), names.end()};
}

namespace {

// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?     -- exponent must not contain x
//   atom   := number | ident | ident "(" expr ")" | "(" expr ")"
struct Parser {
  const std::vector<Token>& ts;
  std::size_t end_pos;
  std::size_t i = 0;
  Ast ast;

  Parser(const std::vector<Token>& tokens, std::size_t source_end)
      : ts(tokens), end_pos(source_end) {}

  bool at_end() const { return i >= ts.size(); }
  const Token& peek() const { return ts[i]; }
  std::size_t here() const { return at_end() ? end_pos : ts[i].pos; }

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(ParseError::Kind::Syntax, here(),
                     "syntax error at offset " + std::to_string(here()) + ": expected " +
                         expected,
                     expected);
  }

  bool accept(TokenKind k) {
    if (!at_end() && ts[i].kind == k) {
      ++i;
      return true;
    }
    return false;
  }

  int push(AstNode n) {
    ast.nodes.push_back(std::move(n));
    return static_cast<int>(ast.nodes.size() - 1);
  }

  int expr() {
    int lhs = term();
    while (!at_end() && (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus)) {
      const Token op = peek();
      ++i;
      int rhs = term();
      AstNode n;
      n.kind = op.kind == TokenKind::Plus ? NodeKind::Add : NodeKind::Sub;
      n.lhs = lhs;
      n.rhs = rhs;
      n.pos = op.pos;
      lhs = push(std::move(n));
    }
    return lhs;
  }

  int term() {
    int lhs = factor();
    while (!at_end() && (peek().kind == TokenKind::Star || peek().kind == TokenKind::Slash)) {
      const Token op = peek();
      ++i;
      int rhs = factor();
      AstNode n;
      n.kind = op.kind == TokenKind::Star ? NodeKind::Mul : NodeKind::Div;
      n.lhs = lhs;
      n.rhs = rhs;
      n.pos = op.pos;
      lhs = push(std::move(n));
    }
    return lhs;
  }

  int factor() {
    if (!at_end() && peek().kind == TokenKind::Minus) {
      const std::size_t pos = peek().pos;
      ++i;
      int child = factor();
      AstNode n;
      n.kind = NodeKind::Neg;
      n.lhs = child;
      n.pos = pos;
      return push(std::move(n));
    }
    return power();
  }

  int power() {
    int base = atom();
    if (!at_end() && peek().kind == TokenKind::Caret) {
      const std::size_t caret = peek().pos;
      ++i;
      const std::size_t exp_pos = here();
      int exponent = factor();
      if (ast.contains_var(exponent))
        throw ParseError(ParseError::Kind::NonConstantExponent, exp_pos,
                         "exponent at offset " + std::to_string(exp_pos) +
                             " must be constant (must not contain x)");
      AstNode n;
      n.kind = NodeKind::Pow;
      n.lhs = base;
      n.rhs = exponent;
      n.pos = caret;
      return push(std::move(n));
    }
    return base;
  }

  int atom() {
    if (at_end()) fail("expression");
    const Token t = peek();
    if (t.kind == TokenKind::Number) {
      ++i;
      AstNode n;
      n.kind = NodeKind::Const;
      n.value = t.value;
      n.pos = t.pos;
      return push(std::move(n));
    }
    if (t.kind == TokenKind::Ident) {
      ++i;
      const auto fn = func_from_name(t.text);
      if (!at_end() && peek().kind == TokenKind::LParen) {
        if (!fn)
          throw ParseError(ParseError::Kind::UnknownFunction, t.pos,
                           "unknown function '" + t.text + "'", t.text);
        ++i;  // consume '('
        int arg = expr();
        if (!accept(TokenKind::RParen)) fail("')'");
        AstNode n;
        n.kind = NodeKind::Call;
        n.fn = *fn;
        n.lhs = arg;
        n.pos = t.pos;
        return push(std::move(n));
      }
      if (fn) fail("'(' after function name");
      AstNode n;
      n.kind = t.text == "x" ? NodeKind::Var : NodeKind::Param;
      if (n.kind == NodeKind::Param) n.name = t.text;
      n.pos = t.pos;
      return push(std::move(n));
    }
    if (t.kind == TokenKind::LParen) {
      ++i;
      int inner = expr();
      if (!accept(TokenKind::RParen)) fail("')'");
      return inner;
    }
    fail("expression");
  }

  Ast run() {
    if (ts.empty()) fail("expression");
    ast.root = expr();
    if (!at_end()) fail("operator or end of input");
    return std::move(ast);
  }
};

}  // namespace

Ast parse(std::string_view source) {
  const std::vector<Token> tokens = tokenize(source);
  Parser p(tokens, source.size());
  return p.run();
}

static bool node_equal(const Ast& a, int ia, const Ast& b, int ib) {
  if ((ia < 0) != (ib < 0)) return false;
  if (ia < 0) return true;
  const AstNode& na = a.nodes[static_cast<std::size_t>(ia)];
  const AstNode& nb = b.nodes[static_cast<std::size_t>(ib)];
  if (na.kind != nb.kind) return false;
  switch (na.kind) {
    case NodeKind::Const:
      if (!(na.value == nb.value)) return false;
      break;
    case NodeKind::Param:
      if (na.name != nb.name) return false;
      break;
    case NodeKind::Call:
      if (na.fn != nb.fn) return false;
      break;
    default: break;
  }
  return node_equal(a, na.lhs, b, nb.lhs) && node_equal(a, na.rhs, b, nb.rhs);
}

bool ast_equal(const Ast& a, const Ast& b) { return node_equal(a, a.root, b, b.root); }

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

// Precedence levels for printing: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atoms 5.
// A child is parenthesized when its own level is below what its slot needs,
// which is exactly what makes the output reparse to the same tree.
int print_level(const Ast& ast, int idx) {
  const AstNode& n = ast.nodes[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    case NodeKind::Const: return n.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

void print_node(const Ast& ast, int idx, int required, std::string& out) {
  const AstNode& n = ast.nodes[static_cast<std::size_t>(idx)];
  const bool parens = print_level(ast, idx) < required;
  if (parens) out += '(';
  switch (n.kind) {
    case NodeKind::Const: out += format_double(n.value); break;
    case NodeKind::Var: out += 'x'; break;
    case NodeKind::Param: out += n.name; break;
    case NodeKind::Neg:
      out += '-';
      print_node(ast, n.lhs, 3, out);
      break;
    case NodeKind::Add:
      print_node(ast, n.lhs, 1, out);
      out += '+';
      print_node(ast, n.rhs, 2, out);
      break;
    case NodeKind::Sub:
      print_node(ast, n.lhs, 1, out);
      out += '-';
      print_node(ast, n.rhs, 2, out);
      break;
    case NodeKind::Mul:
      print_node(ast, n.lhs, 2, out);
      out += '*';
      print_node(ast, n.rhs, 3, out);
      break;
    case NodeKind::Div:
      print_node(ast, n.lhs, 2, out);
      out += '/';
      print_node(ast, n.rhs, 3, out);
      break;
    case NodeKind::Pow:
      print_node(ast, n.lhs, 5, out);
      out += '^';
      print_node(ast, n.rhs, 3, out);
      break;
    case NodeKind::Call:
      out += func_name(n.fn);
      out += '(';
      print_node(ast, n.lhs, 1, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string pretty_print(const Ast& ast) {
  std::string out;
  if (ast.root >= 0) print_node(ast, ast.root, 1, out);
  return out;
}

MapSpec MapSpec::compile(std::string_view source, Params params, Interval domain) {
  MapSpec m;
  m.ast = parse(source);
  m.source = std::string(source);
  std::sort(params.begin(), params.end());
  for (std::size_t k = 1; k < params.size(); ++k)
    if (params[k].first == params[k - 1].first)
      throw ConfigError("parameter '" + params[k].first + "' bound twice");
  m.params = std::move(params);
  for (const std::string& name : m.ast.param_names()) {
    const bool bound = std::any_of(m.params.begin(), m.params.end(),
                                   [&](const auto& p) { return p.first == name; });
    if (!bound) throw ConfigError("parameter '" + name + "' is not bound");
  }
  if (!domain.valid())
    throw ConfigError("domain must be a finite interval with lo < hi");
  m.domain = domain;
  return m;
}

std::string MapSpec::id() const {
  std::string s = source;
  for (const auto& [name, value] : params) s += " | " + name + "=" + format_double(value);
  s += " | domain [" + format_double(domain.lo) + "," + format_double(domain.hi) + "]";
  return s;
}

namespace {

double lookup_param(const Params& params, const std::string& name) {
  for (const auto& [n, v] : params)
    if (n == name) return v;
  throw ConfigError("parameter '" + name + "' is not bound");
}

double eval_real_node(const Ast& ast, const Params& params, double x, int idx) {
  const AstNode& n = ast.nodes[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case NodeKind::Const: return n.value;
    case NodeKind::Var: return x;
    case NodeKind::Param: return lookup_param(params, n.name);
    case NodeKind::Neg: return -eval_real_node(ast, params, x, n.lhs);
    case NodeKind::Add:
      return eval_real_node(ast, params, x, n.lhs) + eval_real_node(ast, params, x, n.rhs);
    case NodeKind::Sub:
      return eval_real_node(ast, params, x, n.lhs) - eval_real_node(ast, params, x, n.rhs);
    case NodeKind::Mul:
      return eval_real_node(ast, params, x, n.lhs) * eval_real_node(ast, params, x, n.rhs);
    case NodeKind::Div:
      return eval_real_node(ast, params, x, n.lhs) / eval_real_node(ast, params, x, n.rhs);
    case NodeKind::Pow: {
      const double base = eval_real_node(ast, params, x, n.lhs);
      const double k = eval_real_node(ast, params, x, n.rhs);
      return pow_value(base, k);
    }
    case NodeKind::Call: {
      const double u = eval_real_node(ast, params, x, n.lhs);
      switch (n.fn) {
        case Func::Sin: return std::sin(u);
        case Func::Cos: return std::cos(u);
        case Func::Exp: return std::exp(u);
        case Func::Log: return std::log(u);
        case Func::Sqrt: return std::sqrt(u);
        case Func::Tanh: return std::tanh(u);
      }
      return 0.0;
    }
  }
  return 0.0;
}

Jet3 eval_jet_node(const Ast& ast, const Params& params, const Jet3& at, int idx) {
  const AstNode& n = ast.nodes[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case NodeKind::Const: return jet_const(n.value);
    case NodeKind::Var: return at;
    case NodeKind::Param: return jet_const(lookup_param(params, n.name));
    case NodeKind::Neg: return neg(eval_jet_node(ast, params, at, n.lhs));
    case NodeKind::Add:
      return add(eval_jet_node(ast, params, at, n.lhs), eval_jet_node(ast, params, at, n.rhs));
    case NodeKind::Sub:
      return sub(eval_jet_node(ast, params, at, n.lhs), eval_jet_node(ast, params, at, n.rhs));
    case NodeKind::Mul:
      return mul(eval_jet_node(ast, params, at, n.lhs), eval_jet_node(ast, params, at, n.rhs));
    case NodeKind::Div:
      return div(eval_jet_node(ast, params, at, n.lhs), eval_jet_node(ast, params, at, n.rhs));
    case NodeKind::Pow: {
      // exponent is x-free by construction, so it is a plain constant here
      const double k = eval_real_node(ast, params, at.v0, n.rhs);
      return pow_const(eval_jet_node(ast, params, at, n.lhs), k);
    }
    case NodeKind::Call: {
      const Jet3 u = eval_jet_node(ast, params, at, n.lhs);
      return apply_elementary(func_elem(n.fn), u);
    }
  }
  return jet_const(0.0);
}

}  // namespace

double eval_real(const Ast& ast, const Params& params, double x) {
  return eval_real_node(ast, params, x, ast.root);
}

Jet3 eval_jet(const Ast& ast, const Params& params, const Jet3& at) {
  return eval_jet_node(ast, params, at, ast.root);
}

double eval_real(const MapSpec& map, double x) {
  return eval_real_node(map.ast, map.params, x, map.ast.root);
}

Jet3 eval_jet(const MapSpec& map, const Jet3& at) {
  return eval_jet_node(map.ast, map.params, at, map.ast.root);
}

Jet3 iterate_jet(const MapSpec& map, double x, int n) {
  if (n < 1) throw std::invalid_argument("iterate_jet: n must be >= 1");
  Jet3 acc = eval_jet(map, jet_var(x));
  for (int k = 1; k < n; ++k) {
    if (!acc.finite) return acc;
    const Jet3 outer = eval_jet(map, jet_var(acc.v0));
    acc = compose(outer, acc);
  }
  return acc;
}

double iterate_value(const MapSpec& map, double x, int n) {
  if (n < 1) throw std::invalid_argument("iterate_value: n must be >= 1");
  double v = x;
  for (int k = 0; k < n; ++k) v = eval_real(map, v);
  return v;
}

}  // namespace singerkit
