#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "interval.hpp"
#include "jet.hpp"

namespace singerkit {

enum class TokenKind : std::uint8_t {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen
};

struct Token {
  TokenKind kind;
  std::size_t pos = 0;  // byte offset in the source string
  double value = 0.0;   // Number
  std::string text;     // Ident
};

struct ParseError : std::runtime_error {
  enum class Kind : std::uint8_t {
    IllegalCharacter,
    Syntax,
    UnknownFunction,
    NonConstantExponent
  };
  Kind kind;
  std::size_t position;
  std::string detail;  // expected set for Syntax, name for UnknownFunction

  ParseError(Kind k, std::size_t pos, const std::string& message,
             std::string detail_text = {})
      : std::runtime_error(message), kind(k), position(pos), detail(std::move(detail_text)) {}
};

std::vector<Token> tokenize(std::string_view source);

enum class NodeKind : std::uint8_t { Const, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func : std::uint8_t { Sin, Cos, Exp, Log, Sqrt, Tanh };

const char* func_name(Func f);
std::optional<Func> func_from_name(std::string_view name);

struct AstNode {
  NodeKind kind = NodeKind::Const;
  Func fn = Func::Sin;          // Call
  double value = 0.0;           // Const
  int lhs = -1;                 // first child (operand of Neg/Call)
  int rhs = -1;                 // second child
  std::string name;             // Param
  std::size_t pos = 0;          // source offset
};

// Flat expression tree; nodes reference children by index, root is last-built.
// The single free variable is spelled "x"; every other identifier is a named
// parameter. Exponents of ^ never contain x (checked at parse time).
struct Ast {
  std::vector<AstNode> nodes;
  int root = -1;

  bool contains_var(int node = -2) const;           // -2 means "from root"
  std::vector<std::string> param_names() const;     // sorted, unique
};

Ast parse(std::string_view source);
bool ast_equal(const Ast& a, const Ast& b);
std::string pretty_print(const Ast& ast);

// Shortest round-trip decimal rendering (via to_chars).
std::string format_double(double v);

using Params = std::vector<std::pair<std::string, double>>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed expression with bound parameters and a domain. Immutable after
// construction; safe to share across threads.
struct MapSpec {
  Ast ast;
  Params params;  // sorted by name
  Interval domain;
  std::string source;

  // Parses, checks every named parameter is bound and the domain is a
  // finite nonempty interval. Throws ParseError / ConfigError.
  static MapSpec compile(std::string_view source, Params params, Interval domain);

  std::string id() const;  // "expr | name=value ... | domain [a,b]"
};

// Plain evaluation. Non-finite values propagate (check std::isfinite);
// nothing throws on numeric trouble.
double eval_real(const Ast& ast, const Params& params, double x);
Jet3 eval_jet(const Ast& ast, const Params& params, const Jet3& at);

double eval_real(const MapSpec& map, double x);
Jet3 eval_jet(const MapSpec& map, const Jet3& at);

// f^n by jet composition along the orbit (left fold, O(n)); n >= 1.
Jet3 iterate_jet(const MapSpec& map, double x, int n);
double iterate_value(const MapSpec& map, double x, int n);

}  // namespace singerkit
