#pragma once

#include <cctype>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "mfb/errors.hpp"
#include "mfb/smooth.hpp"

namespace mfb {

// Closed-form scalar expressions over named coordinates.
// Grammar: + - * /, unary minus, sin, cos, exp, numeric constants,
// coordinate names, parentheses. No user code ever runs.
class Expr {
 public:
  enum class Kind { Const, Coord, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp };

  struct Node {
    Kind kind;
    double value = 0.0;  // Const
    int coord = -1;      // Coord
    std::unique_ptr<Node> lhs, rhs;
  };

  Expr() = default;

  static Expr parse(const std::string& src, const std::vector<std::string>& coords) {
    Parser p{src, coords, 0};
    Expr e;
    e.source_ = src;
    e.root_ = p.parse_expr();
    p.skip_ws();
    if (p.pos != src.size())
      throw ParseError("expression \"" + src + "\": unexpected character '" +
                       src[p.pos] + "' at position " + std::to_string(p.pos));
    return e;
  }

  bool valid() const { return static_cast<bool>(root_); }
  const std::string& source() const { return source_; }

  template <class S>
  S eval(const Vec<S>& coords) const {
    return eval_node(*root_, coords);
  }

 private:
  template <class S>
  static S eval_node(const Node& n, const Vec<S>& coords) {
    switch (n.kind) {
      case Kind::Const: return S(n.value);
      case Kind::Coord: return coords[n.coord];
      case Kind::Add: return eval_node(*n.lhs, coords) + eval_node(*n.rhs, coords);
      case Kind::Sub: return eval_node(*n.lhs, coords) - eval_node(*n.rhs, coords);
      case Kind::Mul: return eval_node(*n.lhs, coords) * eval_node(*n.rhs, coords);
      case Kind::Div: return eval_node(*n.lhs, coords) / eval_node(*n.rhs, coords);
      case Kind::Neg: return -eval_node(*n.lhs, coords);
      case Kind::Sin: { using std::sin; return sin(eval_node(*n.lhs, coords)); }
      case Kind::Cos: { using std::cos; return cos(eval_node(*n.lhs, coords)); }
      case Kind::Exp: { using std::exp; return exp(eval_node(*n.lhs, coords)); }
    }
    return S(0.0);
  }

  struct Parser {
    const std::string& src;
    const std::vector<std::string>& coords;
    size_t pos;

    void skip_ws() {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
      skip_ws();
      if (pos < src.size() && src[pos] == c) { ++pos; return true; }
      return false;
    }

    std::unique_ptr<Node> parse_expr() {
      auto lhs = parse_term();
      for (;;) {
        if (eat('+')) {
          auto n = std::make_unique<Node>();
          n->kind = Kind::Add; n->lhs = std::move(lhs); n->rhs = parse_term();
          lhs = std::move(n);
        } else if (eat('-')) {
          auto n = std::make_unique<Node>();
          n->kind = Kind::Sub; n->lhs = std::move(lhs); n->rhs = parse_term();
          lhs = std::move(n);
        } else {
          return lhs;
        }
      }
    }

    std::unique_ptr<Node> parse_term() {
      auto lhs = parse_factor();
      for (;;) {
        if (eat('*')) {
          auto n = std::make_unique<Node>();
          n->kind = Kind::Mul; n->lhs = std::move(lhs); n->rhs = parse_factor();
          lhs = std::move(n);
        } else if (eat('/')) {
          auto n = std::make_unique<Node>();
          n->kind = Kind::Div; n->lhs = std::move(lhs); n->rhs = parse_factor();
          lhs = std::move(n);
        } else {
          return lhs;
        }
      }
    }

    std::unique_ptr<Node> parse_factor() {
      skip_ws();
      if (eat('-')) {
        auto n = std::make_unique<Node>();
        n->kind = Kind::Neg;
        n->lhs = parse_factor();
        return n;
      }
      return parse_primary();
    }

    std::unique_ptr<Node> parse_primary() {
      skip_ws();
      if (pos >= src.size())
        throw ParseError("expression \"" + src + "\": unexpected end of input at position " +
                         std::to_string(pos));
      char c = src[pos];
      if (eat('(')) {
        auto n = parse_expr();
        if (!eat(')'))
          throw ParseError("expression \"" + src + "\": missing ')' at position " +
                           std::to_string(pos));
        return n;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const char* begin = src.c_str() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        pos += static_cast<size_t>(end - begin);
        auto n = std::make_unique<Node>();
        n->kind = Kind::Const;
        n->value = v;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
          ++pos;
        std::string name = src.substr(start, pos - start);
        if (name == "sin" || name == "cos" || name == "exp") {
          if (!eat('('))
            throw ParseError("expression \"" + src + "\": expected '(' after " + name +
                             " at position " + std::to_string(pos));
          auto arg = parse_expr();
          if (!eat(')'))
            throw ParseError("expression \"" + src + "\": missing ')' at position " +
                             std::to_string(pos));
          auto n = std::make_unique<Node>();
          n->kind = name == "sin" ? Kind::Sin : name == "cos" ? Kind::Cos : Kind::Exp;
          n->lhs = std::move(arg);
          return n;
        }
        for (size_t i = 0; i < coords.size(); ++i) {
          if (coords[i] == name) {
            auto n = std::make_unique<Node>();
            n->kind = Kind::Coord;
            n->coord = static_cast<int>(i);
            return n;
          }
        }
        throw ParseError("expression \"" + src + "\": unknown token \"" + name +
                         "\" at position " + std::to_string(start));
      }
      throw ParseError("expression \"" + src + "\": unexpected character '" + c +
                       "' at position " + std::to_string(pos));
    }
  };

  std::shared_ptr<Node> root_;
  std::string source_;
};

// Pack a list of expressions into a SmoothMap (all four scalar levels).
inline SmoothMap exprs_to_map(const std::vector<std::string>& exprs,
                              const std::vector<std::string>& coords) {
  auto parsed = std::make_shared<std::vector<Expr>>();
  parsed->reserve(exprs.size());
  for (const auto& e : exprs) parsed->push_back(Expr::parse(e, coords));
  const int out = static_cast<int>(exprs.size());
  return SmoothMap::make<3>(static_cast<int>(coords.size()), out,
                            [parsed](const auto& x) {
                              using S = typename std::decay_t<decltype(x)>::value_type;
                              Vec<S> r;
                              r.reserve(parsed->size());
                              for (const auto& e : *parsed) r.push_back(e.template eval<S>(x));
                              return r;
                            });
}

}  // namespace mfb
