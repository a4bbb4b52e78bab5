#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "floatnet/errors.hpp"
#include "floatnet/rational.hpp"

namespace floatnet {

// Exactly-evaluable target functions: expressions over x (or x1..x9) with
// +, -, *, /, integer ^, decimal literals, abs/min/max. Evaluation is exact
// rational arithmetic, so every rounding decision for [[f*(gamma)]] is
// certain.
class FuncExpr {
 public:
  static FuncExpr parse(const std::string& src) {
    Parser p(src);
    FuncExpr fe;
    fe.root_ = p.parse_expr();
    p.skip_ws();
    if (!p.done()) throw ParseError("trailing characters in expression '" + src + "'");
    fe.src_ = src;
    fe.arity_ = p.max_var;
    return fe;
  }

  Rational operator()(const std::vector<Rational>& x) const {
    if (arity_ > x.size())
      throw ShapeMismatch("expression uses x" + std::to_string(arity_) + " but got " +
                          std::to_string(x.size()) + " inputs");
    return eval_node(*root_, x);
  }

  size_t arity() const { return arity_; }
  const std::string& source() const { return src_; }

 private:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Abs, Min, Max };
  struct Node {
    Op op;
    Rational value;     // Const
    size_t var = 0;     // Var (1-based)
    int64_t power = 0;  // Pow
    std::vector<std::unique_ptr<Node>> kids;
  };

  static Rational eval_node(const Node& n, const std::vector<Rational>& x) {
    switch (n.op) {
      case Op::Const: return n.value;
      case Op::Var: return x[n.var - 1];
      case Op::Add: return Rational::add(eval_node(*n.kids[0], x), eval_node(*n.kids[1], x));
      case Op::Sub: return Rational::sub(eval_node(*n.kids[0], x), eval_node(*n.kids[1], x));
      case Op::Mul: return Rational::mul(eval_node(*n.kids[0], x), eval_node(*n.kids[1], x));
      case Op::Div: {
        Rational d = eval_node(*n.kids[1], x);
        if (d.is_zero()) throw DomainError("division by zero in expression");
        return Rational::div(eval_node(*n.kids[0], x), d);
      }
      case Op::Neg: return eval_node(*n.kids[0], x).negated();
      case Op::Pow: {
        Rational base = eval_node(*n.kids[0], x);
        Rational acc = Rational::from_int(1);
        for (int64_t i = 0; i < n.power; ++i) acc = Rational::mul(acc, base);
        return acc;
      }
      case Op::Abs: return eval_node(*n.kids[0], x).abs();
      case Op::Min: {
        Rational a = eval_node(*n.kids[0], x), b = eval_node(*n.kids[1], x);
        return Rational::compare(a, b) <= 0 ? a : b;
      }
      case Op::Max: {
        Rational a = eval_node(*n.kids[0], x), b = eval_node(*n.kids[1], x);
        return Rational::compare(a, b) >= 0 ? a : b;
      }
    }
    throw DomainError("unreachable expression op");
  }

  struct Parser {
    const std::string& s;
    size_t pos = 0;
    size_t max_var = 0;
    explicit Parser(const std::string& src) : s(src) {}

    bool done() const { return pos >= s.size(); }
    void skip_ws() {
      while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
      skip_ws();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    std::unique_ptr<Node> parse_expr() {
      auto lhs = parse_term();
      for (;;) {
        if (eat('+')) {
          lhs = binary(Op::Add, std::move(lhs), parse_term());
        } else if (eat('-')) {
          lhs = binary(Op::Sub, std::move(lhs), parse_term());
        } else {
          return lhs;
        }
      }
    }

    std::unique_ptr<Node> parse_term() {
      auto lhs = parse_factor();
      for (;;) {
        if (eat('*')) {
          lhs = binary(Op::Mul, std::move(lhs), parse_factor());
        } else if (eat('/')) {
          lhs = binary(Op::Div, std::move(lhs), parse_factor());
        } else {
          return lhs;
        }
      }
    }

    std::unique_ptr<Node> parse_factor() {
      skip_ws();
      if (eat('-')) {
        auto n = std::make_unique<Node>();
        n->op = Op::Neg;
        n->kids.push_back(parse_factor());
        return n;
      }
      eat('+');
      auto base = parse_primary();
      skip_ws();
      if (eat('^')) {
        skip_ws();
        int64_t pw = 0;
        bool any = false;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
          pw = pw * 10 + (s[pos] - '0');
          ++pos;
          any = true;
        }
        if (!any || pw > 64) throw ParseError("bad exponent in expression");
        auto n = std::make_unique<Node>();
        n->op = Op::Pow;
        n->power = pw;
        n->kids.push_back(std::move(base));
        return n;
      }
      return base;
    }

    std::unique_ptr<Node> parse_primary() {
      skip_ws();
      if (done()) throw ParseError("unexpected end of expression");
      char c = s[pos];
      if (c == '(') {
        ++pos;
        auto n = parse_expr();
        if (!eat(')')) throw ParseError("missing ')' in expression");
        return n;
      }
      if ((c >= '0' && c <= '9') || c == '.') {
        size_t start = pos;
        while (pos < s.size() && ((s[pos] >= '0' && s[pos] <= '9') || s[pos] == '.')) ++pos;
        auto n = std::make_unique<Node>();
        n->op = Op::Const;
        n->value = Rational::from_decimal(s.substr(start, pos - start));
        return n;
      }
      if (c >= 'a' && c <= 'z') {
        size_t start = pos;
        while (pos < s.size() && ((s[pos] >= 'a' && s[pos] <= 'z') || (s[pos] >= '0' && s[pos] <= '9')))
          ++pos;
        std::string name = s.substr(start, pos - start);
        if (name == "x") return var_node(1);
        if (name.size() >= 2 && name[0] == 'x') {
          size_t idx = 0;
          for (size_t i = 1; i < name.size(); ++i) {
            if (name[i] < '0' || name[i] > '9') throw ParseError("unknown identifier '" + name + "'");
            idx = idx * 10 + static_cast<size_t>(name[i] - '0');
          }
          if (idx < 1 || idx > 9) throw ParseError("variable index out of range in '" + name + "'");
          return var_node(idx);
        }
        if (name == "abs" || name == "min" || name == "max") {
          if (!eat('(')) throw ParseError("expected '(' after '" + name + "'");
          auto n = std::make_unique<Node>();
          n->kids.push_back(parse_expr());
          if (name == "abs") {
            n->op = Op::Abs;
          } else {
            n->op = name == "min" ? Op::Min : Op::Max;
            if (!eat(',')) throw ParseError("expected ',' in '" + name + "'");
            n->kids.push_back(parse_expr());
          }
          if (!eat(')')) throw ParseError("missing ')' after '" + name + "'");
          return n;
        }
        throw ParseError("unknown identifier '" + name + "'");
      }
      throw ParseError(std::string("unexpected character '") + c + "' in expression");
    }

    std::unique_ptr<Node> var_node(size_t idx) {
      max_var = std::max(max_var, idx);
      auto n = std::make_unique<Node>();
      n->op = Op::Var;
      n->var = idx;
      return n;
    }

    static std::unique_ptr<Node> binary(Op op, std::unique_ptr<Node> a, std::unique_ptr<Node> b) {
      auto n = std::make_unique<Node>();
      n->op = op;
      n->kids.push_back(std::move(a));
      n->kids.push_back(std::move(b));
      return n;
    }
  };

  std::shared_ptr<Node> root_;
  std::string src_;
  size_t arity_ = 0;
};

// The oracle interface the constructors consume.
using TargetFn = std::function<Rational(const std::vector<Rational>&)>;

inline TargetFn target_from_expression(const std::string& expr) {
  auto fe = std::make_shared<FuncExpr>(FuncExpr::parse(expr));
  return [fe](const std::vector<Rational>& x) { return (*fe)(x); };
}

}  // namespace floatnet
