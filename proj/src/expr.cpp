#include "unextend/expr.hpp"

#include <cctype>
#include <memory>

namespace unextend {

namespace {

struct Node {
  enum class Kind { Literal, Add, Neg, Mul };
  Kind kind;
  Rational value;  // Literal only
  std::unique_ptr<Node> lhs, rhs;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr literal(Rational v) {
  return std::make_unique<Node>(Node{Node::Kind::Literal, std::move(v), nullptr, nullptr});
}
NodePtr unary(Node::Kind k, NodePtr a) {
  return std::make_unique<Node>(Node{k, Rational(0), std::move(a), nullptr});
}
NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
  return std::make_unique<Node>(Node{k, Rational(0), std::move(a), std::move(b)});
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_ws();
    if (pos_ != text_.size())
      throw ExprParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return root;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  NodePtr expression() {
    NodePtr acc = term();
    while (peek_is('+')) {
      ++pos_;
      acc = binary(Node::Kind::Add, std::move(acc), term());
    }
    return acc;
  }

  NodePtr term() {
    NodePtr acc = factor();
    while (peek_is('*')) {
      ++pos_;
      acc = binary(Node::Kind::Mul, std::move(acc), factor());
    }
    return acc;
  }

  NodePtr factor() {
    skip_ws();
    if (pos_ >= text_.size()) throw ExprParseError(pos_, "expected a value");
    char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return unary(Node::Kind::Neg, factor());
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      if (!peek_is(')')) throw ExprParseError(pos_, "expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return literal(rational_literal());
    throw ExprParseError(pos_, std::string("unexpected '") + c + "'");
  }

  Nat digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    auto n = parse_natural(text_.substr(start, pos_ - start));
    if (!n) throw ExprParseError(start, "expected digits");
    return std::move(*n);
  }

  Rational rational_literal() {
    Nat num = digits();
    // The grammar has no division operator, so a slash can only continue
    // the literal.
    if (!peek_is('/')) return Rational(num);
    ++pos_;
    skip_ws();
    std::size_t den_pos = pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ExprParseError(pos_, "expected a denominator");
    Nat den = digits();
    if (den == 0) throw ExprParseError(den_pos, "denominator is zero");
    return Rational(num, den);
  }
};

Crn eval_crn(const Node& node) {
  switch (node.kind) {
    case Node::Kind::Literal: return Crn::from_rational(node.value);
    case Node::Kind::Add: return eval_crn(*node.lhs) + eval_crn(*node.rhs);
    case Node::Kind::Neg: return -eval_crn(*node.lhs);
    case Node::Kind::Mul: return eval_crn(*node.lhs) * eval_crn(*node.rhs);
  }
  throw std::logic_error("unreachable node kind");
}

Rational eval_exact(const Node& node) {
  switch (node.kind) {
    case Node::Kind::Literal: return node.value;
    case Node::Kind::Add: return eval_exact(*node.lhs) + eval_exact(*node.rhs);
    case Node::Kind::Neg: return -eval_exact(*node.lhs);
    case Node::Kind::Mul: return eval_exact(*node.lhs) * eval_exact(*node.rhs);
  }
  throw std::logic_error("unreachable node kind");
}

}  // namespace

Crn parse_crn_expression(std::string_view text) {
  return eval_crn(*Parser(text).parse());
}

Rational parse_exact_expression(std::string_view text) {
  return eval_exact(*Parser(text).parse());
}

}  // namespace unextend
