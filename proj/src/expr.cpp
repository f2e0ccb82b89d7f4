#include "fracwave/expr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstring>
#include <utility>

namespace fracwave::expr {

struct Expression::Node {
  NodeKind kind;
  double constant;
  std::vector<Expression> operands;
};

Expression::Expression() : Expression(literal(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::make(NodeKind kind, double constant, std::vector<Expression> operands) {
  return Expression(std::make_shared<const Node>(Node{kind, constant, std::move(operands)}));
}

Expression Expression::literal(double value) { return make(NodeKind::literal, value, {}); }
Expression Expression::variable() { return make(NodeKind::variable, 0.0, {}); }

NodeKind Expression::kind() const noexcept { return node_->kind; }

double Expression::constant() const {
  if (node_->kind != NodeKind::literal && node_->kind != NodeKind::power) {
    throw std::logic_error("Expression::constant: node carries no constant");
  }
  return node_->constant;
}

std::size_t Expression::arity() const noexcept { return node_->operands.size(); }

const Expression& Expression::operand(std::size_t i) const { return node_->operands.at(i); }

bool Expression::depends_on_variable() const noexcept {
  if (node_->kind == NodeKind::variable) return true;
  for (const auto& op : node_->operands) {
    if (op.depends_on_variable()) return true;
  }
  return false;
}

Expression Expression::substitute(const Expression& replacement) const {
  if (node_->kind == NodeKind::variable) return replacement;
  if (node_->operands.empty()) return *this;
  std::vector<Expression> ops;
  ops.reserve(node_->operands.size());
  for (const auto& op : node_->operands) ops.push_back(op.substitute(replacement));
  return make(node_->kind, node_->constant, std::move(ops));
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

const char* function_name(NodeKind k) {
  switch (k) {
    case NodeKind::sin: return "sin";
    case NodeKind::cos: return "cos";
    case NodeKind::exp: return "exp";
    default: return nullptr;
  }
}

char binary_symbol(NodeKind k) {
  switch (k) {
    case NodeKind::add: return '+';
    case NodeKind::subtract: return '-';
    case NodeKind::multiply: return '*';
    case NodeKind::divide: return '/';
    default: return '?';
  }
}

}  // namespace

std::string Expression::to_string() const {
  switch (node_->kind) {
    case NodeKind::literal: return format_number(node_->constant);
    case NodeKind::variable: return "x";
    case NodeKind::negate: return "(-" + operand(0).to_string() + ")";
    case NodeKind::add:
    case NodeKind::subtract:
    case NodeKind::multiply:
    case NodeKind::divide:
      return "(" + operand(0).to_string() + " " + binary_symbol(node_->kind) + " " +
             operand(1).to_string() + ")";
    case NodeKind::power:
      return "(" + operand(0).to_string() + "^(" + format_number(node_->constant) + "))";
    case NodeKind::sin:
    case NodeKind::cos:
    case NodeKind::exp:
      return std::string(function_name(node_->kind)) + "(" + operand(0).to_string() + ")";
  }
  return {};
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  const auto& na = *a.node_;
  const auto& nb = *b.node_;
  if (na.kind != nb.kind || na.operands.size() != nb.operands.size()) return false;
  if (na.kind == NodeKind::literal || na.kind == NodeKind::power) {
    if (std::memcmp(&na.constant, &nb.constant, sizeof(double)) != 0) return false;
  }
  for (std::size_t i = 0; i < na.operands.size(); ++i) {
    if (!(na.operands[i] == nb.operands[i])) return false;
  }
  return true;
}

Expression operator-(const Expression& e) { return Expression::make(NodeKind::negate, 0.0, {e}); }
Expression operator+(const Expression& a, const Expression& b) {
  return Expression::make(NodeKind::add, 0.0, {a, b});
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression::make(NodeKind::subtract, 0.0, {a, b});
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression::make(NodeKind::multiply, 0.0, {a, b});
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression::make(NodeKind::divide, 0.0, {a, b});
}
Expression pow(const Expression& base, double exponent) {
  return Expression::make(NodeKind::power, exponent, {base});
}
Expression sin(const Expression& e) { return Expression::make(NodeKind::sin, 0.0, {e}); }
Expression cos(const Expression& e) { return Expression::make(NodeKind::cos, 0.0, {e}); }
Expression exp(const Expression& e) { return Expression::make(NodeKind::exp, 0.0, {e}); }

// ---------------------------------------------------------------------------
// Errors

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) out += (i + 1 == expected.size()) ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t position, std::vector<std::string> expected)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + message +
                         (expected.empty() ? "" : " (expected " + describe_expected(expected) + ")")),
      position_(position),
      expected_(std::move(expected)) {}

EvaluationError::EvaluationError(const std::string& reason, Expression offending, double at)
    : std::runtime_error("evaluation error in '" + offending.to_string() + "' at x = " +
                         format_number(at) + ": " + reason),
      offending_(std::move(offending)),
      argument_(at) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression run() {
    skip_space();
    if (at_end()) fail("empty expression", {"number", "x", "function", "'('", "'-'"});
    Expression e = sum();
    skip_space();
    if (!at_end()) fail("unexpected '" + std::string(1, text_[pos_]) + "'", {"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError(msg, pos_, std::move(expected));
  }

  bool at_end() const { return pos_ >= text_.size(); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression sum() {
    Expression lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + product();
      } else if (accept('-')) {
        lhs = lhs - product();
      } else {
        return lhs;
      }
    }
  }

  Expression product() {
    Expression lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expression power() {
    Expression base = atom();
    skip_space();
    if (!accept('^')) return base;
    const std::size_t exponent_start = pos_;
    const bool negative = accept('-');
    Expression exponent = power();
    if (negative) exponent = -exponent;
    if (exponent.depends_on_variable()) {
      throw ParseError("exponent must be a constant", exponent_start, {"constant exponent"});
    }
    double value = 0.0;
    try {
      value = evaluate(exponent, 0.0);
    } catch (const EvaluationError& err) {
      throw ParseError(std::string("exponent is undefined: ") + err.what(), exponent_start, {});
    }
    return pow(base, value);
  }

  Expression atom() {
    skip_space();
    if (at_end()) fail("unexpected end of input", {"number", "x", "function", "'('"});
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = sum();
      if (!accept(')')) fail("unbalanced parenthesis", {"')'"});
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'", {"number", "x", "function", "'('"});
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (!at_end() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (!at_end() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        pos_ = save;  // an 'e' not followed by an exponent belongs to the next token
      } else {
        digits();
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    return Expression::literal(value);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expression::variable();
    Expression (*fn)(const Expression&) = nullptr;
    if (name == "sin") fn = &sin;
    if (name == "cos") fn = &cos;
    if (name == "exp") fn = &exp;
    if (fn == nullptr) {
      throw ParseError("unknown identifier '" + std::string(name) + "'", start, {"x", "sin", "cos", "exp"});
    }
    if (!accept('(')) fail("function call requires '('", {"'('"});
    Expression arg = sum();
    if (!accept(')')) fail("unbalanced parenthesis", {"')'"});
    return fn(arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double checked(double value, const Expression& node, double at, const char* what) {
  if (!std::isfinite(value)) throw EvaluationError(what, node, at);
  return value;
}

}  // namespace

Expression parse(std::string_view text) { return Parser(text).run(); }

double evaluate(const Expression& e, double x) {
  switch (e.kind()) {
    case NodeKind::literal: return e.constant();
    case NodeKind::variable: return x;
    case NodeKind::negate: return -evaluate(e.operand(0), x);
    case NodeKind::add:
      return checked(evaluate(e.operand(0), x) + evaluate(e.operand(1), x), e, x, "overflow");
    case NodeKind::subtract:
      return checked(evaluate(e.operand(0), x) - evaluate(e.operand(1), x), e, x, "overflow");
    case NodeKind::multiply:
      return checked(evaluate(e.operand(0), x) * evaluate(e.operand(1), x), e, x, "overflow");
    case NodeKind::divide: {
      const double num = evaluate(e.operand(0), x);
      const double den = evaluate(e.operand(1), x);
      if (den == 0.0) throw EvaluationError("division by zero", e, x);
      return checked(num / den, e, x, "overflow");
    }
    case NodeKind::power: {
      const double base = evaluate(e.operand(0), x);
      const double p = e.constant();
      if (base == 0.0 && p < 0.0) throw EvaluationError("zero raised to a negative power", e, x);
      if (base < 0.0 && p != std::trunc(p)) {
        throw EvaluationError("negative base with non-integer exponent", e, x);
      }
      return checked(std::pow(base, p), e, x, "overflow");
    }
    case NodeKind::sin: return std::sin(evaluate(e.operand(0), x));
    case NodeKind::cos: return std::cos(evaluate(e.operand(0), x));
    case NodeKind::exp: return checked(std::exp(evaluate(e.operand(0), x)), e, x, "overflow");
  }
  throw std::logic_error("evaluate: unknown node kind");
}

}  // namespace fracwave::expr
