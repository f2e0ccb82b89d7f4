#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracwave::expr {

enum class NodeKind {
  literal,
  variable,
  negate,
  add,
  subtract,
  multiply,
  divide,
  power,  // base ^ constant exponent
  sin,
  cos,
  exp,
};

/// Immutable expression tree over one real variable `x`.
///
/// Copies share structure. Equality is structural: two expressions compare equal
/// when their trees have the same shape, node kinds, and bit-identical constants.
class Expression {
 public:
  /// The literal 0.
  Expression();

  static Expression literal(double value);
  static Expression variable();

  [[nodiscard]] NodeKind kind() const noexcept;
  /// Literal value, or the exponent of a power node.
  [[nodiscard]] double constant() const;
  [[nodiscard]] std::size_t arity() const noexcept;
  [[nodiscard]] const Expression& operand(std::size_t i) const;

  [[nodiscard]] bool depends_on_variable() const noexcept;

  /// Replace every occurrence of the variable with `replacement`.
  [[nodiscard]] Expression substitute(const Expression& replacement) const;

  /// Fully parenthesised text that parses back to a structurally equal tree.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Expression& a, const Expression& b);

  friend Expression operator-(const Expression& e);
  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression pow(const Expression& base, double exponent);
  friend Expression sin(const Expression& e);
  friend Expression cos(const Expression& e);
  friend Expression exp(const Expression& e);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node);
  static Expression make(NodeKind kind, double constant, std::vector<Expression> operands);

  std::shared_ptr<const Node> node_;
};

Expression pow(const Expression& base, double exponent);
Expression sin(const Expression& e);
Expression cos(const Expression& e);
Expression exp(const Expression& e);

/// Syntax or name error with the 0-based character offset where it was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position, std::vector<std::string> expected);

  [[nodiscard]] std::size_t position() const noexcept { return position_; }
  [[nodiscard]] const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// Evaluation produced a non-finite or undefined value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& reason, Expression offending, double at);

  [[nodiscard]] const Expression& offending() const noexcept { return offending_; }
  [[nodiscard]] double argument() const noexcept { return argument_; }

 private:
  Expression offending_;
  double argument_;
};

/// Parse infix text. Grammar, loosest binding first:
///
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := atom ('^' exponent)?          right associative
///   exponent:= '-'? power                    must not reference x
///   atom    := number | 'x' | func '(' sum ')' | '(' sum ')'
///   func    := 'sin' | 'cos' | 'exp'
Expression parse(std::string_view text);

/// Evaluate at `value`. Division by zero, 0 raised to a negative power and any
/// non-finite intermediate raise EvaluationError.
double evaluate(const Expression& expr, double value);

}  // namespace fracwave::expr
