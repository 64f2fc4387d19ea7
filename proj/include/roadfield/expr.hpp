#ifndef ROADFIELD_EXPR_HPP
#define ROADFIELD_EXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadfield {

// Arithmetic expressions over the variables x and y. The grammar is a small
// fixed language: +, -, *, /, ^ with the usual precedence, unary minus,
// the functions exp/sin/cos/sqrt/abs/tanh and the two-argument min/max,
// and the named constants pi and e. Expressions are immutable after parsing
// and evaluation is pure.

struct ParseError : std::runtime_error {
  std::size_t offset;          // byte offset into the source text
  std::string expected;        // what the parser was looking for
  ParseError(std::size_t off, const std::string& exp, const std::string& msg)
      : std::runtime_error(msg), offset(off), expected(exp) {}
};

struct EvalError : std::runtime_error {
  std::string subexpr;         // pretty-printed offending subexpression
  EvalError(const std::string& sub, const std::string& msg)
      : std::runtime_error(msg), subexpr(sub) {}
};

class Expression {
 public:
  enum class Kind { Number, Variable, Unary, Binary, Call };
  enum class Var { X, Y };

  Kind kind() const { return kind_; }

  double eval(double x, double y) const;

  // Minimal-parenthesis rendering; parse(to_string(e)) is structurally
  // identical to e.
  std::string to_string() const;

  bool structurally_equal(const Expression& other) const;

  // Introspection used by tests.
  char op() const { return op_; }
  const std::string& name() const { return name_; }
  double number() const { return value_; }
  const Expression& child(std::size_t i) const { return *children_.at(i); }
  std::size_t arity() const { return children_.size(); }

  static Expression make_number(double v);
  static Expression make_var(Var v);
  static Expression make_unary(Expression operand);
  static Expression make_binary(char op, Expression lhs, Expression rhs);
  static Expression make_call(const std::string& fn, std::vector<Expression> args);

 private:
  friend class Parser;
  Kind kind_ = Kind::Number;
  double value_ = 0.0;         // Number
  Var var_ = Var::X;           // Variable
  char op_ = 0;                // Binary: one of + - * / ^
  std::string name_;           // Call
  std::vector<std::shared_ptr<const Expression>> children_;

  int precedence() const;
  void render(std::string& out, int parent_prec, bool right_side) const;
};

// Parses source text into an AST. Throws ParseError with byte offset and
// expected-token description on malformed input or unknown identifiers.
Expression parse_expression(const std::string& source);

// A scalar coefficient field a(x,y) with a user-asserted global bound on |a|.
// Sampled values exceeding the bound are a configuration error.
class CoefficientField {
 public:
  CoefficientField() : expr_(Expression::make_number(0.0)), bound_(0.0) {}
  CoefficientField(Expression expr, double declared_bound)
      : expr_(std::move(expr)), bound_(declared_bound) {}
  CoefficientField(const std::string& source, double declared_bound)
      : expr_(parse_expression(source)), bound_(declared_bound) {}

  double value(double x, double y) const;   // throws on bound violation
  double declared_bound() const { return bound_; }
  const Expression& expression() const { return expr_; }

 private:
  Expression expr_;
  double bound_;
};

}  // namespace roadfield

#endif
