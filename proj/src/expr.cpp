#include "roadfield/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace roadfield {

namespace {

bool is_known_function(const std::string& s, int& nargs) {
  if (s == "exp" || s == "sin" || s == "cos" || s == "sqrt" || s == "abs" ||
      s == "tanh") {
    nargs = 1;
    return true;
  }
  if (s == "min" || s == "max") {
    nargs = 2;
    return true;
  }
  return false;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Expression Expression::make_number(double v) {
  Expression e;
  e.kind_ = Kind::Number;
  e.value_ = v;
  return e;
}

Expression Expression::make_var(Var v) {
  Expression e;
  e.kind_ = Kind::Variable;
  e.var_ = v;
  return e;
}

Expression Expression::make_unary(Expression operand) {
  // canonical form: negation of a literal is a negative literal
  if (operand.kind_ == Kind::Number) return make_number(-operand.value_);
  Expression e;
  e.kind_ = Kind::Unary;
  e.children_.push_back(std::make_shared<Expression>(std::move(operand)));
  return e;
}

Expression Expression::make_binary(char op, Expression lhs, Expression rhs) {
  Expression e;
  e.kind_ = Kind::Binary;
  e.op_ = op;
  e.children_.push_back(std::make_shared<Expression>(std::move(lhs)));
  e.children_.push_back(std::make_shared<Expression>(std::move(rhs)));
  return e;
}

Expression Expression::make_call(const std::string& fn, std::vector<Expression> args) {
  Expression e;
  e.kind_ = Kind::Call;
  e.name_ = fn;
  for (auto& a : args)
    e.children_.push_back(std::make_shared<Expression>(std::move(a)));
  return e;
}

double Expression::eval(double x, double y) const {
  switch (kind_) {
    case Kind::Number:
      return value_;
    case Kind::Variable:
      return var_ == Var::X ? x : y;
    case Kind::Unary:
      return -children_[0]->eval(x, y);
    case Kind::Binary: {
      const double a = children_[0]->eval(x, y);
      const double b = children_[1]->eval(x, y);
      switch (op_) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) throw EvalError(to_string(), "division by zero");
          return a / b;
        case '^': {
          const double r = std::pow(a, b);
          if (!std::isfinite(r))
            throw EvalError(to_string(), "non-finite power result");
          return r;
        }
      }
      throw EvalError(to_string(), "corrupt operator");
    }
    case Kind::Call: {
      const double a = children_[0]->eval(x, y);
      if (name_ == "exp") return std::exp(a);
      if (name_ == "sin") return std::sin(a);
      if (name_ == "cos") return std::cos(a);
      if (name_ == "tanh") return std::tanh(a);
      if (name_ == "abs") return std::fabs(a);
      if (name_ == "sqrt") {
        if (a < 0.0) throw EvalError(to_string(), "sqrt of negative value");
        return std::sqrt(a);
      }
      const double b = children_[1]->eval(x, y);
      return name_ == "min" ? std::fmin(a, b) : std::fmax(a, b);
    }
  }
  throw EvalError("?", "corrupt node");
}

int Expression::precedence() const {
  switch (kind_) {
    case Kind::Binary:
      if (op_ == '+' || op_ == '-') return 1;
      if (op_ == '*' || op_ == '/') return 2;
      return 4;  // ^
    case Kind::Unary:
      return 3;
    case Kind::Number:
      // a negative literal renders with a leading '-', so it binds like one
      return value_ < 0.0 ? 3 : 5;
    default:
      return 5;
  }
}

void Expression::render(std::string& out, int parent_prec, bool right_side) const {
  const int prec = precedence();
  // '+','*' are left-associative so a right child of equal precedence needs
  // parens; '^' is right-associative so the left child does.
  bool parens = prec < parent_prec ||
                (prec == parent_prec && kind_ == Kind::Binary &&
                 (op_ == '^' ? !right_side : right_side));
  if (parens) out += '(';
  switch (kind_) {
    case Kind::Number:
      out += format_number(value_);
      break;
    case Kind::Variable:
      out += var_ == Var::X ? 'x' : 'y';
      break;
    case Kind::Unary:
      out += '-';
      children_[0]->render(out, 3, true);
      break;
    case Kind::Binary:
      children_[0]->render(out, prec, false);
      out += ' ';
      out += op_;
      out += ' ';
      children_[1]->render(out, prec, true);
      break;
    case Kind::Call:
      out += name_;
      out += '(';
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += ", ";
        std::string sub;
        children_[i]->render(sub, 0, true);
        out += sub;
      }
      out += ')';
      break;
  }
  if (parens) out += ')';
}

std::string Expression::to_string() const {
  std::string out;
  render(out, 0, true);
  return out;
}

bool Expression::structurally_equal(const Expression& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Number:
      return value_ == other.value_;
    case Kind::Variable:
      return var_ == other.var_;
    case Kind::Unary:
      break;
    case Kind::Binary:
      if (op_ != other.op_) return false;
      break;
    case Kind::Call:
      if (name_ != other.name_) return false;
      break;
  }
  if (children_.size() != other.children_.size()) return false;
  for (std::size_t i = 0; i < children_.size(); ++i)
    if (!children_[i]->structurally_equal(*other.children_[i])) return false;
  return true;
}

// Recursive-descent parser.
class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  Expression parse() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError(pos_, "expression", "empty expression");
    Expression e = parse_sum();
    skip_ws();
    if (pos_ < src_.size())
      fail("end of input");
    return e;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(pos_, expected,
                     "parse error at offset " + std::to_string(pos_) +
                         ": expected " + expected);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace((unsigned char)src_[pos_])) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expression parse_sum() {
    Expression e = parse_product();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return e;
      ++pos_;
      e = Expression::make_binary(c, std::move(e), parse_product());
    }
  }

  Expression parse_product() {
    Expression e = parse_unary();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return e;
      ++pos_;
      e = Expression::make_binary(c, std::move(e), parse_unary());
    }
  }

  Expression parse_unary() {
    if (eat('-')) return Expression::make_unary(parse_unary());
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_atom();
    if (peek() == '^') {
      ++pos_;
      // right-associative; exponent may carry a unary minus (2^-3)
      return Expression::make_binary('^', std::move(base), parse_unary());
    }
    return base;
  }

  Expression parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("number, identifier or '('");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = parse_sum();
      if (!eat(')')) fail("')'");
      return e;
    }
    if (std::isdigit((unsigned char)c) || c == '.') return parse_number();
    if (std::isalpha((unsigned char)c)) return parse_ident();
    fail("number, identifier or '('");
  }

  Expression parse_number() {
    const char* begin = src_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("number");
    pos_ += (std::size_t)(end - begin);
    return Expression::make_number(v);
  }

  Expression parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
      ++pos_;
    std::string name = src_.substr(start, pos_ - start);
    if (name == "x") return Expression::make_var(Expression::Var::X);
    if (name == "y") return Expression::make_var(Expression::Var::Y);
    if (name == "pi") return Expression::make_number(M_PI);
    if (name == "e") return Expression::make_number(M_E);
    int nargs = 0;
    if (is_known_function(name, nargs)) {
      if (!eat('(')) fail("'(' after function name");
      std::vector<Expression> args;
      args.push_back(parse_sum());
      while (eat(',')) args.push_back(parse_sum());
      if (!eat(')')) fail("')'");
      if ((int)args.size() != nargs) {
        pos_ = start;
        fail(name + " with " + std::to_string(nargs) + " argument(s)");
      }
      return Expression::make_call(name, std::move(args));
    }
    pos_ = start;
    throw ParseError(start, "known identifier",
                     "unknown identifier '" + name + "' at offset " +
                         std::to_string(start));
  }
};

Expression parse_expression(const std::string& source) {
  return Parser(source).parse();
}

double CoefficientField::value(double x, double y) const {
  const double v = expr_.eval(x, y);
  if (std::fabs(v) > bound_ + 1e-12 * (1.0 + bound_))
    throw EvalError(expr_.to_string(),
                    "coefficient value " + format_number(v) +
                        " exceeds declared bound " + format_number(bound_));
  return v;
}

}  // namespace roadfield
