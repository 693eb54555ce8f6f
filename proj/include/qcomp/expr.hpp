#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcomp {

enum class Op : std::uint8_t {
  Const, Var, Neg, Add, Sub, Mul, Div, Pow,
  Ln, Exp, Sin, Cos, Sqrt, Abs, Sign
};

using Bindings = std::map<std::string, double, std::less<>>;

// Immutable expression tree.  Copies share nodes, so an Expr can be read
// from many threads at once.
class Expr {
public:
  Expr();  // the constant 0

  static Expr constant(double v, std::string literal = {});
  static Expr variable(std::string name);

  // Raw constructors build exactly the node asked for.  The operator
  // overloads and the named helpers below fold constants and drop
  // neutral elements (x+0, x*1, x^1, ...).
  static Expr raw(Op op, std::vector<Expr> args);

  Op op() const;
  double value() const;
  const std::string& name() const;
  // Source text of a parsed numeric literal, empty otherwise.
  const std::string& literal() const;
  const std::vector<Expr>& args() const;

  bool is_constant() const { return op() == Op::Const; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  friend bool operator==(const Expr& a, const Expr& b);

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, const Expr& b);
Expr apply(Op fn, const Expr& a);  // unary functions Ln..Sign
inline Expr ln(const Expr& a) { return apply(Op::Ln, a); }
inline Expr exp(const Expr& a) { return apply(Op::Exp, a); }

Expr parse(std::string_view src);
std::string print(const Expr& e);
Expr fold(const Expr& e);
Expr differentiate(const Expr& e, std::string_view var);
double evaluate(const Expr& e, const Bindings& b);
Expr substitute(const Expr& e, std::string_view var, const Expr& with);
std::set<std::string> free_variables(const Expr& e);
bool depends_on(const Expr& e, std::string_view var);
std::string op_name(Op op);

// Flat postfix form for hot loops.  Variables are bound by position in
// `vars`.  Domain violations yield NaN instead of throwing, so eval() is
// safe inside OpenMP regions; results are bit-identical to evaluate().
class CompiledExpr {
public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, std::vector<std::string> vars);

  double eval(std::span<const double> x) const;
  const std::vector<std::string>& vars() const { return vars_; }

private:
  struct Instr {
    Op op;
    std::uint32_t slot;
    double value;
  };
  std::vector<Instr> code_;
  std::vector<std::string> vars_;
  std::size_t max_stack_ = 0;
};

}  // namespace qcomp
