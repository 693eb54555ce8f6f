#include "qcomp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>

#include "qcomp/errors.hpp"

namespace qcomp {

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::string name;  // variable name, or literal text for parsed constants
  std::vector<Expr> args;
};

namespace {

const std::string kEmpty;


// Shared scalar kernels.  They return false on a domain violation so the
// tree walker can throw and the compiled evaluator can return NaN while
// computing bit-identical values otherwise.
bool apply_binary(Op op, double a, double b, double& out) {
  switch (op) {
    case Op::Add: out = a + b; return true;
    case Op::Sub: out = a - b; return true;
    case Op::Mul: out = a * b; return true;
    case Op::Div:
      if (b == 0.0) return false;
      out = a / b;
      return true;
    case Op::Pow:
      if (a == 0.0 && b < 0.0) return false;
      if (a < 0.0 && std::trunc(b) != b) return false;
      out = std::pow(a, b);
      return true;
    default: return false;
  }
}

bool apply_unary(Op op, double x, double& out) {
  switch (op) {
    case Op::Neg: out = -x; return true;
    case Op::Ln:
      if (!(x > 0.0)) return false;
      out = std::log(x);
      return true;
    case Op::Exp: out = std::exp(x); return true;
    case Op::Sin: out = std::sin(x); return true;
    case Op::Cos: out = std::cos(x); return true;
    case Op::Sqrt:
      if (x < 0.0) return false;
      out = std::sqrt(x);
      return true;
    case Op::Abs: out = std::fabs(x); return true;
    case Op::Sign: out = (x > 0.0) - (x < 0.0); return true;
    default: return false;
  }
}

std::string domain_message(Op op, double a, double b = 0.0) {
  switch (op) {
    case Op::Div: return "division by zero";
    case Op::Pow:
      if (a == 0.0) return "0 raised to negative power " + std::to_string(b);
      return "negative base " + std::to_string(a) + " raised to non-integer power";
    case Op::Ln: return "ln of non-positive value " + std::to_string(a);
    case Op::Sqrt: return "sqrt of negative value " + std::to_string(a);
    default: return "domain error in " + op_name(op);
  }
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double v, std::string literal) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  n->name = std::move(literal);
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::raw(Op op, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const {
  return node_->op == Op::Var ? node_->name : kEmpty;
}
const std::string& Expr::literal() const {
  return node_->op == Op::Const ? node_->name : kEmpty;
}
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Const:
      return a.value() == b.value() ||
             (std::isnan(a.value()) && std::isnan(b.value()));
    case Op::Var: return a.name() == b.name();
    default:
      if (a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!(a.args()[i] == b.args()[i])) return false;
      return true;
  }
}

std::string op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Neg: return "neg";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    case Op::Ln: return "ln";
    case Op::Exp: return "exp";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Sign: return "sign";
  }
  return "?";
}

// ---------------------------------------------------------------- folding

namespace {

Expr fold_binary(Op op, const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    double out;
    if (apply_binary(op, a.value(), b.value(), out) && std::isfinite(out))
      return Expr::constant(out);
  }
  switch (op) {
    case Op::Add:
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      break;
    case Op::Sub:
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return -b;
      break;
    case Op::Mul:
      if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      break;
    case Op::Div:
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(0.0) && !b.is_constant()) return Expr::constant(0.0);
      break;
    case Op::Pow:
      if (b.is_constant(1.0)) return a;
      if (b.is_constant(0.0) || a.is_constant(1.0)) return Expr::constant(1.0);
      break;
    default: break;
  }
  return Expr::raw(op, {a, b});
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return fold_binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return fold_binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return fold_binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return fold_binary(Op::Div, a, b); }
Expr pow(const Expr& a, const Expr& b) { return fold_binary(Op::Pow, a, b); }

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.op() == Op::Neg) return a.args()[0];
  return Expr::raw(Op::Neg, {a});
}

Expr apply(Op fn, const Expr& a) {
  if (fn == Op::Neg) return -a;
  if (a.is_constant()) {
    double out;
    if (apply_unary(fn, a.value(), out) && std::isfinite(out))
      return Expr::constant(out);
  }
  return Expr::raw(fn, {a});
}

Expr fold(const Expr& e) {
  switch (e.op()) {
    case Op::Const:
    case Op::Var: return e;
    case Op::Neg: return -fold(e.args()[0]);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow: return fold_binary(e.op(), fold(e.args()[0]), fold(e.args()[1]));
    default: return apply(e.op(), fold(e.args()[0]));
  }
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse_all() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size())
      throw SyntaxError(pos_, "unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) {
      std::string got = pos_ < s_.size() ? "'" + std::string(1, s_[pos_]) + "'" : "end of input";
      throw SyntaxError(pos_, "expected '" + std::string(1, c) + "', got " + got);
    }
  }
  bool at_number() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
    return c == '.' && pos_ + 1 < s_.size() &&
           std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]));
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = Expr::raw(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = Expr::raw(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) lhs = Expr::raw(Op::Mul, {lhs, factor()});
      else if (accept('/')) lhs = Expr::raw(Op::Div, {lhs, factor()});
      else return lhs;
    }
  }

  // Unary minus binds looser than '^': -t^2 is -(t^2).  A minus sign
  // directly in front of a numeric literal that is not a power base
  // produces a negative constant.
  Expr factor() {
    if (accept('-')) {
      if (at_number()) {
        std::size_t save = pos_;
        Expr num = number();
        if (!peek('^'))
          return Expr::constant(-num.value(), "-" + num.literal());
        pos_ = save;
      }
      return Expr::raw(Op::Neg, {factor()});
    }
    Expr b = base();
    if (accept('^')) return Expr::raw(Op::Pow, {b, factor()});
    return b;
  }

  Expr number() {
    skip();
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    std::size_t n = 0;
    auto digits = [&] {
      while (begin + n < end && std::isdigit(static_cast<unsigned char>(begin[n]))) ++n;
    };
    digits();
    if (begin + n < end && begin[n] == '.') {
      ++n;
      digits();
    }
    if (begin + n < end && (begin[n] == 'e' || begin[n] == 'E')) {
      std::size_t m = n + 1;
      if (begin + m < end && (begin[m] == '+' || begin[m] == '-')) ++m;
      if (begin + m < end && std::isdigit(static_cast<unsigned char>(begin[m]))) {
        n = m;
        digits();
      }
    }
    std::string text(begin, n);
    double v = std::strtod(text.c_str(), nullptr);
    pos_ += n;
    return Expr::constant(v, text);
  }

  Expr base() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "unexpected end of input");
    char c = s_[pos_];
    if (at_number()) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string id(s_.substr(start, pos_ - start));
      if (!accept('(')) return Expr::variable(id);
      std::vector<Expr> args{expr()};
      while (accept(',')) args.push_back(expr());
      expect(')');
      return call(id, std::move(args));
    }
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    throw SyntaxError(pos_, "unexpected '" + std::string(1, c) + "'");
  }

  static Expr call(const std::string& id, std::vector<Expr> args) {
    static const std::map<std::string, Op, std::less<>> unary = {
        {"ln", Op::Ln},     {"exp", Op::Exp}, {"sin", Op::Sin}, {"cos", Op::Cos},
        {"sqrt", Op::Sqrt}, {"abs", Op::Abs}, {"sign", Op::Sign}};
    if (id == "pow") {
      if (args.size() != 2)
        throw ArityError("pow expects 2 arguments, got " + std::to_string(args.size()));
      return Expr::raw(Op::Pow, std::move(args));
    }
    auto it = unary.find(id);
    if (it == unary.end()) throw UnknownFunction("unknown function '" + id + "'");
    if (args.size() != 1)
      throw ArityError(id + " expects 1 argument, got " + std::to_string(args.size()));
    return Expr::raw(it->second, std::move(args));
  }
};

}  // namespace

Expr parse(std::string_view src) { return Parser(src).parse_all(); }

// ---------------------------------------------------------------- printer

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return std::signbit(e.value()) ? 3 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print_to(const Expr& e, int min_prec, std::string& out) {
  bool paren = precedence(e) < min_prec;
  if (paren) out += '(';
  switch (e.op()) {
    case Op::Const: out += format_number(e.value()); break;
    case Op::Var: out += e.name(); break;
    case Op::Neg: {
      out += '-';
      const Expr& a = e.args()[0];
      // "-3" would read back as a negative literal
      bool literal_like = a.op() == Op::Const;
      print_to(a, literal_like ? 6 : 3, out);
      break;
    }
    case Op::Add:
    case Op::Sub:
      print_to(e.args()[0], 1, out);
      out += e.op() == Op::Add ? " + " : " - ";
      print_to(e.args()[1], 2, out);
      break;
    case Op::Mul:
    case Op::Div:
      print_to(e.args()[0], 2, out);
      out += e.op() == Op::Mul ? "*" : "/";
      print_to(e.args()[1], 3, out);
      break;
    case Op::Pow: {
      const Expr& b = e.args()[0];
      // a bare numeric base is fine, anything composite needs parentheses
      print_to(b, 5, out);
      out += '^';
      print_to(e.args()[1], 3, out);
      break;
    }
    default:
      out += op_name(e.op());
      out += '(';
      print_to(e.args()[0], 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_to(e, 0, out);
  return out;
}

// ---------------------------------------------------------------- calculus

bool depends_on(const Expr& e, std::string_view var) {
  if (e.op() == Op::Var) return e.name() == var;
  for (const Expr& a : e.args())
    if (depends_on(a, var)) return true;
  return false;
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (x.op() == Op::Var) out.insert(x.name());
    for (const Expr& a : x.args()) walk(a);
  };
  walk(e);
  return out;
}

Expr substitute(const Expr& e, std::string_view var, const Expr& with) {
  if (e.op() == Op::Var) return e.name() == var ? with : e;
  if (e.op() == Op::Const) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  for (const Expr& a : e.args()) args.push_back(substitute(a, var, with));
  return Expr::raw(e.op(), std::move(args));
}

Expr differentiate(const Expr& e, std::string_view var) {
  auto c = [](double v) { return Expr::constant(v); };
  switch (e.op()) {
    case Op::Const: return c(0.0);
    case Op::Var: return c(e.name() == var ? 1.0 : 0.0);
    default: break;
  }
  const Expr& f = e.args()[0];
  Expr df = differentiate(f, var);
  switch (e.op()) {
    case Op::Neg: return -df;
    case Op::Add: return df + differentiate(e.args()[1], var);
    case Op::Sub: return df - differentiate(e.args()[1], var);
    case Op::Mul: {
      const Expr& g = e.args()[1];
      return df * fold(g) + fold(f) * differentiate(g, var);
    }
    case Op::Div: {
      const Expr& g = e.args()[1];
      Expr ff = fold(f), fg = fold(g);
      return (df * fg - ff * differentiate(g, var)) / pow(fg, c(2.0));
    }
    case Op::Pow: {
      Expr ff = fold(f), fg = fold(e.args()[1]);
      if (!depends_on(fg, var)) return fg * pow(ff, fg - c(1.0)) * df;
      Expr dg = differentiate(fg, var);
      return pow(ff, fg) * (dg * ln(ff) + fg * df / ff);
    }
    case Op::Ln: return df / fold(f);
    case Op::Exp: return exp(fold(f)) * df;
    case Op::Sin: return apply(Op::Cos, fold(f)) * df;
    case Op::Cos: return -(apply(Op::Sin, fold(f)) * df);
    case Op::Sqrt: return df / (c(2.0) * apply(Op::Sqrt, fold(f)));
    case Op::Abs: return apply(Op::Sign, fold(f)) * df;
    case Op::Sign: return c(0.0);
    default: break;
  }
  return c(0.0);
}

// ---------------------------------------------------------------- evaluation

double evaluate(const Expr& e, const Bindings& b) {
  switch (e.op()) {
    case Op::Const: return e.value();
    case Op::Var: {
      auto it = b.find(e.name());
      if (it == b.end()) throw UnboundVariable("unbound variable '" + e.name() + "'");
      return it->second;
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow: {
      double x = evaluate(e.args()[0], b), y = evaluate(e.args()[1], b), out;
      if (!apply_binary(e.op(), x, y, out)) throw DomainError(domain_message(e.op(), x, y));
      return out;
    }
    default: {
      double x = evaluate(e.args()[0], b), out;
      if (!apply_unary(e.op(), x, out)) throw DomainError(domain_message(e.op(), x));
      return out;
    }
  }
}

CompiledExpr::CompiledExpr(const Expr& e, std::vector<std::string> vars) : vars_(std::move(vars)) {
  std::size_t depth = 0;
  std::function<void(const Expr&)> emit = [&](const Expr& x) {
    switch (x.op()) {
      case Op::Const:
        code_.push_back({Op::Const, 0, x.value()});
        max_stack_ = std::max(max_stack_, ++depth);
        return;
      case Op::Var: {
        auto it = std::find(vars_.begin(), vars_.end(), x.name());
        if (it == vars_.end()) throw UnboundVariable("unbound variable '" + x.name() + "'");
        code_.push_back({Op::Var, static_cast<std::uint32_t>(it - vars_.begin()), 0.0});
        max_stack_ = std::max(max_stack_, ++depth);
        return;
      }
      default:
        for (const Expr& a : x.args()) emit(a);
        code_.push_back({x.op(), 0, 0.0});
        depth -= x.args().size() - 1;
        return;
    }
  };
  emit(e);
}

double CompiledExpr::eval(std::span<const double> x) const {
  constexpr std::size_t kInline = 64;
  double inline_stack[kInline];
  std::vector<double> heap;
  double* st = inline_stack;
  if (max_stack_ > kInline) {
    heap.resize(max_stack_);
    st = heap.data();
  }
  std::size_t sp = 0;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Const: st[sp++] = in.value; break;
      case Op::Var: st[sp++] = x[in.slot]; break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Pow: {
        double out;
        --sp;
        if (!apply_binary(in.op, st[sp - 1], st[sp], out)) return nan;
        st[sp - 1] = out;
        break;
      }
      default: {
        double out;
        if (!apply_unary(in.op, st[sp - 1], out)) return nan;
        st[sp - 1] = out;
        break;
      }
    }
  }
  return code_.empty() ? 0.0 : st[0];
}

}  // namespace qcomp
