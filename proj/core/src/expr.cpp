#include "lalg/expr.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "lalg/error.hpp"

namespace lalg {

namespace {

using Op = Expr::Op;

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
  return v;
}

double apply(Op op, double x, double y, double value) {
  switch (op) {
    case Op::Add: return x + y;
    case Op::Sub: return x - y;
    case Op::Mul: return x * y;
    case Op::Div:
      if (y == 0.0) throw DomainError("division by zero");
      return x / y;
    case Op::Neg: return -x;
    case Op::Pow:
      if (x == 0.0 && value < 0) throw DomainError("pole of negative power at zero");
      if (x < 0.0 && !is_integer(value)) throw DomainError("fractional power of a negative number");
      return checked(std::pow(x, value), "power");
    case Op::Exp: return checked(std::exp(x), "exp");
    case Op::Sqrt:
      if (x < 0.0) throw DomainError("square root of a negative number");
      return std::sqrt(x);
    case Op::Sin: return std::sin(x);
    case Op::Cos: return std::cos(x);
    default: break;
  }
  throw Error("unexpected expression node");
}

}  // namespace

Expr::Expr(double c) : node_(std::make_shared<const Node>(Node{Op::Const, c, 0, nullptr, nullptr})) {}

Expr Expr::variable(std::size_t index) {
  return Expr(std::make_shared<const Node>(Node{Op::Var, 0.0, index, nullptr, nullptr}));
}

Expr Expr::make(Op op, const Expr& a, const Expr& b, double value) {
  return Expr(std::make_shared<const Node>(Node{op, value, 0, a.node_, b.node_}));
}

Expr Expr::from_poly(const Poly& p) {
  Expr total(0.0);
  for (const auto& [exps, coeff] : p.terms()) {
    Expr term(coeff.get_d());
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] != 0) term = term * variable(i).pow(static_cast<double>(exps[i]));
    total = total + term;
  }
  return total;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::make(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() - b.constant_value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  if (a.node() == b.node()) return Expr(0.0);
  return Expr::make(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() * b.constant_value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return Expr::make(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) throw DomainError("division by zero");
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() / b.constant_value());
  if (a.is_constant(0.0)) return Expr(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::make(Op::Div, a, b);
}

Expr Expr::operator-() const {
  if (is_constant()) return Expr(-constant_value());
  if (op() == Op::Neg) return Expr(node_->a);
  return make(Op::Neg, *this);
}

Expr Expr::pow(double exponent) const {
  if (exponent == 0.0) return Expr(1.0);
  if (exponent == 1.0) return *this;
  if (is_constant()) return Expr(apply(Op::Pow, constant_value(), 0.0, exponent));
  return make(Op::Pow, *this, Expr(0.0), exponent);
}

Expr exp(const Expr& e) {
  if (e.is_constant()) return Expr(apply(Op::Exp, e.constant_value(), 0.0, 0.0));
  return Expr::make(Op::Exp, e);
}

Expr sqrt(const Expr& e) {
  if (e.is_constant()) return Expr(apply(Op::Sqrt, e.constant_value(), 0.0, 0.0));
  return Expr::make(Op::Sqrt, e);
}

Expr sin(const Expr& e) {
  if (e.is_constant()) return Expr(std::sin(e.constant_value()));
  return Expr::make(Op::Sin, e);
}

Expr cos(const Expr& e) {
  if (e.is_constant()) return Expr(std::cos(e.constant_value()));
  return Expr::make(Op::Cos, e);
}

namespace {

struct Deriver {
  std::size_t index;
  std::unordered_map<const Expr::Node*, Expr> memo;

  Expr run(const Expr& e) {
    auto it = memo.find(e.node());
    if (it != memo.end()) return it->second;
    Expr out;
    switch (e.op()) {
      case Op::Const: out = Expr(0.0); break;
      case Op::Var: out = Expr(e.node()->var == index ? 1.0 : 0.0); break;
      case Op::Add: out = run(e.arg(0)) + run(e.arg(1)); break;
      case Op::Sub: out = run(e.arg(0)) - run(e.arg(1)); break;
      case Op::Mul: {
        Expr a = e.arg(0), b = e.arg(1);
        out = run(a) * b + a * run(b);
        break;
      }
      case Op::Div: {
        Expr a = e.arg(0), b = e.arg(1);
        out = run(a) / b - (a * run(b)) / (b * b);
        break;
      }
      case Op::Neg: out = -run(e.arg(0)); break;
      case Op::Pow: {
        Expr a = e.arg(0);
        double c = e.node()->value;
        out = Expr(c) * a.pow(c - 1.0) * run(a);
        break;
      }
      case Op::Exp: out = e * run(e.arg(0)); break;
      case Op::Sqrt: out = run(e.arg(0)) / (Expr(2.0) * e); break;
      case Op::Sin: out = cos(e.arg(0)) * run(e.arg(0)); break;
      case Op::Cos: out = -(sin(e.arg(0)) * run(e.arg(0))); break;
    }
    memo.emplace(e.node(), out);
    return out;
  }
};

Expr rebuild(const Expr& e, const Expr& a, const Expr& b) {
  switch (e.op()) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Neg: return -a;
    case Op::Pow: return a.pow(e.node()->value);
    case Op::Exp: return exp(a);
    case Op::Sqrt: return sqrt(a);
    case Op::Sin: return sin(a);
    case Op::Cos: return cos(a);
    default: return e;
  }
}

template <class LeafFn>
struct Mapper {
  LeafFn leaf;
  std::unordered_map<const Expr::Node*, Expr> memo;

  Expr run(const Expr& e) {
    auto it = memo.find(e.node());
    if (it != memo.end()) return it->second;
    Expr out;
    if (e.op() == Op::Const) {
      out = e;
    } else if (e.op() == Op::Var) {
      out = leaf(e.node()->var);
    } else {
      bool binary = e.op() == Op::Add || e.op() == Op::Sub || e.op() == Op::Mul || e.op() == Op::Div;
      Expr a = run(e.arg(0));
      Expr b = binary ? run(e.arg(1)) : Expr(0.0);
      out = rebuild(e, a, b);
    }
    memo.emplace(e.node(), out);
    return out;
  }
};

bool is_binary(Op op) { return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div; }

}  // namespace

Expr Expr::derive(std::size_t index) const {
  Deriver d{index, {}};
  return d.run(*this);
}

Expr Expr::substitute(std::span<const Expr> images) const {
  auto leaf = [&](std::size_t v) {
    if (v >= images.size()) throw DimensionError("substitution misses a coordinate image");
    return images[v];
  };
  Mapper<decltype(leaf)> m{leaf, {}};
  return m.run(*this);
}

Expr Expr::embed(std::size_t offset) const {
  auto leaf = [&](std::size_t v) { return Expr::variable(v + offset); };
  Mapper<decltype(leaf)> m{leaf, {}};
  return m.run(*this);
}

std::size_t Expr::max_var() const {
  std::size_t best = 0;
  std::vector<const Node*> stack{node_.get()};
  std::unordered_map<const Node*, bool> seen;
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!n || seen[n]) continue;
    seen[n] = true;
    if (n->op == Op::Var) best = std::max(best, n->var + 1);
    stack.push_back(n->a.get());
    stack.push_back(n->b.get());
  }
  return best;
}

double Expr::eval(std::span<const double> point) const { return CompiledExpr(*this)(point); }

std::string Expr::to_string(std::span<const std::string> names) const {
  std::ostringstream os;
  switch (op()) {
    case Op::Const: {
      os.precision(17);
      os << constant_value();
      break;
    }
    case Op::Var:
      os << (node_->var < names.size() ? names[node_->var] : "x" + std::to_string(node_->var + 1));
      break;
    case Op::Add: os << "(" << arg(0).to_string(names) << " + " << arg(1).to_string(names) << ")"; break;
    case Op::Sub: os << "(" << arg(0).to_string(names) << " - " << arg(1).to_string(names) << ")"; break;
    case Op::Mul: os << arg(0).to_string(names) << "*" << arg(1).to_string(names); break;
    case Op::Div: os << arg(0).to_string(names) << "/(" << arg(1).to_string(names) << ")"; break;
    case Op::Neg: os << "-(" << arg(0).to_string(names) << ")"; break;
    case Op::Pow: os << "(" << arg(0).to_string(names) << ")^" << node_->value; break;
    case Op::Exp: os << "exp(" << arg(0).to_string(names) << ")"; break;
    case Op::Sqrt: os << "sqrt(" << arg(0).to_string(names) << ")"; break;
    case Op::Sin: os << "sin(" << arg(0).to_string(names) << ")"; break;
    case Op::Cos: os << "cos(" << arg(0).to_string(names) << ")"; break;
  }
  return os.str();
}

CompiledExpr::CompiledExpr(const Expr& e) {
  std::unordered_map<const Expr::Node*, std::size_t> slot;
  // Iterative post-order walk so deep trees do not exhaust the stack.
  std::vector<std::pair<const Expr::Node*, bool>> stack{{e.node(), false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    stack.pop_back();
    if (slot.count(n)) continue;
    bool leaf = n->op == Op::Const || n->op == Op::Var;
    if (!leaf && !expanded) {
      stack.emplace_back(n, true);
      if (is_binary(n->op)) stack.emplace_back(n->b.get(), false);
      stack.emplace_back(n->a.get(), false);
      continue;
    }
    Instr ins{n->op, n->value, n->var, 0, 0};
    if (!leaf) {
      ins.a = slot.at(n->a.get());
      if (is_binary(n->op)) ins.b = slot.at(n->b.get());
    }
    slot.emplace(n, tape_.size());
    tape_.push_back(ins);
  }
}

double CompiledExpr::operator()(std::span<const double> point) const {
  std::vector<double> v(tape_.size());
  for (std::size_t i = 0; i < tape_.size(); ++i) {
    const Instr& ins = tape_[i];
    switch (ins.op) {
      case Op::Const: v[i] = ins.value; break;
      case Op::Var:
        if (ins.var >= point.size()) throw DimensionError("evaluation point has too few coordinates");
        v[i] = point[ins.var];
        break;
      default: v[i] = apply(ins.op, v[ins.a], v[ins.b], ins.value); break;
    }
  }
  double out = v.empty() ? 0.0 : v.back();
  if (!std::isfinite(out)) throw DomainError("non-finite expression value");
  return out;
}

}  // namespace lalg
