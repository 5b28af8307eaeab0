#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lalg/poly.hpp"

namespace lalg {

/// Floating-point expression tree over chart coordinates.
///
/// Nodes are immutable and shared, so derivatives and substitutions reuse subtrees and
/// an expression is really a DAG. Smart constructors fold constants and trivial
/// identities (x + 0, x * 1, x * 0). Evaluation throws DomainError at poles, negative
/// square roots, and non-finite results.
class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sqrt, Sin, Cos };

  struct Node {
    Op op;
    double value = 0.0;     // Const value, or exponent of Pow
    std::size_t var = 0;    // Var index
    std::shared_ptr<const Node> a, b;
  };

  Expr() : Expr(0.0) {}
  Expr(double c);  // NOLINT(google-explicit-constructor)
  static Expr constant(double c) { return Expr(c); }
  static Expr variable(std::size_t index);
  static Expr from_poly(const Poly& p);

  Op op() const { return node_->op; }
  const Node* node() const { return node_.get(); }
  bool is_constant() const { return node_->op == Op::Const; }
  bool is_constant(double c) const { return is_constant() && node_->value == c; }
  double constant_value() const { return node_->value; }
  /// Operand 0 or 1 of a non-leaf node.
  Expr arg(int which) const { return Expr(which == 0 ? node_->a : node_->b); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr pow(double exponent) const;
  friend Expr exp(const Expr& e);
  friend Expr sqrt(const Expr& e);
  friend Expr sin(const Expr& e);
  friend Expr cos(const Expr& e);

  /// Symbolic partial derivative.
  Expr derive(std::size_t index) const;
  /// Replace coordinate i by images[i].
  Expr substitute(std::span<const Expr> images) const;
  /// Shift every coordinate index by `offset`.
  Expr embed(std::size_t offset) const;
  /// One past the largest coordinate index used.
  std::size_t max_var() const;

  /// Tree-walking evaluation; prefer CompiledExpr in loops.
  double eval(std::span<const double> point) const;

  std::string to_string(std::span<const std::string> names) const;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Op op, const Expr& a, const Expr& b = Expr(0.0), double value = 0.0);

  std::shared_ptr<const Node> node_;

  friend class CompiledExpr;
};

/// Flattened evaluation tape for an Expr. Shared subtrees are evaluated once.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  double operator()(std::span<const double> point) const;
  std::size_t size() const { return tape_.size(); }

 private:
  struct Instr {
    Expr::Op op;
    double value;
    std::size_t var;
    std::size_t a, b;
  };
  std::vector<Instr> tape_;
};

}  // namespace lalg
