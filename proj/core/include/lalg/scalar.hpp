#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lalg/expr.hpp"
#include "lalg/poly.hpp"

namespace lalg {

/// Coefficient ring shared by every algebraic object in the library.
///
/// A Scalar is either exact or numeric. The exact form is a quotient of a rational
/// polynomial by a product of monic polynomial factors; polynomials are the common case
/// and the denominator is empty for them. Anything transcendental (exp, sqrt of a
/// non-square, sin, cos) turns the value into a numeric Expr, and combining an exact
/// value with a numeric one yields a numeric one.
///
/// Zero tests are exact for exact scalars and structural for numeric ones; use
/// vanishes() when a numeric residual must be judged by sampling.
class Scalar {
 public:
  struct Factor {
    Poly base;  // monic, non-constant
    unsigned power;
  };

  Scalar() : num_(0) {}
  Scalar(const Rational& c) : num_(0, c) {}  // NOLINT(google-explicit-constructor)
  Scalar(long c) : num_(0, Rational(c)) {}   // NOLINT(google-explicit-constructor)
  Scalar(int c) : Scalar(static_cast<long>(c)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Poly p) : num_(std::move(p)) {}     // NOLINT(google-explicit-constructor)
  explicit Scalar(Expr e) : expr_(std::move(e)) {}

  static Scalar variable(std::size_t nvars, std::size_t index) { return Poly::variable(nvars, index); }

  bool is_exact() const { return !expr_.has_value(); }
  bool is_polynomial() const { return is_exact() && den_.empty(); }
  /// Numerator polynomial of an exact scalar.
  const Poly& numerator() const;
  const std::vector<Factor>& denominator() const { return den_; }
  Expr to_expr() const;

  bool is_zero() const;
  std::optional<Rational> as_rational() const;

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;
  /// Exact equality for exact scalars, structural for numeric ones.
  friend bool operator==(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }

  Scalar pow(int e) const;
  Scalar derive(std::size_t index) const;
  /// Compose with a coordinate change: coordinate i becomes images[i].
  Scalar substitute(std::span<const Scalar> images) const;
  /// Move to a chart with `new_nvars` coordinates, coordinate i becoming offset + i.
  Scalar embed(std::size_t new_nvars, std::size_t offset) const;

  double eval(std::span<const double> point) const;
  Rational eval_exact(std::span<const Rational> point) const;

  std::string to_string(std::span<const std::string> names) const;
  std::string to_string() const;

 private:
  void absorb_factor(Poly base, unsigned power);
  void cancel();
  Scalar& promote_to_expr();

  Poly num_;
  std::vector<Factor> den_;
  std::optional<Expr> expr_;
};

Scalar exp(const Scalar& s);
Scalar sin(const Scalar& s);
Scalar cos(const Scalar& s);
/// Exact when the argument is a square of a rational function (root with positive
/// leading coefficient); numeric otherwise.
Scalar sqrt(const Scalar& s);

/// Square root of a polynomial that is a perfect square, positive leading coefficient.
std::optional<Poly> sqrt_exact(const Poly& p);

/// Zero test that samples numeric scalars at deterministic points of [-1, 1]^nvars.
bool vanishes(const Scalar& s, std::size_t nvars, double tolerance = 1e-9);

/// Infix syntax: + - * / ^, parentheses, rationals and exact decimals, coordinate names,
/// and the functions exp, sqrt, sin, cos. Integer powers of exact values stay exact.
Scalar parse_scalar(const std::string& text, std::span<const std::string> names);

}  // namespace lalg
