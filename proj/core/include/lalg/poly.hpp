#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lalg {

using Rational = mpq_class;

/// "p/q" or "p"; canonical form.
std::string to_string(const Rational& q);
/// Accepts "p", "p/q", and finite decimals such as "-1.25" (read exactly).
Rational parse_rational(const std::string& text);

using Exponents = std::vector<std::uint32_t>;

/// Graded lexicographic order: total degree first, then lexicographic with x1 > x2 > ...
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Multivariate polynomial with exact rational coefficients in `nvars` chart coordinates.
///
/// A polynomial with zero variables is a constant and is promoted implicitly when
/// combined with a polynomial in more variables. Combining two polynomials with
/// different non-zero variable counts throws DimensionError.
class Poly {
 public:
  using Terms = std::map<Exponents, Rational, GrlexLess>;

  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}
  Poly(std::size_t nvars, const Rational& c);

  static Poly constant(std::size_t nvars, const Rational& c) { return Poly(nvars, c); }
  static Poly variable(std::size_t nvars, std::size_t index);
  static Poly monomial(const Exponents& exps, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value when the polynomial is constant.
  std::optional<Rational> as_constant() const;
  std::size_t total_degree() const;
  /// Leading term in grlex order; requires a nonzero polynomial.
  const Terms::value_type& leading_term() const;

  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Poly& rhs);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  Poly operator-() const;
  friend bool operator==(const Poly& a, const Poly& b);

  Poly pow(unsigned e) const;
  /// Partial derivative with respect to coordinate `index`.
  Poly derive(std::size_t index) const;
  Rational eval(std::span<const Rational> point) const;
  double eval(std::span<const double> point) const;

  /// Compose with `images`: coordinate i is replaced by images[i].
  Poly substitute(std::span<const Poly> images) const;
  /// Re-express in `new_nvars` variables, variable i becoming variable offset + i.
  Poly embed(std::size_t new_nvars, std::size_t offset) const;
  /// Quotient when `divisor` divides this polynomial exactly.
  std::optional<Poly> divide_exact(const Poly& divisor) const;

  /// Conventional infix form, terms in descending grlex order, e.g. "3/2*x^2*y - 1".
  std::string to_string(std::span<const std::string> names) const;
  std::string to_string() const;

  /// Generic evaluation into any commutative ring `R` constructible from a Rational.
  template <class R>
  R evaluate_in(std::span<const R> images, const R& zero, const R& one) const;

 private:
  void add_term(const Exponents& e, const Rational& c);
  static std::size_t common_nvars(const Poly& a, const Poly& b);

  std::size_t nvars_ = 0;
  Terms terms_;
};

/// Default coordinate names x1..xn.
std::vector<std::string> default_names(std::size_t n, const std::string& stem = "x");

template <class R>
R Poly::evaluate_in(std::span<const R> images, const R& zero, const R& one) const {
  R result = zero;
  for (const auto& [exps, coeff] : terms_) {
    R term = one * R(coeff);
    for (std::size_t i = 0; i < exps.size(); ++i)
      for (std::uint32_t k = 0; k < exps[i]; ++k) term = term * images[i];
    result = result + term;
  }
  return result;
}

}  // namespace lalg
