#pragma once

#include <vector>

#include "lalg/poly.hpp"

namespace lalg {

/// Truncated power series in one variable with exact rational coefficients.
/// Coefficients of degree > order() are discarded by every operation.
class Series {
 public:
  explicit Series(std::size_t order) : c_(order + 1, 0) {}
  Series(std::size_t order, std::vector<Rational> coeffs);

  static Series one(std::size_t order);
  /// exp(scale * x).
  static Series exp(std::size_t order, const Rational& scale = 1);

  std::size_t order() const { return c_.size() - 1; }
  const Rational& operator[](std::size_t k) const { return c_.at(k); }
  Rational& operator[](std::size_t k) { return c_.at(k); }
  const std::vector<Rational>& coefficients() const { return c_; }

  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator*(const Rational& s, const Series& a);

  /// Multiplicative inverse; needs a nonzero constant term.
  Series inverse() const;
  /// log; needs constant term 1.
  Series log() const;
  /// Drops the constant term and divides by x.
  Series shift_down() const;
  /// f(s x).
  Series rescale(const Rational& s) const;

 private:
  std::vector<Rational> c_;
};

/// x / (1 - e^{-x}).
Series todd_series(std::size_t order);
/// x / tanh x.
Series l_series(std::size_t order);
/// (x/2) / sinh(x/2).
Series a_hat_series(std::size_t order);

}  // namespace lalg
