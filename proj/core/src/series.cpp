#include "lalg/series.hpp"

#include "lalg/error.hpp"

namespace lalg {

Series::Series(std::size_t order, std::vector<Rational> coeffs) : c_(std::move(coeffs)) { c_.resize(order + 1, 0); }

Series Series::one(std::size_t order) {
  Series s(order);
  s.c_[0] = 1;
  return s;
}

Series Series::exp(std::size_t order, const Rational& scale) {
  Series s(order);
  Rational term = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    s.c_[k] = term;
    term = term * scale / Rational(static_cast<long>(k + 1));
  }
  return s;
}

Series operator+(const Series& a, const Series& b) {
  Series out(std::min(a.order(), b.order()));
  for (std::size_t k = 0; k <= out.order(); ++k) out.c_[k] = a.c_[k] + b.c_[k];
  return out;
}

Series operator-(const Series& a, const Series& b) { return a + Rational(-1) * b; }

Series operator*(const Series& a, const Series& b) {
  Series out(std::min(a.order(), b.order()));
  for (std::size_t i = 0; i <= out.order(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; i + j <= out.order(); ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return out;
}

Series operator*(const Rational& s, const Series& a) {
  Series out = a;
  for (auto& v : out.c_) v *= s;
  return out;
}

Series Series::inverse() const {
  if (c_[0] == 0) throw DomainError("series with zero constant term is not invertible");
  Series out(order());
  out.c_[0] = Rational(1) / c_[0];
  for (std::size_t k = 1; k <= order(); ++k) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * out.c_[k - j];
    out.c_[k] = -acc / c_[0];
  }
  return out;
}

Series Series::log() const {
  if (c_[0] != 1) throw DomainError("log needs constant term 1");
  // log f = integral of f'/f.
  Series deriv(order());
  for (std::size_t k = 1; k <= order(); ++k) deriv.c_[k - 1] = c_[k] * Rational(static_cast<long>(k));
  Series q = deriv * inverse();
  Series out(order());
  for (std::size_t k = 1; k <= order(); ++k) out.c_[k] = q.c_[k - 1] / Rational(static_cast<long>(k));
  return out;
}

Series Series::shift_down() const {
  Series out(order() > 0 ? order() - 1 : 0);
  for (std::size_t k = 1; k <= order(); ++k) out.c_[k - 1] = c_[k];
  return out;
}

Series Series::rescale(const Rational& s) const {
  Series out = *this;
  Rational p = 1;
  for (auto& v : out.c_) {
    v *= p;
    p *= s;
  }
  return out;
}

Series todd_series(std::size_t order) {
  // (1 - e^{-x}) / x, inverted.
  Series e = Series::exp(order + 1, -1);
  Series num = Series::one(order + 1) - e;
  return num.shift_down().inverse();
}

Series l_series(std::size_t order) {
  Series ep = Series::exp(order + 1, 1), em = Series::exp(order + 1, -1);
  Series sinh = Rational(1, 2) * (ep - em);
  Series cosh = Rational(1, 2) * (ep + em);
  Series c(order);
  for (std::size_t k = 0; k <= order; ++k) c[k] = cosh[k];
  return c * sinh.shift_down().inverse();
}

Series a_hat_series(std::size_t order) {
  Series ep = Series::exp(order + 1, Rational(1, 2)), em = Series::exp(order + 1, Rational(-1, 2));
  Series two_sinh = ep - em;  // 2 sinh(x/2) = x + ...
  return two_sinh.shift_down().inverse();
}

}  // namespace lalg
