#pragma once

// Seeded random inputs for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "lalg/chern_weil.hpp"
#include "lalg/form.hpp"
#include "lalg/groupoid.hpp"

namespace lalg::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(integer(0, static_cast<long>(n) - 1)); }

  Rational rational(long span = 5) {
    Rational q(integer(-span, span), integer(1, 4));
    q.canonicalize();
    return q;
  }

  Rational nonzero_rational(long span = 5) {
    Rational q = 0;
    while (q == 0) q = rational(span);
    return q;
  }

  /// Polynomial of total degree <= degree with a few random terms.
  Poly poly(std::size_t nvars, std::size_t degree = 2, std::size_t terms = 3) {
    Poly p(nvars);
    for (std::size_t t = 0; t < terms; ++t) {
      Exponents e(nvars, 0);
      std::size_t budget = static_cast<std::size_t>(integer(0, static_cast<long>(degree)));
      for (std::size_t k = 0; k < budget && nvars > 0; ++k) ++e[index(nvars)];
      p += Poly::monomial(e, rational());
    }
    return p;
  }

  Scalar scalar(const AlgebroidPtr& a, std::size_t degree = 2) {
    if (a->base_dim() == 0) return Scalar(rational());
    return Scalar(poly(a->base_dim(), degree));
  }

  /// Homogeneous k-form with random polynomial coefficients.
  AlgForm form(const AlgebroidPtr& a, std::size_t k, std::size_t bundle_rank = 1) {
    AlgForm w(a, bundle_rank);
    std::size_t r = a->rank();
    if (k > r) return w;
    for (Mask m = 0; m < (Mask{1} << r); ++m) {
      if (popcount(m) != k || !coin(0.6)) continue;
      for (std::size_t c = 0; c < bundle_rank; ++c) w.add(m, c, scalar(a));
    }
    return w;
  }

  /// Sum of homogeneous parts of degrees 0..max_degree.
  AlgForm mixed_form(const AlgebroidPtr& a, std::size_t max_degree) {
    AlgForm w(a);
    for (std::size_t k = 0; k <= max_degree; ++k) w += form(a, k);
    return w;
  }

  /// Symmetric positive definite constant matrix A^T A + I.
  ScalarMatrix spd(std::size_t r) {
    RationalMatrix A(r, r, Rational(0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) A(i, j) = Rational(integer(-2, 2));
    ScalarMatrix g(r, r, Scalar(0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        Rational s = i == j ? 1 : 0;
        for (std::size_t k = 0; k < r; ++k) s += A(k, i) * A(k, j);
        g(i, j) = Scalar(s);
      }
    return g;
  }

  /// Connection with polynomial connection coefficients.
  Connection connection(const AlgebroidPtr& a, std::size_t m, std::size_t degree = 1) {
    std::vector<ScalarMatrix> gamma;
    for (std::size_t k = 0; k < a->rank(); ++k) {
      ScalarMatrix g(m, m, Scalar(0));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (coin(0.7)) g(i, j) = scalar(a, degree);
      gamma.push_back(g);
    }
    return Connection(a, m, gamma);
  }

  /// Matrix of random 2-forms; antisymmetric when asked.
  FormMatrix two_form_matrix(const AlgebroidPtr& a, std::size_t m, bool antisymmetric) {
    FormMatrix R(a, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (antisymmetric && j < i) {
          R(i, j) = -R(j, i);
          continue;
        }
        if (antisymmetric && i == j) continue;
        R(i, j) = form(a, 2);
      }
    return R;
  }

  std::vector<Rational> rationals(std::size_t n) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(rational());
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline AlgebroidPtr abelian_lie_algebra(std::size_t r) { return abelian_bundle(0, r); }

}  // namespace lalg::testing
