#pragma once

#include <bit>
#include <string>
#include <vector>

#include "lalg/connection.hpp"
#include "lalg/form.hpp"

namespace lalg {

/// Square matrix of scalar-valued forms on one algebroid.
class FormMatrix {
 public:
  FormMatrix(AlgebroidPtr alg, std::size_t size);
  static FormMatrix identity(AlgebroidPtr alg, std::size_t size);
  /// Connection matrix as a matrix of 1-forms: sum_a gamma(a)(i, j) e^a.
  static FormMatrix connection_forms(const Connection& c);

  const AlgebroidPtr& algebroid() const { return alg_; }
  std::size_t size() const { return m_; }
  AlgForm& operator()(std::size_t i, std::size_t j) { return e_[i * m_ + j]; }
  const AlgForm& operator()(std::size_t i, std::size_t j) const { return e_[i * m_ + j]; }

  friend FormMatrix operator+(const FormMatrix& a, const FormMatrix& b);
  friend FormMatrix operator-(const FormMatrix& a, const FormMatrix& b);
  /// Matrix product with wedge of entries.
  friend FormMatrix operator*(const FormMatrix& a, const FormMatrix& b);

  AlgForm trace() const;
  bool is_zero() const;
  /// Entrywise Koszul differential.
  FormMatrix d() const;
  /// Drops components above `degree`.
  FormMatrix truncate(std::size_t degree) const;

 private:
  AlgebroidPtr alg_;
  std::size_t m_;
  std::vector<AlgForm> e_;
};

/// R with R(i, j) = sum_{a<b} R_ab(i, j) e^a ^ e^b.
FormMatrix curvature(const Connection& c);
/// dR + Gamma ^ R - R ^ Gamma.
FormMatrix covariant_derivative(const FormMatrix& R, const Connection& c);

/// Torsion-free metric connection on the algebroid itself, from the Koszul formula.
Connection levi_civita(const AlgebroidPtr& alg, const Metric& g);
/// Residuals of torsion-freeness and metric compatibility of `c` (a connection on the algebroid).
ValidationReport levi_civita_residuals(const Connection& c, const Metric& g);

/// tr R^k as a 2k-form.
AlgForm power_sum(const FormMatrix& R, std::size_t k);

/// Chern classes from det(1 + R); no 2 pi factors.
AlgForm chern_class(const FormMatrix& R, std::size_t k);
AlgForm total_chern(const FormMatrix& R, std::size_t truncation);
AlgForm pontryagin_class(const FormMatrix& R, std::size_t k);
AlgForm chern_character(const FormMatrix& R, std::size_t truncation);
AlgForm todd_class(const FormMatrix& R, std::size_t truncation);
/// L and A-hat of a real bundle: one root per pair of complex conjugate roots.
AlgForm l_genus(const FormMatrix& R, std::size_t truncation);
AlgForm a_hat_genus(const FormMatrix& R, std::size_t truncation);

/// Pfaffian of an antisymmetric matrix of 2-forms by expansion along the first row.
AlgForm pfaffian(const FormMatrix& R);
/// Pfaffian of curvature of a metric connection: Pf(g R) / sqrt(det g). Odd size gives zero.
AlgForm pfaffian(const FormMatrix& R, const Metric& g);

/// Generic Pfaffian over any commutative ring.
template <class T>
T pfaffian_of(const Matrix<T>& a, const T& zero, const T& one);
/// Generic Laplace-expansion determinant over any commutative ring.
template <class T>
T determinant_of(const Matrix<T>& a, const T& zero, const T& one);

/// Image of a matrix of 2-forms in the polynomial ring whose variables z_ab (a < b)
/// stand for e^a ^ e^b. Products of 2-forms are commutative, so this ring maps onto
/// the even forms and identities proven here hold for the forms too.
Matrix<Poly> commuting_image(const FormMatrix& R);
/// Maps a polynomial in the z_ab back to a form.
AlgForm form_of_commuting(const AlgebroidPtr& alg, const Poly& p);

enum class ClassKind { chern, ch, todd, l_genus, a_hat, pontryagin, pfaffian, euler };

struct ClassSpec {
  ClassKind kind;
  std::size_t index = 0;  // k of chern_k / pontryagin_k
};

/// Tokens: chern1, chern2, ..., ch, todd, l_genus, a_hat, pontryagin1, ..., pfaffian, euler.
ClassSpec parse_class(const std::string& token);
std::string class_token(const ClassSpec& spec);

/// Characteristic form of a connection truncated at `truncation` (clamped to the rank).
/// Pfaffian and euler need a metric; odd size gives zero and a note.
AlgForm char_class(const Connection& c, const ClassSpec& spec, std::size_t truncation, const Metric* metric = nullptr,
                   std::vector<std::string>* notes = nullptr);

template <class T>
T pfaffian_of(const Matrix<T>& a, const T& zero, const T& one) {
  std::size_t n = a.rows();
  if (n % 2) return zero;
  if (n == 0) return one;
  // Expansion along the first row over the remaining index list.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  auto rec = [&](auto&& self, const std::vector<std::size_t>& rest) -> T {
    if (rest.empty()) return one;
    T total = zero;
    std::size_t i = rest[0];
    for (std::size_t k = 1; k < rest.size(); ++k) {
      const T& aij = a(i, rest[k]);
      std::vector<std::size_t> sub;
      sub.reserve(rest.size() - 2);
      for (std::size_t l = 1; l < rest.size(); ++l)
        if (l != k) sub.push_back(rest[l]);
      T term = aij * self(self, sub);
      total = (k % 2 == 1) ? total + term : total - term;
    }
    return total;
  };
  return rec(rec, idx);
}

template <class T>
T determinant_of(const Matrix<T>& a, const T& zero, const T& one) {
  std::size_t n = a.rows();
  // Expansion by minors over column subsets, row by row.
  std::vector<T> prev(std::size_t{1} << n, zero), next(std::size_t{1} << n, zero);
  prev[0] = one;
  for (std::size_t row = 0; row < n; ++row) {
    std::fill(next.begin(), next.end(), zero);
    for (std::size_t used = 0; used < prev.size(); ++used) {
      if (static_cast<std::size_t>(std::popcount(used)) != row) continue;
      for (std::size_t col = 0; col < n; ++col) {
        if (used & (std::size_t{1} << col)) continue;
        std::size_t after = static_cast<std::size_t>(std::popcount(used >> (col + 1)));
        T term = prev[used] * a(row, col);
        std::size_t to = used | (std::size_t{1} << col);
        next[to] = after % 2 ? next[to] - term : next[to] + term;
      }
    }
    std::swap(prev, next);
  }
  return prev[(std::size_t{1} << n) - 1];
}

}  // namespace lalg
