#pragma once

// Reference computations written independently of the library's algorithms.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "lalg/algebroid.hpp"
#include "lalg/form.hpp"
#include "lalg/chern_weil.hpp"

namespace lalg::oracle {

inline std::vector<std::vector<std::size_t>> combinations(std::size_t r, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), 0);
  if (k > r) return out;
  while (true) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == r - k + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

// Value of e^I on the frame tuple `args`: the sign of the sorting permutation, or 0.
inline int evaluate_basis(const std::vector<std::size_t>& I, std::vector<std::size_t> args) {
  int sign = 1;
  for (std::size_t i = 0; i < args.size(); ++i)
    for (std::size_t j = 0; j + 1 < args.size() - i; ++j)
      if (args[j] > args[j + 1]) {
        std::swap(args[j], args[j + 1]);
        sign = -sign;
      } else if (args[j] == args[j + 1]) {
        return 0;
      }
  for (std::size_t i = 1; i < args.size(); ++i)
    if (args[i] == args[i - 1]) return 0;
  return args == I ? sign : 0;
}

/// Chevalley-Eilenberg differential of a Lie algebra (trivial coefficients) from the
/// invariant formula, evaluated on frame tuples:
/// (dw)(x_0..x_k) = sum_{p<q} (-1)^{p+q} w([x_p, x_q], x_0..^p..^q..x_k).
inline RationalMatrix ce_matrix(const Algebroid& g, std::size_t k) {
  std::size_t r = g.rank();
  auto cols = combinations(r, k), rows = combinations(r, k + 1);
  RationalMatrix D(rows.size(), cols.size(), Rational(0));
  for (std::size_t row = 0; row < rows.size(); ++row) {
    const auto& J = rows[row];
    for (std::size_t p = 0; p < J.size(); ++p)
      for (std::size_t q = p + 1; q < J.size(); ++q) {
        int sign = (p + q) % 2 ? -1 : 1;
        std::vector<std::size_t> rest;
        for (std::size_t t = 0; t < J.size(); ++t)
          if (t != p && t != q) rest.push_back(J[t]);
        for (std::size_t c = 0; c < r; ++c) {
          auto coeff = g.structure(c, J[p], J[q]).as_rational();
          if (!coeff || *coeff == 0) continue;
          std::vector<std::size_t> args{c};
          args.insert(args.end(), rest.begin(), rest.end());
          for (std::size_t col = 0; col < cols.size(); ++col) {
            int v = evaluate_basis(cols[col], args);
            if (v) D(row, col) += Rational(sign * v) * *coeff;
          }
        }
      }
  }
  return D;
}

/// Rank by plain Gauss-Jordan elimination over the rationals.
inline std::size_t matrix_rank(RationalMatrix m) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(rank, j), m(piv, j));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || m(i, col) == 0) continue;
      Rational f = m(i, col) / m(rank, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::size_t> lie_betti(const Algebroid& g) {
  std::size_t r = g.rank();
  std::vector<std::size_t> ranks(r + 1, 0);
  for (std::size_t k = 0; k < r; ++k) ranks[k] = matrix_rank(ce_matrix(g, k));
  std::vector<std::size_t> b;
  for (std::size_t k = 0; k <= r; ++k) {
    std::size_t dim = combinations(r, k).size();
    b.push_back(dim - ranks[k] - (k > 0 ? ranks[k - 1] : 0));
  }
  return b;
}

/// V - E + F of a closed triangulated surface given by its triangles.
inline long euler_characteristic(const std::vector<std::array<int, 3>>& faces) {
  std::set<int> vertices;
  std::set<std::pair<int, int>> edges;
  for (const auto& f : faces)
    for (int i = 0; i < 3; ++i) {
      vertices.insert(f[i]);
      int a = f[i], b = f[(i + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) + static_cast<long>(faces.size());
}

inline std::vector<std::array<int, 3>> octahedron() {
  // Vertices 0..5: +-x, +-y, +-z.
  return {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
}

inline std::vector<std::array<int, 3>> icosahedron() {
  return {{0, 1, 2},  {0, 2, 3},  {0, 3, 4},  {0, 4, 5},  {0, 5, 1},  {1, 6, 2},  {2, 7, 3},
          {3, 8, 4},  {4, 9, 5},  {5, 10, 1}, {6, 7, 2},  {7, 8, 3},  {8, 9, 4},  {9, 10, 5},
          {10, 6, 1}, {11, 7, 6}, {11, 8, 7}, {11, 9, 8}, {11, 10, 9}, {11, 6, 10}};
}

/// Seven-vertex triangulation of the torus.
inline std::vector<std::array<int, 3>> torus7() {
  std::vector<std::array<int, 3>> f;
  for (int i = 0; i < 7; ++i) {
    f.push_back({i, (i + 1) % 7, (i + 3) % 7});
    f.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return f;
}

/// Determinant by the Leibniz permutation sum.
template <class T>
T leibniz_det(const Matrix<T>& a, const T& zero) {
  std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  T total = zero;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    T term = a(0, perm[0]);
    for (std::size_t i = 1; i < n; ++i) term = term * a(i, perm[i]);
    if (inversions % 2)
      total = total - term;
    else
      total = total + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// tr(R^k) with entries multiplied by wedge in index order.
inline AlgForm trace_power(const FormMatrix& R, std::size_t k) {
  std::size_t m = R.size();
  const auto& alg = R.algebroid();
  std::vector<std::vector<AlgForm>> P(m, std::vector<AlgForm>(m, AlgForm(alg)));
  for (std::size_t i = 0; i < m; ++i) P[i][i] = AlgForm::function(alg, Scalar(1));
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<std::vector<AlgForm>> Q(m, std::vector<AlgForm>(m, AlgForm(alg)));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l) Q[i][j] += wedge(P[i][l], R(l, j));
    P = Q;
  }
  AlgForm t(alg);
  for (std::size_t i = 0; i < m; ++i) t += P[i][i];
  return t;
}

/// Product of a rational matrix (left) with a matrix of forms.
inline FormMatrix lower(const ScalarMatrix& g, const FormMatrix& R) {
  FormMatrix out(R.algebroid(), R.size());
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 0; j < R.size(); ++j)
      for (std::size_t k = 0; k < R.size(); ++k) out(i, j) += g(i, k) * R(k, j);
  return out;
}

}  // namespace lalg::oracle
