#pragma once

#include <vector>

#include "lalg/algebroid.hpp"
#include "lalg/form.hpp"

namespace lalg {

/// Algebroid connection on the trivial bundle of rank m:
/// nabla_{e_a} s = rho(e_a)(s) + gamma(a) s.
class Connection {
 public:
  Connection(AlgebroidPtr alg, std::size_t bundle_rank, std::vector<ScalarMatrix> gamma);
  static Connection trivial(AlgebroidPtr alg, std::size_t bundle_rank);

  const AlgebroidPtr& algebroid() const { return alg_; }
  std::size_t bundle_rank() const { return m_; }
  const ScalarMatrix& gamma(std::size_t a) const { return gamma_.at(a); }

  std::vector<Scalar> covariant(std::size_t a, const std::vector<Scalar>& s) const;
  /// R_ab = rho_a(gamma_b) - rho_b(gamma_a) + [gamma_a, gamma_b] - sum_c C^c_ab gamma_c.
  ScalarMatrix curvature(std::size_t a, std::size_t b) const;
  bool is_flat() const;

 private:
  AlgebroidPtr alg_;
  std::size_t m_;
  std::vector<ScalarMatrix> gamma_;
};

Connection direct_sum(const Connection& a, const Connection& b);
Connection tensor_product(const Connection& a, const Connection& b);
/// Connection on the pulled-back bundle: gamma'_a = sum_b phi(b, a) (gamma_b o f).
Connection pullback_connection(const Morphism& m, const Connection& c);

/// A flat connection.
class Representation {
 public:
  /// Throws InvariantError when `c` is not flat.
  explicit Representation(Connection c);
  static Representation trivial(AlgebroidPtr alg, std::size_t bundle_rank = 1);
  /// ad(e_a) on a Lie algebra (base of dimension zero).
  static Representation adjoint(const AlgebroidPtr& alg);

  const Connection& connection() const { return c_; }
  std::size_t bundle_rank() const { return c_.bundle_rank(); }

 private:
  Connection c_;
};

AlgForm d(const AlgForm& w, const Representation& rep);

/// Symmetric positive definite bilinear form on the frame.
class Metric {
 public:
  /// Checks exact symmetry and positivity (leading minors for constant entries,
  /// sampled eigen-free minors at deterministic points otherwise).
  explicit Metric(ScalarMatrix g);
  static Metric identity(std::size_t r) { return Metric(ScalarMatrix::identity(r)); }

  const ScalarMatrix& matrix() const { return g_; }
  std::size_t rank() const { return g_.rows(); }
  const Scalar& operator()(std::size_t a, std::size_t b) const { return g_(a, b); }

 private:
  ScalarMatrix g_;
};

}  // namespace lalg
