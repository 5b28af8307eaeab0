#include "lalg/connection.hpp"

#include <random>

#include "lalg/error.hpp"

namespace lalg {

Connection::Connection(AlgebroidPtr alg, std::size_t bundle_rank, std::vector<ScalarMatrix> gamma)
    : alg_(std::move(alg)), m_(bundle_rank), gamma_(std::move(gamma)) {
  if (gamma_.size() != alg_->rank()) throw DimensionError("one connection matrix per frame element is required");
  for (const auto& g : gamma_)
    if (g.rows() != m_ || g.cols() != m_) throw DimensionError("connection matrix has wrong size");
}

Connection Connection::trivial(AlgebroidPtr alg, std::size_t bundle_rank) {
  std::size_t r = alg->rank();
  return Connection(std::move(alg), bundle_rank,
                    std::vector<ScalarMatrix>(r, ScalarMatrix(bundle_rank, bundle_rank, Scalar(0))));
}

std::vector<Scalar> Connection::covariant(std::size_t a, const std::vector<Scalar>& s) const {
  if (s.size() != m_) throw DimensionError("section has wrong rank");
  std::vector<Scalar> out(m_);
  const ScalarMatrix& g = gamma_.at(a);
  for (std::size_t i = 0; i < m_; ++i) {
    Scalar v = alg_->anchor_derivative(a, s[i]);
    for (std::size_t j = 0; j < m_; ++j)
      if (!g(i, j).is_zero() && !s[j].is_zero()) v += g(i, j) * s[j];
    out[i] = std::move(v);
  }
  return out;
}

ScalarMatrix Connection::curvature(std::size_t a, std::size_t b) const {
  const ScalarMatrix& ga = gamma_.at(a);
  const ScalarMatrix& gb = gamma_.at(b);
  ScalarMatrix R = ga * gb - gb * ga;
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j)
      R(i, j) += alg_->anchor_derivative(a, gb(i, j)) - alg_->anchor_derivative(b, ga(i, j));
  for (std::size_t c = 0; c < alg_->rank(); ++c) {
    Scalar C = alg_->structure(c, a, b);
    if (!C.is_zero()) R = R - C * gamma_[c];
  }
  return R;
}

bool Connection::is_flat() const {
  for (std::size_t a = 0; a < alg_->rank(); ++a)
    for (std::size_t b = a + 1; b < alg_->rank(); ++b) {
      ScalarMatrix R = curvature(a, b);
      for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j)
          if (!vanishes(R(i, j), alg_->base_dim())) return false;
    }
  return true;
}

Connection direct_sum(const Connection& a, const Connection& b) {
  if (a.algebroid()->rank() != b.algebroid()->rank()) throw DimensionError("connections on different algebroids");
  std::size_t m = a.bundle_rank() + b.bundle_rank();
  std::vector<ScalarMatrix> g;
  for (std::size_t x = 0; x < a.algebroid()->rank(); ++x) {
    ScalarMatrix s(m, m, Scalar(0));
    for (std::size_t i = 0; i < a.bundle_rank(); ++i)
      for (std::size_t j = 0; j < a.bundle_rank(); ++j) s(i, j) = a.gamma(x)(i, j);
    for (std::size_t i = 0; i < b.bundle_rank(); ++i)
      for (std::size_t j = 0; j < b.bundle_rank(); ++j) s(a.bundle_rank() + i, a.bundle_rank() + j) = b.gamma(x)(i, j);
    g.push_back(std::move(s));
  }
  return Connection(a.algebroid(), m, std::move(g));
}

Connection tensor_product(const Connection& a, const Connection& b) {
  if (a.algebroid()->rank() != b.algebroid()->rank()) throw DimensionError("connections on different algebroids");
  std::size_t p = a.bundle_rank(), q = b.bundle_rank();
  std::vector<ScalarMatrix> g;
  for (std::size_t x = 0; x < a.algebroid()->rank(); ++x) {
    ScalarMatrix s(p * q, p * q, Scalar(0));
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < q; ++k)
        for (std::size_t j = 0; j < p; ++j)
          for (std::size_t l = 0; l < q; ++l) {
            Scalar v(0);
            if (k == l) v += a.gamma(x)(i, j);
            if (i == j) v += b.gamma(x)(k, l);
            s(i * q + k, j * q + l) = v;
          }
    g.push_back(std::move(s));
  }
  return Connection(a.algebroid(), p * q, std::move(g));
}

Connection pullback_connection(const Morphism& m, const Connection& c) {
  if (c.algebroid()->rank() != m.target->rank()) throw DimensionError("connection is not on the morphism target");
  std::size_t k = c.bundle_rank();
  auto pull = [&](const Scalar& s) { return m.target->base_dim() == 0 ? s : s.substitute(m.base_map); };
  std::vector<ScalarMatrix> g;
  for (std::size_t a = 0; a < m.source->rank(); ++a) {
    ScalarMatrix s(k, k, Scalar(0));
    for (std::size_t b = 0; b < m.target->rank(); ++b) {
      const Scalar& phi = m.bundle_map(b, a);
      if (phi.is_zero()) continue;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (!c.gamma(b)(i, j).is_zero()) s(i, j) += phi * pull(c.gamma(b)(i, j));
    }
    g.push_back(std::move(s));
  }
  return Connection(m.source, k, std::move(g));
}

Representation::Representation(Connection c) : c_(std::move(c)) {
  if (!c_.is_flat()) throw InvariantError("connection is not flat, so it is not a representation");
}

Representation Representation::trivial(AlgebroidPtr alg, std::size_t bundle_rank) {
  return Representation(Connection::trivial(std::move(alg), bundle_rank));
}

Representation Representation::adjoint(const AlgebroidPtr& alg) {
  if (alg->base_dim() != 0) throw DomainError("the adjoint representation needs a Lie algebra");
  std::size_t r = alg->rank();
  std::vector<ScalarMatrix> g;
  for (std::size_t a = 0; a < r; ++a) {
    ScalarMatrix s(r, r, Scalar(0));
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c) s(c, b) = alg->structure(c, a, b);
    g.push_back(std::move(s));
  }
  return Representation(Connection(alg, r, std::move(g)));
}

AlgForm d(const AlgForm& w, const Representation& rep) { return d(w, rep.connection()); }

Metric::Metric(ScalarMatrix g) : g_(std::move(g)) {
  std::size_t r = g_.rows();
  if (g_.cols() != r) throw DimensionError("metric must be square");
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      if (!(g_(a, b) == g_(b, a))) throw InvariantError("metric is not symmetric");
  bool constant = true;
  std::size_t nvars = 0;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      if (!g_(a, b).as_rational()) constant = false;
      if (g_(a, b).is_exact()) {
        nvars = std::max(nvars, g_(a, b).numerator().nvars());
        for (const auto& f : g_(a, b).denominator()) nvars = std::max(nvars, f.base.nvars());
      } else {
        nvars = std::max(nvars, g_(a, b).to_expr().max_var());
      }
    }
  auto minors_positive = [&](auto value) {
    for (std::size_t k = 1; k <= r; ++k) {
      ScalarMatrix sub(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = g_(i, j);
      if (!value(determinant(sub))) return false;
    }
    return true;
  };
  if (constant) {
    if (!minors_positive([](const Scalar& s) { return *s.as_rational() > 0; }))
      throw InvariantError("metric is not positive definite");
    return;
  }
  // Sampled check: the leading minors are evaluated at deterministic points.
  std::mt19937_64 rng(0x6d65ULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> pt(nvars);
  std::vector<Scalar> minors;
  for (std::size_t k = 1; k <= r; ++k) {
    ScalarMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = g_(i, j);
    minors.push_back(determinant(sub));
  }
  for (int trial = 0; trial < 8; ++trial) {
    for (auto& x : pt) x = dist(rng);
    for (const auto& mnr : minors) {
      double v = 0;
      try {
        v = mnr.eval(pt);
      } catch (const DomainError&) {
        continue;
      }
      if (v <= 0) throw InvariantError("metric is not positive definite at a sample point");
    }
  }
}

}  // namespace lalg
