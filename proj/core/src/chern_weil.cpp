#include "lalg/chern_weil.hpp"

#include <functional>

#include "lalg/error.hpp"
#include "lalg/series.hpp"

namespace lalg {

namespace {

AlgForm truncated(const AlgForm& w, std::size_t degree) {
  AlgForm out(w.algebroid(), w.bundle_rank());
  for (const auto& [mask, v] : w.terms())
    if (popcount(mask) <= degree) out.add(mask, v);
  return out;
}

AlgForm wedge_upto(const AlgForm& a, const AlgForm& b, std::size_t degree) {
  if (a.is_zero() || b.is_zero()) return AlgForm(a.algebroid());
  if (a.max_degree() + b.max_degree() <= degree) return wedge(a, b);
  return truncated(wedge(truncated(a, degree), truncated(b, degree)), degree);
}

AlgForm scalar_form(const AlgebroidPtr& alg, const Rational& c) { return AlgForm::function(alg, Scalar(c)); }

std::size_t clamp(const FormMatrix& R, std::size_t truncation) { return std::min(truncation, R.algebroid()->rank()); }

// exp(F) for F without degree-0 part, truncated.
AlgForm form_exp(const AlgForm& F, std::size_t degree) {
  AlgForm total = scalar_form(F.algebroid(), 1);
  AlgForm term = total;
  for (long j = 1;; ++j) {
    term = Scalar(Rational(1, j)) * wedge_upto(term, F, degree);
    if (term.is_zero()) break;
    total += term;
  }
  return total;
}

// Multiplicative genus with log Q = sum l_k x^k, weighted by `weight` per root.
AlgForm multiplicative(const FormMatrix& R, std::size_t truncation, const Series& q, const Rational& weight) {
  std::size_t T = clamp(R, truncation);
  Series lg = q.log();
  AlgForm F(R.algebroid());
  for (std::size_t k = 1; 2 * k <= T && k <= lg.order(); ++k) {
    if (lg[k] == 0) continue;
    F += Scalar(weight * lg[k]) * power_sum(R, k);
  }
  return truncated(form_exp(truncated(F, T), T), T);
}

}  // namespace

FormMatrix::FormMatrix(AlgebroidPtr alg, std::size_t size)
    : alg_(std::move(alg)), m_(size), e_(size * size, AlgForm(alg_)) {}

FormMatrix FormMatrix::identity(AlgebroidPtr alg, std::size_t size) {
  FormMatrix out(alg, size);
  for (std::size_t i = 0; i < size; ++i) out(i, i) = AlgForm::function(alg, Scalar(1));
  return out;
}

FormMatrix FormMatrix::connection_forms(const Connection& c) {
  FormMatrix out(c.algebroid(), c.bundle_rank());
  for (std::size_t a = 0; a < c.algebroid()->rank(); ++a)
    for (std::size_t i = 0; i < c.bundle_rank(); ++i)
      for (std::size_t j = 0; j < c.bundle_rank(); ++j) out(i, j).add(Mask{1} << a, 0, c.gamma(a)(i, j));
  return out;
}

FormMatrix operator+(const FormMatrix& a, const FormMatrix& b) {
  if (a.m_ != b.m_) throw DimensionError("form matrices of different size");
  FormMatrix out = a;
  for (std::size_t k = 0; k < out.e_.size(); ++k) out.e_[k] += b.e_[k];
  return out;
}

FormMatrix operator-(const FormMatrix& a, const FormMatrix& b) {
  if (a.m_ != b.m_) throw DimensionError("form matrices of different size");
  FormMatrix out = a;
  for (std::size_t k = 0; k < out.e_.size(); ++k) out.e_[k] -= b.e_[k];
  return out;
}

FormMatrix operator*(const FormMatrix& a, const FormMatrix& b) {
  if (a.m_ != b.m_) throw DimensionError("form matrices of different size");
  std::size_t m = a.m_;
  FormMatrix out(a.alg_, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!b(k, j).is_zero()) out(i, j) += wedge(a(i, k), b(k, j));
    }
  return out;
}

AlgForm FormMatrix::trace() const {
  AlgForm out(alg_);
  for (std::size_t i = 0; i < m_; ++i) out += (*this)(i, i);
  return out;
}

bool FormMatrix::is_zero() const {
  for (const auto& e : e_)
    if (!e.is_zero()) return false;
  return true;
}

FormMatrix FormMatrix::d() const {
  FormMatrix out(alg_, m_);
  for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = lalg::d(e_[k]);
  return out;
}

FormMatrix FormMatrix::truncate(std::size_t degree) const {
  FormMatrix out(alg_, m_);
  for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = truncated(e_[k], degree);
  return out;
}

FormMatrix curvature(const Connection& c) {
  const auto& alg = c.algebroid();
  std::size_t r = alg->rank(), m = c.bundle_rank();
  FormMatrix R(alg, m);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) {
      ScalarMatrix Rab = c.curvature(a, b);
      Mask mask = (Mask{1} << a) | (Mask{1} << b);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) R(i, j).add(mask, 0, Rab(i, j));
    }
  return R;
}

FormMatrix covariant_derivative(const FormMatrix& R, const Connection& c) {
  FormMatrix G = FormMatrix::connection_forms(c);
  return R.d() + G * R - R * G;
}

Connection levi_civita(const AlgebroidPtr& alg, const Metric& g) {
  std::size_t r = alg->rank();
  if (g.rank() != r) throw DimensionError("metric size does not match the algebroid rank");
  ScalarMatrix ginv;
  try {
    ginv = inverse(g.matrix());
  } catch (const DomainError&) {
    throw DomainError("metric is not invertible");
  }
  // Lowered symbols: 2 G(a, b, d) = <nabla_{e_a} e_b, e_d> * 2 by the Koszul formula.
  auto lowered = [&](std::size_t a, std::size_t b, std::size_t d) {
    Scalar v = alg->anchor_derivative(a, g(b, d)) + alg->anchor_derivative(b, g(a, d)) - alg->anchor_derivative(d, g(a, b));
    for (std::size_t e = 0; e < r; ++e) {
      Scalar c1 = alg->structure(e, a, b), c2 = alg->structure(e, a, d), c3 = alg->structure(e, b, d);
      if (!c1.is_zero()) v += c1 * g(e, d);
      if (!c2.is_zero()) v -= c2 * g(e, b);
      if (!c3.is_zero()) v -= c3 * g(e, a);
    }
    return Scalar(Rational(1, 2)) * v;
  };
  std::vector<ScalarMatrix> gamma(r, ScalarMatrix(r, r, Scalar(0)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      std::vector<Scalar> low(r);
      for (std::size_t d = 0; d < r; ++d) low[d] = lowered(a, b, d);
      for (std::size_t c = 0; c < r; ++c) {
        Scalar v(0);
        for (std::size_t d = 0; d < r; ++d)
          if (!ginv(c, d).is_zero() && !low[d].is_zero()) v += ginv(c, d) * low[d];
        gamma[a](c, b) = v;
      }
    }
  return Connection(alg, r, std::move(gamma));
}

ValidationReport levi_civita_residuals(const Connection& c, const Metric& g) {
  const Algebroid& A = *c.algebroid();
  std::size_t r = A.rank();
  if (c.bundle_rank() != r) throw DimensionError("connection does not act on the algebroid itself");
  ValidationReport report;
  auto flag = [&](const char* kind, std::vector<std::size_t> idx, std::string comp, const Scalar& res) {
    if (vanishes(res, A.base_dim())) return;
    report.violations.push_back({kind, std::move(idx), std::move(comp), res, res.to_string(A.coordinates())});
  };
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      for (std::size_t e = 0; e < r; ++e)
        flag("torsion", {a + 1, b + 1}, "e" + std::to_string(e + 1),
             c.gamma(a)(e, b) - c.gamma(b)(e, a) - A.structure(e, a, b));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t d = b; d < r; ++d) {
        Scalar res = A.anchor_derivative(a, g(b, d));
        for (std::size_t e = 0; e < r; ++e) {
          res -= c.gamma(a)(e, b) * g(e, d);
          res -= c.gamma(a)(e, d) * g(b, e);
        }
        flag("metric-compatibility", {a + 1, b + 1, d + 1}, "", res);
      }
  return report;
}

AlgForm power_sum(const FormMatrix& R, std::size_t k) {
  std::size_t r = R.algebroid()->rank();
  if (k == 0) return AlgForm::function(R.algebroid(), Scalar(static_cast<long>(R.size())));
  if (2 * k > r) return AlgForm(R.algebroid());
  FormMatrix P = R;
  for (std::size_t j = 1; j < k; ++j) P = P * R;
  return P.trace();
}

AlgForm total_chern(const FormMatrix& R, std::size_t truncation) {
  std::size_t T = clamp(R, truncation);
  std::vector<AlgForm> c{AlgForm::function(R.algebroid(), Scalar(1))};
  std::vector<AlgForm> s{AlgForm(R.algebroid())};
  for (std::size_t k = 1; 2 * k <= T; ++k) s.push_back(power_sum(R, k));
  AlgForm total = c[0];
  for (std::size_t k = 1; 2 * k <= T; ++k) {
    // k c_k = sum_{i=1}^k (-1)^{i-1} c_{k-i} s_i
    AlgForm acc(R.algebroid());
    for (std::size_t i = 1; i <= k; ++i) {
      AlgForm t = wedge_upto(c[k - i], s[i], T);
      if (i % 2 == 1) acc += t;
      else acc -= t;
    }
    c.push_back(Scalar(Rational(1, static_cast<long>(k))) * acc);
    total += c.back();
  }
  return total;
}

AlgForm chern_class(const FormMatrix& R, std::size_t k) {
  return total_chern(R, 2 * k).component(2 * k);
}

AlgForm pontryagin_class(const FormMatrix& R, std::size_t k) {
  AlgForm c = chern_class(R, 2 * k);
  return k % 2 ? -c : c;
}

AlgForm chern_character(const FormMatrix& R, std::size_t truncation) {
  std::size_t T = clamp(R, truncation);
  AlgForm total = AlgForm::function(R.algebroid(), Scalar(static_cast<long>(R.size())));
  Rational fact = 1;
  for (std::size_t k = 1; 2 * k <= T; ++k) {
    fact *= static_cast<long>(k);
    total += Scalar(Rational(1) / fact) * power_sum(R, k);
  }
  return total;
}

AlgForm todd_class(const FormMatrix& R, std::size_t truncation) {
  return multiplicative(R, truncation, todd_series(truncation / 2 + 1), 1);
}

AlgForm l_genus(const FormMatrix& R, std::size_t truncation) {
  return multiplicative(R, truncation, l_series(truncation / 2 + 1), Rational(1, 2));
}

AlgForm a_hat_genus(const FormMatrix& R, std::size_t truncation) {
  return multiplicative(R, truncation, a_hat_series(truncation / 2 + 1), Rational(1, 2));
}

namespace {

void check_antisymmetric(const FormMatrix& R) {
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = i; j < R.size(); ++j)
      if (!(R(i, j) + R(j, i)).vanishes())
        throw InvariantError("Pfaffian needs an antisymmetric curvature matrix; entry (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ") breaks it");
}

AlgForm pf_rec(const FormMatrix& R, const std::vector<std::size_t>& rest) {
  if (rest.empty()) return AlgForm::function(R.algebroid(), Scalar(1));
  AlgForm total(R.algebroid());
  std::size_t i = rest[0];
  for (std::size_t k = 1; k < rest.size(); ++k) {
    const AlgForm& aij = R(i, rest[k]);
    if (aij.is_zero()) continue;
    std::vector<std::size_t> sub;
    for (std::size_t l = 1; l < rest.size(); ++l)
      if (l != k) sub.push_back(rest[l]);
    AlgForm term = wedge(aij, pf_rec(R, sub));
    if (k % 2 == 1) total += term;
    else total -= term;
  }
  return total;
}

}  // namespace

AlgForm pfaffian(const FormMatrix& R) {
  if (R.size() % 2) return AlgForm(R.algebroid());
  check_antisymmetric(R);
  std::vector<std::size_t> idx(R.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return pf_rec(R, idx);
}

AlgForm pfaffian(const FormMatrix& R, const Metric& g) {
  std::size_t m = R.size();
  if (g.rank() != m) throw DimensionError("metric size does not match the curvature matrix");
  if (m % 2) return AlgForm(R.algebroid());
  FormMatrix low(R.algebroid(), m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        if (!g(i, k).is_zero()) low(i, j) += g(i, k) * R(k, j);
  Scalar root = sqrt(determinant(g.matrix()));
  Scalar inv = Scalar(1) / root;
  return inv * pfaffian(low);
}

Matrix<Poly> commuting_image(const FormMatrix& R) {
  std::size_t r = R.algebroid()->rank(), m = R.size();
  std::size_t nz = r * (r > 0 ? r - 1 : 0) / 2;
  Matrix<Poly> out(m, m, Poly(nz));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Poly p(nz);
      for (const auto& [mask, v] : R(i, j).terms()) {
        if (popcount(mask) != 2) throw DomainError("commuting image needs entries that are 2-forms");
        auto q = v[0].as_rational();
        if (!q) throw DomainError("commuting image needs constant coefficients");
        auto idx = indices_of(mask);
        std::size_t a = idx[0], b = idx[1];
        std::size_t var = a * r - a * (a + 1) / 2 + (b - a - 1);
        p += *q * Poly::variable(nz, var);
      }
      out(i, j) = p;
    }
  return out;
}

AlgForm form_of_commuting(const AlgebroidPtr& alg, const Poly& p) {
  std::size_t r = alg->rank();
  std::vector<AlgForm> z;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) z.push_back(AlgForm::basis(alg, {a, b}));
  AlgForm out(alg);
  for (const auto& [exps, c] : p.terms()) {
    AlgForm t = AlgForm::function(alg, Scalar(c));
    for (std::size_t v = 0; v < exps.size() && !t.is_zero(); ++v)
      for (std::uint32_t k = 0; k < exps[v]; ++k) t = wedge(t, z.at(v));
    out += t;
  }
  return out;
}

ClassSpec parse_class(const std::string& token) {
  auto indexed = [&](const std::string& stem, ClassKind kind) -> std::optional<ClassSpec> {
    if (token.rfind(stem, 0) != 0 || token.size() == stem.size()) return std::nullopt;
    std::string digits = token.substr(stem.size());
    for (char ch : digits)
      if (ch < '0' || ch > '9') return std::nullopt;
    std::size_t k = std::stoul(digits);
    if (k == 0) return std::nullopt;
    return ClassSpec{kind, k};
  };
  if (token == "ch") return {ClassKind::ch};
  if (token == "todd") return {ClassKind::todd};
  if (token == "l_genus") return {ClassKind::l_genus};
  if (token == "a_hat") return {ClassKind::a_hat};
  if (token == "pfaffian") return {ClassKind::pfaffian};
  if (token == "euler") return {ClassKind::euler};
  if (auto s = indexed("chern", ClassKind::chern)) return *s;
  if (auto s = indexed("pontryagin", ClassKind::pontryagin)) return *s;
  throw ParseError("unknown characteristic class '" + token + "'", 0, 0);
}

std::string class_token(const ClassSpec& spec) {
  switch (spec.kind) {
    case ClassKind::chern: return "chern" + std::to_string(spec.index);
    case ClassKind::ch: return "ch";
    case ClassKind::todd: return "todd";
    case ClassKind::l_genus: return "l_genus";
    case ClassKind::a_hat: return "a_hat";
    case ClassKind::pontryagin: return "pontryagin" + std::to_string(spec.index);
    case ClassKind::pfaffian: return "pfaffian";
    case ClassKind::euler: return "euler";
  }
  return "";
}

AlgForm char_class(const Connection& c, const ClassSpec& spec, std::size_t truncation, const Metric* metric,
                   std::vector<std::string>* notes) {
  FormMatrix R = curvature(c);
  std::size_t T = clamp(R, truncation);
  auto note = [&](const std::string& s) {
    if (notes) notes->push_back(s);
  };
  if (truncation > T) note("truncation clamped to the algebroid rank " + std::to_string(T));
  switch (spec.kind) {
    case ClassKind::chern:
      if (2 * spec.index > T) return AlgForm(c.algebroid());
      return chern_class(R, spec.index);
    case ClassKind::pontryagin:
      if (4 * spec.index > T) return AlgForm(c.algebroid());
      return pontryagin_class(R, spec.index);
    case ClassKind::ch: return chern_character(R, T);
    case ClassKind::todd: return todd_class(R, T);
    case ClassKind::l_genus: return l_genus(R, T);
    case ClassKind::a_hat: return a_hat_genus(R, T);
    case ClassKind::pfaffian:
    case ClassKind::euler: {
      if (R.size() % 2) {
        note("odd bundle rank: Pfaffian is zero");
        return AlgForm(c.algebroid());
      }
      AlgForm pf = metric ? pfaffian(R, *metric) : pfaffian(R);
      return truncated(pf, T);
    }
  }
  return AlgForm(c.algebroid());
}

}  // namespace lalg
