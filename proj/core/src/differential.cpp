#include "lalg/connection.hpp"
#include "lalg/error.hpp"
#include "lalg/form.hpp"

namespace lalg {

namespace {

std::size_t position(Mask J, std::size_t a) { return popcount(J & ((Mask{1} << a) - 1)); }

AlgForm koszul(const AlgForm& w, const Connection* conn) {
  const Algebroid& A = *w.algebroid();
  std::size_t r = A.rank(), m = w.bundle_rank();
  if (conn && conn->bundle_rank() != m) throw DimensionError("connection and form have different bundle ranks");
  if (conn && conn->algebroid()->rank() != r) throw DimensionError("connection lives on a different algebroid");
  AlgForm out(w.algebroid(), m);
  if (w.max_degree() >= r) {
    // Only the part below top degree contributes.
    AlgForm lower(w.algebroid(), m);
    for (const auto& [I, v] : w.terms())
      if (popcount(I) < r) lower.add(I, v);
    if (lower.is_zero()) return out;
    return koszul(lower, conn);
  }
  for (const auto& [I, v] : w.terms()) {
    for (std::size_t a = 0; a < r; ++a) {
      Mask bit = Mask{1} << a;
      if (I & bit) continue;
      Mask J = I | bit;
      bool neg = position(J, a) % 2 == 1;
      std::vector<Scalar> nab;
      if (conn) {
        nab = conn->covariant(a, v);
      } else {
        nab.reserve(m);
        for (const auto& s : v) nab.push_back(A.anchor_derivative(a, s));
      }
      for (std::size_t i = 0; i < m; ++i)
        if (!nab[i].is_zero()) out.add(J, i, neg ? -nab[i] : nab[i]);
    }
    for (auto c : indices_of(I)) {
      Mask rest = I & ~(Mask{1} << c);
      bool neg_c = position(rest, c) % 2 == 1;
      for (std::size_t a = 0; a < r; ++a) {
        if (rest & (Mask{1} << a)) continue;
        for (std::size_t b = a + 1; b < r; ++b) {
          if (rest & (Mask{1} << b)) continue;
          Scalar C = A.structure(c, a, b);
          if (C.is_zero()) continue;
          Mask J = rest | (Mask{1} << a) | (Mask{1} << b);
          bool neg = ((position(J, a) + position(J, b)) % 2 == 1) != neg_c;
          for (std::size_t i = 0; i < m; ++i) {
            if (v[i].is_zero()) continue;
            Scalar t = C * v[i];
            out.add(J, i, neg ? -t : t);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

AlgForm d(const AlgForm& w) { return koszul(w, nullptr); }

AlgForm d(const AlgForm& w, const Connection& conn) { return koszul(w, &conn); }

AlgForm pullback_form(const Morphism& m, const AlgForm& w) {
  if (w.algebroid()->rank() != m.target->rank() || w.algebroid()->base_dim() != m.target->base_dim())
    throw DimensionError("form does not live on the morphism target");
  std::size_t r1 = m.source->rank(), r2 = m.target->rank();
  auto pull = [&](const Scalar& s) { return m.target->base_dim() == 0 ? s : s.substitute(m.base_map); };
  std::vector<AlgForm> dual;
  for (std::size_t b = 0; b < r2; ++b) {
    AlgForm e(m.source);
    for (std::size_t a = 0; a < r1; ++a) e.add(Mask{1} << a, 0, m.bundle_map(b, a));
    dual.push_back(std::move(e));
  }
  AlgForm out(m.source, w.bundle_rank());
  for (const auto& [I, v] : w.terms()) {
    AlgForm p = AlgForm::function(m.source, Scalar(1));
    for (auto b : indices_of(I)) {
      p = wedge(p, dual[b]);
      if (p.is_zero()) break;
    }
    if (p.is_zero()) continue;
    for (std::size_t i = 0; i < w.bundle_rank(); ++i) {
      if (v[i].is_zero()) continue;
      Scalar c = pull(v[i]);
      for (const auto& [J, pv] : p.terms()) out.add(J, i, c * pv[0]);
    }
  }
  return out;
}

}  // namespace lalg
