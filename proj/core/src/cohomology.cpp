#include "lalg/cohomology.hpp"

#include <algorithm>
#include <map>

#include "lalg/error.hpp"

namespace lalg {

namespace {

std::vector<Mask> masks_of_degree(std::size_t r, std::size_t k) {
  std::vector<Mask> out;
  if (k > r) return out;
  for (Mask m = 0; m < (Mask{1} << r); ++m)
    if (popcount(m) == k) out.push_back(m);
  std::sort(out.begin(), out.end(), MaskLess{});
  return out;
}

using Slot = std::pair<Mask, std::size_t>;

std::map<Slot, std::size_t> slot_index(std::size_t r, std::size_t k, std::size_t m) {
  std::map<Slot, std::size_t> idx;
  for (Mask mask : masks_of_degree(r, k))
    for (std::size_t i = 0; i < m; ++i) idx.emplace(Slot{mask, i}, idx.size());
  return idx;
}

Rational constant_of(const Scalar& s) {
  auto q = s.as_rational();
  if (!q) throw DomainError("coefficient " + s.to_string() + " is not constant");
  return *q;
}

std::vector<Exponents> monomials_upto(std::size_t n, std::size_t degree) {
  std::vector<Exponents> out;
  Exponents e(n, 0);
  auto rec = [&](auto&& self, std::size_t var, std::size_t left) -> void {
    if (var == n) {
      out.push_back(e);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      e[var] = static_cast<std::uint32_t>(k);
      self(self, var + 1, left - k);
    }
    e[var] = 0;
  };
  rec(rec, 0, degree);
  return out;
}

AlgForm apply_d(const AlgForm& w, const Representation* rep) { return rep ? d(w, rep->connection()) : d(w); }

PrimitiveResult primitive_on_point(const AlgForm& w, const Representation* rep, std::size_t k) {
  const auto& alg = w.algebroid();
  std::size_t m = w.bundle_rank();
  if (k == 0) return {PrimitiveStatus::not_exact, std::nullopt};
  Representation trivial = Representation::trivial(alg, m);
  RationalMatrix D = differential_matrix(rep ? *rep : trivial, k - 1);
  auto rows = slot_index(alg->rank(), k, m);
  std::vector<Rational> b(rows.size(), 0);
  for (const auto& [mask, v] : w.terms())
    for (std::size_t i = 0; i < m; ++i) b[rows.at({mask, i})] = constant_of(v[i]);
  auto x = solve(D, b);
  if (!x) return {PrimitiveStatus::not_exact, std::nullopt};
  auto basis = form_basis(alg, k - 1, m);
  AlgForm eta(alg, m);
  for (std::size_t j = 0; j < basis.size(); ++j)
    if ((*x)[j] != 0) eta += Scalar((*x)[j]) * basis[j];
  return {PrimitiveStatus::found, eta};
}

PrimitiveResult primitive_on_chart(const AlgForm& w, const Representation* rep, std::size_t k, std::size_t degree) {
  const auto& alg = w.algebroid();
  std::size_t n = alg->base_dim(), r = alg->rank(), m = w.bundle_rank();
  if (k == 0) return {PrimitiveStatus::not_found_within_ansatz, std::nullopt};
  std::vector<AlgForm> ansatz;
  for (const auto& e : monomials_upto(n, degree)) {
    Scalar mono(Poly::monomial(e, 1));
    for (const auto& b : form_basis(alg, k - 1, m)) ansatz.push_back(mono * b);
  }
  std::vector<AlgForm> images;
  images.reserve(ansatz.size());
  for (const auto& a : ansatz) images.push_back(apply_d(a, rep));
  auto slots = slot_index(r, k, m);

  // Linear conditions from exact evaluation at deterministic rational points.
  std::size_t wanted = ansatz.size() + 4;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (std::size_t attempt = 0; attempt < 4 * wanted && rows.size() < wanted * slots.size(); ++attempt) {
    std::vector<Rational> pt(n);
    for (auto& c : pt) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      long num = static_cast<long>((state >> 33) % 2001) - 1000;
      c = Rational(num, 997);
      c.canonicalize();
    }
    try {
      std::vector<std::vector<Rational>> block(slots.size(), std::vector<Rational>(ansatz.size(), 0));
      std::vector<Rational> target(slots.size(), 0);
      for (std::size_t j = 0; j < images.size(); ++j)
        for (const auto& [mask, v] : images[j].terms())
          for (std::size_t i = 0; i < m; ++i)
            if (!v[i].is_zero()) block[slots.at({mask, i})][j] = v[i].eval_exact(pt);
      for (const auto& [mask, v] : w.terms())
        for (std::size_t i = 0; i < m; ++i)
          if (!v[i].is_zero()) target[slots.at({mask, i})] = v[i].eval_exact(pt);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        rows.push_back(std::move(block[s]));
        rhs.push_back(target[s]);
      }
    } catch (const DomainError&) {
      continue;  // pole at this point, or a numeric coefficient
    }
  }
  if (rows.empty()) throw DomainError("primitive search needs exact coefficients");
  RationalMatrix A(rows.size(), ansatz.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ansatz.size(); ++j) A(i, j) = rows[i][j];
  auto x = solve(A, rhs);
  if (!x) return {PrimitiveStatus::not_found_within_ansatz, std::nullopt};
  AlgForm eta(alg, m);
  for (std::size_t j = 0; j < ansatz.size(); ++j)
    if ((*x)[j] != 0) eta += Scalar((*x)[j]) * ansatz[j];
  if (!(apply_d(eta, rep) - w).vanishes()) return {PrimitiveStatus::not_found_within_ansatz, std::nullopt};
  return {PrimitiveStatus::found, eta};
}

PrimitiveResult primitive(const AlgForm& w, const Representation* rep, std::size_t degree) {
  if (w.is_zero()) return {PrimitiveStatus::found, AlgForm(w.algebroid(), w.bundle_rank())};
  if (!w.is_homogeneous()) throw DimensionError("primitive search needs a homogeneous form");
  std::size_t k = w.degree();
  if (w.algebroid()->base_dim() == 0) return primitive_on_point(w, rep, k);
  return primitive_on_chart(w, rep, k, degree);
}

}  // namespace

std::vector<AlgForm> form_basis(const AlgebroidPtr& alg, std::size_t k, std::size_t bundle_rank) {
  std::vector<AlgForm> out;
  for (Mask mask : masks_of_degree(alg->rank(), k))
    for (std::size_t i = 0; i < bundle_rank; ++i) {
      AlgForm f(alg, bundle_rank);
      f.add(mask, i, Scalar(1));
      out.push_back(std::move(f));
    }
  return out;
}

RationalMatrix differential_matrix(const Representation& rep, std::size_t k) {
  const auto& alg = rep.connection().algebroid();
  std::size_t r = alg->rank(), m = rep.bundle_rank();
  if (alg->base_dim() != 0) throw DomainError("differential matrix needs a Lie algebra (point base)");
  auto basis = form_basis(alg, k, m);
  auto rows = slot_index(r, k + 1, m);
  RationalMatrix D(rows.size(), basis.size(), 0);
  if (k >= r) return D;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    AlgForm img = d(basis[j], rep.connection());
    for (const auto& [mask, v] : img.terms())
      for (std::size_t i = 0; i < m; ++i)
        if (!v[i].is_zero()) D(rows.at({mask, i}), j) = constant_of(v[i]);
  }
  return D;
}

std::vector<std::size_t> betti_numbers(const Representation& rep) {
  std::size_t r = rep.connection().algebroid()->rank(), m = rep.bundle_rank();
  std::vector<std::size_t> ranks(r + 1, 0), out(r + 1, 0);
  for (std::size_t k = 0; k < r; ++k) ranks[k] = rank(differential_matrix(rep, k));
  for (std::size_t k = 0; k <= r; ++k) {
    std::size_t dim = masks_of_degree(r, k).size() * m;
    out[k] = dim - ranks[k] - (k > 0 ? ranks[k - 1] : 0);
  }
  return out;
}

bool is_cocycle(const AlgForm& w) { return d(w).vanishes(); }

bool is_cocycle(const AlgForm& w, const Representation& rep) { return d(w, rep.connection()).vanishes(); }

PrimitiveResult find_primitive(const AlgForm& w, const Representation& rep, std::size_t ansatz_degree) {
  return primitive(w, &rep, ansatz_degree);
}

PrimitiveResult find_primitive(const AlgForm& w, std::size_t ansatz_degree) {
  return primitive(w, nullptr, ansatz_degree);
}

}  // namespace lalg
