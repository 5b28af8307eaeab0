#include "lalg/form.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "lalg/error.hpp"

namespace lalg {

std::size_t popcount(Mask m) { return static_cast<std::size_t>(std::popcount(m)); }

std::vector<std::size_t> indices_of(Mask m) {
  std::vector<std::size_t> out;
  while (m) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

Mask mask_of(const std::vector<std::size_t>& indices) {
  Mask m = 0;
  for (auto i : indices) m |= Mask{1} << i;
  return m;
}

bool MaskLess::operator()(Mask a, Mask b) const {
  auto pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  if (a == b) return false;
  // The lowest differing index decides: the tuple that contains it is smaller.
  Mask low = (a ^ b) & (~(a ^ b) + 1);
  return (a & low) != 0;
}

AlgForm::AlgForm(AlgebroidPtr alg, std::size_t bundle_rank) : alg_(std::move(alg)), m_(bundle_rank) {
  if (!alg_) throw Error("form needs an algebroid");
  if (m_ == 0) throw DimensionError("bundle rank must be positive");
}

AlgForm AlgForm::function(AlgebroidPtr alg, const Scalar& f) {
  AlgForm w(std::move(alg));
  w.add(0, 0, f);
  return w;
}

AlgForm AlgForm::basis(AlgebroidPtr alg, const std::vector<std::size_t>& indices, const Scalar& f) {
  AlgForm w(std::move(alg));
  std::vector<std::size_t> idx = indices;
  for (auto i : idx)
    if (i >= w.alg_->rank()) throw DimensionError("frame index out of range");
  // Bubble sort to track the permutation sign.
  bool negative = false;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j + 1 < idx.size() - i; ++j) {
      if (idx[j] == idx[j + 1]) return w;
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        negative = !negative;
      }
    }
  for (std::size_t i = 0; i + 1 < idx.size(); ++i)
    if (idx[i] == idx[i + 1]) return w;
  w.add(mask_of(idx), 0, negative ? -f : f);
  return w;
}

AlgForm AlgForm::top(AlgebroidPtr alg, const Scalar& f) {
  std::size_t r = alg->rank();
  AlgForm w(std::move(alg));
  w.add(r == 32 ? ~Mask{0} : (Mask{1} << r) - 1, 0, f);
  return w;
}

bool AlgForm::is_homogeneous() const {
  if (terms_.empty()) return true;
  return popcount(terms_.begin()->first) == popcount(terms_.rbegin()->first);
}

std::size_t AlgForm::degree() const {
  if (terms_.empty()) throw DomainError("the zero form has no degree");
  if (!is_homogeneous()) throw DomainError("form is not homogeneous");
  return popcount(terms_.begin()->first);
}

std::size_t AlgForm::max_degree() const { return terms_.empty() ? 0 : popcount(terms_.rbegin()->first); }

AlgForm AlgForm::component(std::size_t k) const {
  AlgForm out(alg_, m_);
  for (const auto& [mask, v] : terms_)
    if (popcount(mask) == k) out.terms_.emplace(mask, v);
  return out;
}

Scalar AlgForm::coefficient(Mask m, std::size_t comp) const {
  auto it = terms_.find(m);
  if (it == terms_.end()) return Scalar(0);
  return it->second.at(comp);
}

void AlgForm::add(Mask m, std::size_t comp, const Scalar& value) {
  if (comp >= m_) throw DimensionError("bundle component out of range");
  if (value.is_zero()) return;
  if (alg_->rank() < 32 && (m >> alg_->rank()) != 0) throw DimensionError("frame index out of range");
  auto it = terms_.find(m);
  if (it == terms_.end()) it = terms_.emplace(m, std::vector<Scalar>(m_, Scalar(0))).first;
  it->second[comp] += value;
  if (std::all_of(it->second.begin(), it->second.end(), [](const Scalar& s) { return s.is_zero(); }))
    terms_.erase(it);
}

void AlgForm::add(Mask m, const std::vector<Scalar>& values) {
  if (values.size() != m_) throw DimensionError("coefficient vector has wrong length");
  for (std::size_t i = 0; i < m_; ++i) add(m, i, values[i]);
}

void AlgForm::check_compatible(const AlgForm& rhs) const {
  if (alg_ != rhs.alg_ && (alg_->rank() != rhs.alg_->rank() || alg_->base_dim() != rhs.alg_->base_dim()))
    throw DimensionError("forms live on different algebroids");
  if (m_ != rhs.m_) throw DimensionError("forms take values in bundles of different rank");
}

AlgForm& AlgForm::operator+=(const AlgForm& rhs) {
  check_compatible(rhs);
  for (const auto& [mask, v] : rhs.terms_) add(mask, v);
  return *this;
}

AlgForm& AlgForm::operator-=(const AlgForm& rhs) { return *this += -rhs; }

AlgForm AlgForm::operator-() const {
  AlgForm out = *this;
  for (auto& [mask, v] : out.terms_)
    for (auto& s : v) s = -s;
  return out;
}

AlgForm operator*(const Scalar& c, const AlgForm& a) {
  return a.map([&](const Scalar& s) { return c * s; });
}

AlgForm AlgForm::map(const std::function<Scalar(const Scalar&)>& fn) const {
  AlgForm out(alg_, m_);
  for (const auto& [mask, v] : terms_)
    for (std::size_t i = 0; i < m_; ++i)
      if (!v[i].is_zero()) out.add(mask, i, fn(v[i]));
  return out;
}

bool AlgForm::vanishes() const {
  for (const auto& [mask, v] : terms_)
    for (const auto& s : v)
      if (!lalg::vanishes(s, alg_->base_dim())) return false;
  return true;
}

std::string AlgForm::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  const auto& names = alg_->coordinates();
  bool first = true;
  for (const auto& [mask, v] : terms_) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (v[i].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << v[i].to_string(names) << ")";
      auto idx = indices_of(mask);
      for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "^" : "*") << "e" << idx[k] + 1;
      if (m_ > 1) os << "[" << i + 1 << "]";
    }
  }
  return os.str();
}

namespace {

// Sign of e^I ^ e^J: (-1)^{#(i in I, j in J, i > j)}.
bool wedge_negative(Mask I, Mask J) {
  std::size_t inversions = 0;
  for (auto j : indices_of(J)) inversions += popcount(I >> (j + 1));
  return inversions % 2 == 1;
}

}  // namespace

AlgForm wedge(const AlgForm& a, const AlgForm& b) {
  if (a.algebroid() != b.algebroid() &&
      (a.algebroid()->rank() != b.algebroid()->rank() || a.algebroid()->base_dim() != b.algebroid()->base_dim()))
    throw DimensionError("forms live on different algebroids");
  if (a.bundle_rank() > 1 && b.bundle_rank() > 1)
    throw DimensionError("wedge of two bundle-valued forms needs a pairing");
  std::size_t m = std::max(a.bundle_rank(), b.bundle_rank());
  AlgForm out(a.algebroid(), m);
  for (const auto& [I, va] : a.terms())
    for (const auto& [J, vb] : b.terms()) {
      if (I & J) continue;
      bool neg = wedge_negative(I, J);
      for (std::size_t i = 0; i < m; ++i) {
        const Scalar& x = a.bundle_rank() > 1 ? va[i] : va[0];
        const Scalar& y = b.bundle_rank() > 1 ? vb[i] : vb[0];
        if (x.is_zero() || y.is_zero()) continue;
        Scalar p = x * y;
        out.add(I | J, i, neg ? -p : p);
      }
    }
  return out;
}

}  // namespace lalg
