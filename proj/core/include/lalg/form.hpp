#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lalg/algebroid.hpp"

namespace lalg {

/// Subset of frame indices; bit a set means e^a is a factor.
using Mask = std::uint32_t;

std::size_t popcount(Mask m);
std::vector<std::size_t> indices_of(Mask m);
Mask mask_of(const std::vector<std::size_t>& indices);

/// Degree first, then lexicographic on the sorted index tuples.
struct MaskLess {
  bool operator()(Mask a, Mask b) const;
};

/// Algebroid form with values in a trivialized bundle of rank m (m = 1 for scalar forms).
///
/// The coefficient of e^{a_1} ^ ... ^ e^{a_k} (a_1 < ... < a_k) is a vector of m scalars.
/// Forms need not be homogeneous: characteristic classes are sums over degrees.
class AlgForm {
 public:
  using Terms = std::map<Mask, std::vector<Scalar>, MaskLess>;

  AlgForm() = default;
  explicit AlgForm(AlgebroidPtr alg, std::size_t bundle_rank = 1);

  static AlgForm function(AlgebroidPtr alg, const Scalar& f);
  /// f e^{a_1} ^ ... ^ e^{a_k}; indices in any order, the sign of the sorting permutation is applied.
  static AlgForm basis(AlgebroidPtr alg, const std::vector<std::size_t>& indices, const Scalar& f = Scalar(1));
  /// e^1 ^ ... ^ e^r.
  static AlgForm top(AlgebroidPtr alg, const Scalar& f = Scalar(1));

  const AlgebroidPtr& algebroid() const { return alg_; }
  std::size_t bundle_rank() const { return m_; }
  const Terms& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  /// All nonzero terms share one degree (the zero form counts as homogeneous).
  bool is_homogeneous() const;
  /// Degree of a nonzero homogeneous form; throws otherwise.
  std::size_t degree() const;
  std::size_t max_degree() const;
  AlgForm component(std::size_t k) const;

  Scalar coefficient(Mask m, std::size_t comp = 0) const;
  void add(Mask m, std::size_t comp, const Scalar& value);
  void add(Mask m, const std::vector<Scalar>& values);

  AlgForm& operator+=(const AlgForm& rhs);
  AlgForm& operator-=(const AlgForm& rhs);
  friend AlgForm operator+(AlgForm a, const AlgForm& b) { return a += b; }
  friend AlgForm operator-(AlgForm a, const AlgForm& b) { return a -= b; }
  AlgForm operator-() const;
  friend AlgForm operator*(const Scalar& c, const AlgForm& a);
  friend bool operator==(const AlgForm& a, const AlgForm& b) { return (a - b).is_zero(); }

  /// Applies `fn` to every coefficient and drops the ones that become zero.
  AlgForm map(const std::function<Scalar(const Scalar&)>& fn) const;
  /// Zero test with numeric coefficients judged by sampling.
  bool vanishes() const;

  /// Serialization with 1-based labels, e.g. "(x)*e1^e2 + 3*e2^e3".
  std::string to_string() const;

 private:
  void check_compatible(const AlgForm& rhs) const;

  AlgebroidPtr alg_;
  std::size_t m_ = 1;
  Terms terms_;
};

/// Exterior product. One factor must be scalar valued.
AlgForm wedge(const AlgForm& a, const AlgForm& b);

class Connection;

/// Koszul differential. With no connection the bundle is trivial and flat.
AlgForm d(const AlgForm& w);
AlgForm d(const AlgForm& w, const Connection& conn);

/// (f, phi)^* w for a morphism whose target carries w.
AlgForm pullback_form(const Morphism& m, const AlgForm& w);

}  // namespace lalg
