#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lalg/linear.hpp"

namespace lalg {

/// Finite groupoid with arrows 0..N-1 over objects 0..M-1.
///
/// Composition is diagrammatic: mul(g, h) is "g then h" and is defined exactly when
/// t(g) = s(h); it runs from s(g) to t(h).
class FiniteGroupoid {
 public:
  /// `table[g][h]` is mul(g, h), or -1 when the pair is not composable. Units and inverses
  /// are derived from the table. Throws InvariantError when an axiom fails.
  FiniteGroupoid(std::size_t objects, std::vector<std::size_t> source, std::vector<std::size_t> target,
                 std::vector<std::vector<long>> table, std::vector<std::string> arrow_names = {});

  /// Every ordered pair (a, b) as one arrow a -> b, numbered a * n + b.
  static FiniteGroupoid pair(std::size_t n);
  /// A group over one object from its multiplication table.
  static FiniteGroupoid group(const std::vector<std::vector<std::size_t>>& table);
  static FiniteGroupoid cyclic(std::size_t n);
  static FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b);

  std::size_t objects() const { return objects_; }
  std::size_t arrows() const { return source_.size(); }
  std::size_t source(std::size_t g) const { return source_.at(g); }
  std::size_t target(std::size_t g) const { return target_.at(g); }
  std::size_t unit(std::size_t x) const { return unit_.at(x); }
  std::size_t inverse(std::size_t g) const { return inverse_.at(g); }
  std::optional<std::size_t> mul(std::size_t g, std::size_t h) const;
  const std::string& arrow_name(std::size_t g) const { return names_.at(g); }

  /// Connected components as an object -> orbit label map, labels in order of first object.
  std::vector<std::size_t> orbits() const;
  std::size_t orbit_count() const;

 private:
  std::size_t objects_;
  std::vector<std::size_t> source_, target_, unit_, inverse_;
  std::vector<std::vector<long>> table_;
  std::vector<std::string> names_;
};

/// lambda_g : E_{s(g)} -> E_{t(g)}, with lambda_{mul(g, h)} = lambda_h lambda_g.
struct FiniteRep {
  std::vector<std::size_t> dims;
  std::vector<RationalMatrix> lambda;

  static FiniteRep trivial(const FiniteGroupoid& G, std::size_t dim = 1);
};

/// Empty on success, otherwise one line per failed axiom.
std::vector<std::string> validate_rep(const FiniteGroupoid& G, const FiniteRep& E);

/// Composable k-tuples (g_1, ..., g_k) with s(g_i) = t(g_{i+1}); for k = 0 the objects.
std::vector<std::vector<std::size_t>> nerve(const FiniteGroupoid& G, std::size_t k);

/// d : C^k -> C^{k+1}, with C^k the E_{t(g_1)}-valued functions on the k-nerve.
RationalMatrix groupoid_differential(const FiniteGroupoid& G, const FiniteRep& E, std::size_t k);

/// b_0..b_max_degree. Throws InvariantError when E is not a representation.
std::vector<std::size_t> groupoid_betti(const FiniteGroupoid& G, const FiniteRep& E, std::size_t max_degree);

using ArrowFunction = std::vector<Rational>;

/// (f1 * f2)(g) = sum over h with t(h) = t(g) of f1(g h^-1) f2(h).
ArrowFunction convolve(const FiniteGroupoid& G, const ArrowFunction& f1, const ArrowFunction& f2);
ArrowFunction unit_function(const FiniteGroupoid& G);
ArrowFunction delta(const FiniteGroupoid& G, std::size_t g);

/// f1 = delta_g, f2 = delta_{g^-1} with tau(f1 * f2) != tau(f2 * f1).
struct TraceCounterexample {
  std::size_t arrow;
  Rational forward, backward;
};

/// Some pair that breaks cyclicity, when the weights are not constant on orbits.
std::optional<TraceCounterexample> trace_counterexample(const FiniteGroupoid& G, const std::vector<Rational>& weights);

/// tau(f) = sum_x f(u(x)) weights(x). Throws InvariantError, naming a counterexample,
/// when the weights are not orbit-constant, and DomainError when one is not positive.
Rational trace(const FiniteGroupoid& G, const ArrowFunction& f, const std::vector<Rational>& weights);

}  // namespace lalg
