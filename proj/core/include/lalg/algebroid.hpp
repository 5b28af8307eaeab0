#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lalg/linear.hpp"
#include "lalg/scalar.hpp"

namespace lalg {

/// One failed identity. Indices are 1-based frame (or coordinate) labels.
struct Violation {
  std::string kind;  // antisymmetry, anchor, jacobi, anchor-compatibility, bracket-compatibility
  std::vector<std::size_t> indices;
  std::string component;  // name of the coordinate or frame element the residual lives on
  Scalar residual;
  std::string residual_text;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string to_string() const;
};

/// A Lie algebroid over a single chart, presented in a global frame e_1..e_r.
///
/// The anchor is stored as the r x n matrix rho(a, i) with rho(e_a) = sum_i rho(a, i) d/dx_i,
/// and structure functions C^c_ab for a < b only, so antisymmetry holds by construction.
/// All indices in this API are 0-based.
class Algebroid {
 public:
  Algebroid(std::size_t base_dim, std::size_t rank, std::vector<std::string> coordinates = {});

  std::size_t base_dim() const { return n_; }
  std::size_t rank() const { return r_; }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const Scalar& anchor(std::size_t a, std::size_t i) const { return anchor_(a, i); }
  void set_anchor(std::size_t a, std::size_t i, Scalar value);

  /// C^c_ab with the sign of the requested order.
  Scalar structure(std::size_t c, std::size_t a, std::size_t b) const;
  /// Sets C^c_ab (and implicitly C^c_ba = -C^c_ab). A conflicting second assignment
  /// of the same pair, or a nonzero diagonal value, is kept as an antisymmetry defect.
  void set_structure(std::size_t a, std::size_t b, std::size_t c, Scalar value);
  bool has_structure() const;

  /// rho(e_a)(f).
  Scalar anchor_derivative(std::size_t a, const Scalar& f) const;

  ValidationReport validate() const;

 private:
  std::size_t pair_index(std::size_t a, std::size_t b) const;
  void check_frame(std::size_t a) const;

  std::size_t n_, r_;
  std::vector<std::string> coords_;
  std::string name_;
  ScalarMatrix anchor_;
  std::vector<Scalar> structure_;  // [pair_index(a, b) * r + c], a < b
  std::vector<bool> assigned_;
  std::vector<Violation> defects_;
};

using AlgebroidPtr = std::shared_ptr<const Algebroid>;

struct StructureEntry {
  std::size_t a, b, c;  // [e_a, e_b] contains value * e_c
  Scalar value;
};

/// Throws InvariantError carrying the report when `alg` does not validate.
AlgebroidPtr checked(Algebroid alg);

AlgebroidPtr tangent(std::size_t n);
AlgebroidPtr lie_algebra(std::size_t dim, const std::vector<StructureEntry>& constants);
/// Lie algebra acting on a chart through vector fields: fields[a][i] is the d/dx_i
/// component of the image of e_a.
AlgebroidPtr action(std::size_t dim, const std::vector<StructureEntry>& constants, std::size_t base_dim,
                    const std::vector<std::vector<Scalar>>& fields, std::vector<std::string> coordinates = {});
AlgebroidPtr abelian_bundle(std::size_t n, std::size_t r);

/// Direct product over the product chart; frames and coordinates are concatenated.
AlgebroidPtr product(const AlgebroidPtr& a, const AlgebroidPtr& b);
/// Pull-back along the trivial fibration chart x R^m -> chart. The frame is the
/// horizontal lifts h_1..h_r followed by the vertical fields v_1..v_m, coordinates (x, u).
AlgebroidPtr pullback(const AlgebroidPtr& a, std::size_t fiber_dim);
/// Relabels frame element a as frame_perm[a] and coordinate i as coord_perm[i].
AlgebroidPtr permute(const AlgebroidPtr& a, const std::vector<std::size_t>& frame_perm,
                     const std::vector<std::size_t>& coord_perm);

AlgebroidPtr su2();
AlgebroidPtr aff1();
/// so(3) acting on R^3 by infinitesimal rotations.
AlgebroidPtr so3_action();
/// so(2) rotating the plane.
AlgebroidPtr so2_action();
/// Tangent algebroid of the round sphere in the stereographic chart, orthonormal frame.
AlgebroidPtr sphere_orthonormal();

/// (f, phi): f gives the target coordinates as functions of the source coordinates and
/// bundle_map(b, a) is the e'_b component of phi(e_a).
struct Morphism {
  AlgebroidPtr source, target;
  std::vector<Scalar> base_map;
  ScalarMatrix bundle_map;
};

ValidationReport validate_morphism(const Morphism& m);

Morphism identity_morphism(const AlgebroidPtr& a);
/// The anchor as a morphism into the tangent algebroid over the identity.
Morphism anchor_morphism(const AlgebroidPtr& a);
/// x -> (x, 0), e_a -> h_a, into pullback(a, m).
Morphism zero_section(const AlgebroidPtr& a, const AlgebroidPtr& pulled);
/// u -> (x0, u), d/du_j -> v_j, from tangent(m) into pullback(a, m).
Morphism fiber_inclusion(const AlgebroidPtr& a, const AlgebroidPtr& pulled, const std::vector<Rational>& point);
/// (x, u) -> x, h_a -> e_a, v_j -> 0.
Morphism projection(const AlgebroidPtr& a, const AlgebroidPtr& pulled);

}  // namespace lalg
