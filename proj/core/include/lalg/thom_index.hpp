#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "lalg/chern_weil.hpp"
#include "lalg/quadrature.hpp"

namespace lalg {

/// Section omega (e_1 ^ ... ^ e_r) (x) (dx^1 ^ ... ^ dx^n) of the density line bundle.
struct Density {
  AlgebroidPtr algebroid;
  Scalar omega;
};

/// theta(e_a) = rho(e_a)(omega) / omega + sum_b C^b_ab + div rho(e_a). Throws DomainError
/// when omega vanishes at a sample point.
AlgForm modular_cocycle(const Density& density);
bool is_invariant(const Density& density);

struct Domain {
  enum class Kind { point, box, plane };
  Kind kind = Kind::point;
  std::vector<Rational> lo, hi;  // box only

  static Domain point() { return {}; }
  static Domain box(std::vector<Rational> lo, std::vector<Rational> hi) {
    return {Kind::box, std::move(lo), std::move(hi)};
  }
  static Domain plane() { return {Kind::plane, {}, {}}; }
};

/// The result is raw / ((2 pi)^pi_power (sqrt -1)^i_power).
struct Normalization {
  std::size_t pi_power = 0;
  std::size_t i_power = 0;
};

struct IntegralResult {
  std::complex<double> value;
  /// Raw integral before normalization, when it was computed exactly.
  std::optional<Rational> exact_raw;
  Normalization normalization;
  double error = 0;
  std::size_t evaluations = 0;
  bool converged = true;

  bool is_exact() const { return exact_raw.has_value(); }
  /// "2", "4/(2*pi)", or a decimal for numeric results.
  std::string to_string() const;
};

/// Integral of <alpha, Omega> for a top-degree alpha. Exact on a point and on a box with
/// polynomial integrand, adaptive cubature otherwise. Throws InvariantError for a
/// non-invariant density, and Error when the cubature misses the tolerance.
IntegralResult integrate(const AlgForm& alpha, const Density& density, const Domain& domain, Normalization norm = {},
                         const QuadratureOptions& opts = {});

/// Pull-back algebroid over the dual bundle (fiber coordinates u_a) with frame h_1..h_r, v_1..v_r.
struct CotangentModel {
  AlgebroidPtr base;
  AlgebroidPtr total;
};
CotangentModel cotangent_model(const AlgebroidPtr& a);

struct SymplecticForm {
  CotangentModel model;
  AlgForm theta;
  /// Top coefficient of theta^r / r! on h_1 ^ ... ^ h_r ^ v_1 ^ ... ^ v_r.
  Scalar liouville;
  bool closed = false;
  bool nondegenerate = false;
};

/// Theta = -d(sum_a u_a h^a) = sum_a h^a ^ v^a + Lie-Poisson terms in the fiber coordinates.
SymplecticForm symplectic_form(const AlgebroidPtr& a);

enum class Orientation { positive, negative, none };

/// free + coefficient ^ Th on a pull-back algebroid whose last `fiber_rank` frame elements
/// are vertical. Th is the formal compactly supported fiber generator with integral 1
/// over each fiber oriented by the symplectic form.
struct ThomForm {
  AlgebroidPtr total;
  std::size_t fiber_rank = 0;
  AlgForm free;
  AlgForm coefficient;

  friend ThomForm operator+(const ThomForm& a, const ThomForm& b);
  friend bool operator==(const ThomForm& a, const ThomForm& b);
};

/// Removes coefficient terms that contain a vertical index (they vanish against Th).
ThomForm normalized(ThomForm t);
ThomForm thom_product(const ThomForm& a, const ThomForm& b);

/// +-1 * Th on the pull-back of `a` by a rank-m trivial bundle. Orientation::none throws.
ThomForm thom_class(const AlgebroidPtr& a, const AlgebroidPtr& total, Orientation orientation);
/// alpha -> pi^* alpha ^ Th.
ThomForm thom_map(const AlgForm& alpha, const AlgebroidPtr& total, Orientation orientation = Orientation::positive);
/// Integration along the fibers, landing on `base`.
AlgForm fiber_integrate(const ThomForm& t, const AlgebroidPtr& base);
/// Pull-back along a morphism between pull-back algebroids. Th goes to sign(det) Th where
/// det is the vertical block of the bundle map; the block must be constant and invertible,
/// and the morphism must not send vertical frame elements to horizontal ones.
ThomForm pullback_thom(const Morphism& m, const ThomForm& t, std::size_t source_fiber_rank);
/// Restriction to the zero section, with Th replaced by the given Euler form.
AlgForm zero_section_pullback(const ThomForm& t, const AlgebroidPtr& base, const AlgForm& euler);

/// Integral over the total space against Theta^r / r! (x) pi^* Omega.
IntegralResult total_space_integral(const ThomForm& t, const SymplecticForm& sym, const Density& density,
                                    const Domain& domain, Normalization norm = {}, const QuadratureOptions& opts = {});

/// Pf of the Levi-Civita curvature; zero in odd rank.
AlgForm euler_class(const AlgebroidPtr& a, const Metric& g);

struct IndexResult {
  IntegralResult integral;
  std::vector<std::string> notes;
};

/// Euler form integrated against Omega, normalized by (2 pi)^{r/2}.
IndexResult index_euler(const AlgebroidPtr& a, const Metric& g, const Density& density, const Domain& domain,
                        const QuadratureOptions& opts = {});
/// nu ^ L, normalized by (2 pi sqrt -1)^k with k = (r - deg nu) / 2.
IndexResult index_signature(const AlgebroidPtr& a, const Metric& g, const AlgForm& nu, const Density& density,
                            const Domain& domain, const QuadratureOptions& opts = {});
/// nu ^ A-hat ^ ch(E).
IndexResult index_dirac(const AlgebroidPtr& a, const Metric& g, const Connection& bundle, const AlgForm& nu,
                        const Density& density, const Domain& domain, const QuadratureOptions& opts = {});

enum class SymbolKind { euler_complex, signature_complex, spinor, other };

SymbolKind parse_symbol(const std::string& token);

/// Dispatches to the evaluator whose Euler-class division is settled by a roots identity.
/// SymbolKind::other throws DomainError naming what would be needed.
IndexResult index_general(SymbolKind symbol, const AlgebroidPtr& a, const Metric& g, const Connection* bundle,
                          const AlgForm& nu, const Density& density, const Domain& domain,
                          const QuadratureOptions& opts = {});

}  // namespace lalg
