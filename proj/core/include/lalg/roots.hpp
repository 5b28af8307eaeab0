#pragma once

#include <string>

#include "lalg/poly.hpp"
#include "lalg/series.hpp"

namespace lalg {

enum class RootsIdentity { gauss_bonnet, signature, dirac };

RootsIdentity parse_roots_identity(const std::string& token);
std::string roots_identity_token(RootsIdentity id);

/// Both sides of a genus identity in formal roots x_1..x_p, and the normalization that
/// relates them: lhs = sign * 2^power_of_two * rhs(x / 2^argument_scale).
struct RootsResult {
  Poly lhs, rhs, residual;
  int sign = 1;
  int power_of_two = 0;
  int argument_scale = 0;
  bool fitted = false;
};

/// Expands the quotient of the Euler-complex, signature-complex or spinor character by the
/// Euler class, times the Todd class of the complexification (roots +-x_j), and compares it
/// with the Euler class, the L genus or the A-hat genus. `truncation` is a form degree:
/// polynomials are kept up to total x-degree truncation / 2.
RootsResult roots_identity(RootsIdentity id, std::size_t half_rank, std::size_t truncation);

/// sum_k s[k] x_var^k in a ring of nvars variables, cut at degree `degree`.
Poly series_in(const Series& s, std::size_t nvars, std::size_t var, std::size_t degree);
/// Drops terms of total degree above `degree`.
Poly truncate_degree(const Poly& p, std::size_t degree);

}  // namespace lalg
