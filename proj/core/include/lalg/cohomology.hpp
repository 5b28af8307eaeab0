#pragma once

#include <optional>
#include <vector>

#include "lalg/connection.hpp"
#include "lalg/form.hpp"

namespace lalg {

/// Basis of k-forms with values in a rank m bundle: e^I tensor s_i, I in MaskLess order, i inner.
std::vector<AlgForm> form_basis(const AlgebroidPtr& alg, std::size_t k, std::size_t bundle_rank = 1);

/// Matrix of d: Omega^k -> Omega^{k+1} in the bases of form_basis. Constant case only.
RationalMatrix differential_matrix(const Representation& rep, std::size_t k);

/// b_0..b_r of a Lie algebra with a constant representation, by exact rank computation.
/// Throws DomainError when the base has positive dimension or a coefficient is not constant.
std::vector<std::size_t> betti_numbers(const Representation& rep);

bool is_cocycle(const AlgForm& w);
bool is_cocycle(const AlgForm& w, const Representation& rep);

enum class PrimitiveStatus { found, not_exact, not_found_within_ansatz };

struct PrimitiveResult {
  PrimitiveStatus status;
  std::optional<AlgForm> primitive;
};

/// Looks for eta with d eta = w. On a point base the answer is decided exactly. On a chart
/// the search runs over forms whose coefficients are polynomials of degree <= ansatz_degree,
/// and a miss is reported as not_found_within_ansatz.
PrimitiveResult find_primitive(const AlgForm& w, const Representation& rep, std::size_t ansatz_degree = 2);
PrimitiveResult find_primitive(const AlgForm& w, std::size_t ansatz_degree = 2);

}  // namespace lalg
