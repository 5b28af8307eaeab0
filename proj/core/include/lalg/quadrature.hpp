#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lalg {

using Integrand = std::function<double(std::span<const double>)>;

struct QuadratureOptions {
  double tolerance = 1e-9;        // absolute, on the summed error estimate
  std::size_t budget = 4'000'000;  // integrand evaluations
  bool parallel = false;
};

struct QuadratureResult {
  double value = 0;
  double error = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Adaptive tensor Gauss-Kronrod (7, 15) cubature on the box [lo, hi].
///
/// The box with the largest error estimate is bisected along its longest edge until the
/// summed estimate drops below the tolerance or the budget runs out. Boxes are summed in
/// creation order, so results are identical with and without `parallel`.
QuadratureResult integrate_box(const Integrand& f, std::vector<double> lo, std::vector<double> hi,
                               const QuadratureOptions& opts = {});

/// Integral over all of R^n, through x = u / (1 - u^2) on (-1, 1)^n in every coordinate.
QuadratureResult integrate_plane(const Integrand& f, std::size_t n, const QuadratureOptions& opts = {});

}  // namespace lalg
