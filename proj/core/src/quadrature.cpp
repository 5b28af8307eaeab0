#include "lalg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <queue>

#include "lalg/error.hpp"

namespace lalg {

namespace {

// Kronrod nodes on [0, 1] of [-1, 1] (symmetric); odd positions are the Gauss nodes.
constexpr double kNodes[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                              0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                              0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                              0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrod[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGauss[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule {
  double x[15], k[15], g[15];
};

const Rule& rule() {
  static const Rule r = [] {
    Rule out{};
    for (int i = 0; i < 15; ++i) {
      int j = i < 8 ? i : 14 - i;
      out.x[i] = i < 8 ? -kNodes[j] : kNodes[j];
      out.k[i] = kKronrod[j];
      out.g[i] = (j % 2 == 1) ? kGauss[j / 2] : 0.0;
    }
    return out;
  }();
  return r;
}

struct Cell {
  std::vector<double> lo, hi;
  double kronrod = 0, gauss = 0, error = 0;
  std::size_t id = 0;
};

void evaluate(const Integrand& f, Cell& c) {
  const Rule& R = rule();
  std::size_t n = c.lo.size();
  std::vector<double> mid(n), half(n), pt(n);
  double vol = 1;
  for (std::size_t i = 0; i < n; ++i) {
    mid[i] = 0.5 * (c.lo[i] + c.hi[i]);
    half[i] = 0.5 * (c.hi[i] - c.lo[i]);
    vol *= half[i];
  }
  std::vector<int> idx(n, 0);
  double K = 0, G = 0;
  while (true) {
    double wk = 1, wg = 1;
    for (std::size_t i = 0; i < n; ++i) {
      pt[i] = mid[i] + half[i] * R.x[idx[i]];
      wk *= R.k[idx[i]];
      wg *= R.g[idx[i]];
    }
    double v = f(pt);
    if (!std::isfinite(v)) throw DomainError("integrand is not finite inside the domain");
    K += wk * v;
    G += wg * v;
    std::size_t i = 0;
    while (i < n && ++idx[i] == 15) idx[i++] = 0;
    if (i == n) break;
  }
  c.kronrod = K * vol;
  c.gauss = G * vol;
  c.error = std::abs(c.kronrod - c.gauss);
}

std::size_t points_per_cell(std::size_t n) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < n; ++i) p *= 15;
  return p;
}

struct WorseFirst {
  bool operator()(const Cell* a, const Cell* b) const {
    if (a->error != b->error) return a->error < b->error;
    return a->id > b->id;
  }
};

}  // namespace

QuadratureResult integrate_box(const Integrand& f, std::vector<double> lo, std::vector<double> hi,
                               const QuadratureOptions& opts) {
  if (lo.size() != hi.size()) throw DimensionError("box bounds of different dimension");
  std::size_t n = lo.size();
  QuadratureResult res;
  if (n == 0) {
    res.value = f(std::span<const double>{});
    res.evaluations = 1;
    res.converged = true;
    return res;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(lo[i] <= hi[i])) throw DomainError("box has a lower bound above its upper bound");
  std::size_t per = points_per_cell(n);
  std::vector<std::unique_ptr<Cell>> cells;
  std::vector<bool> leaf;
  auto make = [&](std::vector<double> a, std::vector<double> b) {
    auto c = std::make_unique<Cell>();
    c->lo = std::move(a);
    c->hi = std::move(b);
    c->id = cells.size();
    cells.push_back(std::move(c));
    leaf.push_back(true);
    return cells.back().get();
  };
  Cell* root = make(std::move(lo), std::move(hi));
  evaluate(f, *root);
  res.evaluations = per;
  std::priority_queue<Cell*, std::vector<Cell*>, WorseFirst> queue;
  queue.push(root);
  double total_error = root->error;
  while (total_error > opts.tolerance && res.evaluations + 2 * per <= opts.budget) {
    Cell* worst = queue.top();
    queue.pop();
    std::size_t axis = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (worst->hi[i] - worst->lo[i] > worst->hi[axis] - worst->lo[axis]) axis = i;
    double cut = 0.5 * (worst->lo[axis] + worst->hi[axis]);
    std::vector<double> hi1 = worst->hi, lo2 = worst->lo;
    hi1[axis] = cut;
    lo2[axis] = cut;
    Cell* a = make(worst->lo, hi1);
    Cell* b = make(lo2, worst->hi);
    if (opts.parallel) {
      auto fa = std::async(std::launch::async, [&] { evaluate(f, *a); });
      evaluate(f, *b);
      fa.get();
    } else {
      evaluate(f, *a);
      evaluate(f, *b);
    }
    leaf[worst->id] = false;
    res.evaluations += 2 * per;
    total_error += a->error + b->error - worst->error;
    queue.push(a);
    queue.push(b);
  }
  // Re-sum in creation order for a schedule independent result.
  res.value = 0;
  res.error = 0;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (leaf[i]) {
      res.value += cells[i]->kronrod;
      res.error += cells[i]->error;
    }
  res.converged = res.error <= opts.tolerance;
  return res;
}

QuadratureResult integrate_plane(const Integrand& f, std::size_t n, const QuadratureOptions& opts) {
  Integrand mapped = [&f, n](std::span<const double> u) {
    std::vector<double> x(n);
    double jac = 1;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 1 - u[i] * u[i];
      x[i] = u[i] / s;
      jac *= (1 + u[i] * u[i]) / (s * s);
    }
    double v = f(x);
    return v == 0 ? 0.0 : v * jac;
  };
  return integrate_box(mapped, std::vector<double>(n, -1.0), std::vector<double>(n, 1.0), opts);
}

}  // namespace lalg
