// Acceptance checks; prints one PASS/FAIL line per criterion and exits non-zero on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "lalg/chern_weil.hpp"
#include "lalg/cohomology.hpp"
#include "lalg/error.hpp"
#include "lalg/groupoid.hpp"
#include "lalg/roots.hpp"
#include "lalg/thom_index.hpp"
#include "document.hpp"
#include "oracles.hpp"
#include "runner.hpp"

using namespace lalg;
using lalg::testing::Gen;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "failed: " << what << "; ";
    }
  }
};

Scalar q(long p, long r = 1) { return Scalar(Rational(p, r)); }
AlgForm one(const AlgebroidPtr& a) { return AlgForm::function(a, Scalar(1)); }

bool is_zero(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

std::string text(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// 1. Genus expansions on formal curvatures, against traces computed by the oracle.
void series_coefficients(Check& c) {
  Gen gen(1001);
  auto a = lalg::testing::abelian_lie_algebra(8);
  for (int trial = 0; trial < 2; ++trial) {
    FormMatrix R = gen.two_form_matrix(a, 3, false);
    AlgForm s1 = oracle::trace_power(R, 1), s2 = oracle::trace_power(R, 2);
    AlgForm c1 = s1, c2 = q(1, 2) * (wedge(s1, s1) - s2);
    c.expect(todd_class(R, 4) == one(a) + q(1, 2) * c1 + q(1, 12) * (c2 + wedge(c1, c1)), "Td");
    c.expect(chern_character(R, 4) == q(3) * one(a) + c1 + q(1, 2) * (wedge(c1, c1) - q(2) * c2), "ch");
  }
  FormMatrix R = gen.two_form_matrix(a, 4, true);
  AlgForm s2 = oracle::trace_power(R, 2), s4 = oracle::trace_power(R, 4);
  AlgForm p1 = q(1, 2) * s2, p2 = q(1, 8) * (wedge(s2, s2) - q(2) * s4);
  c.expect(!p2.is_zero(), "test curvature has p2 != 0");
  c.expect(l_genus(R, 8) == one(a) + q(1, 3) * p1 + q(1, 45) * (q(7) * p2 - wedge(p1, p1)), "L");
  c.expect(a_hat_genus(R, 8) == one(a) - q(1, 24) * p1 + q(1, 5760) * (q(7) * wedge(p1, p1) - q(4) * p2), "A-hat");
  c.detail << "Td, ch on 3x3, L, A-hat on 4x4 antisymmetric; rank-8 exterior algebra";
}

// 2. d^2 = 0 on full bases.
void d_squared(Check& c) {
  auto g = su2();
  std::vector<AlgebroidPtr> algs = {g, aff1(), tangent(2), so3_action(), pullback(g, 3)};
  std::size_t checked = 0;
  for (const auto& a : algs) {
    std::size_t n = a->base_dim();
    Scalar bump(1);
    for (std::size_t i = 0; i < n; ++i) bump = bump * (Scalar::variable(n, i) + Scalar(static_cast<long>(i + 1)));
    for (std::size_t k = 0; k <= a->rank(); ++k)
      for (const auto& b : form_basis(a, k)) {
        c.expect(d(d(b)).is_zero(), a->name() + " basis form");
        if (n > 0) c.expect(d(d(bump * b)).is_zero(), a->name() + " basis form with coefficient");
        ++checked;
      }
  }
  std::size_t groupoid_checks = 0;
  for (const auto& G : {FiniteGroupoid::pair(3), FiniteGroupoid::cyclic(2)}) {
    FiniteRep E = FiniteRep::trivial(G);
    for (std::size_t k = 0; k < 4; ++k, ++groupoid_checks)
      c.expect(is_zero(groupoid_differential(G, E, k + 1) * groupoid_differential(G, E, k)), "groupoid d^2");
  }
  c.detail << checked << " basis forms, " << groupoid_checks << " groupoid degrees";
}

// 3. Lie algebra cohomology, with the brute-force oracle on the raw differential.
void lie_cohomology(Check& c) {
  struct Case {
    AlgebroidPtr g;
    std::vector<std::size_t> expected;
  };
  for (const auto& [g, expected] : {Case{lalg::testing::abelian_lie_algebra(3), {1, 3, 3, 1}},
                                    Case{su2(), {1, 0, 0, 1}}, Case{aff1(), {1, 1, 0}}}) {
    auto oracle_b = oracle::lie_betti(*g);
    auto b = betti_numbers(Representation::trivial(g));
    c.expect(oracle_b == expected, "oracle on " + g->name());
    c.expect(b == expected, "library on " + g->name());
    c.detail << g->name() << " " << text(b) << " ";
  }
}

// 4. Pf^2 = det for Levi-Civita curvatures of random constant metrics.
void pfaffian_square(Check& c) {
  Gen gen(1004);
  std::size_t nonzero = 0, cases = 0;
  for (const auto& a : {aff1(), product(aff1(), aff1())})
    for (int trial = 0; trial < 3; ++trial, ++cases) {
      Metric g(gen.spd(a->rank()));
      FormMatrix lowered = oracle::lower(g.matrix(), curvature(levi_civita(a, g)));
      Matrix<Poly> P = commuting_image(lowered);
      Poly zero(0), unit(0, Rational(1));
      Poly pf = pfaffian_of(P, zero, unit);
      Poly det = oracle::leibniz_det(P, zero);
      c.expect(pf * pf == det, "Pf^2 = det on " + a->name());
      c.expect(form_of_commuting(a, pf) == pfaffian(lowered), "Pf form on " + a->name());
      if (!det.is_zero()) ++nonzero;
    }
  c.expect(nonzero > 0, "some determinant is nonzero");
  c.detail << cases << " metrics on ranks 2 and 4, " << nonzero << " with nonzero determinant";
}

// 5. Roots identities.
void roots(Check& c) {
  for (auto id : {RootsIdentity::gauss_bonnet, RootsIdentity::signature, RootsIdentity::dirac})
    for (std::size_t p = 1; p <= 2; ++p) {
      auto r = roots_identity(id, p, 8);
      c.expect(r.fitted && r.residual.is_zero(), roots_identity_token(id) + " p=" + std::to_string(p));
      c.detail << roots_identity_token(id) << "(p=" << p << "): lhs = " << (r.sign < 0 ? "-" : "") << "2^"
               << r.power_of_two << " rhs(x/2^" << r.argument_scale << "); ";
    }
}

// 6. Gauss-Bonnet on the torus and sphere charts.
void gauss_bonnet(Check& c) {
  long chi_sphere = oracle::euler_characteristic(oracle::octahedron());
  long chi_sphere2 = oracle::euler_characteristic(oracle::icosahedron());
  long chi_torus = oracle::euler_characteristic(oracle::torus7());
  c.expect(chi_sphere == 2 && chi_sphere2 == 2 && chi_torus == 0, "triangulation oracle");

  auto t = tangent(2);
  auto torus = index_euler(t, Metric::identity(2), {t, Scalar(1)}, Domain::box({0, 0}, {1, 1}));
  c.expect(torus.integral.is_exact() && *torus.integral.exact_raw == Rational(chi_torus), "torus exact");

  auto s = sphere_orthonormal();
  std::vector<std::string> xy = {"x", "y"};
  Density om{s, parse_scalar("4/(1+x^2+y^2)^2", xy)};
  auto sphere = index_euler(s, Metric::identity(2), om, Domain::plane());
  double v = sphere.integral.value.real();
  c.expect(std::abs(v - static_cast<double>(chi_sphere)) <= 1e-6, "sphere within 1e-6");
  c.detail.precision(15);
  c.detail << "torus " << to_string(*torus.integral.exact_raw) << ", sphere " << v << " +- " << sphere.integral.error
           << " (" << sphere.integral.evaluations << " evaluations), triangulations " << chi_sphere << "/"
           << chi_sphere2 << "/" << chi_torus;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 7. Base integral against the Thom-mapped integral on every bundled document.
void thom_compatibility(Check& c) {
  std::size_t exact = 0, numeric = 0;
  for (const auto& entry : std::filesystem::directory_iterator(LALG_JOBS_DIR)) {
    cli::RunOptions opts;
    opts.command = "thom-check";
    opts.json = true;
    cli::RunOutput out = cli::run(slurp(entry.path()), opts);
    if (out.exit_code == 2) {
      c.expect(false, entry.path().filename().string() + " did not parse");
      continue;
    }
    auto doc = cli::json::parse(out.out);
    for (const auto& r : doc["results"]) {
      std::string name = entry.path().stem().string();
      c.expect(r["status"] == "ok" && r["agree"] == true, name);
      bool is_exact = r["base_integral"].contains("exact") && r["total_integral"].contains("exact");
      if (is_exact) {
        c.expect(r["base_integral"]["exact"] == r["total_integral"]["exact"], name + " exact");
        ++exact;
      } else {
        double diff = std::abs(r["base_integral"]["value"].template get<double>() - r["total_integral"]["value"].template get<double>());
        c.expect(diff <= 1e-9, name + " within 1e-9");
        ++numeric;
      }
    }
  }
  c.expect(exact > 0 && numeric > 0, "both exact and numeric cases present");
  c.detail << exact << " exact, " << numeric << " numeric comparisons";
}

// 8. Unimodularity.
void unimodularity(Check& c) {
  c.expect(modular_cocycle({su2(), Scalar(1)}).is_zero(), "su(2)");
  for (std::size_t n = 1; n <= 4; ++n)
    c.expect(modular_cocycle({tangent(n), Scalar(1)}).is_zero(), "tangent(" + std::to_string(n) + ")");
  auto g = aff1();
  AlgForm theta = modular_cocycle({g, Scalar(1)});
  c.expect(theta == AlgForm::basis(g, {0}), "aff(1) gives e1");
  bool rejected = false;
  try {
    integrate(AlgForm::top(g), {g, Scalar(1)}, Domain::point());
  } catch (const InvariantError&) {
    rejected = true;
  }
  c.expect(rejected, "integrate rejects aff(1)");
  c.detail << "aff(1) cocycle " << theta.to_string();
}

// 9. Flat bundles are seen only through their rank.
void rank_only(Check& c) {
  auto rep = Representation::adjoint(su2());
  AlgForm ch = char_class(rep.connection(), parse_class("ch"), 3);
  for (std::size_t k = 1; k <= 3; ++k) c.expect(ch.component(k).is_zero(), "ch degree " + std::to_string(k));
  c.expect(ch.component(0) == q(3) * one(su2()), "ch degree 0 is the rank");

  auto t = tangent(2);
  AlgForm nu = AlgForm::top(t, Scalar::variable(2, 0) * Scalar::variable(2, 1) + Scalar(1));
  std::vector<Rational> values;
  for (std::size_t m = 1; m <= 3; ++m) {
    std::vector<ScalarMatrix> gamma(2, ScalarMatrix(m, m, Scalar(0)));
    for (std::size_t i = 0; i < m; ++i) {
      gamma[0](i, i) = Scalar(static_cast<long>(i + 1));
      gamma[1](i, i) = Scalar(Rational(-1, static_cast<long>(i + 2)));
    }
    Connection flat(t, m, gamma);
    c.expect(flat.is_flat(), "flat twisting bundle");
    AlgForm chm = chern_character(curvature(flat), 2);
    c.expect(chm.component(2).is_zero(), "ch positive degree vanishes for rank " + std::to_string(m));
    auto r = index_dirac(t, Metric::identity(2), flat, nu, {t, Scalar(1)}, Domain::box({0, 0}, {1, 1}));
    c.expect(r.integral.is_exact(), "Dirac integral exact");
    if (r.integral.is_exact()) values.push_back(*r.integral.exact_raw);
  }
  if (values.size() == 3) {
    c.expect(values[1] == 2 * values[0] && values[2] == 3 * values[0] && values[0] != 0, "linear in rank");
    c.detail << "Dirac values " << to_string(values[0]) << ", " << to_string(values[1]) << ", "
             << to_string(values[2]);
  }
}

// 10. Convolution algebra of the pair groupoid.
void convolution(Check& c) {
  auto G = FiniteGroupoid::pair(3);
  for (std::size_t g = 0; g < 9; ++g)
    for (std::size_t h = 0; h < 9; ++h) {
      auto prod = convolve(G, delta(G, g), delta(G, h));
      // E_ab E_cd = [b = c] E_ad
      std::size_t a = g / 3, b = g % 3, cc = h / 3, dd = h % 3;
      ArrowFunction expected = b == cc ? delta(G, a * 3 + dd) : ArrowFunction(9, Rational(0));
      c.expect(prod == expected, "matrix unit product");
    }
  Gen gen(1010);
  std::vector<Rational> w = {1, 1, 1};
  for (int trial = 0; trial < 10; ++trial) {
    auto f1 = gen.rationals(9), f2 = gen.rationals(9);
    auto h = convolve(G, f1, f2);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        Rational s = 0;
        for (std::size_t k = 0; k < 3; ++k) s += f1[a * 3 + k] * f2[k * 3 + b];
        c.expect(h[a * 3 + b] == s, "random matrix product");
      }
    c.expect(trace(G, convolve(G, f1, f2), w) == trace(G, convolve(G, f2, f1), w), "trace cyclicity");
  }
  std::vector<Rational> bad_w = {1, 2, 3};
  auto bad = trace_counterexample(G, bad_w);
  c.expect(bad.has_value() && bad->forward != bad->backward, "counterexample exhibited");
  bool rejected = false;
  try {
    trace(G, delta(G, 0), bad_w);
  } catch (const InvariantError&) {
    rejected = true;
  }
  c.expect(rejected, "non-invariant weights rejected");
  if (bad)
    c.detail << "counterexample delta_" << G.arrow_name(bad->arrow) << ", delta_" << G.arrow_name(G.inverse(bad->arrow))
             << ": " << to_string(bad->forward) << " vs " << to_string(bad->backward);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 means no runtime bound
    std::function<void(Check&)> run;
  };
  std::vector<Criterion> criteria = {
      {1, "genus series coefficients", 1, series_coefficients},
      {2, "d^2 = 0", 10, d_squared},
      {3, "Lie algebra cohomology", 0, lie_cohomology},
      {4, "Pf^2 = det", 0, pfaffian_square},
      {5, "roots identities", 5, roots},
      {6, "Gauss-Bonnet on torus and sphere", 30, gauss_bonnet},
      {7, "Thom compatibility", 0, thom_compatibility},
      {8, "unimodularity", 0, unimodularity},
      {9, "flat bundles detect only rank", 0, rank_only},
      {10, "pair groupoid convolution algebra", 0, convolution},
  };
  int failures = 0;
  for (auto& cr : criteria) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail << "exception: " << e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_seconds > 0 && seconds > cr.limit_seconds) {
      c.pass = false;
      c.detail << "; over the " << cr.limit_seconds << " s budget";
    }
    if (!c.pass) ++failures;
    std::printf("criterion %2d: %s  %s [%.3f s] %s\n", cr.id, c.pass ? "PASS" : "FAIL", cr.name, seconds,
                c.detail.str().c_str());
  }
  return failures == 0 ? 0 : 1;
}
