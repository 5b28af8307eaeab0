#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "lalg/error.hpp"
#include "lalg/quadrature.hpp"
#include "lalg/thom_index.hpp"

using namespace lalg;
using lalg::testing::Gen;

namespace {

const std::vector<std::string> xy = {"x", "y"};

Density sphere_density() { return {sphere_orthonormal(), parse_scalar("4/(1+x^2+y^2)^2", xy)}; }

}  // namespace

TEST(Modular, UnimodularExamples) {
  EXPECT_TRUE(modular_cocycle({su2(), Scalar(1)}).is_zero());
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_TRUE(modular_cocycle({tangent(n), Scalar(1)}).is_zero());
  EXPECT_TRUE(modular_cocycle(sphere_density()).vanishes());
  EXPECT_TRUE(modular_cocycle({so3_action(), Scalar(1)}).is_zero());
}

TEST(Modular, Aff1IsNotUnimodular) {
  auto g = aff1();
  EXPECT_EQ(modular_cocycle({g, Scalar(1)}), AlgForm::basis(g, {0}));
  EXPECT_FALSE(is_invariant({g, Scalar(1)}));
  EXPECT_THROW(integrate(AlgForm::top(g), {g, Scalar(1)}, Domain::point()), InvariantError);
}

TEST(Modular, WrongDensityOnChartDetected) {
  // Lebesgue measure is not invariant for the orthonormal sphere frame.
  EXPECT_FALSE(is_invariant({sphere_orthonormal(), Scalar(1)}));
}

TEST(Integrate, ExactOnPointAndPolynomialBox) {
  auto g = su2();
  auto r = integrate(AlgForm::top(g, Scalar(3)), {g, Scalar(1)}, Domain::point());
  ASSERT_TRUE(r.is_exact());
  EXPECT_EQ(*r.exact_raw, Rational(3));
  auto t = tangent(2);
  Scalar x = Scalar::variable(2, 0), y = Scalar::variable(2, 1);
  auto b = integrate(AlgForm::top(t, x * y), {t, Scalar(1)}, Domain::box({0, 0}, {1, 2}));
  ASSERT_TRUE(b.is_exact());
  EXPECT_EQ(*b.exact_raw, Rational(1));
}

TEST(Integrate, NonTopFormRejected) {
  auto t = tangent(2);
  EXPECT_ANY_THROW(integrate(AlgForm::basis(t, {0}), {t, Scalar(1)}, Domain::box({0, 0}, {1, 1})));
}

TEST(Integrate, GaussianOverPlane) {
  auto t = tangent(2);
  AlgForm w = AlgForm::top(t, exp(parse_scalar("-(x^2+y^2)", xy)));
  auto r = integrate(w, {t, Scalar(1)}, Domain::plane());
  EXPECT_FALSE(r.is_exact());
  EXPECT_NEAR(r.value.real(), std::numbers::pi, 1e-8);
  EXPECT_LE(r.error, 1e-9);
}

TEST(Integrate, NormalizationDividesByTwoPi) {
  auto g = su2();
  auto r = integrate(AlgForm::top(g, Scalar(4)), {g, Scalar(1)}, Domain::point(), {1, 0});
  EXPECT_NEAR(r.value.real(), 4 / (2 * std::numbers::pi), 1e-15);
  auto c = integrate(AlgForm::top(g, Scalar(4)), {g, Scalar(1)}, Domain::point(), {1, 1});
  EXPECT_NEAR(c.value.imag(), -4 / (2 * std::numbers::pi), 1e-15);
}

TEST(Integrate, BudgetExhaustionIsAnError) {
  QuadratureOptions opts;
  opts.budget = 500;
  EXPECT_THROW(integrate(AlgForm::top(sphere_orthonormal()), sphere_density(), Domain::plane(), {}, opts), Error);
}

TEST(Quadrature, ParallelMatchesSerialBitForBit) {
  Integrand f = [](std::span<const double> p) { return std::exp(-p[0] * p[0]) * std::cos(3 * p[1]); };
  QuadratureOptions serial, parallel;
  parallel.parallel = true;
  auto a = integrate_box(f, {-2, -1}, {2, 1}, serial);
  auto b = integrate_box(f, {-2, -1}, {2, 1}, parallel);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_TRUE(a.converged);
}

TEST(Quadrature, PolynomialsExactToRounding) {
  Integrand f = [](std::span<const double> p) { return p[0] * p[0] * p[1]; };
  auto r = integrate_box(f, {0, 0}, {1, 1});
  EXPECT_NEAR(r.value, 1.0 / 6, 1e-15);
}

TEST(Index, EulerOnSphereAndTorus) {
  auto s = index_euler(sphere_orthonormal(), Metric::identity(2), sphere_density(), Domain::plane());
  EXPECT_NEAR(s.integral.value.real(), 2.0, 1e-6);
  EXPECT_LE(s.integral.error, 1e-6);
  auto t = index_euler(tangent(2), Metric::identity(2), {tangent(2), Scalar(1)}, Domain::box({0, 0}, {1, 1}));
  ASSERT_TRUE(t.integral.is_exact());
  EXPECT_EQ(*t.integral.exact_raw, Rational(0));
}

TEST(Index, EulerOddRankIsZeroWithNote) {
  auto r = index_euler(su2(), Metric::identity(3), {su2(), Scalar(1)}, Domain::point());
  ASSERT_TRUE(r.integral.is_exact());
  EXPECT_EQ(*r.integral.exact_raw, Rational(0));
  EXPECT_FALSE(r.notes.empty());
}

TEST(Index, DiracScalesWithRankOnFlatInputs) {
  auto t = tangent(2);
  Scalar x = Scalar::variable(2, 0), y = Scalar::variable(2, 1);
  AlgForm nu = AlgForm::top(t, x * y);
  Density om{t, Scalar(1)};
  Domain box = Domain::box({0, 0}, {1, 1});
  for (std::size_t m = 1; m <= 3; ++m) {
    std::vector<ScalarMatrix> gamma(2, ScalarMatrix(m, m, Scalar(0)));
    for (std::size_t i = 0; i < m; ++i) {
      gamma[0](i, i) = Scalar(static_cast<long>(i + 1));
      gamma[1](i, i) = Scalar(Rational(1, static_cast<long>(i + 2)));
    }
    Connection flat(t, m, gamma);
    ASSERT_TRUE(flat.is_flat());
    auto r = index_dirac(t, Metric::identity(2), flat, nu, om, box);
    ASSERT_TRUE(r.integral.is_exact());
    EXPECT_EQ(*r.integral.exact_raw, Rational(static_cast<long>(m)) / 4);
  }
}

TEST(Index, SignatureDegreeMismatchGivesZero) {
  auto t = tangent(2);
  AlgForm nu = AlgForm::basis(t, {0});
  auto r = index_signature(t, Metric::identity(2), nu, {t, Scalar(1)}, Domain::box({0, 0}, {1, 1}));
  ASSERT_TRUE(r.integral.is_exact());
  EXPECT_EQ(*r.integral.exact_raw, Rational(0));
  EXPECT_FALSE(r.notes.empty());
}

TEST(Index, GeneralDispatch) {
  auto s = sphere_orthonormal();
  AlgForm one = AlgForm::function(s, Scalar(1));
  auto r = index_general(SymbolKind::euler_complex, s, Metric::identity(2), nullptr, one, sphere_density(),
                         Domain::plane());
  EXPECT_NEAR(r.integral.value.real(), 2.0, 1e-6);
  EXPECT_FALSE(r.notes.empty());
  EXPECT_THROW(index_general(SymbolKind::other, s, Metric::identity(2), nullptr, one, sphere_density(),
                             Domain::plane()),
               DomainError);
  EXPECT_EQ(parse_symbol("spinor"), SymbolKind::spinor);
  EXPECT_THROW(parse_symbol("weird"), ParseError);
}

TEST(Symplectic, ClosedAndNondegenerate) {
  for (const auto& a : {su2(), aff1(), tangent(2), sphere_orthonormal(), so3_action()}) {
    auto sym = symplectic_form(a);
    EXPECT_TRUE(sym.closed) << a->name();
    EXPECT_TRUE(sym.nondegenerate) << a->name();
    EXPECT_TRUE(d(sym.theta).vanishes()) << a->name();
    auto l = sym.liouville.as_rational();
    ASSERT_TRUE(l.has_value());
    EXPECT_EQ(abs(*l), 1);
  }
}

TEST(Thom, FiberIntegralInvertsThomMap) {
  Gen gen(31);
  for (const auto& a : {su2(), tangent(2), sphere_orthonormal()}) {
    auto P = cotangent_model(a).total;
    for (std::size_t k = 0; k <= a->rank(); ++k) {
      AlgForm alpha = gen.form(a, k);
      EXPECT_TRUE((fiber_integrate(thom_map(alpha, P), a) - alpha).vanishes()) << a->name();
      EXPECT_TRUE((fiber_integrate(thom_map(alpha, P, Orientation::negative), a) + alpha).vanishes());
    }
  }
}

TEST(Thom, MapIsLinearAndMultiplicative) {
  Gen gen(32);
  auto a = su2();
  auto P = cotangent_model(a).total;
  AlgForm u = gen.form(a, 1), v = gen.form(a, 1);
  EXPECT_EQ(thom_map(u + v, P), thom_map(u, P) + thom_map(v, P));
  ThomForm th = thom_class(a, P, Orientation::positive);
  EXPECT_THROW(thom_class(a, P, Orientation::none), DomainError);
  ThomForm free_u{P, 3, pullback_form(projection(a, P), u), AlgForm(P)};
  EXPECT_EQ(thom_product(free_u, th), thom_map(u, P));
}

TEST(Thom, ZeroSectionPullbackGivesEulerProduct) {
  auto a = sphere_orthonormal();
  auto P = pullback(a, 2);
  AlgForm eu = euler_class(a, Metric::identity(2));
  AlgForm f = AlgForm::function(a, Scalar::variable(2, 0));
  EXPECT_EQ(zero_section_pullback(thom_map(f, P), a, eu), wedge(f, eu));
}

TEST(Thom, PullbackAlongFiberReflection) {
  auto g = su2();
  auto P = pullback(g, 3);
  std::vector<Scalar> f;
  for (std::size_t j = 0; j < 3; ++j) f.push_back(-Scalar::variable(3, j));
  ScalarMatrix phi(6, 6, Scalar(0));
  for (std::size_t i = 0; i < 3; ++i) {
    phi(i, i) = Scalar(1);
    phi(3 + i, 3 + i) = Scalar(-1);
  }
  Morphism flip{P, P, f, phi};
  ASSERT_TRUE(validate_morphism(flip).valid());
  ThomForm th = thom_class(g, P, Orientation::positive);
  EXPECT_EQ(pullback_thom(flip, th, 3), thom_class(g, P, Orientation::negative));
  EXPECT_EQ(pullback_thom(identity_morphism(P), th, 3), th);
}

TEST(Thom, BaseAndTotalIntegralsAgree) {
  auto g = su2();
  auto sym = symplectic_form(g);
  AlgForm vol = AlgForm::top(g, Scalar(5));
  Density om{g, Scalar(1)};
  auto base = integrate(vol, om, Domain::point());
  auto total = total_space_integral(thom_map(vol, sym.model.total), sym, om, Domain::point());
  ASSERT_TRUE(base.is_exact() && total.is_exact());
  EXPECT_EQ(*base.exact_raw, *total.exact_raw);

  auto s = sphere_orthonormal();
  auto ssym = symplectic_form(s);
  AlgForm area = AlgForm::top(s);
  auto sb = integrate(area, sphere_density(), Domain::plane());
  auto st = total_space_integral(thom_map(area, ssym.model.total), ssym, sphere_density(), Domain::plane());
  EXPECT_NEAR(sb.value.real(), st.value.real(), 1e-9);
  EXPECT_NEAR(sb.value.real(), 4 * std::numbers::pi, 1e-8);
}
