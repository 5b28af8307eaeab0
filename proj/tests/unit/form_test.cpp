#include <gtest/gtest.h>

#include "generators.hpp"
#include "lalg/algebroid.hpp"
#include "lalg/error.hpp"
#include "lalg/form.hpp"

using namespace lalg;
using lalg::testing::Gen;

namespace {

std::vector<AlgebroidPtr> test_algebroids() {
  return {su2(), aff1(), tangent(2), so3_action(), sphere_orthonormal(), pullback(su2(), 3)};
}

AlgForm e(const AlgebroidPtr& a, std::vector<std::size_t> idx) { return AlgForm::basis(a, idx); }

}  // namespace

TEST(Form, BasisSortsWithSign) {
  auto g = su2();
  EXPECT_EQ(e(g, {1, 0}), -e(g, {0, 1}));
  EXPECT_TRUE(e(g, {1, 1}).is_zero());
  EXPECT_EQ(wedge(e(g, {0}), e(g, {1})), e(g, {0, 1}));
  EXPECT_EQ(wedge(e(g, {1}), e(g, {0})), -e(g, {0, 1}));
}

TEST(Form, Serialization) {
  auto g = su2();
  EXPECT_EQ(d(e(g, {0})).to_string(), "(-1)*e2^e3");
  AlgForm w = AlgForm::top(g, Scalar(Rational(3, 2)));
  EXPECT_EQ(w.degree(), 3u);
  EXPECT_EQ(w.max_degree(), 3u);
}

TEST(Form, KoszulDifferentialOnSu2) {
  auto g = su2();
  EXPECT_EQ(d(e(g, {0})), -e(g, {1, 2}));
  EXPECT_EQ(d(e(g, {1})), -e(g, {2, 0}));
  EXPECT_TRUE(d(e(g, {0, 1})).is_zero());
}

TEST(Form, DeRhamOnTangent) {
  auto t = tangent(2);
  Scalar x = Scalar::variable(2, 0), y = Scalar::variable(2, 1);
  AlgForm f = AlgForm::function(t, x * x * y);
  AlgForm df = d(f);
  EXPECT_EQ(df.coefficient(mask_of({0})), Scalar(2) * x * y);
  EXPECT_EQ(df.coefficient(mask_of({1})), x * x);
}

TEST(Form, DegreeQueries) {
  auto g = su2();
  AlgForm mixed = AlgForm::function(g, Scalar(1)) + e(g, {0});
  EXPECT_FALSE(mixed.is_homogeneous());
  EXPECT_THROW(mixed.degree(), Error);
  EXPECT_EQ(mixed.component(1), e(g, {0}));
}

TEST(Form, MismatchedAlgebroidsRejected) {
  EXPECT_THROW(e(su2(), {0}) + e(aff1(), {0}), DimensionError);
}

TEST(FormProperty, DSquaredVanishes) {
  Gen gen(101);
  for (const auto& a : test_algebroids())
    for (std::size_t k = 0; k < a->rank(); ++k)
      for (int trial = 0; trial < 3; ++trial) {
        AlgForm w = gen.form(a, k);
        EXPECT_TRUE(d(d(w)).vanishes()) << a->name() << " degree " << k << ": " << w.to_string();
      }
}

TEST(FormProperty, Leibniz) {
  Gen gen(202);
  for (const auto& a : test_algebroids())
    for (int trial = 0; trial < 6; ++trial) {
      std::size_t p = gen.index(a->rank()), q = gen.index(a->rank() - p + 1);
      AlgForm u = gen.form(a, p), v = gen.form(a, q);
      AlgForm lhs = d(wedge(u, v));
      AlgForm rhs = wedge(d(u), v) + Scalar(p % 2 ? -1 : 1) * wedge(u, d(v));
      EXPECT_TRUE((lhs - rhs).vanishes()) << a->name();
    }
}

TEST(FormProperty, WedgeAssociativeAndGradedCommutative) {
  Gen gen(303);
  for (const auto& a : test_algebroids())
    for (int trial = 0; trial < 6; ++trial) {
      std::size_t p = gen.index(3), q = gen.index(3), r = gen.index(3);
      AlgForm u = gen.form(a, p), v = gen.form(a, q), w = gen.form(a, r);
      EXPECT_TRUE((wedge(wedge(u, v), w) - wedge(u, wedge(v, w))).vanishes());
      Scalar sign((p * q) % 2 ? -1 : 1);
      EXPECT_TRUE((wedge(u, v) - sign * wedge(v, u)).vanishes());
    }
}

TEST(FormProperty, DIsLinear) {
  Gen gen(404);
  for (const auto& a : test_algebroids())
    for (int trial = 0; trial < 4; ++trial) {
      AlgForm u = gen.mixed_form(a, 2), v = gen.mixed_form(a, 2);
      Scalar c = gen.rational();
      EXPECT_TRUE((d(u + c * v) - d(u) - c * d(v)).vanishes());
    }
}

TEST(FormProperty, PullbackCommutesWithD) {
  Gen gen(505);
  auto g = su2();
  auto p = pullback(g, 3);
  std::vector<Morphism> maps = {projection(g, p), zero_section(g, p), fiber_inclusion(g, p, {}),
                                anchor_morphism(so3_action()), anchor_morphism(sphere_orthonormal()),
                                identity_morphism(aff1())};
  for (const auto& m : maps)
    for (std::size_t k = 0; k < m.target->rank(); ++k)
      for (int trial = 0; trial < 2; ++trial) {
        AlgForm w = gen.form(m.target, k);
        AlgForm lhs = d(pullback_form(m, w));
        AlgForm rhs = pullback_form(m, d(w));
        EXPECT_TRUE((lhs - rhs).vanishes()) << m.source->name() << " -> " << m.target->name();
      }
}

TEST(FormProperty, PullbackRespectsWedge) {
  Gen gen(606);
  auto m = anchor_morphism(so3_action());
  for (int trial = 0; trial < 5; ++trial) {
    AlgForm u = gen.form(m.target, 1), v = gen.form(m.target, 1);
    EXPECT_TRUE((pullback_form(m, wedge(u, v)) - wedge(pullback_form(m, u), pullback_form(m, v))).vanishes());
  }
}
