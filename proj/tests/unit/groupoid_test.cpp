#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "generators.hpp"
#include "lalg/error.hpp"
#include "lalg/groupoid.hpp"

using namespace lalg;
using lalg::testing::Gen;

namespace {

bool is_zero(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

FiniteGroupoid s3() {
  // Permutations of {0,1,2} in lexicographic order; composition "first g, then h".
  std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::vector<std::size_t>> table(6, std::vector<std::size_t>(6));
  for (std::size_t g = 0; g < 6; ++g)
    for (std::size_t h = 0; h < 6; ++h) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[h][perms[g][i]];
      table[g][h] = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return FiniteGroupoid::group(table);
}

std::vector<FiniteGroupoid> samples() {
  return {FiniteGroupoid::pair(3), FiniteGroupoid::cyclic(2), FiniteGroupoid::cyclic(3), s3(),
          FiniteGroupoid::disjoint_union(FiniteGroupoid::pair(2), FiniteGroupoid::cyclic(2))};
}

}  // namespace

TEST(Groupoid, PairGroupoidStructure) {
  auto G = FiniteGroupoid::pair(3);
  EXPECT_EQ(G.objects(), 3u);
  EXPECT_EQ(G.arrows(), 9u);
  // (0,1) then (1,2) is (0,2).
  EXPECT_EQ(G.mul(1, 5), std::optional<std::size_t>(2));
  EXPECT_FALSE(G.mul(1, 1).has_value());
  EXPECT_EQ(G.inverse(1), 3u);
  EXPECT_EQ(G.unit(2), 8u);
  EXPECT_EQ(G.arrow_name(5), "(2,3)");  // names use 1-based objects
  EXPECT_EQ(G.orbit_count(), 1u);
}

TEST(Groupoid, RejectsBrokenTables) {
  EXPECT_THROW(FiniteGroupoid::group({{1, 1}, {1, 0}}), InvariantError);
  EXPECT_THROW(FiniteGroupoid(1, {0, 0}, {0, 0}, {{0, 1}, {1, -1}}), InvariantError);
}

TEST(Groupoid, OrbitsOfDisjointUnion) {
  auto G = FiniteGroupoid::disjoint_union(FiniteGroupoid::pair(2), FiniteGroupoid::cyclic(3));
  EXPECT_EQ(G.orbit_count(), 2u);
  EXPECT_EQ(G.orbits(), (std::vector<std::size_t>{0, 0, 1}));
}

TEST(Groupoid, NerveComposability) {
  auto G = FiniteGroupoid::pair(3);
  EXPECT_EQ(nerve(G, 0).size(), 3u);
  EXPECT_EQ(nerve(G, 1).size(), 9u);
  EXPECT_EQ(nerve(G, 2).size(), 27u);
  for (const auto& t : nerve(G, 2)) EXPECT_EQ(G.source(t[0]), G.target(t[1]));
}

TEST(Groupoid, CohomologyOfProperGroupoidsAndFiniteGroups) {
  for (const auto& G : samples()) {
    auto b = groupoid_betti(G, FiniteRep::trivial(G), 3);
    EXPECT_EQ(b[0], G.orbit_count());
    for (std::size_t k = 1; k < b.size(); ++k) EXPECT_EQ(b[k], 0u);
  }
}

TEST(Groupoid, DifferentialSquaresToZero) {
  for (const auto& G : samples())
    for (std::size_t dim : {1u, 2u}) {
      FiniteRep E = FiniteRep::trivial(G, dim);
      for (std::size_t k = 0; k < 3; ++k)
        EXPECT_TRUE(is_zero(groupoid_differential(G, E, k + 1) * groupoid_differential(G, E, k)));
    }
}

TEST(Groupoid, SignRepresentationOfZ2) {
  auto G = FiniteGroupoid::cyclic(2);
  FiniteRep E = FiniteRep::trivial(G);
  E.lambda[1](0, 0) = -1;
  EXPECT_TRUE(validate_rep(G, E).empty());
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_TRUE(is_zero(groupoid_differential(G, E, k + 1) * groupoid_differential(G, E, k)));
  auto b = groupoid_betti(G, E, 3);
  EXPECT_EQ(b, (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(Groupoid, BrokenRepresentationRejected) {
  auto G = FiniteGroupoid::cyclic(2);
  FiniteRep E = FiniteRep::trivial(G);
  E.lambda[1](0, 0) = 2;
  EXPECT_FALSE(validate_rep(G, E).empty());
  EXPECT_THROW(groupoid_betti(G, E, 2), InvariantError);
}

TEST(Convolution, PairGroupoidIsMatrixAlgebra) {
  Gen gen(41);
  auto G = FiniteGroupoid::pair(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto f1 = gen.rationals(9), f2 = gen.rationals(9);
    auto h = convolve(G, f1, f2);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        Rational s = 0;
        for (std::size_t c = 0; c < 3; ++c) s += f1[a * 3 + c] * f2[c * 3 + b];
        EXPECT_EQ(h[a * 3 + b], s);
      }
  }
}

TEST(ConvolutionProperty, AssociativeWithUnit) {
  Gen gen(42);
  for (const auto& G : samples())
    for (int trial = 0; trial < 3; ++trial) {
      auto f = gen.rationals(G.arrows()), g = gen.rationals(G.arrows()), h = gen.rationals(G.arrows());
      EXPECT_EQ(convolve(G, convolve(G, f, g), h), convolve(G, f, convolve(G, g, h)));
      EXPECT_EQ(convolve(G, unit_function(G), f), f);
      EXPECT_EQ(convolve(G, f, unit_function(G)), f);
    }
}

TEST(TraceProperty, CyclicForOrbitConstantWeights) {
  Gen gen(43);
  for (const auto& G : samples())
    for (int trial = 0; trial < 3; ++trial) {
      auto orbit = G.orbits();
      std::vector<Rational> per_orbit;
      for (std::size_t o = 0; o < G.orbit_count(); ++o) per_orbit.push_back(Rational(gen.integer(1, 5)));
      std::vector<Rational> w;
      for (std::size_t x = 0; x < G.objects(); ++x) w.push_back(per_orbit[orbit[x]]);
      auto f1 = gen.rationals(G.arrows()), f2 = gen.rationals(G.arrows());
      EXPECT_EQ(trace(G, convolve(G, f1, f2), w), trace(G, convolve(G, f2, f1), w));
    }
}

TEST(Trace, NonInvariantWeightsGiveCounterexample) {
  auto G = FiniteGroupoid::pair(3);
  std::vector<Rational> w = {1, 2, 3};
  auto bad = trace_counterexample(G, w);
  ASSERT_TRUE(bad.has_value());
  EXPECT_NE(bad->forward, bad->backward);
  auto f1 = delta(G, bad->arrow), f2 = delta(G, G.inverse(bad->arrow));
  auto tau = [&](const ArrowFunction& f) {
    Rational s = 0;
    for (std::size_t x = 0; x < G.objects(); ++x) s += f[G.unit(x)] * w[x];
    return s;
  };
  EXPECT_EQ(bad->forward, tau(convolve(G, f1, f2)));
  EXPECT_EQ(bad->backward, tau(convolve(G, f2, f1)));
  EXPECT_THROW(trace(G, f1, w), InvariantError);
}

TEST(Trace, NonPositiveWeightRejected) {
  auto G = FiniteGroupoid::cyclic(2);
  EXPECT_THROW(trace(G, unit_function(G), std::vector<Rational>{0}), DomainError);
}
