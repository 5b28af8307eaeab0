#include <gtest/gtest.h>

#include "lalg/algebroid.hpp"
#include "oracles.hpp"

using namespace lalg;

TEST(Oracle, TriangulationEulerCharacteristics) {
  EXPECT_EQ(oracle::euler_characteristic(oracle::octahedron()), 2);
  EXPECT_EQ(oracle::euler_characteristic(oracle::icosahedron()), 2);
  EXPECT_EQ(oracle::euler_characteristic(oracle::torus7()), 0);
}

TEST(Oracle, BruteForceCohomology) {
  EXPECT_EQ(oracle::lie_betti(*su2()), (std::vector<std::size_t>{1, 0, 0, 1}));
  EXPECT_EQ(oracle::lie_betti(*aff1()), (std::vector<std::size_t>{1, 1, 0}));
  EXPECT_EQ(oracle::lie_betti(*abelian_bundle(0, 3)), (std::vector<std::size_t>{1, 3, 3, 1}));
}

TEST(Oracle, LeibnizDeterminant) {
  RationalMatrix m(3, 3, Rational(0));
  int v[3][3] = {{2, 0, 1}, {1, 3, 2}, {1, 1, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = v[i][j];
  EXPECT_EQ(oracle::leibniz_det(m, Rational(0)), Rational(6));
}
