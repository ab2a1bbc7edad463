#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tvcs/array_model.hpp"

using namespace tvcs;
using cd = std::complex<double>;

TEST(ArrayGeometry, UniformIsCentredWithRequestedSpacing) {
  const auto g = ArrayGeometry<double>::uniform(5, 0.5);
  ASSERT_EQ(g.size(), 5);
  EXPECT_DOUBLE_EQ(g.positions()[0], -1.0);
  EXPECT_DOUBLE_EQ(g.positions()[2], 0.0);
  EXPECT_DOUBLE_EQ(g.positions()[4], 1.0);
  EXPECT_DOUBLE_EQ(g.positions().sum(), 0.0);
}

TEST(ArrayGeometry, RejectsBadInput) {
  EXPECT_THROW(ArrayGeometry<double>::uniform(0), InvalidArgument);
  EXPECT_THROW(ArrayGeometry<double>::uniform(4, 0.0), InvalidArgument);
  RVector<double> z(3);
  z << 0.0, 0.5, 0.5;
  EXPECT_THROW(ArrayGeometry<double>{z}, InvalidArgument);
  EXPECT_NO_THROW(ArrayGeometry<double>::uniform(1));
}

TEST(DirectionGrid, UniformInUHasEqualSineSteps) {
  const auto g = DirectionGrid<double>::uniform_in_u(8);
  EXPECT_EQ(g.sampling(), Sampling::uniform_u);
  for (Eigen::Index i = 0; i < 8; ++i) {
    const double u = std::sin(g.angles()[i] * std::numbers::pi / 180);
    EXPECT_NEAR(u, -1.0 + (2.0 * i + 1) / 8, 1e-14);
  }
}

TEST(DirectionGrid, UniformInThetaAndRefinement) {
  const auto g = DirectionGrid<double>::uniform_in_theta(6);
  EXPECT_DOUBLE_EQ(g.angles()[0], -75.0);
  EXPECT_DOUBLE_EQ(g.angles()[5], 75.0);
  const auto r = g.refined(10);
  EXPECT_EQ(r.size(), 60);
  EXPECT_EQ(r.sampling(), Sampling::uniform_theta);

  RVector<double> a(3);
  a << -10.0, 0.0, 20.0;
  const DirectionGrid<double> e(a);
  EXPECT_EQ(e.sampling(), Sampling::explicit_angles);
  EXPECT_EQ(e.refined(4).sampling(), Sampling::uniform_u);
  EXPECT_EQ(e.refined(4).size(), 12);
}

TEST(DirectionGrid, RejectsAnglesOutsideRange) {
  RVector<double> a(2);
  a << -95.0, 0.0;
  EXPECT_THROW(DirectionGrid<double>{a}, InvalidArgument);
  a << 10.0, 0.0;
  EXPECT_THROW(DirectionGrid<double>{a}, InvalidArgument);
}

TEST(RadiationOperator, EntriesFollowPhaseFormula) {
  const auto geom = ArrayGeometry<double>::uniform(4, 0.5);
  const auto grid = DirectionGrid<double>::uniform_in_u(8);
  const auto h = build_radiation_operator(geom, ElementPatternSet<double>::isotropic(), grid);
  ASSERT_EQ(h.rows(), 8);
  ASSERT_EQ(h.cols(), 4);
  for (Eigen::Index m = 0; m < 8; ++m) {
    const double u = std::sin(grid.angles()[m] * std::numbers::pi / 180);
    for (Eigen::Index n = 0; n < 4; ++n) {
      const cd expect = std::exp(cd(0, 2 * std::numbers::pi * geom.positions()[n] * u));
      EXPECT_NEAR(std::abs(h.matrix()(m, n) - expect), 0.0, 1e-13);
    }
  }
}

TEST(RadiationOperator, BroadsideSumOfUniformArray) {
  const auto geom = ArrayGeometry<double>::uniform(10, 0.5);
  RVector<double> a(10);
  for (int i = 0; i < 10; ++i) a[i] = -45.0 + 10.0 * i;
  a[4] = 0.0;
  const auto h = build_radiation_operator(geom, ElementPatternSet<double>::isotropic(), DirectionGrid<double>(a));
  const CVector<double> f = evaluate_pattern(h, CVector<double>::Ones(10));
  EXPECT_NEAR(std::abs(f[4]), 10.0, 1e-12);
}

TEST(RadiationOperator, TooFewDirectionsIsAnError) {
  const auto geom = ArrayGeometry<double>::uniform(10);
  EXPECT_THROW(build_radiation_operator(geom, ElementPatternSet<double>::isotropic(),
                                        DirectionGrid<double>::uniform_in_u(9)),
               InvalidArgument);
}

TEST(RadiationOperator, PatternIsLinear) {
  std::mt19937_64 rng(11);
  const auto geom = ArrayGeometry<double>::uniform(12, 0.5);
  const auto h = build_radiation_operator(geom, ElementPatternSet<double>::isotropic(),
                                          DirectionGrid<double>::uniform_in_u(24));
  const CVector<double> x = oracle::random_cvector(rng, 12);
  const CVector<double> y = oracle::random_cvector(rng, 12);
  const cd a(0.3, -1.2), b(2.0, 0.5);
  const CVector<double> lhs = evaluate_pattern(h, CVector<double>(a * x + b * y));
  const CVector<double> rhs = a * evaluate_pattern(h, x) + b * evaluate_pattern(h, y);
  EXPECT_LT((lhs - rhs).norm(), 1e-12 * rhs.norm());
  EXPECT_THROW(evaluate_pattern(h, CVector<double>::Ones(11)), DimensionMismatch);
}

TEST(ElementPatternSet, TabulatedInterpolatesLinearly) {
  RVector<double> ang(3);
  ang << -90.0, 0.0, 90.0;
  CMatrix<double> val(3, 2);
  val << cd(0, 0), cd(1, 1), cd(2, 0), cd(3, -1), cd(4, 0), cd(5, 1);
  const auto e = ElementPatternSet<double>::tabulated(ang, val);
  EXPECT_EQ(e.table_elements(), 2);
  EXPECT_NEAR(std::abs(e.value(0, -45.0) - cd(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.value(1, 45.0) - cd(4, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.value(1, 90.0) - cd(5, 1)), 0.0, 1e-15);
  EXPECT_THROW(e.value(2, 0.0), DimensionMismatch);
}

TEST(ElementPatternSet, TableMustCoverVisibleRange) {
  RVector<double> ang(2);
  ang << -80.0, 90.0;
  EXPECT_THROW(ElementPatternSet<double>::tabulated(ang, CMatrix<double>::Ones(2, 1)), InvalidArgument);
}

TEST(ElementPatternSet, TableElementCountMustMatchGeometry) {
  RVector<double> ang(2);
  ang << -90.0, 90.0;
  const auto e = ElementPatternSet<double>::tabulated(ang, CMatrix<double>::Ones(2, 3));
  EXPECT_THROW(build_radiation_operator(ArrayGeometry<double>::uniform(4), e, DirectionGrid<double>::uniform_in_u(8)),
               DimensionMismatch);
}

TEST(DiscreteGradient, ForwardDifferencesWithZeroLastEntry) {
  CVector<double> w(4);
  w << cd(1, 0), cd(3, 1), cd(3, 1), cd(0, -2);
  const CVector<double> g = discrete_gradient(w);
  EXPECT_EQ(g[0], cd(2, 1));
  EXPECT_EQ(g[1], cd(0, 0));
  EXPECT_EQ(g[2], cd(-3, -3));
  EXPECT_EQ(g[3], cd(0, 0));
  EXPECT_TRUE(discrete_gradient(CVector<double>::Constant(7, cd(2, -1))).isZero());
}

TEST(DiscreteGradient, AdjointIdentity) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 30;
    const CVector<double> x = oracle::random_cvector(rng, n);
    const CVector<double> y = oracle::random_cvector(rng, n);
    const cd lhs = CVector<double>(discrete_gradient(x)).dot(y);
    const cd rhs = x.dot(CVector<double>(gradient_adjoint(y)));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12 * (1 + std::abs(lhs)));
  }
}

TEST(DiscreteGradient, AdjointExplicitForm) {
  CVector<double> v(4);
  v << cd(1, 0), cd(2, 0), cd(4, 0), cd(100, 0);
  const CVector<double> r = gradient_adjoint(v);
  EXPECT_EQ(r[0], cd(-1, 0));
  EXPECT_EQ(r[1], cd(-1, 0));
  EXPECT_EQ(r[2], cd(-2, 0));
  EXPECT_EQ(r[3], cd(4, 0));
}
