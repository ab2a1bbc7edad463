#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tvcs/metrics.hpp"
#include "tvcs/reference.hpp"

using namespace tvcs;
using cd = std::complex<double>;

namespace {

// |array factor| of a lambda/2 uniform array on a dense uniform-u grid.
RVector<double> dense_magnitude(const CVector<double>& w, Eigen::Index m = 20000) {
  const auto geom = ArrayGeometry<double>::uniform(w.size(), 0.5);
  const auto grid = DirectionGrid<double>::uniform_in_u(m);
  const auto h = build_radiation_operator(geom, ElementPatternSet<double>::isotropic(), grid);
  return evaluate_pattern(h, w).cwiseAbs();
}

// Peaks of the first k sidelobes right of the mainlobe, in dB.
std::vector<double> near_in_sidelobes(const RVector<double>& mag, int k) {
  Eigen::Index peak = 0;
  const double pmax = mag.maxCoeff(&peak);
  Eigen::Index i = peak;
  while (i + 1 < mag.size() && mag[i + 1] <= mag[i]) ++i;
  std::vector<double> out;
  for (++i; i + 1 < mag.size() && int(out.size()) < k; ++i) {
    if (mag[i] >= mag[i - 1] && mag[i] >= mag[i + 1]) out.push_back(20 * std::log10(mag[i] / pmax));
  }
  return out;
}

}  // namespace

TEST(Dolph, MatchesChebyshevWindowValues) {
  // Frozen from an independent Dolph-Chebyshev window implementation.
  const CVector<double> w = dolph_excitations<double>(7, -30);
  const double expect[] = {0.26422539391104316, 0.5682694368151302, 0.8738136428793154, 1.0};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(w[i].real(), expect[i], 1e-12);
    EXPECT_NEAR(w[6 - i].real(), expect[i], 1e-12);
  }
  const CVector<double> w20 = dolph_excitations<double>(20, -20);
  EXPECT_NEAR(w20[0].real(), 1.0, 1e-12);
  EXPECT_NEAR(w20[1].real(), 0.46385282912908554, 1e-12);
  EXPECT_NEAR(w20[5].real(), 0.80336328596421, 1e-12);
  EXPECT_NEAR(w20[9].real(), 0.9726467851518616, 1e-12);
}

TEST(Dolph, ArrayFactorIsChebyshevPolynomial) {
  const Eigen::Index n = 15;
  const double r = 100.0;  // -40 dB
  const CVector<double> w = dolph_excitations<double>(n, -40);
  const double x0 = std::cosh(std::acosh(r) / double(n - 1));
  const double centre = double(n - 1) / 2;
  double scale = 0;
  for (int k = 0; k < 9; ++k) {
    const double psi = 0.37 * k - 1.3;
    cd af = 0;
    for (Eigen::Index i = 0; i < n; ++i) af += w[i] * std::exp(cd(0, (double(i) - centre) * psi));
    const double t = detail::chebyshev_t(int(n - 1), x0 * std::cos(psi / 2));
    if (k == 0) scale = af.real() / t;
    EXPECT_NEAR(af.real(), scale * t, 1e-10 * std::abs(scale) * r);
    EXPECT_NEAR(af.imag(), 0.0, 1e-10);
  }
}

TEST(Dolph, EquirippleSidelobesAtTarget) {
  for (Eigen::Index n : {20, 100}) {
    const RVector<double> mag = dense_magnitude(dolph_excitations<double>(n, -20));
    EXPECT_NEAR(sidelobe_level(mag), -20.0, 0.5) << "N = " << n;
  }
}

TEST(Dolph, SymmetricRealUnitPeak) {
  const CVector<double> w = dolph_excitations<double>(31, -25);
  EXPECT_DOUBLE_EQ(w.cwiseAbs().maxCoeff(), 1.0);
  for (Eigen::Index i = 0; i < 31; ++i) {
    EXPECT_EQ(w[i], w[30 - i]);
    EXPECT_EQ(w[i].imag(), 0.0);
  }
}

TEST(Dolph, RejectsBadArguments) {
  EXPECT_THROW(dolph_excitations<double>(1, -20), InvalidArgument);
  EXPECT_THROW(dolph_excitations<double>(10, 20), InvalidArgument);
}

TEST(Taylor, MatchesWindowValues) {
  // Frozen from an independent Taylor window implementation, scaled to a unit peak.
  const CVector<double> w = taylor_excitations<double>(128, -50, 6);
  EXPECT_NEAR(w[0].real(), 0.049125054609717916, 1e-12);
  EXPECT_NEAR(w[1].real(), 0.05031533535607019, 1e-12);
  EXPECT_NEAR(w[10].real(), 0.11117785130201698, 1e-12);
  EXPECT_NEAR(w[32].real(), 0.5126852529551476, 1e-12);
  EXPECT_NEAR(w[63].real(), 1.0, 1e-12);
  for (Eigen::Index i = 0; i < 128; ++i) EXPECT_EQ(w[i], w[127 - i]);
}

TEST(Taylor, NearInSidelobesAtTarget) {
  const RVector<double> mag = dense_magnitude(taylor_excitations<double>(128, -50, 6), 40000);
  const auto lobes = near_in_sidelobes(mag, 4);
  ASSERT_EQ(lobes.size(), 4u);
  for (double l : lobes) EXPECT_NEAR(l, -50.0, 1.0);
  EXPECT_LE(sidelobe_level(mag), -49.0);
}

TEST(Taylor, DefaultNbar) {
  EXPECT_EQ(default_taylor_nbar(-50.0), 6);
  EXPECT_EQ(default_taylor_nbar(-60.0), 6);
  EXPECT_EQ(default_taylor_nbar(-30.0), 4);
  EXPECT_THROW(taylor_excitations<double>(16, -30, 0), InvalidArgument);
}

TEST(ReferenceFromExcitations, PeakNormalizedWithMatchingScale) {
  const auto geom = ArrayGeometry<double>::uniform(10, 0.5);
  const auto grid = DirectionGrid<double>::uniform_in_u(40);
  const auto h = build_radiation_operator(geom, ElementPatternSet<double>::isotropic(), grid);
  const auto ref = reference_from_excitations(h, grid, dolph_excitations<double>(10, -25), "d");
  EXPECT_NEAR(ref.samples.cwiseAbs().maxCoeff(), 1.0, 1e-15);
  ASSERT_TRUE(ref.source_excitations.has_value());
  EXPECT_LT((evaluate_pattern(h, *ref.source_excitations) - ref.samples).norm(), 1e-13);
  EXPECT_THROW(reference_from_excitations(h, grid, CVector<double>(CVector<double>::Zero(10)), "z"),
               InvalidArgument);
}

TEST(Flattop, FlatRegionAndSidelobesMeetMask) {
  const Eigen::Index n = 40;
  const double hw = 20;
  const CVector<double> w = flattop_excitations<double>(n, hw, -20);
  const auto grid = DirectionGrid<double>::uniform_in_u(8000);
  const auto h = build_radiation_operator(ArrayGeometry<double>::uniform(n, 0.5),
                                          ElementPatternSet<double>::isotropic(), grid);
  const RVector<double> mag = evaluate_pattern(h, w).cwiseAbs();
  const double u_edge = std::sin(hw * std::numbers::pi / 180);
  double lo = 1e300, hi = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double u = std::sin(grid.angles()[i] * std::numbers::pi / 180);
    if (std::abs(u) <= u_edge) {
      lo = std::min(lo, mag[i]);
      hi = std::max(hi, mag[i]);
    }
  }
  EXPECT_LE(20 * std::log10(hi / lo) / 2, 0.5 + 1e-9);
  EXPECT_LE(20 * std::log10(hi / mag.maxCoeff()), 1e-12);

  const auto ref = flattop_reference<double>(DirectionGrid<double>::uniform_in_u(80), hw, -20, n);
  EXPECT_EQ(ref.label, "flattop");
  EXPECT_NEAR(ref.samples.cwiseAbs().maxCoeff(), 1.0, 1e-15);
}

TEST(Flattop, InvalidOrInfeasibleMasks) {
  EXPECT_THROW(flattop_excitations<double>(40, 0.0, -20), InvalidArgument);
  EXPECT_THROW(flattop_excitations<double>(40, 95.0, -20), InvalidArgument);
  try {
    flattop_excitations<double>(16, 30.0, -60);
    FAIL() << "expected an infeasible mask";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("region"), std::string::npos) << e.what();
  }
}
