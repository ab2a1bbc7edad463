#pragma once

// Reference patterns: Dolph-Chebyshev and Taylor tapers, a Woodward-Lawson
// flat-top beam, and the peak-normalized reference built from them.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tvcs/array_model.hpp"

namespace tvcs {

template <typename Real>
struct ReferencePattern {
  CVector<Real> samples;
  DirectionGrid<Real> grid;
  std::optional<CVector<Real>> source_excitations;
  std::string label;
};

namespace detail {

// Chebyshev polynomial of the first kind, valid for any real x.
template <typename Real>
Real chebyshev_t(int order, Real x) {
  if (std::abs(x) <= 1) return std::cos(Real(order) * std::acos(x));
  const Real v = std::cosh(Real(order) * std::acosh(std::abs(x)));
  return (x < 0 && order % 2 == 1) ? -v : v;
}

template <typename Real>
Real db_to_ratio(Real sll_db) {
  return std::pow(Real(10), -sll_db / Real(20));
}

}  // namespace detail

/// Real symmetric Dolph-Chebyshev taper with equiripple sidelobes at `sll_db`
/// (negative, relative to the mainlobe), normalized to a unit largest weight.
template <typename Real>
CVector<Real> dolph_excitations(Eigen::Index n, Real sll_db) {
  if (n < 2) throw InvalidArgument("Dolph taper needs at least two elements");
  if (!(sll_db < 0)) throw InvalidArgument("sidelobe level must be negative (dB)");
  const int order = int(n - 1);
  const Real x0 = std::cosh(std::acosh(detail::db_to_ratio(sll_db)) / Real(order));
  const Real pi = std::numbers::pi_v<Real>;
  const Real centre = Real(n - 1) / 2;

  // The array factor sum_n w_n exp(j (n - centre) psi) equals
  // T_{N-1}(x0 cos(psi/2)); sample it at N phases and invert the DFT.
  RVector<Real> af(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Real psi = 2 * pi * Real(k) / Real(n);
    af[k] = detail::chebyshev_t(order, x0 * std::cos(psi / 2));
  }
  CVector<Real> w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Real acc = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      acc += af[k] * std::cos(2 * pi * Real(k) * (Real(i) - centre) / Real(n));
    }
    w[i] = Complex<Real>(acc / Real(n), 0);
  }
  // Symmetrize to remove rounding asymmetry.
  for (Eigen::Index i = 0; i < n / 2; ++i) {
    const Complex<Real> avg = (w[i] + w[n - 1 - i]) / Real(2);
    w[i] = avg;
    w[n - 1 - i] = avg;
  }
  return w / w.cwiseAbs().maxCoeff();
}

/// Default n-bar for a Taylor taper: 6 at -50 dB and below, 4 otherwise.
template <typename Real>
int default_taylor_nbar(Real sll_db) {
  return sll_db <= Real(-50) ? 6 : 4;
}

/// Real symmetric Taylor n-bar taper, normalized to a unit largest weight.
template <typename Real>
CVector<Real> taylor_excitations(Eigen::Index n, Real sll_db, int nbar) {
  if (n < 2) throw InvalidArgument("Taylor taper needs at least two elements");
  if (!(sll_db < 0)) throw InvalidArgument("sidelobe level must be negative (dB)");
  if (nbar < 1) throw InvalidArgument("Taylor nbar must be at least 1");
  const Real pi = std::numbers::pi_v<Real>;
  const Real a = std::acosh(detail::db_to_ratio(sll_db)) / pi;
  const Real nb = Real(nbar);
  const Real sigma2 = nb * nb / (a * a + (nb - Real(0.5)) * (nb - Real(0.5)));

  std::vector<Real> coeff(std::size_t(nbar > 1 ? nbar - 1 : 0));
  for (int m = 1; m < nbar; ++m) {
    const Real m2 = Real(m) * Real(m);
    Real num = (m % 2 == 1) ? Real(1) : Real(-1);
    Real den = 2;
    for (int i = 1; i < nbar; ++i) {
      const Real half = Real(i) - Real(0.5);
      num *= Real(1) - m2 / (sigma2 * (a * a + half * half));
      if (i != m) den *= Real(1) - m2 / (Real(i) * Real(i));
    }
    coeff[std::size_t(m - 1)] = num / den;
  }

  CVector<Real> w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real x = (Real(i) - Real(n) / 2 + Real(0.5)) / Real(n);
    Real acc = 1;
    for (int m = 1; m < nbar; ++m) acc += 2 * coeff[std::size_t(m - 1)] * std::cos(2 * pi * Real(m) * x);
    w[i] = Complex<Real>(acc, 0);
  }
  for (Eigen::Index i = 0; i < n / 2; ++i) {
    const Complex<Real> avg = (w[i] + w[n - 1 - i]) / Real(2);
    w[i] = avg;
    w[n - 1 - i] = avg;
  }
  return w / w.cwiseAbs().maxCoeff();
}

/// Reference radiated by `excitations` on `grid`, scaled so the largest
/// sample magnitude is 1. The stored source excitations carry the same scale.
template <typename Real>
ReferencePattern<Real> reference_from_excitations(const RadiationOperator<Real>& h,
                                                  const DirectionGrid<Real>& grid,
                                                  const CVector<Real>& excitations,
                                                  std::string label) {
  if (h.rows() != grid.size()) throw DimensionMismatch("operator rows do not match grid size");
  CVector<Real> f = evaluate_pattern(h, excitations);
  const Real peak = f.cwiseAbs().maxCoeff();
  if (!(peak > 0)) throw InvalidArgument("reference excitations radiate a zero pattern");
  return ReferencePattern<Real>{f / peak, grid, CVector<Real>(excitations / peak), std::move(label)};
}

struct FlattopOptions {
  double ripple_db = 0.5;          // allowed +/- ripple over the flat region
  int max_transition_beams = 12;   // widest raised-cosine edge tried
};

/// Flat-top beam by Woodward-Lawson superposition of N-element uniform
/// lambda/2 beams. Beams sit at u_k = 2k/N; beam weights are 1 inside the
/// flat region, follow a raised-cosine edge of T beams and are 0 beyond.
/// The narrowest edge meeting both the ripple and the sidelobe target wins.
template <typename Real>
CVector<Real> flattop_excitations(Eigen::Index n, Real beam_halfwidth_deg, Real sll_db,
                                  const FlattopOptions& opts = {}) {
  if (!(beam_halfwidth_deg > 0 && beam_halfwidth_deg < 90)) {
    throw InvalidArgument("flat-top half-width must lie in (0, 90) degrees");
  }
  if (!(sll_db < 0)) throw InvalidArgument("sidelobe level must be negative (dB)");
  if (n < 2) throw InvalidArgument("flat-top reference needs at least two elements");

  const Real pi = std::numbers::pi_v<Real>;
  const auto geom = ArrayGeometry<Real>::uniform(n, Real(0.5));
  const Real u_edge = std::sin(detail::deg2rad(beam_halfwidth_deg));
  const Real du = Real(2) / Real(n);
  const Eigen::Index kmax = n / 2;
  const Eigen::Index flat_beams = Eigen::Index(std::floor(u_edge / du + Real(1e-9)));
  if (flat_beams < 1) {
    throw InvalidArgument("flat region narrower than one beam spacing for N = " + std::to_string(n) +
                          " (violates the flat region)");
  }

  // Dense check grid, uniform in u, about 64 samples per beam spacing.
  const Eigen::Index check_m = std::max<Eigen::Index>(64 * n, 2048);
  const auto check_grid = DirectionGrid<Real>::uniform_in_u(check_m);
  const auto check_h = build_radiation_operator(geom, ElementPatternSet<Real>::isotropic(), check_grid);

  auto excitations_for = [&](int transition) {
    CVector<Real> w = CVector<Real>::Zero(n);
    const Real centre = Real(n - 1) / 2;
    for (Eigen::Index k = -kmax; k <= kmax; ++k) {
      const Eigen::Index ak = k < 0 ? -k : k;
      Real b = 0;
      if (ak <= flat_beams) {
        b = 1;
      } else if (ak <= flat_beams + transition) {
        const Real t = Real(ak - flat_beams) / Real(transition + 1);
        b = Real(0.5) * (Real(1) + std::cos(pi * t));
      }
      if (b == 0) continue;
      // Even N has one beam too many at u = +-1 (aliased); weight it half.
      if ((n % 2 == 0) && ak == kmax) b *= Real(0.5);
      const Real uk = du * Real(k);
      for (Eigen::Index i = 0; i < n; ++i) {
        w[i] += b * std::polar(Real(1), -pi * (Real(i) - centre) * uk) / Real(n);
      }
    }
    return w;
  };

  std::string last_violation;
  for (int transition = 1; transition <= opts.max_transition_beams; ++transition) {
    if (flat_beams + transition + 1 >= kmax) break;  // no sidelobe region left
    const CVector<Real> w = excitations_for(transition);
    const CVector<Real> f = check_h.matrix() * w;
    const RVector<Real> mag = f.cwiseAbs();
    const Real peak = mag.maxCoeff();
    Real flat_min = peak;
    Real flat_max = 0;
    Real side_max = 0;
    const Real u_stop = du * Real(flat_beams + transition + 1);
    for (Eigen::Index i = 0; i < check_m; ++i) {
      const Real u = std::sin(detail::deg2rad(check_grid.angles()[i]));
      if (std::abs(u) <= u_edge) {
        flat_min = std::min(flat_min, mag[i]);
        flat_max = std::max(flat_max, mag[i]);
      } else if (std::abs(u) >= u_stop) {
        side_max = std::max(side_max, mag[i]);
      }
    }
    const Real ripple = Real(20) * std::log10(flat_max / flat_min) / 2;
    const Real side_db = Real(20) * std::log10(side_max / peak);
    if (ripple > Real(opts.ripple_db)) {
      last_violation = "flat region ripple " + std::to_string(ripple) + " dB";
      continue;
    }
    if (side_db > sll_db) {
      last_violation = "sidelobe region at " + std::to_string(side_db) + " dB";
      continue;
    }
    return w;
  }
  throw InvalidArgument("flat-top mask infeasible for N = " + std::to_string(n) + ": " +
                        (last_violation.empty() ? std::string("no room for a transition band")
                                                : last_violation));
}

/// The flat-top beam of a uniform lambda/2 isotropic array, sampled on `grid`.
template <typename Real>
ReferencePattern<Real> flattop_reference(const DirectionGrid<Real>& grid, Real beam_halfwidth_deg,
                                         Real sll_db, Eigen::Index n,
                                         const FlattopOptions& opts = {}) {
  const CVector<Real> w = flattop_excitations(n, beam_halfwidth_deg, sll_db, opts);
  const auto geom = ArrayGeometry<Real>::uniform(n, Real(0.5));
  const auto h = build_radiation_operator(geom, ElementPatternSet<Real>::isotropic(), grid);
  return reference_from_excitations(h, grid, w, "flattop");
}

}  // namespace tvcs
