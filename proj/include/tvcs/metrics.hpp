#pragma once

// Scoring: pattern-matching index, dynamic range ratio, sidelobe level, peak
// directivity, and the combined report for a clustered solution.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "tvcs/array_model.hpp"
#include "tvcs/clustering.hpp"
#include "tvcs/reference.hpp"

namespace tvcs {

template <typename Real>
struct MetricsReport {
  Real xi = 0;
  Real chi = 0;
  Real drr_db = 0;
  Real sll_db = 0;
  Real dmax_db = 0;
  Eigen::Index q = 0;
};

/// ||f - f_ref||^2 / ||f_ref||^2.
template <typename Real>
Real pattern_matching_index(const CVector<Real>& f, const CVector<Real>& f_ref) {
  if (f.size() != f_ref.size()) {
    throw DimensionMismatch("pattern lengths differ: " + std::to_string(f.size()) + " vs " +
                            std::to_string(f_ref.size()));
  }
  const Real den = f_ref.squaredNorm();
  if (!(den > 0)) throw InvalidArgument("reference pattern is identically zero");
  return (f - f_ref).squaredNorm() / den;
}

/// max|w| / min|w|.
template <typename Real>
Real dynamic_range_ratio(const CVector<Real>& w) {
  if (w.size() < 1) throw InvalidArgument("empty excitation vector");
  const RVector<Real> mag = w.cwiseAbs();
  const Real lo = mag.minCoeff();
  if (!(lo > 0)) throw InvalidArgument("dynamic range ratio undefined with a zero weight");
  return mag.maxCoeff() / lo;
}

template <typename Real>
Real to_db20(Real ratio) {
  return Real(20) * std::log10(ratio);
}

/// Highest lobe outside the null-to-null mainlobe, in dB relative to the
/// peak. Samples must be ordered along a dense angular grid.
template <typename Real>
Real sidelobe_level(const RVector<Real>& mag) {
  const Eigen::Index m = mag.size();
  if (m < 3) throw InvalidArgument("sidelobe scan needs at least three samples");
  Eigen::Index peak = 0;
  const Real pmax = mag.maxCoeff(&peak);
  if (!(pmax > 0)) throw InvalidArgument("sidelobe scan on a zero pattern");

  Eigen::Index right = peak;
  while (right + 1 < m && mag[right + 1] <= mag[right]) ++right;
  Eigen::Index left = peak;
  while (left > 0 && mag[left - 1] <= mag[left]) --left;

  Real side = -1;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i >= left && i <= right) continue;
    const bool ge_prev = i == 0 || mag[i] >= mag[i - 1];
    const bool ge_next = i + 1 == m || mag[i] >= mag[i + 1];
    if (ge_prev && ge_next) side = std::max(side, mag[i]);
  }
  if (side < 0) throw InvalidArgument("pattern has no sidelobe");
  if (!(side > 0)) return -std::numeric_limits<Real>::infinity();
  return to_db20(side / pmax);
}

template <typename Real>
Real sidelobe_level(const CVector<Real>& f) {
  return sidelobe_level<Real>(RVector<Real>(f.cwiseAbs()));
}

/// 2 max|F|^2 / integral_0^pi |F|^2 sin(Theta) dTheta in dB, Theta measured
/// from the array axis, by midpoint quadrature with `points` samples.
template <typename Real>
Real peak_directivity(const CVector<Real>& w, const ArrayGeometry<Real>& geom,
                      const ElementPatternSet<Real>& elems, Eigen::Index points = 4096) {
  if (points < 16) throw InvalidArgument("directivity quadrature needs at least 16 points");
  if (w.size() != geom.size()) {
    throw DimensionMismatch("excitation length " + std::to_string(w.size()) +
                            " does not match " + std::to_string(geom.size()) + " elements");
  }
  const Real pi = std::numbers::pi_v<Real>;
  const Real step = pi / Real(points);
  Real peak = 0;
  Real integral = 0;
  for (Eigen::Index i = 0; i < points; ++i) {
    const Real axis_angle = (Real(i) + Real(0.5)) * step;
    const Real theta_deg = Real(90) - axis_angle * Real(180) / pi;
    const Real s = std::cos(axis_angle);
    Complex<Real> f(0, 0);
    for (Eigen::Index n = 0; n < w.size(); ++n) {
      f += w[n] * elems.value(n, theta_deg) * std::polar(Real(1), 2 * pi * geom.positions()[n] * s);
    }
    const Real p = std::norm(f);
    peak = std::max(peak, p);
    integral += p * std::sin(axis_angle) * step;
  }
  if (!(integral > 0)) throw InvalidArgument("directivity of a zero pattern");
  return Real(10) * std::log10(Real(2) * peak / integral);
}

template <typename Real>
struct ReportOptions {
  Eigen::Index dense_factor = 10;
  Eigen::Index directivity_points = 4096;
};

/// Reference samples on the dense evaluation grid, or on its own grid when
/// the reference has no source excitations to re-radiate.
template <typename Real>
struct EvaluationGrid {
  DirectionGrid<Real> grid;
  RadiationOperator<Real> h;
  CVector<Real> f_ref;
};

template <typename Real>
EvaluationGrid<Real> evaluation_grid(const ReferencePattern<Real>& ref,
                                     const ArrayGeometry<Real>& geom,
                                     const ElementPatternSet<Real>& elems,
                                     const ReportOptions<Real>& opts = {}) {
  if (ref.source_excitations) {
    auto grid = ref.grid.refined(opts.dense_factor);
    auto h = build_radiation_operator(geom, elems, grid);
    CVector<Real> f = evaluate_pattern(h, *ref.source_excitations);
    return {std::move(grid), std::move(h), std::move(f)};
  }
  auto h = build_radiation_operator(geom, elems, ref.grid);
  return {ref.grid, std::move(h), ref.samples};
}

/// Scores the clustered excitations of `layout` against the reference.
template <typename Real>
MetricsReport<Real> full_report(const ClusteredLayout<Real>& layout, const EvaluationGrid<Real>& eval,
                                const ArrayGeometry<Real>& geom,
                                const ElementPatternSet<Real>& elems,
                                const ReportOptions<Real>& opts = {}) {
  const CVector<Real> w = clustered_excitations(layout);
  const CVector<Real> f = evaluate_pattern(eval.h, w);
  MetricsReport<Real> r;
  r.xi = pattern_matching_index(f, eval.f_ref);
  r.q = layout.q();
  r.chi = clustering_factor(layout);
  r.drr_db = to_db20(dynamic_range_ratio(w));

  // Sidelobes are scanned uniformly in u so every lobe gets the same sampling.
  const auto sll_grid =
      DirectionGrid<Real>::uniform_in_u(std::max<Eigen::Index>(eval.grid.size(), 32 * w.size()));
  const auto sll_h = build_radiation_operator(geom, elems, sll_grid);
  r.sll_db = sidelobe_level<Real>(CVector<Real>(evaluate_pattern(sll_h, w)));
  r.dmax_db = peak_directivity(w, geom, elems, opts.directivity_points);
  return r;
}

}  // namespace tvcs
