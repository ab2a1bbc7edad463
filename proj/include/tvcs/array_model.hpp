#pragma once

// Linear-array geometry, embedded element patterns, direction grids, the
// discretized radiation operator and the discrete gradient along the array.
//
// Angles are measured from broadside (theta = 0 is normal to the array axis)
// and are given in degrees. Element positions are in wavelengths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "tvcs/error.hpp"

namespace tvcs {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

namespace detail {

template <typename Real>
Real deg2rad(Real deg) {
  return deg * std::numbers::pi_v<Real> / Real(180);
}

template <typename Derived>
bool strictly_increasing(const Eigen::DenseBase<Derived>& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace detail

/// Element positions along the array axis, in wavelengths.
template <typename Real>
class ArrayGeometry {
 public:
  explicit ArrayGeometry(RVector<Real> positions) : positions_(std::move(positions)) {
    if (positions_.size() < 1) throw InvalidArgument("array geometry needs at least one element");
    if (!positions_.allFinite()) throw InvalidArgument("array positions must be finite");
    if (!detail::strictly_increasing(positions_)) {
      throw InvalidArgument("array positions must be strictly increasing");
    }
  }

  /// Equally spaced array centred on the origin.
  static ArrayGeometry uniform(Eigen::Index n, Real spacing = Real(0.5)) {
    if (n < 1) throw InvalidArgument("array geometry needs at least one element");
    if (!(spacing > 0)) throw InvalidArgument("element spacing must be positive");
    RVector<Real> z(n);
    const Real centre = Real(n - 1) / 2;
    for (Eigen::Index i = 0; i < n; ++i) z[i] = (Real(i) - centre) * spacing;
    return ArrayGeometry(std::move(z));
  }

  Eigen::Index size() const { return positions_.size(); }
  const RVector<Real>& positions() const { return positions_; }

 private:
  RVector<Real> positions_;
};

/// Embedded element patterns e_n(theta): either isotropic or one tabulated
/// complex function per element, linearly interpolated in theta.
template <typename Real>
class ElementPatternSet {
 public:
  enum class Kind { isotropic, tabulated };

  static ElementPatternSet isotropic() { return ElementPatternSet(); }

  /// `angles_deg` has one entry per table row; `values` is rows x elements.
  static ElementPatternSet tabulated(RVector<Real> angles_deg, CMatrix<Real> values) {
    if (angles_deg.size() < 2) throw InvalidArgument("element table needs at least two angles");
    if (values.rows() != angles_deg.size()) {
      throw DimensionMismatch("element table has " + std::to_string(values.rows()) +
                              " rows but " + std::to_string(angles_deg.size()) + " angles");
    }
    if (values.cols() < 1) throw InvalidArgument("element table has no element columns");
    if (!detail::strictly_increasing(angles_deg)) {
      throw InvalidArgument("element table angles must be strictly increasing");
    }
    if (angles_deg[0] > Real(-90) || angles_deg[angles_deg.size() - 1] < Real(90)) {
      throw InvalidArgument("element table must cover [-90, 90] degrees");
    }
    if (!values.allFinite()) throw InvalidArgument("element table has non-finite entries");
    ElementPatternSet set;
    set.kind_ = Kind::tabulated;
    set.angles_ = std::move(angles_deg);
    set.values_ = std::move(values);
    return set;
  }

  Kind kind() const { return kind_; }
  bool is_isotropic() const { return kind_ == Kind::isotropic; }
  Eigen::Index table_elements() const { return values_.cols(); }
  const RVector<Real>& angles() const { return angles_; }
  const CMatrix<Real>& values() const { return values_; }

  Complex<Real> value(Eigen::Index element, Real theta_deg) const {
    if (kind_ == Kind::isotropic) return Complex<Real>(1, 0);
    if (element < 0 || element >= values_.cols()) {
      throw DimensionMismatch("element index " + std::to_string(element) +
                              " outside the pattern table");
    }
    const Eigen::Index rows = angles_.size();
    if (theta_deg < angles_[0] || theta_deg > angles_[rows - 1]) {
      throw OutOfRange("angle " + std::to_string(theta_deg) +
                       " deg is outside the element pattern table");
    }
    const Real* begin = angles_.data();
    const Real* hi = std::upper_bound(begin, begin + rows, theta_deg);
    Eigen::Index j = std::clamp<Eigen::Index>(hi - begin, 1, rows - 1);
    const Real t = (theta_deg - angles_[j - 1]) / (angles_[j] - angles_[j - 1]);
    return values_(j - 1, element) * (Real(1) - t) + values_(j, element) * t;
  }

 private:
  ElementPatternSet() = default;

  Kind kind_ = Kind::isotropic;
  RVector<Real> angles_;
  CMatrix<Real> values_;
};

/// How a direction grid was laid out.
enum class Sampling { uniform_u, uniform_theta, explicit_angles };

/// Sample directions theta_m in degrees, strictly increasing inside [-90, 90].
template <typename Real>
class DirectionGrid {
 public:
  explicit DirectionGrid(RVector<Real> angles_deg, Sampling sampling = Sampling::explicit_angles)
      : angles_(std::move(angles_deg)), sampling_(sampling) {
    if (angles_.size() < 1) throw InvalidArgument("direction grid is empty");
    if (!angles_.allFinite()) throw InvalidArgument("direction grid has non-finite angles");
    if (!detail::strictly_increasing(angles_)) {
      throw InvalidArgument("direction grid angles must be strictly increasing");
    }
    if (angles_[0] < Real(-90) || angles_[angles_.size() - 1] > Real(90)) {
      throw InvalidArgument("direction grid angles must lie in [-90, 90] degrees");
    }
  }

  /// M midpoint samples uniform in u = sin(theta) over [-1, 1].
  static DirectionGrid uniform_in_u(Eigen::Index m) {
    if (m < 1) throw InvalidArgument("direction grid needs at least one sample");
    RVector<Real> a(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Real u = Real(-1) + Real(2 * i + 1) / Real(m);
      a[i] = std::asin(u) * Real(180) / std::numbers::pi_v<Real>;
    }
    return DirectionGrid(std::move(a), Sampling::uniform_u);
  }

  /// M midpoint samples uniform in theta over [-90, 90] degrees.
  static DirectionGrid uniform_in_theta(Eigen::Index m) {
    if (m < 1) throw InvalidArgument("direction grid needs at least one sample");
    RVector<Real> a(m);
    for (Eigen::Index i = 0; i < m; ++i) a[i] = Real(-90) + Real(180) * (Real(i) + Real(0.5)) / Real(m);
    return DirectionGrid(std::move(a), Sampling::uniform_theta);
  }

  /// A grid of `factor` times as many samples laid out the same way;
  /// explicit grids refine to uniform-in-u.
  DirectionGrid refined(Eigen::Index factor) const {
    if (factor < 1) throw InvalidArgument("grid refinement factor must be at least 1");
    const Eigen::Index m = factor * size();
    return sampling_ == Sampling::uniform_theta ? uniform_in_theta(m) : uniform_in_u(m);
  }

  Eigen::Index size() const { return angles_.size(); }
  const RVector<Real>& angles() const { return angles_; }
  Sampling sampling() const { return sampling_; }

 private:
  RVector<Real> angles_;
  Sampling sampling_;
};

/// Dense M x N matrix mapping excitations to far-field samples.
template <typename Real>
class RadiationOperator {
 public:
  explicit RadiationOperator(CMatrix<Real> matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() < 1 || matrix_.cols() < 1) throw InvalidArgument("empty radiation operator");
    if (!matrix_.allFinite()) throw InvalidArgument("radiation operator has non-finite entries");
  }

  const CMatrix<Real>& matrix() const { return matrix_; }
  Eigen::Index rows() const { return matrix_.rows(); }
  Eigen::Index cols() const { return matrix_.cols(); }

 private:
  CMatrix<Real> matrix_;
};

/// h_mn = e_n(theta_m) * exp(j 2 pi z_n sin(theta_m)).
///
/// The grid must hold at least as many directions as the array has elements,
/// otherwise the pattern-matching constraint is underdetermined.
template <typename Real>
RadiationOperator<Real> build_radiation_operator(const ArrayGeometry<Real>& geom,
                                                 const ElementPatternSet<Real>& elems,
                                                 const DirectionGrid<Real>& grid) {
  const Eigen::Index n = geom.size();
  const Eigen::Index m = grid.size();
  if (m < n) {
    throw InvalidArgument("direction grid has " + std::to_string(m) + " samples, fewer than the " +
                          std::to_string(n) + " array elements");
  }
  if (!elems.is_isotropic() && elems.table_elements() != n) {
    throw DimensionMismatch("element table has " + std::to_string(elems.table_elements()) +
                            " elements, geometry has " + std::to_string(n));
  }
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  CMatrix<Real> h(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Real theta = grid.angles()[i];
    const Real s = std::sin(detail::deg2rad(theta));
    for (Eigen::Index j = 0; j < n; ++j) {
      h(i, j) = elems.value(j, theta) * std::polar(Real(1), two_pi * geom.positions()[j] * s);
    }
  }
  return RadiationOperator<Real>(std::move(h));
}

/// Far-field samples f = H w.
template <typename Real, typename Derived>
CVector<Real> evaluate_pattern(const RadiationOperator<Real>& h, const Eigen::MatrixBase<Derived>& w) {
  if (w.size() != h.cols()) {
    throw DimensionMismatch("excitation length " + std::to_string(w.size()) +
                            " does not match operator with " + std::to_string(h.cols()) +
                            " columns");
  }
  return h.matrix() * w;
}

/// Forward differences (grad w)_n = w_{n+1} - w_n with a zero last entry.
template <typename Derived>
auto discrete_gradient(const Eigen::MatrixBase<Derived>& w) {
  using Vec = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = w.size();
  if (n < 2) throw InvalidArgument("discrete gradient needs at least two entries");
  Vec g(n);
  g.head(n - 1) = w.tail(n - 1) - w.head(n - 1);
  g[n - 1] = typename Derived::Scalar(0);
  return g;
}

/// Adjoint of discrete_gradient.
template <typename Derived>
auto gradient_adjoint(const Eigen::MatrixBase<Derived>& v) {
  using Vec = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = v.size();
  if (n < 2) throw InvalidArgument("gradient adjoint needs at least two entries");
  Vec r = Vec::Zero(n);
  r.head(n - 1) -= v.head(n - 1);
  r.tail(n - 1) += v.head(n - 1);
  return r;
}

}  // namespace tvcs
