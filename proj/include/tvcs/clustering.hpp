#pragma once

// Contiguous clustered layouts: extraction from a nearly piecewise-constant
// excitation vector, expansion back to per-element weights, and Q/N.
//
// Cluster starts are 0-based element indices; the first one is always 0.

#include <cmath>
#include <string>
#include <vector>

#include "tvcs/array_model.hpp"

namespace tvcs {

template <typename Real>
class ClusteredLayout {
 public:
  ClusteredLayout(std::vector<Eigen::Index> starts, CVector<Real> weights, Eigen::Index n_elements)
      : starts_(std::move(starts)), weights_(std::move(weights)), n_(n_elements) {
    if (n_ < 1) throw InvalidArgument("layout needs at least one element");
    if (starts_.empty() || starts_.front() != 0) {
      throw InvalidArgument("first cluster must start at element 0");
    }
    for (std::size_t i = 1; i < starts_.size(); ++i) {
      if (starts_[i] <= starts_[i - 1] || starts_[i] >= n_) {
        throw InvalidArgument("cluster starts must be strictly increasing within [0, N)");
      }
    }
    if (weights_.size() != Eigen::Index(starts_.size())) {
      throw DimensionMismatch("layout has " + std::to_string(starts_.size()) + " clusters but " +
                              std::to_string(weights_.size()) + " weights");
    }
    if (!weights_.allFinite()) throw InvalidArgument("cluster weights must be finite");
  }

  /// One cluster per element.
  static ClusteredLayout trivial(const CVector<Real>& w) {
    std::vector<Eigen::Index> starts(std::size_t(w.size()));
    for (Eigen::Index i = 0; i < w.size(); ++i) starts[std::size_t(i)] = i;
    return ClusteredLayout(std::move(starts), w, w.size());
  }

  const std::vector<Eigen::Index>& starts() const { return starts_; }
  const CVector<Real>& weights() const { return weights_; }
  Eigen::Index n_elements() const { return n_; }
  Eigen::Index q() const { return Eigen::Index(starts_.size()); }

  /// Last element (inclusive) of cluster c.
  Eigen::Index last(Eigen::Index c) const {
    return c + 1 < q() ? starts_[std::size_t(c + 1)] - 1 : n_ - 1;
  }

 private:
  std::vector<Eigen::Index> starts_;
  CVector<Real> weights_;
  Eigen::Index n_;
};

/// Mean of w over each block given by `starts`.
template <typename Real>
ClusteredLayout<Real> layout_from_starts(const CVector<Real>& w, std::vector<Eigen::Index> starts) {
  const Eigen::Index n = w.size();
  CVector<Real> weights(Eigen::Index(starts.size()));
  for (std::size_t c = 0; c < starts.size(); ++c) {
    const Eigen::Index lo = starts[c];
    const Eigen::Index hi = c + 1 < starts.size() ? starts[c + 1] : n;
    if (hi <= lo) throw InvalidArgument("cluster starts must be strictly increasing within [0, N)");
    weights[Eigen::Index(c)] = w.segment(lo, hi - lo).mean();
  }
  return ClusteredLayout<Real>(std::move(starts), std::move(weights), n);
}

/// Clusters are the runs of exactly equal consecutive weights of w.
template <typename Real>
ClusteredLayout<Real> layout_from_runs(const CVector<Real>& w) {
  if (w.size() < 1) throw InvalidArgument("cannot cluster an empty excitation vector");
  std::vector<Eigen::Index> starts{0};
  for (Eigen::Index i = 1; i < w.size(); ++i) {
    if (w[i] != w[i - 1]) starts.push_back(i);
  }
  return layout_from_starts(w, std::move(starts));
}

template <typename Real>
struct ExtractOptions {
  // Gradient jumps at or below floor * max|w| are treated as rounding noise.
  Real floor = Real(1e-6);
};

/// Borders after every element n with |w_{n+1} - w_n| > tau * max|grad w|.
template <typename Real>
ClusteredLayout<Real> extract_clusters(const CVector<Real>& w_hat, Real tau,
                                       const ExtractOptions<Real>& opts = {}) {
  if (!(tau > 0 && tau < 1)) throw InvalidArgument("tau must lie in (0, 1)");
  if (w_hat.size() < 1) throw InvalidArgument("cannot cluster an empty excitation vector");
  if (!w_hat.allFinite()) throw InvalidArgument("excitations must be finite");
  const Eigen::Index n = w_hat.size();
  std::vector<Eigen::Index> starts{0};
  if (n >= 2) {
    const RVector<Real> jumps = discrete_gradient(w_hat).cwiseAbs();
    const Real gmax = jumps.maxCoeff();
    const Real noise = opts.floor * w_hat.cwiseAbs().maxCoeff();
    if (gmax > noise) {
      const Real thr = std::max(tau * gmax, noise);
      for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (jumps[i] > thr) starts.push_back(i + 1);
      }
    }
  }
  return layout_from_starts(w_hat, std::move(starts));
}

/// Q / N.
template <typename Real>
Real clustering_factor(const ClusteredLayout<Real>& layout) {
  return Real(layout.q()) / Real(layout.n_elements());
}

/// Per-element weights: each element takes its cluster's weight.
template <typename Real>
CVector<Real> clustered_excitations(const ClusteredLayout<Real>& layout) {
  CVector<Real> w(layout.n_elements());
  for (Eigen::Index c = 0; c < layout.q(); ++c) {
    const Eigen::Index lo = layout.starts()[std::size_t(c)];
    w.segment(lo, layout.last(c) - lo + 1).setConstant(layout.weights()[c]);
  }
  return w;
}

}  // namespace tvcs
