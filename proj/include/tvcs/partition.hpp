#pragma once

// Optimal contiguous partition of an excitation vector into q blocks, each
// replaced by its mean, minimizing the total squared deviation.

#include <limits>
#include <string>
#include <vector>

#include "tvcs/clustering.hpp"

namespace tvcs {

template <typename Real>
struct PartitionResult {
  std::vector<Eigen::Index> starts;  // 0-based block starts, first = 0
  Real cost = 0;
  Eigen::Index q = 0;
};

namespace detail {

// Squared deviation of w[lo, hi) about its mean, from prefix sums.
template <typename Real>
class SegmentCost {
 public:
  explicit SegmentCost(const CVector<Real>& w) : s1_(w.size() + 1), s2_(w.size() + 1) {
    s1_[0] = 0;
    s2_[0] = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      s1_[i + 1] = s1_[i] + w[i];
      s2_[i + 1] = s2_[i] + std::norm(w[i]);
    }
  }

  Real operator()(Eigen::Index lo, Eigen::Index hi) const {
    const Complex<Real> s = s1_[hi] - s1_[lo];
    const Real c = (s2_[hi] - s2_[lo]) - std::norm(s) / Real(hi - lo);
    return c > 0 ? c : Real(0);
  }

 private:
  CVector<Real> s1_;
  RVector<Real> s2_;
};

// Tolerance under which two partition costs count as tied.
template <typename Real>
Real tie_tolerance(const CVector<Real>& w) {
  return Real(64) * std::numeric_limits<Real>::epsilon() * (Real(1) + w.squaredNorm());
}

// best(k, i): least cost of splitting the suffix w[i, N) into k blocks.
template <typename Real>
std::vector<RVector<Real>> suffix_table(const SegmentCost<Real>& cost, Eigen::Index n,
                                        Eigen::Index qmax) {
  const Real inf = std::numeric_limits<Real>::infinity();
  std::vector<RVector<Real>> best(std::size_t(qmax + 1), RVector<Real>::Constant(n + 1, inf));
  best[0][n] = 0;
  for (Eigen::Index k = 1; k <= qmax; ++k) {
    auto& row = best[std::size_t(k)];
    const auto& prev = best[std::size_t(k - 1)];
    for (Eigen::Index i = n - k; i >= 0; --i) {
      Real b = inf;
      for (Eigen::Index j = i + 1; j <= n - (k - 1); ++j) {
        if (prev[j] == inf) continue;
        b = std::min(b, cost(i, j) + prev[j]);
      }
      row[i] = b;
    }
  }
  return best;
}

// Rebuild the lexicographically smallest optimal split into q blocks.
template <typename Real>
PartitionResult<Real> trace_back(const SegmentCost<Real>& cost,
                                 const std::vector<RVector<Real>>& best, Eigen::Index n,
                                 Eigen::Index q, Real tol) {
  PartitionResult<Real> r;
  r.q = q;
  r.cost = best[std::size_t(q)][0];
  Eigen::Index i = 0;
  for (Eigen::Index k = q; k >= 1; --k) {
    r.starts.push_back(i);
    const auto& prev = best[std::size_t(k - 1)];
    const Real target = best[std::size_t(k)][i];
    Eigen::Index next = -1;
    for (Eigen::Index j = i + 1; j <= n - (k - 1); ++j) {
      if (prev[j] == std::numeric_limits<Real>::infinity()) continue;
      if (cost(i, j) + prev[j] <= target + tol) {
        next = j;
        break;
      }
    }
    i = next;
  }
  return r;
}

}  // namespace detail

/// Exact optimum over all splits of w into q contiguous blocks. Ties go to
/// the lexicographically smallest start list.
template <typename Real>
PartitionResult<Real> dp_optimal_partition(const CVector<Real>& w, Eigen::Index q) {
  const Eigen::Index n = w.size();
  if (n < 1) throw InvalidArgument("cannot partition an empty vector");
  if (q < 1 || q > n) {
    throw InvalidArgument("q = " + std::to_string(q) + " outside [1, " + std::to_string(n) + "]");
  }
  const detail::SegmentCost<Real> cost(w);
  const auto best = detail::suffix_table(cost, n, q);
  return detail::trace_back(cost, best, n, q, detail::tie_tolerance(w));
}

/// Optimal partitions for every q = 1..N.
template <typename Real>
std::vector<PartitionResult<Real>> oracle_front(const CVector<Real>& w) {
  const Eigen::Index n = w.size();
  if (n < 1) return {};
  const detail::SegmentCost<Real> cost(w);
  const auto best = detail::suffix_table(cost, n, n);
  const Real tol = detail::tie_tolerance(w);
  std::vector<PartitionResult<Real>> out;
  out.reserve(std::size_t(n));
  for (Eigen::Index q = 1; q <= n; ++q) out.push_back(detail::trace_back(cost, best, n, q, tol));
  return out;
}

/// The layout obtained by replacing each optimal block by its mean.
template <typename Real>
ClusteredLayout<Real> partition_layout(const CVector<Real>& w, const PartitionResult<Real>& p) {
  return layout_from_starts(w, p.starts);
}

}  // namespace tvcs
