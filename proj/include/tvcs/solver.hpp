#pragma once

// Alternating-direction augmented-Lagrangian solver for
//
//   min ||alpha||_1  s.t.  grad(w) = alpha,  H w = f
//
// with complex shrinkage for alpha, one Barzilai-Borwein/Armijo descent step
// for w, and first-order multiplier updates per iteration.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tvcs/array_model.hpp"

namespace tvcs {

template <typename Real>
struct SolverConfig {
  Real beta = 32;                 // TV penalty weight
  Real gamma = 1024;              // data-fit penalty weight
  Real nu = Real(1e-4);           // Armijo sufficient-decrease parameter
  Real delta = Real(1e-5);        // relative-change stopping threshold
  int max_iter = 5000;
  Real backtrack_shrink = Real(0.5);
  int backtrack_max = 30;

  void validate() const {
    auto positive = [](Real v) { return std::isfinite(double(v)) && v > 0; };
    if (!positive(beta)) throw InvalidArgument("beta must be positive and finite");
    if (!positive(gamma)) throw InvalidArgument("gamma must be positive and finite");
    if (!(nu > 0 && nu < 1)) throw InvalidArgument("nu must lie in (0, 1)");
    if (!positive(delta)) throw InvalidArgument("delta must be positive and finite");
    if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
    if (!(backtrack_shrink > 0 && backtrack_shrink < 1)) {
      throw InvalidArgument("backtrack_shrink must lie in (0, 1)");
    }
    if (backtrack_max < 1) throw InvalidArgument("backtrack_max must be at least 1");
  }
};

template <typename Real>
struct SolverState {
  CVector<Real> w, alpha, mu, eta, d, d_prev, w_prev;
  Real sigma = 1;
  Real rho = 1;
  int iter = 1;
  bool has_prev = false;

  /// The all-zero start: w = alpha = mu = eta = 0, k = 1.
  static SolverState zeros(Eigen::Index n, Eigen::Index m) {
    SolverState s;
    s.w = s.alpha = s.mu = s.d = s.d_prev = s.w_prev = CVector<Real>::Zero(n);
    s.eta = CVector<Real>::Zero(m);
    return s;
  }
};

enum class Termination { converged, max_iter };

inline const char* to_string(Termination t) {
  return t == Termination::converged ? "converged" : "max_iter";
}

template <typename Real>
struct TraceRow {
  int iter;
  Real phi, grad_norm, tv_residual, fit_residual, sigma, rho;
};

template <typename Real>
struct SolveResult {
  CVector<Real> w_hat;
  int iterations = 0;
  Termination terminated_by = Termination::max_iter;
  std::vector<Real> objective_trace;
  std::pair<Real, Real> constraint_residuals{0, 0};  // (||grad w - alpha||, ||H w - f||)
  std::vector<TraceRow<Real>> trace;                 // filled only when requested
};

/// Complex soft-thresholding: max(|v| - 1/beta, 0) * v/|v|, and 0 at v = 0.
template <typename Derived>
auto shrink(const Eigen::MatrixBase<Derived>& v, typename Derived::RealScalar beta) {
  using Real = typename Derived::RealScalar;
  using Vec = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  if (!(beta > 0)) throw InvalidArgument("shrink needs beta > 0");
  const Real thr = Real(1) / beta;
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Real mag = std::abs(v[i]);
    out[i] = mag > thr ? v[i] * ((mag - thr) / mag) : typename Derived::Scalar(0);
  }
  return out;
}

namespace detail {

template <typename Real>
void check_dimensions(const SolverState<Real>& s, const RadiationOperator<Real>& h,
                      const CVector<Real>& f) {
  const Eigen::Index n = h.cols();
  const Eigen::Index m = h.rows();
  if (s.w.size() != n || s.alpha.size() != n || s.mu.size() != n) {
    throw DimensionMismatch("solver state length does not match the operator's " +
                            std::to_string(n) + " columns");
  }
  if (s.eta.size() != m || f.size() != m) {
    throw DimensionMismatch("pattern length does not match the operator's " + std::to_string(m) +
                            " rows");
  }
}

// Objective with H w supplied by the caller.
template <typename Real>
Real objective_given_hw(const CVector<Real>& w, const CVector<Real>& alpha, const CVector<Real>& mu,
                        const CVector<Real>& eta, const CVector<Real>& hw, const CVector<Real>& f,
                        Real beta, Real gamma) {
  const CVector<Real> tv_res = discrete_gradient(w) - alpha;
  const CVector<Real> fit_res = hw - f;
  return alpha.cwiseAbs().sum() - mu.dot(tv_res).real() - eta.dot(fit_res).real() +
         beta / 2 * tv_res.squaredNorm() + gamma / 2 * fit_res.squaredNorm();
}

template <typename Real>
CVector<Real> gradient_given_hw(const CVector<Real>& w, const CVector<Real>& alpha,
                                const CVector<Real>& mu, const CVector<Real>& eta,
                                const CVector<Real>& hw, const CMatrix<Real>& h,
                                const CVector<Real>& f, Real beta, Real gamma) {
  const CVector<Real> tv_term = beta * (discrete_gradient(w) - alpha) - mu;
  const CVector<Real> fit_term = gamma * (hw - f) - eta;
  return gradient_adjoint(tv_term) + h.adjoint() * fit_term;
}

template <typename Real>
bool armijo_ratio_ok(Real decrease, Real rho, Real sigma, Real d_norm2, Real nu) {
  return decrease / (rho * sigma * d_norm2) >= nu;
}

}  // namespace detail

/// Augmented Lagrangian value at the state's (w, alpha, mu, eta).
template <typename Real>
Real al_objective(const SolverState<Real>& s, const RadiationOperator<Real>& h,
                  const CVector<Real>& f, const SolverConfig<Real>& cfg) {
  detail::check_dimensions(s, h, f);
  const CVector<Real> hw = h.matrix() * s.w;
  return detail::objective_given_hw(s.w, s.alpha, s.mu, s.eta, hw, f, cfg.beta, cfg.gamma);
}

/// Gradient of the objective in w, as the complex vector whose real and
/// imaginary parts are the partial derivatives along Re w and Im w.
template <typename Real>
CVector<Real> al_gradient(const SolverState<Real>& s, const RadiationOperator<Real>& h,
                          const CVector<Real>& f, const SolverConfig<Real>& cfg) {
  detail::check_dimensions(s, h, f);
  const CVector<Real> hw = h.matrix() * s.w;
  return detail::gradient_given_hw(s.w, s.alpha, s.mu, s.eta, hw, h.matrix(), f, cfg.beta,
                                   cfg.gamma);
}

/// Barzilai-Borwein step Re(s^H s) / Re(s^H y); 1 when the curvature is not positive.
template <typename Real>
Real bb_step(const CVector<Real>& w, const CVector<Real>& w_prev, const CVector<Real>& d,
             const CVector<Real>& d_prev) {
  const CVector<Real> s = w - w_prev;
  const CVector<Real> y = d - d_prev;
  const Real den = s.dot(y).real();
  if (!(den > 0)) return Real(1);
  const Real sigma = s.squaredNorm() / den;
  return (std::isfinite(double(sigma)) && sigma > 0) ? sigma : Real(1);
}

/// Sufficient-decrease test (phi_old - phi_new) / (rho sigma ||d||^2) >= nu.
template <typename Real>
bool armijo_accept(Real phi_old, Real phi_new, Real rho, Real sigma, const CVector<Real>& d,
                   Real nu) {
  const Real dn2 = d.squaredNorm();
  if (!(dn2 > 0)) throw InvalidArgument("Armijo test needs a nonzero direction");
  return detail::armijo_ratio_ok(phi_old - phi_new, rho, sigma, dn2, nu);
}

/// mu - beta (grad w - alpha), eta - gamma (H w - f).
template <typename Real>
std::pair<CVector<Real>, CVector<Real>> update_multipliers(const SolverState<Real>& s,
                                                           const RadiationOperator<Real>& h,
                                                           const CVector<Real>& f,
                                                           const SolverConfig<Real>& cfg) {
  detail::check_dimensions(s, h, f);
  CVector<Real> mu = s.mu - cfg.beta * (discrete_gradient(s.w) - s.alpha);
  CVector<Real> eta = s.eta - cfg.gamma * (h.matrix() * s.w - f);
  return {std::move(mu), std::move(eta)};
}

/// ||w_next - w|| <= delta ||w||, and false whenever w = 0.
template <typename Real>
bool check_convergence(const CVector<Real>& w_next, const CVector<Real>& w, Real delta) {
  const Real base = w.norm();
  if (!(base > 0)) return false;
  return (w_next - w).norm() <= delta * base;
}

struct SolveOptions {
  bool record_trace = false;
};

/// Runs the alternating loop from the all-zero start until the relative
/// change of w drops below delta or max_iter iterations have run.
template <typename Real>
SolveResult<Real> solve(const RadiationOperator<Real>& h, const CVector<Real>& f,
                        const SolverConfig<Real>& cfg, const SolveOptions& opts = {}) {
  cfg.validate();
  const Eigen::Index n = h.cols();
  const Eigen::Index m = h.rows();
  if (f.size() != m) {
    throw DimensionMismatch("reference has " + std::to_string(f.size()) + " samples, operator has " +
                            std::to_string(m) + " rows");
  }
  if (n < 2) throw InvalidArgument("solver needs at least two elements");
  if (!f.allFinite()) throw InvalidArgument("reference samples must be finite");
  if (!(f.squaredNorm() > 0)) throw InvalidArgument("reference pattern is identically zero");

  const CMatrix<Real>& hm = h.matrix();
  const Real beta = cfg.beta;
  const Real gamma = cfg.gamma;

  SolverState<Real> s = SolverState<Real>::zeros(n, m);
  CVector<Real> hw = CVector<Real>::Zero(m);
  SolveResult<Real> res;
  res.terminated_by = Termination::max_iter;

  bool converged = false;
  int k = 1;
  for (; k <= cfg.max_iter; ++k) {
    s.iter = k;

    // (a) alpha from the current w and mu.
    s.alpha = shrink(discrete_gradient(s.w) - s.mu / beta, beta);

    // (b) one descent step on w with alpha, mu, eta frozen.
    s.d = detail::gradient_given_hw(s.w, s.alpha, s.mu, s.eta, hw, hm, f, beta, gamma);
    const Real dn2 = s.d.squaredNorm();
    if (!std::isfinite(double(dn2))) throw SolverDiverged(k);
    if (dn2 > 0) {
      s.sigma = s.has_prev ? bb_step(s.w, s.w_prev, s.d, s.d_prev) : Real(1);
      // The objective is quadratic in w for fixed alpha, so the change along
      // -t d is exactly -t ||d||^2 + t^2/2 (beta ||grad d||^2 + gamma ||H d||^2).
      // Using it directly avoids cancellation in phi_old - phi_new.
      const CVector<Real> hd = hm * s.d;
      const Real curv = beta * discrete_gradient(s.d).squaredNorm() + gamma * hd.squaredNorm();
      Real rho = 1;
      for (int trial = 1; trial < cfg.backtrack_max; ++trial) {
        const Real t = rho * s.sigma;
        if (detail::armijo_ratio_ok(t * dn2 - t * t / 2 * curv, rho, s.sigma, dn2, cfg.nu)) break;
        rho *= cfg.backtrack_shrink;
      }
      s.rho = rho;
      const Real t = rho * s.sigma;
      CVector<Real> w_next = s.w - t * s.d;
      converged = check_convergence(w_next, s.w, cfg.delta);
      s.w_prev = std::move(s.w);
      s.w = std::move(w_next);
      s.d_prev = s.d;
      s.has_prev = true;
      hw -= t * hd;
      // Periodic exact refresh bounds drift from the incremental update.
      if (k % 64 == 0) hw = hm * s.w;
    } else {
      converged = true;
    }

    // (d) multipliers.
    const CVector<Real> tv_res = discrete_gradient(s.w) - s.alpha;
    const CVector<Real> fit_res = hw - f;
    s.mu -= beta * tv_res;
    s.eta -= gamma * fit_res;

    const Real phi = detail::objective_given_hw(s.w, s.alpha, s.mu, s.eta, hw, f, beta, gamma);
    if (!std::isfinite(double(phi))) throw SolverDiverged(k);
    res.objective_trace.push_back(phi);
    if (opts.record_trace) {
      res.trace.push_back({k, phi, std::sqrt(dn2), tv_res.norm(), fit_res.norm(), s.sigma, s.rho});
    }
    if (converged) break;
  }

  res.iterations = std::min(k, cfg.max_iter);
  res.terminated_by = converged ? Termination::converged : Termination::max_iter;
  hw = hm * s.w;
  res.constraint_residuals = {(discrete_gradient(s.w) - s.alpha).norm(), (hw - f).norm()};
  res.w_hat = s.w;
  return res;
}

}  // namespace tvcs
