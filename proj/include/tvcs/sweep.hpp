#pragma once

// Parameter sweeps over (gamma, beta, tau) and the (chi, xi) Pareto filter.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "tvcs/clustering.hpp"
#include "tvcs/metrics.hpp"
#include "tvcs/solver.hpp"

namespace tvcs {

template <typename Real>
struct SweepPlan {
  std::vector<Real> gamma_values;
  std::vector<Real> beta_values;
  std::vector<Real> tau_values;
  SolverConfig<Real> fixed;  // every field except beta and gamma

  void validate() const {
    if (gamma_values.empty() || beta_values.empty() || tau_values.empty()) {
      throw InvalidArgument("sweep plan lists must be non-empty");
    }
    for (Real g : gamma_values) {
      if (!(g > 0) || !std::isfinite(double(g))) throw InvalidArgument("sweep gamma values must be positive");
    }
    for (Real b : beta_values) {
      if (!(b > 0) || !std::isfinite(double(b))) throw InvalidArgument("sweep beta values must be positive");
    }
    for (Real t : tau_values) {
      if (!(t > 0 && t < 1)) throw InvalidArgument("sweep tau values must lie in (0, 1)");
    }
    SolverConfig<Real> probe = fixed;
    probe.beta = beta_values.front();
    probe.gamma = gamma_values.front();
    probe.validate();
  }
};

template <typename Real>
struct ParetoPoint {
  Real chi = 0;
  Real xi = 0;
  Real gamma = 0;
  Real beta = 0;
  Real tau = 0;
  ClusteredLayout<Real> layout;
  MetricsReport<Real> report;
  int iterations = 0;
};

template <typename Real>
struct FailedPoint {
  Real gamma, beta;
  std::string error;
};

template <typename Real>
struct SweepResult {
  std::vector<ParetoPoint<Real>> points;  // plan order: gamma, then beta, then tau
  std::vector<FailedPoint<Real>> failures;
};

/// Everything a sweep needs that stays fixed across plan points.
template <typename Real>
struct SweepProblem {
  const ArrayGeometry<Real>& geom;
  const ElementPatternSet<Real>& elems;
  const RadiationOperator<Real>& h;
  const CVector<Real>& f_ref;
  const EvaluationGrid<Real>& eval;
  ReportOptions<Real> report_options{};
};

/// One solve per (gamma, beta); each solution is clustered and scored for
/// every tau. Solves run on `threads` workers; output order never depends
/// on scheduling.
template <typename Real>
SweepResult<Real> run_sweep(const SweepProblem<Real>& prob, const SweepPlan<Real>& plan,
                            unsigned threads = 1) {
  plan.validate();
  struct Job {
    Real gamma, beta;
  };
  std::vector<Job> jobs;
  for (Real g : plan.gamma_values) {
    for (Real b : plan.beta_values) jobs.push_back({g, b});
  }

  struct Outcome {
    std::vector<ParetoPoint<Real>> points;
    std::string error;
  };
  std::vector<Outcome> outcomes(jobs.size());

  auto run_job = [&](std::size_t i) {
    SolverConfig<Real> cfg = plan.fixed;
    cfg.gamma = jobs[i].gamma;
    cfg.beta = jobs[i].beta;
    try {
      const SolveResult<Real> sol = solve(prob.h, prob.f_ref, cfg);
      for (Real tau : plan.tau_values) {
        ClusteredLayout<Real> layout = extract_clusters(sol.w_hat, tau);
        MetricsReport<Real> rep = full_report(layout, prob.eval, prob.geom, prob.elems, prob.report_options);
        outcomes[i].points.push_back(
            ParetoPoint<Real>{rep.chi, rep.xi, cfg.gamma, cfg.beta, tau, std::move(layout), rep,
                              sol.iterations});
      }
    } catch (const Error& e) {
      outcomes[i].points.clear();
      outcomes[i].error = e.what();
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, unsigned(jobs.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  SweepResult<Real> res;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      res.failures.push_back({jobs[i].gamma, jobs[i].beta, outcomes[i].error});
      continue;
    }
    for (auto& p : outcomes[i].points) res.points.push_back(std::move(p));
  }
  if (res.points.empty()) {
    throw Error("every sweep point failed" +
                (res.failures.empty() ? std::string() : ": " + res.failures.front().error));
  }
  return res;
}

/// Points not dominated in (chi, xi), sorted by chi ascending; xi strictly
/// decreases along the result. Among exact duplicates the earliest is kept.
template <typename Real>
std::vector<ParetoPoint<Real>> pareto_filter(const std::vector<ParetoPoint<Real>>& points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].chi != points[b].chi) return points[a].chi < points[b].chi;
    return points[a].xi < points[b].xi;
  });
  std::vector<ParetoPoint<Real>> front;
  for (std::size_t idx : order) {
    const auto& p = points[idx];
    if (!std::isfinite(double(p.xi)) || !std::isfinite(double(p.chi))) continue;
    if (front.empty() || p.xi < front.back().xi) front.push_back(p);
  }
  return front;
}

}  // namespace tvcs
