#include "tvcs/pipeline.hpp"

#include <cstdio>

#include "tvcs/io.hpp"

namespace tvcs {

namespace fs = std::filesystem;

namespace {

ArrayGeometry<double> make_geometry(const GeometrySpec& g) {
  if (!g.positions.empty()) {
    return ArrayGeometry<double>(Eigen::Map<const RVector<double>>(g.positions.data(), Eigen::Index(g.positions.size())));
  }
  return ArrayGeometry<double>::uniform(g.n, g.spacing);
}

ElementPatternSet<double> make_elements(const ElementSpec& e) {
  if (e.kind == "table") return io::load_element_table(e.path);
  return ElementPatternSet<double>::isotropic();
}

DirectionGrid<double> make_grid(const GridSpec& g, Eigen::Index n) {
  if (g.sampling == "explicit") {
    return DirectionGrid<double>(Eigen::Map<const RVector<double>>(g.angles.data(), Eigen::Index(g.angles.size())));
  }
  const Eigen::Index m = g.m > 0 ? g.m : 2 * n;
  return g.sampling == "theta" ? DirectionGrid<double>::uniform_in_theta(m) : DirectionGrid<double>::uniform_in_u(m);
}

CVector<double> source_excitations(const ReferenceSpec& r, Eigen::Index n) {
  if (r.kind == "dolph") return dolph_excitations<double>(n, r.sll_db);
  if (r.kind == "taylor") {
    return taylor_excitations<double>(n, r.sll_db, r.nbar.value_or(default_taylor_nbar(r.sll_db)));
  }
  if (r.kind == "flattop") return flattop_excitations<double>(n, r.halfwidth_deg, r.sll_db);
  return CVector<double>::Ones(n);
}

std::string point_dir(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%03zu", i + 1);
  return buf;
}

void write_solution_files(const Problem& p, const ClusteredLayout<double>& layout,
                          const MetricsReport<double>& report, const fs::path& out) {
  const CVector<double> w = clustered_excitations(layout);
  const CVector<double>* ref_w = p.ref.source_excitations ? &*p.ref.source_excitations : nullptr;
  io::write_text(out / "excitations.csv", io::synthesis_excitations_csv(ref_w, w));
  io::write_text(out / "layout.csv", io::layout_csv(layout));
  io::write_text(out / "pattern.csv",
                 io::pattern_csv(p.eval.grid.angles(), p.eval.f_ref, evaluate_pattern(p.eval.h, w)));
  io::write_text(out / "report.json", io::report_json(report));
  io::write_text(out / "report.csv", io::report_csv(report));
}

}  // namespace

std::unique_ptr<Problem> build_problem(const RunConfig& cfg) {
  auto geom = make_geometry(cfg.geometry);
  auto elems = make_elements(cfg.elements);
  const Eigen::Index n = geom.size();

  std::optional<ReferencePattern<double>> ref;
  std::optional<RadiationOperator<double>> h;
  if (cfg.reference.kind == "file") {
    ref = io::load_reference(cfg.reference.path);
    h = build_radiation_operator(geom, elems, ref->grid);
  } else {
    const auto grid = make_grid(cfg.grid, n);
    h = build_radiation_operator(geom, elems, grid);
    ref = reference_from_excitations(*h, grid, source_excitations(cfg.reference, n), cfg.reference.kind);
  }
  ReportOptions<double> ro{cfg.dense_factor, cfg.directivity_points};
  auto eval = evaluation_grid(*ref, geom, elems, ro);
  return std::make_unique<Problem>(Problem{std::move(geom), std::move(elems), std::move(*h), std::move(*ref),
                                           std::move(eval), ro});
}

SynthOutput run_synth(const Problem& p, const RunConfig& cfg, const fs::path& out) {
  SolveResult<double> sol = solve(p.h, p.ref.samples, cfg.solver, SolveOptions{true});
  ClusteredLayout<double> layout = extract_clusters(sol.w_hat, cfg.tau);
  const MetricsReport<double> report = full_report(layout, p.eval, p.geom, p.elems, p.report_options);
  write_solution_files(p, layout, report, out);
  io::write_text(out / "trace.csv", io::trace_csv(sol.trace));
  return {std::move(sol), std::move(layout), report};
}

SweepResult<double> run_sweep_command(const Problem& p, const RunConfig& cfg, const fs::path& out,
                                      unsigned threads, bool trace) {
  if (!cfg.sweep) throw ConfigError("config has no sweep section");
  SweepPlan<double> plan{cfg.sweep->gamma, cfg.sweep->beta, cfg.sweep->tau, cfg.solver};
  const SweepProblem<double> prob{p.geom, p.elems, p.h, p.ref.samples, p.eval, p.report_options};
  SweepResult<double> res = run_sweep(prob, plan, threads);
  const auto front = pareto_filter(res.points);

  io::write_text(out / "front.csv", io::front_csv(front));
  io::write_text(out / "points_all.csv", io::front_csv(res.points));
  if (!res.failures.empty()) io::write_text(out / "failures.csv", io::failures_csv(res.failures));

  for (std::size_t i = 0; i < front.size(); ++i) {
    const fs::path dir = out / "front" / point_dir(i);
    write_solution_files(p, front[i].layout, front[i].report, dir);
    if (trace) {
      SolverConfig<double> c = cfg.solver;
      c.gamma = front[i].gamma;
      c.beta = front[i].beta;
      const auto sol = solve(p.h, p.ref.samples, c, SolveOptions{true});
      io::write_text(dir / "trace.csv", io::trace_csv(sol.trace));
    }
  }
  return res;
}

MetricsReport<double> run_eval(const Problem& p, const CVector<double>& w, const fs::path& out) {
  if (w.size() != p.geom.size()) {
    throw DimensionMismatch("excitation file has " + std::to_string(w.size()) + " entries, the array has " +
                            std::to_string(p.geom.size()) + " elements");
  }
  const auto layout = layout_from_runs(w);
  const auto report = full_report(layout, p.eval, p.geom, p.elems, p.report_options);
  io::write_text(out / "report.json", io::report_json(report));
  io::write_text(out / "report.csv", io::report_csv(report));
  return report;
}

void run_reference(const Problem& p, const fs::path& out, Eigen::Index dp_q) {
  if (dp_q > 0 && !p.ref.source_excitations) {
    throw ConfigError("a partition needs a generated reference with source excitations");
  }
  io::write_text(out / "reference.csv", io::reference_csv(p.ref));
  if (!p.ref.source_excitations) return;
  const CVector<double>& w = *p.ref.source_excitations;
  io::write_text(out / "source_excitations.csv", io::excitations_csv(w));
  io::write_text(out / "partition_front.csv", io::partition_front_csv(oracle_front(w)));
  if (dp_q > 0) {
    const auto layout = partition_layout(w, dp_optimal_partition(w, dp_q));
    io::write_text(out / "dp_excitations.csv", io::excitations_csv(clustered_excitations(layout)));
  }
}

}  // namespace tvcs
