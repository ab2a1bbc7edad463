#pragma once

// Wiring from a RunConfig to solver runs and output files.

#include <filesystem>
#include <memory>

#include "tvcs/config.hpp"
#include "tvcs/metrics.hpp"
#include "tvcs/partition.hpp"
#include "tvcs/reference.hpp"
#include "tvcs/sweep.hpp"

namespace tvcs {

/// Everything derived from a config before any solve.
struct Problem {
  ArrayGeometry<double> geom;
  ElementPatternSet<double> elems;
  RadiationOperator<double> h;
  ReferencePattern<double> ref;
  EvaluationGrid<double> eval;
  ReportOptions<double> report_options;
};

std::unique_ptr<Problem> build_problem(const RunConfig& cfg);

struct SynthOutput {
  SolveResult<double> solution;
  ClusteredLayout<double> layout;
  MetricsReport<double> report;
};

/// Solve, extract at cfg.tau, score; writes excitations.csv, layout.csv,
/// pattern.csv, report.json, report.csv and trace.csv into `out`.
SynthOutput run_synth(const Problem& p, const RunConfig& cfg, const std::filesystem::path& out);

/// Runs cfg.sweep; writes front.csv, points_all.csv, failures.csv (only when
/// some solve failed) and front/point_NNN/ artifacts. With `trace`, each
/// front point also gets its solver trace.
SweepResult<double> run_sweep_command(const Problem& p, const RunConfig& cfg,
                                      const std::filesystem::path& out, unsigned threads, bool trace);

/// Scores externally supplied excitations; clusters are runs of equal weights.
MetricsReport<double> run_eval(const Problem& p, const CVector<double>& w, const std::filesystem::path& out);

/// Writes reference.csv. When the reference has source excitations, also
/// writes source_excitations.csv and partition_front.csv (optimal contiguous
/// partitions of them for every q), and with dp_q > 0 the block-mean
/// excitations of the optimal dp_q-block partition as dp_excitations.csv.
void run_reference(const Problem& p, const std::filesystem::path& out, Eigen::Index dp_q = 0);

}  // namespace tvcs
