#pragma once

// CSV and JSON file formats. Numbers are written in shortest round-trip form,
// so a save/load cycle reproduces every double bit for bit.

#include <filesystem>
#include <string>
#include <vector>

#include "tvcs/array_model.hpp"
#include "tvcs/clustering.hpp"
#include "tvcs/metrics.hpp"
#include "tvcs/partition.hpp"
#include "tvcs/reference.hpp"
#include "tvcs/solver.hpp"
#include "tvcs/sweep.hpp"

namespace tvcs::io {

namespace fs = std::filesystem;

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

/// Minimal CSV table: one header row, then rows of fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row, 1-based

  /// Column index by name; throws ParseError naming `source` if missing.
  std::size_t column(const std::string& name, const std::string& source) const;
};

CsvTable read_csv(const fs::path& path);
CsvTable parse_csv(const std::string& text, const std::string& source);
double parse_number(const std::string& field, const std::string& source, std::size_t line);
long parse_integer(const std::string& field, const std::string& source, std::size_t line);

void write_text(const fs::path& path, const std::string& text);

/// `theta_deg, re_1, im_1, ..., re_N, im_N`.
ElementPatternSet<double> load_element_table(const fs::path& path);
std::string element_table_csv(const ElementPatternSet<double>& elems);

/// `theta_deg, re, im`.
ReferencePattern<double> load_reference(const fs::path& path);
std::string reference_csv(const ReferencePattern<double>& ref);

/// `n, re, im` with 1-based n.
std::string excitations_csv(const CVector<double>& w);
/// Accepts `re, im` or `tvcs_re, tvcs_im` columns; rows ordered by n.
CVector<double> load_excitations(const fs::path& path);

/// `n, ref_re, ref_im, tvcs_re, tvcs_im`; reference columns empty when absent.
std::string synthesis_excitations_csv(const CVector<double>* reference, const CVector<double>& clustered);

/// `cluster_id, first_element, last_element, re_weight, im_weight`, 1-based.
std::string layout_csv(const ClusteredLayout<double>& layout);

/// `theta_deg, ref_db, tvcs_db`, each normalized to its own peak.
std::string pattern_csv(const RVector<double>& theta_deg, const CVector<double>& ref,
                        const CVector<double>& tvcs);

/// `iter, phi, grad_norm, tv_residual, fit_residual, sigma, rho`.
std::string trace_csv(const std::vector<TraceRow<double>>& trace);

/// Six-field report as a JSON object and as a one-row CSV.
std::string report_json(const MetricsReport<double>& r);
std::string report_csv(const MetricsReport<double>& r);

/// `chi, xi, q, gamma, beta, tau, sll_db, dmax_db, drr_db`.
std::string front_csv(const std::vector<ParetoPoint<double>>& points);
/// `gamma, beta, error`.
std::string failures_csv(const std::vector<FailedPoint<double>>& failures);

/// `q, cost, boundaries` with boundaries as space-separated 1-based starts.
std::string partition_front_csv(const std::vector<PartitionResult<double>>& front);

}  // namespace tvcs::io
