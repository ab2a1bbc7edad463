#include "tvcs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tvcs::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) s += ',';
    s += fields[i];
  }
  return s;
}

std::string db_or_floor(double mag, double peak) {
  if (!(peak > 0)) return format_number(-300.0);
  const double db = 20.0 * std::log10(mag / peak);
  return format_number(std::isfinite(db) ? std::max(db, -300.0) : -300.0);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::size_t CsvTable::column(const std::string& name, const std::string& source) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError(source, 1, "missing column '" + name + "'");
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(t.header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw ParseError(source, 1, "empty file");
  return t;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.string());
}

double parse_number(const std::string& field, const std::string& source, std::size_t line) {
  double v = 0;
  const char* b = field.data();
  const char* e = b + field.size();
  if (!field.empty() && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != e) {
    throw ParseError(source, line, "not a number: '" + field + "'");
  }
  return v;
}

long parse_integer(const std::string& field, const std::string& source, std::size_t line) {
  long v = 0;
  const char* b = field.data();
  const char* e = b + field.size();
  const auto res = std::from_chars(b, e, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != e) {
    throw ParseError(source, line, "not an integer: '" + field + "'");
  }
  return v;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

ElementPatternSet<double> load_element_table(const fs::path& path) {
  const std::string src = path.string();
  const CsvTable t = read_csv(path);
  if (t.header.empty() || t.header[0] != "theta_deg") {
    throw ParseError(src, 1, "first column must be theta_deg");
  }
  if (t.header.size() < 3 || (t.header.size() - 1) % 2 != 0) {
    throw ParseError(src, 1, "expected column pairs re_n, im_n after theta_deg");
  }
  const std::size_t n = (t.header.size() - 1) / 2;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string re = "re_" + std::to_string(k + 1);
    const std::string im = "im_" + std::to_string(k + 1);
    if (t.header[1 + 2 * k] != re || t.header[2 + 2 * k] != im) {
      throw ParseError(src, 1, "expected columns " + re + ", " + im);
    }
  }
  if (t.rows.empty()) throw ParseError(src, 2, "no data rows");
  RVector<double> angles(Eigen::Index(t.rows.size()));
  CMatrix<double> values(Eigen::Index(t.rows.size()), Eigen::Index(n));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::size_t ln = t.line_numbers[r];
    angles[Eigen::Index(r)] = parse_number(t.rows[r][0], src, ln);
    for (std::size_t k = 0; k < n; ++k) {
      values(Eigen::Index(r), Eigen::Index(k)) = {parse_number(t.rows[r][1 + 2 * k], src, ln),
                                                   parse_number(t.rows[r][2 + 2 * k], src, ln)};
    }
  }
  try {
    return ElementPatternSet<double>::tabulated(std::move(angles), std::move(values));
  } catch (const InvalidArgument& e) {
    throw ParseError(src, 1, e.what());
  }
}

std::string element_table_csv(const ElementPatternSet<double>& elems) {
  std::vector<std::string> head{"theta_deg"};
  for (Eigen::Index k = 0; k < elems.table_elements(); ++k) {
    head.push_back("re_" + std::to_string(k + 1));
    head.push_back("im_" + std::to_string(k + 1));
  }
  std::string s = join(head) + "\n";
  for (Eigen::Index r = 0; r < elems.angles().size(); ++r) {
    std::vector<std::string> f{format_number(elems.angles()[r])};
    for (Eigen::Index k = 0; k < elems.table_elements(); ++k) {
      f.push_back(format_number(elems.values()(r, k).real()));
      f.push_back(format_number(elems.values()(r, k).imag()));
    }
    s += join(f) + "\n";
  }
  return s;
}

ReferencePattern<double> load_reference(const fs::path& path) {
  const std::string src = path.string();
  const CsvTable t = read_csv(path);
  const std::size_t ct = t.column("theta_deg", src);
  const std::size_t cr = t.column("re", src);
  const std::size_t ci = t.column("im", src);
  if (t.rows.empty()) throw ParseError(src, 2, "no data rows");
  RVector<double> angles(Eigen::Index(t.rows.size()));
  CVector<double> samples(Eigen::Index(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::size_t ln = t.line_numbers[r];
    angles[Eigen::Index(r)] = parse_number(t.rows[r][ct], src, ln);
    samples[Eigen::Index(r)] = {parse_number(t.rows[r][cr], src, ln), parse_number(t.rows[r][ci], src, ln)};
  }
  if (!(samples.squaredNorm() > 0)) throw ParseError(src, 2, "reference pattern is identically zero");
  try {
    return ReferencePattern<double>{samples, DirectionGrid<double>(std::move(angles)), std::nullopt,
                                    path.stem().string()};
  } catch (const InvalidArgument& e) {
    throw ParseError(src, 2, e.what());
  }
}

std::string reference_csv(const ReferencePattern<double>& ref) {
  std::string s = "theta_deg,re,im\n";
  for (Eigen::Index i = 0; i < ref.samples.size(); ++i) {
    s += format_number(ref.grid.angles()[i]) + "," + format_number(ref.samples[i].real()) + "," +
         format_number(ref.samples[i].imag()) + "\n";
  }
  return s;
}

std::string excitations_csv(const CVector<double>& w) {
  std::string s = "n,re,im\n";
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    s += std::to_string(i + 1) + "," + format_number(w[i].real()) + "," + format_number(w[i].imag()) + "\n";
  }
  return s;
}

CVector<double> load_excitations(const fs::path& path) {
  const std::string src = path.string();
  const CsvTable t = read_csv(path);
  auto find = [&](const std::string& name) -> long {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (t.header[i] == name) return long(i);
    }
    return -1;
  };
  long cr = find("re");
  long ci = find("im");
  if (cr < 0 || ci < 0) {
    cr = find("tvcs_re");
    ci = find("tvcs_im");
  }
  if (cr < 0 || ci < 0) throw ParseError(src, 1, "expected columns re, im (or tvcs_re, tvcs_im)");
  const long cn = find("n");
  if (t.rows.empty()) throw ParseError(src, 2, "no data rows");
  CVector<double> w(Eigen::Index(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::size_t ln = t.line_numbers[r];
    if (cn >= 0 && parse_integer(t.rows[r][std::size_t(cn)], src, ln) != long(r + 1)) {
      throw ParseError(src, ln, "element numbers must run 1, 2, ... in order");
    }
    w[Eigen::Index(r)] = {parse_number(t.rows[r][std::size_t(cr)], src, ln),
                          parse_number(t.rows[r][std::size_t(ci)], src, ln)};
  }
  return w;
}

std::string synthesis_excitations_csv(const CVector<double>* reference, const CVector<double>& clustered) {
  std::string s = "n,ref_re,ref_im,tvcs_re,tvcs_im\n";
  for (Eigen::Index i = 0; i < clustered.size(); ++i) {
    s += std::to_string(i + 1) + ",";
    if (reference) {
      s += format_number((*reference)[i].real()) + "," + format_number((*reference)[i].imag());
    } else {
      s += ",";
    }
    s += "," + format_number(clustered[i].real()) + "," + format_number(clustered[i].imag()) + "\n";
  }
  return s;
}

std::string layout_csv(const ClusteredLayout<double>& layout) {
  std::string s = "cluster_id,first_element,last_element,re_weight,im_weight\n";
  for (Eigen::Index c = 0; c < layout.q(); ++c) {
    s += std::to_string(c + 1) + "," + std::to_string(layout.starts()[std::size_t(c)] + 1) + "," +
         std::to_string(layout.last(c) + 1) + "," + format_number(layout.weights()[c].real()) + "," +
         format_number(layout.weights()[c].imag()) + "\n";
  }
  return s;
}

std::string pattern_csv(const RVector<double>& theta_deg, const CVector<double>& ref,
                        const CVector<double>& tvcs) {
  const double rp = ref.cwiseAbs().maxCoeff();
  const double tp = tvcs.cwiseAbs().maxCoeff();
  std::string s = "theta_deg,ref_db,tvcs_db\n";
  for (Eigen::Index i = 0; i < theta_deg.size(); ++i) {
    s += format_number(theta_deg[i]) + "," + db_or_floor(std::abs(ref[i]), rp) + "," +
         db_or_floor(std::abs(tvcs[i]), tp) + "\n";
  }
  return s;
}

std::string trace_csv(const std::vector<TraceRow<double>>& trace) {
  std::string s = "iter,phi,grad_norm,tv_residual,fit_residual,sigma,rho\n";
  for (const auto& r : trace) {
    s += std::to_string(r.iter) + "," + format_number(r.phi) + "," + format_number(r.grad_norm) + "," +
         format_number(r.tv_residual) + "," + format_number(r.fit_residual) + "," +
         format_number(r.sigma) + "," + format_number(r.rho) + "\n";
  }
  return s;
}

std::string report_json(const MetricsReport<double>& r) {
  nlohmann::ordered_json j;
  j["xi"] = r.xi;
  j["chi"] = r.chi;
  j["drr_db"] = r.drr_db;
  j["sll_db"] = r.sll_db;
  j["dmax_db"] = r.dmax_db;
  j["q"] = r.q;
  return j.dump(2) + "\n";
}

std::string report_csv(const MetricsReport<double>& r) {
  return "xi,chi,drr_db,sll_db,dmax_db,q\n" + format_number(r.xi) + "," + format_number(r.chi) + "," +
         format_number(r.drr_db) + "," + format_number(r.sll_db) + "," + format_number(r.dmax_db) +
         "," + std::to_string(r.q) + "\n";
}

std::string front_csv(const std::vector<ParetoPoint<double>>& points) {
  std::string s = "chi,xi,q,gamma,beta,tau,sll_db,dmax_db,drr_db\n";
  for (const auto& p : points) {
    s += format_number(p.chi) + "," + format_number(p.xi) + "," + std::to_string(p.report.q) + "," +
         format_number(p.gamma) + "," + format_number(p.beta) + "," + format_number(p.tau) + "," +
         format_number(p.report.sll_db) + "," + format_number(p.report.dmax_db) + "," +
         format_number(p.report.drr_db) + "\n";
  }
  return s;
}

std::string failures_csv(const std::vector<FailedPoint<double>>& failures) {
  std::string s = "gamma,beta,error\n";
  for (const auto& f : failures) {
    std::string msg = f.error;
    for (char& c : msg) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    s += format_number(f.gamma) + "," + format_number(f.beta) + "," + msg + "\n";
  }
  return s;
}

std::string partition_front_csv(const std::vector<PartitionResult<double>>& front) {
  std::string s = "q,cost,boundaries\n";
  for (const auto& p : front) {
    std::string b;
    for (std::size_t i = 0; i < p.starts.size(); ++i) {
      if (i) b += ' ';
      b += std::to_string(p.starts[i] + 1);
    }
    s += std::to_string(p.q) + "," + format_number(p.cost) + "," + b + "\n";
  }
  return s;
}

}  // namespace tvcs::io
