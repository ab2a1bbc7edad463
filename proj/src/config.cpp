#include "tvcs/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tvcs/error.hpp"

namespace tvcs {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  void expect_object(const json& j, const std::string& where) const {
    if (!j.is_object()) fail(where, "expected an object");
  }

  void check_keys(const json& j, const std::string& where, std::set<std::string> allowed) const {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
    }
  }

  double number(const json& j, const std::string& where) const {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
  }

  int integer(const json& j, const std::string& where) const {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    const auto v = j.get<long long>();
    if (v < -1000000000LL || v > 1000000000LL) fail(where, "integer out of range");
    return int(v);
  }

  std::string string(const json& j, const std::string& where) const {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
  }

  std::vector<double> numbers(const json& j, const std::string& where) const {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ConfigError(source_ + ": " + where + ": " + what);
  }

 private:
  std::string source_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + std::size_t(std::count(text.begin(), text.begin() + std::ptrdiff_t(end), '\n'));
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (geometry.positions.empty()) {
    if (geometry.n < 1) fail("geometry.n must be at least 1");
    if (!(geometry.spacing > 0) || !std::isfinite(geometry.spacing)) fail("geometry.spacing must be positive");
  } else {
    for (std::size_t i = 1; i < geometry.positions.size(); ++i) {
      if (!(geometry.positions[i] > geometry.positions[i - 1])) {
        fail("geometry.positions must be strictly increasing");
      }
    }
  }
  if (elements.kind != "isotropic" && elements.kind != "table") {
    fail("elements.kind must be 'isotropic' or 'table'");
  }
  if (elements.kind == "table" && elements.path.empty()) fail("elements.path is required for a table");
  const auto& k = reference.kind;
  if (k != "dolph" && k != "taylor" && k != "flattop" && k != "uniform" && k != "file") {
    fail("reference.kind must be one of dolph, taylor, flattop, uniform, file");
  }
  if (k == "file" && reference.path.empty()) fail("reference.path is required for a file reference");
  if (reference.nbar && *reference.nbar < 1) fail("reference.nbar must be at least 1");
  if (grid.sampling != "u" && grid.sampling != "theta" && grid.sampling != "explicit") {
    fail("grid.sampling must be 'u', 'theta' or 'explicit'");
  }
  if (grid.m < 0) fail("grid.m must be non-negative");
  if (grid.sampling == "explicit" && grid.angles.empty()) fail("grid.angles is required for explicit sampling");
  if (!(tau > 0 && tau < 1)) fail("tau must lie in (0, 1)");
  if (dense_factor < 1) fail("dense_factor must be at least 1");
  if (directivity_points < 16) fail("directivity_points must be at least 16");
  try {
    solver.validate();
  } catch (const InvalidArgument& e) {
    fail(std::string("solver: ") + e.what());
  }
  if (sweep) {
    if (sweep->gamma.empty() || sweep->beta.empty() || sweep->tau.empty()) {
      fail("sweep.gamma, sweep.beta and sweep.tau must be non-empty");
    }
    for (double g : sweep->gamma) {
      if (!(g > 0) || !std::isfinite(g)) fail("sweep.gamma values must be positive");
    }
    for (double b : sweep->beta) {
      if (!(b > 0) || !std::isfinite(b)) fail("sweep.beta values must be positive");
    }
    for (double t : sweep->tau) {
      if (!(t > 0 && t < 1)) fail("sweep.tau values must lie in (0, 1)");
    }
  }
}

RunConfig parse_config(const std::string& json_text, const fs::path& base_dir, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(line_of(json_text, e.byte)) + ": invalid JSON: " +
                      e.what());
  }
  const Reader r(source);
  r.expect_object(doc, "top level");
  r.check_keys(doc, "top level",
               {"geometry", "elements", "reference", "grid", "solver", "tau", "sweep", "output_dir",
                "dense_factor", "directivity_points"});

  RunConfig cfg;
  if (doc.contains("geometry")) {
    const json& g = doc["geometry"];
    r.expect_object(g, "geometry");
    r.check_keys(g, "geometry", {"n", "spacing", "positions"});
    if (g.contains("n")) cfg.geometry.n = r.integer(g["n"], "geometry.n");
    if (g.contains("spacing")) cfg.geometry.spacing = r.number(g["spacing"], "geometry.spacing");
    if (g.contains("positions")) {
      cfg.geometry.positions = r.numbers(g["positions"], "geometry.positions");
      if (cfg.geometry.positions.empty()) r.fail("geometry.positions", "must not be empty");
      if (g.contains("n") && std::size_t(cfg.geometry.n) != cfg.geometry.positions.size()) {
        r.fail("geometry", "n disagrees with the number of positions");
      }
      cfg.geometry.n = int(cfg.geometry.positions.size());
    }
  }
  if (doc.contains("elements")) {
    const json& e = doc["elements"];
    r.expect_object(e, "elements");
    r.check_keys(e, "elements", {"kind", "path"});
    if (e.contains("kind")) cfg.elements.kind = r.string(e["kind"], "elements.kind");
    if (e.contains("path")) cfg.elements.path = resolve(base_dir, r.string(e["path"], "elements.path"));
  }
  if (doc.contains("reference")) {
    const json& f = doc["reference"];
    r.expect_object(f, "reference");
    r.check_keys(f, "reference", {"kind", "sll_db", "nbar", "halfwidth_deg", "path"});
    if (f.contains("kind")) cfg.reference.kind = r.string(f["kind"], "reference.kind");
    if (f.contains("sll_db")) cfg.reference.sll_db = r.number(f["sll_db"], "reference.sll_db");
    if (f.contains("nbar")) cfg.reference.nbar = r.integer(f["nbar"], "reference.nbar");
    if (f.contains("halfwidth_deg")) {
      cfg.reference.halfwidth_deg = r.number(f["halfwidth_deg"], "reference.halfwidth_deg");
    }
    if (f.contains("path")) cfg.reference.path = resolve(base_dir, r.string(f["path"], "reference.path"));
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    r.expect_object(g, "grid");
    r.check_keys(g, "grid", {"m", "sampling", "angles"});
    if (g.contains("m")) cfg.grid.m = r.integer(g["m"], "grid.m");
    if (g.contains("sampling")) cfg.grid.sampling = r.string(g["sampling"], "grid.sampling");
    if (g.contains("angles")) {
      cfg.grid.angles = r.numbers(g["angles"], "grid.angles");
      if (!g.contains("sampling")) cfg.grid.sampling = "explicit";
    }
  }
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    r.expect_object(s, "solver");
    r.check_keys(s, "solver", {"beta", "gamma", "nu", "delta", "max_iter", "backtrack_shrink", "backtrack_max"});
    auto& c = cfg.solver;
    if (s.contains("beta")) c.beta = r.number(s["beta"], "solver.beta");
    if (s.contains("gamma")) c.gamma = r.number(s["gamma"], "solver.gamma");
    if (s.contains("nu")) c.nu = r.number(s["nu"], "solver.nu");
    if (s.contains("delta")) c.delta = r.number(s["delta"], "solver.delta");
    if (s.contains("max_iter")) c.max_iter = r.integer(s["max_iter"], "solver.max_iter");
    if (s.contains("backtrack_shrink")) c.backtrack_shrink = r.number(s["backtrack_shrink"], "solver.backtrack_shrink");
    if (s.contains("backtrack_max")) c.backtrack_max = r.integer(s["backtrack_max"], "solver.backtrack_max");
  }
  if (doc.contains("tau")) cfg.tau = r.number(doc["tau"], "tau");
  if (doc.contains("sweep") && !doc["sweep"].is_null()) {
    const json& s = doc["sweep"];
    r.expect_object(s, "sweep");
    r.check_keys(s, "sweep", {"gamma", "beta", "tau"});
    SweepSpec sp;
    sp.gamma = s.contains("gamma") ? r.numbers(s["gamma"], "sweep.gamma") : std::vector<double>{cfg.solver.gamma};
    sp.beta = s.contains("beta") ? r.numbers(s["beta"], "sweep.beta") : std::vector<double>{cfg.solver.beta};
    sp.tau = s.contains("tau") ? r.numbers(s["tau"], "sweep.tau") : std::vector<double>{cfg.tau};
    cfg.sweep = std::move(sp);
  }
  if (doc.contains("output_dir")) cfg.output_dir = resolve(base_dir, r.string(doc["output_dir"], "output_dir"));
  if (doc.contains("dense_factor")) cfg.dense_factor = r.integer(doc["dense_factor"], "dense_factor");
  if (doc.contains("directivity_points")) {
    cfg.directivity_points = r.integer(doc["directivity_points"], "directivity_points");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path(), path.string());
}

std::string default_config_json() {
  const RunConfig d;
  nlohmann::ordered_json j;
  j["geometry"] = {{"n", d.geometry.n}, {"spacing", d.geometry.spacing}};
  j["elements"] = {{"kind", d.elements.kind}};
  j["reference"] = {{"kind", d.reference.kind},
                    {"sll_db", d.reference.sll_db},
                    {"halfwidth_deg", d.reference.halfwidth_deg}};
  j["grid"] = {{"m", d.grid.m}, {"sampling", d.grid.sampling}};
  j["solver"] = {{"beta", d.solver.beta},
                 {"gamma", d.solver.gamma},
                 {"nu", d.solver.nu},
                 {"delta", d.solver.delta},
                 {"max_iter", d.solver.max_iter},
                 {"backtrack_shrink", d.solver.backtrack_shrink},
                 {"backtrack_max", d.solver.backtrack_max}};
  j["tau"] = d.tau;
  j["output_dir"] = d.output_dir.string();
  j["dense_factor"] = d.dense_factor;
  j["directivity_points"] = d.directivity_points;
  return j.dump(2) + "\n";
}

}  // namespace tvcs
