#pragma once

// JSON run configuration. Every field has a default; unknown keys are
// rejected so a typo never silently falls back to a default.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tvcs/solver.hpp"

namespace tvcs {

struct GeometrySpec {
  int n = 20;
  double spacing = 0.5;
  std::vector<double> positions;  // overrides n and spacing when non-empty
};

struct ElementSpec {
  std::string kind = "isotropic";  // isotropic | table
  std::filesystem::path path;
};

struct ReferenceSpec {
  std::string kind = "dolph";  // dolph | taylor | flattop | uniform | file
  double sll_db = -20;
  std::optional<int> nbar;     // taylor only; defaults by sidelobe level
  double halfwidth_deg = 30;   // flattop only
  std::filesystem::path path;  // file only
};

struct GridSpec {
  int m = 0;                     // 0 means 2N
  std::string sampling = "u";    // u | theta | explicit
  std::vector<double> angles;    // explicit only, degrees
};

struct SweepSpec {
  std::vector<double> gamma, beta, tau;
};

struct RunConfig {
  GeometrySpec geometry;
  ElementSpec elements;
  ReferenceSpec reference;
  GridSpec grid;
  SolverConfig<double> solver;
  double tau = 0.05;
  std::optional<SweepSpec> sweep;
  std::filesystem::path output_dir = "out";
  int dense_factor = 10;
  int directivity_points = 4096;

  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

/// Parses a config document. Relative paths inside it are resolved against
/// `base_dir`.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir,
                       const std::string& source = "<config>");

/// Reads and parses a config file; a missing file is an IoError.
RunConfig load_config(const std::filesystem::path& path);

/// The defaults as a JSON document.
std::string default_config_json();

}  // namespace tvcs
