// tvcs: synthesize, sweep, evaluate and generate references from a JSON config.
//
// Exit codes: 0 success, 1 config or argument error, 2 I/O or parse error,
// 3 solver divergence.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tvcs/config.hpp"
#include "tvcs/io.hpp"
#include "tvcs/pipeline.hpp"

namespace {

struct Args {
  std::string config;
  std::string out;
  std::string excitations;
  unsigned threads = 1;
  long dp_q = 0;
  bool trace = false;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--config", a.config, "JSON run config; omitted fields take the defaults below");
  cmd->add_option("--out", a.out, "output directory (overrides output_dir)");
}

int run(const std::string& name, const Args& a) {
  const tvcs::RunConfig cfg = a.config.empty() ? tvcs::parse_config("{}", {}) : tvcs::load_config(a.config);
  const std::filesystem::path out = a.out.empty() ? cfg.output_dir : std::filesystem::path(a.out);
  if (name == "sweep" && !cfg.sweep) throw tvcs::ConfigError("sweep needs a 'sweep' section in the config");
  if (name == "eval" && a.excitations.empty()) throw tvcs::ConfigError("eval needs --excitations");

  // Load the excitations before the problem so a bad file fails fast.
  tvcs::CVector<double> w;
  if (name == "eval") w = tvcs::io::load_excitations(a.excitations);
  const auto problem = tvcs::build_problem(cfg);

  if (name == "synth") {
    const auto r = tvcs::run_synth(*problem, cfg, out);
    std::printf("xi=%s chi=%s q=%ld iterations=%d (%s)\n", tvcs::io::format_number(r.report.xi).c_str(),
                tvcs::io::format_number(r.report.chi).c_str(), long(r.report.q), r.solution.iterations,
                tvcs::to_string(r.solution.terminated_by));
  } else if (name == "sweep") {
    const auto res = tvcs::run_sweep_command(*problem, cfg, out, a.threads, a.trace);
    std::printf("%zu points, %zu on the front, %zu failed solves\n", res.points.size(),
                tvcs::pareto_filter(res.points).size(), res.failures.size());
  } else if (name == "eval") {
    const auto r = tvcs::run_eval(*problem, w, out);
    std::printf("xi=%s chi=%s q=%ld\n", tvcs::io::format_number(r.xi).c_str(),
                tvcs::io::format_number(r.chi).c_str(), long(r.q));
  } else {
    tvcs::run_reference(*problem, out, a.dp_q);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered linear array synthesis by total-variation compressive sensing."};
  app.footer("Config defaults:\n" + tvcs::default_config_json() +
             "\nExit codes: 0 success, 1 config error, 2 I/O error, 3 solver divergence.");
  app.require_subcommand(1);

  Args args;
  auto* synth = app.add_subcommand("synth", "solve, extract clusters at tau and score");
  auto* sweep = app.add_subcommand("sweep", "sweep (gamma, beta, tau) and write the Pareto front");
  auto* eval = app.add_subcommand("eval", "score an excitation CSV against the reference");
  auto* reference = app.add_subcommand("reference", "write the reference pattern and its excitations");
  for (auto* c : {synth, sweep, eval, reference}) add_common(c, args);
  sweep->add_option("--threads", args.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
  sweep->add_flag("--trace", args.trace, "also write a solver trace for every front point");
  reference->add_option("--dp-q", args.dp_q, "also write the optimal dp-q-cluster consolidation of the taper")
      ->check(CLI::PositiveNumber);
  eval->add_option("--excitations", args.excitations, "CSV with n, re, im (or tvcs_re, tvcs_im)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run(name, args);
  } catch (const tvcs::SolverDiverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tvcs::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tvcs::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tvcs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
