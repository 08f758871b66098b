// rqm: data generation, solver runs, benchmarks and verification for the
// regularized quasi-monotone method on Huber/l1 robust regression.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rqm/rqm.hpp"

namespace {

void add_problem_flags(CLI::App& app, rqm::experiment_config& cfg, std::string& scale) {
  app.add_option("--delta", cfg.problem.delta, "Huber boundary")->capture_default_str();
  app.add_option("--lambda", cfg.problem.regularizer.lambda, "l1 weight")->capture_default_str();
  app.add_option("--sigma", cfg.problem.regularizer.sigma,
                 "added quadratic sigma/2 ||x||^2 (strong convexity of g)")
      ->capture_default_str();
  app.add_option("--batch", cfg.problem.batch, "samples per oracle call")->capture_default_str();
  app.add_option("--scale", scale, "data term aggregation: mean|sum")->capture_default_str();
}

void add_run_flags(CLI::App& app, rqm::experiment_config& cfg) {
  app.add_option("--iters", cfg.iters, "iterations per trial")->capture_default_str();
  app.add_option("--trials", cfg.trials, "independent trials")->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads (0 = hardware)")->capture_default_str();
  app.add_option("--data", cfg.data_path, "dataset CSV");
  app.add_option("--ref-budget", cfg.reference_budget, "reference solver iteration budget")
      ->capture_default_str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rqm::configuration_error("cannot write '" + path + "'");
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized quasi-monotone method: solver, benchmark and verification harness"};
  app.require_subcommand(1);
  app.fallthrough();

  rqm::experiment_config cfg;
  std::string scale = "mean";
  std::string schedule_name = "cor1";
  std::string method_name = "rqm";
  std::vector<std::string> checks{"all"};
  std::string report_path;

  app.add_option("--seed", cfg.seed, "base seed; trial t uses seed + t")->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
  app.add_option("--stride", cfg.stride, "trace recording stride")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "generate a synthetic robust-regression dataset");
  gen->add_option("--n", cfg.n, "samples")->capture_default_str();
  gen->add_option("--dim", cfg.dim, "input dimension")->capture_default_str();
  gen->add_option("--nnz", cfg.nnz, "nonzero true coefficients")->capture_default_str();
  gen->add_option("--outlier-prob", cfg.generation.outlier_prob)->capture_default_str();
  gen->add_option("--noise-std", cfg.generation.noise_std_main)->capture_default_str();
  gen->add_option("--outlier-std", cfg.generation.noise_std_outlier,
                  "standard deviation of the outlier noise component")
      ->capture_default_str();
  gen->add_option("--out", cfg.out, "CSV path (sidecar written to <out>.meta.json)")->required();

  auto* solve = app.add_subcommand("solve", "run one method for several trials");
  solve->add_option("--method", method_name, "rqm|srsg")->capture_default_str();
  solve->add_option("--schedule", schedule_name, "cor1|cor2|quadratic|custom")->capture_default_str();
  solve->add_option("--gamma-const", cfg.gamma_const, "gamma for the quadratic schedule")
      ->capture_default_str();
  solve->add_option("--custom-gamma-file", cfg.custom_gamma_file, "lines of 'gamma' or 'a,gamma'");
  solve->add_option("--out", cfg.out, "trace CSV path")->required();
  solve->add_flag("!--no-reference", cfg.with_reference, "skip the reference solution (no gap/bound)");
  add_run_flags(*solve, cfg);
  add_problem_flags(*solve, cfg, scale);

  auto* bench = app.add_subcommand("bench", "RQM-A vs RQM-B vs SRSG over many trials");
  bench->add_option("--gamma-const", cfg.gamma_const, "gamma for RQM-B")->capture_default_str();
  add_run_flags(*bench, cfg);
  add_problem_flags(*bench, cfg, scale);

  auto* verify = app.add_subcommand("verify", "run the invariant checks; nonzero exit on failure");
  verify->add_option("--check", checks, "prox|lyapunov|bound|rate|all")->capture_default_str();
  verify->add_option("--report", report_path, "JSON report path (default <out-dir>/verify.json)");
  add_run_flags(*verify, cfg);
  add_problem_flags(*verify, cfg, scale);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.problem.scale = rqm::parse_objective_scale(scale);
    cfg.solver = rqm::parse_method(method_name);
    cfg.kind = rqm::parse_schedule_kind(schedule_name);

    if (gen->parsed()) {
      const auto data = rqm::generate(cfg.seed, cfg.n, cfg.dim, cfg.nnz, cfg.generation);
      rqm::write_csv(data, cfg.out);
      std::cout << "wrote " << cfg.out << " (" << data.samples() << " x " << data.dim() << ") and "
                << rqm::sidecar_path(cfg.out) << '\n';
      return 0;
    }

    if (solve->parsed()) {
      const auto problem = rqm::make_problem(rqm::load_dataset(cfg.data_path), cfg.problem);
      const auto result = rqm::run_solve(problem, cfg);
      std::ofstream out(cfg.out, std::ios::binary);
      if (!out) throw rqm::configuration_error("cannot write '" + cfg.out + "'");
      rqm::write_trace_csv(result.traces, result.reference, out);
      for (std::size_t t = 0; t < result.traces.size(); ++t) {
        if (!result.traces[t].ok()) std::cerr << "trial " << t << ": " << *result.traces[t].failure << '\n';
      }
      return result.ok() ? 0 : 3;
    }

    if (bench->parsed()) {
      const auto problem = rqm::make_problem(rqm::load_dataset(cfg.data_path), cfg.problem);
      const auto summary = rqm::run_bench(problem, cfg, rqm::default_bench_arms(cfg.gamma_const));
      const auto files = rqm::write_bench_outputs(summary, cfg.out_dir);
      for (const auto& m : summary.methods) {
        std::cout << m.name << ": final mean " << m.objective.mean.back() << " (std "
                  << m.objective.stddev.back() << "), wall " << static_cast<double>(m.wall_ns) * 1e-9
                  << " s\n";
        for (const auto& f : m.failures) std::cerr << m.name << ' ' << f << '\n';
      }
      std::cout << "wrote " << files.long_csv << ", " << files.summary_csv << ", " << files.gnuplot
                << '\n';
      return summary.ok() ? 0 : 3;
    }

    if (verify->parsed()) {
      const auto report = rqm::run_verify(cfg, checks);
      for (const auto& c : report.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.check << "  margin " << c.margin << "  ("
                  << c.detail << ")\n";
      }
      if (report_path.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        report_path = (std::filesystem::path(cfg.out_dir) / "verify.json").string();
      }
      write_file(report_path, report.to_json().dump(2) + "\n");
      return report.pass() ? 0 : 1;
    }
  } catch (const rqm::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
