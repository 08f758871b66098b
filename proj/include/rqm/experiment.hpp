#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rqm/checks.hpp"
#include "rqm/datagen.hpp"
#include "rqm/diagnostics.hpp"
#include "rqm/huber.hpp"
#include "rqm/schedules.hpp"
#include "rqm/solver_rqm.hpp"
#include "rqm/solver_srsg.hpp"
#include "rqm/trials.hpp"

namespace rqm {

enum class method { rqm, srsg };

inline method parse_method(std::string_view name) {
  if (name == "rqm") return method::rqm;
  if (name == "srsg") return method::srsg;
  throw configuration_error("unknown method '" + std::string(name) + "' (expected rqm|srsg)");
}

// Defaults reproduce the robust-regression experiment: delta = 2,
// lambda = 0.1, N = 10000, d = 10, 4 nonzeros, 100 trials.
struct experiment_config {
  method solver = method::rqm;
  schedule_kind kind = schedule_kind::corollary_one;
  double gamma_const = 10.0;
  std::string custom_gamma_file;
  std::size_t iters = 5000;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string data_path;
  huber_options problem{};
  std::size_t stride = 10;
  std::size_t workers = 1;
  std::string out_dir = ".";
  std::string out;  // solve: trace CSV path
  bool with_reference = true;
  std::size_t reference_budget = 10000;

  std::size_t n = 10000;
  std::size_t dim = 10;
  std::size_t nnz = 4;
  generation_options generation{};

  void validate() const {
    if (iters == 0) throw configuration_error("iters must be >= 1");
    if (trials == 0) throw configuration_error("trials must be >= 1");
    if (problem.batch == 0) throw configuration_error("batch must be >= 1");
  }

  schedule make_schedule() const {
    switch (kind) {
      case schedule_kind::corollary_one: return schedule::corollary_one();
      case schedule_kind::corollary_two: return schedule::corollary_two();
      case schedule_kind::quadratic_weights: return schedule::quadratic(gamma_const);
      case schedule_kind::custom:
        if (custom_gamma_file.empty()) {
          throw configuration_error("schedule=custom needs --custom-gamma-file");
        }
        return schedule::load_custom(custom_gamma_file);
    }
    throw configuration_error("unknown schedule kind");
  }
};

inline huber_regression_problem make_problem(const dataset& data, const huber_options& opt) {
  return huber_regression_problem(data.inputs, data.targets, opt);
}

inline dataset load_dataset(const std::string& path) {
  if (path.empty()) throw configuration_error("--data is required");
  if (!std::filesystem::exists(path)) {
    throw configuration_error("dataset '" + path + "' does not exist");
  }
  return read_csv(path);
}

// A bench arm: a method with its schedule.
struct bench_arm {
  std::string name;
  method solver;
  std::optional<schedule> sched;
};

inline std::vector<bench_arm> default_bench_arms(double gamma_const = 10.0) {
  return {{"rqm-A", method::rqm, schedule::corollary_one()},
          {"rqm-B", method::rqm, schedule::quadratic(gamma_const)},
          {"srsg", method::srsg, std::nullopt}};
}

inline trace run_arm(const bench_arm& arm, const huber_regression_problem& problem,
                     std::size_t iters, std::uint64_t seed, std::size_t trial,
                     std::size_t stride) {
  rng_t rng = make_trial_stream(seed, trial);
  const trace_options opt{stride};
  if (arm.solver == method::rqm) return rqm_run(problem, *arm.sched, iters, rng, opt);
  return srsg_run(problem, iters, rng, opt);
}

struct bench_method_summary {
  std::string name;
  std::vector<trace> traces;
  trace_summary objective;
  std::vector<std::string> failures;
  std::int64_t wall_ns = 0;
};

struct bench_summary {
  std::vector<bench_method_summary> methods;

  bool ok() const {
    for (const auto& m : methods) {
      if (!m.failures.empty()) return false;
    }
    return true;
  }

  const bench_method_summary& at(std::string_view name) const {
    for (const auto& m : methods) {
      if (m.name == name) return m;
    }
    throw configuration_error("bench summary has no method '" + std::string(name) + "'");
  }
};

// Trial t of every arm runs on seed + t. Summary statistics use the
// successful trials.
inline bench_summary run_bench(const huber_regression_problem& problem,
                               const experiment_config& cfg,
                               const std::vector<bench_arm>& arms) {
  cfg.validate();
  bench_summary out;
  for (const auto& arm : arms) {
    bench_method_summary m;
    m.name = arm.name;
    const auto start = std::chrono::steady_clock::now();
    m.traces = run_trials(
        cfg.trials,
        [&](std::size_t t) { return run_arm(arm, problem, cfg.iters, cfg.seed, t, cfg.stride); },
        cfg.workers);
    m.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    std::vector<trace> good;
    for (std::size_t t = 0; t < m.traces.size(); ++t) {
      if (m.traces[t].ok()) {
        good.push_back(m.traces[t]);
      } else {
        m.failures.push_back("trial " + std::to_string(t) + ": " + *m.traces[t].failure);
      }
    }
    m.objective = summarize(good, [](const trace_point& p) { return p.objective; });
    out.methods.push_back(std::move(m));
  }
  return out;
}

// method,trial,iter,objective
inline void write_bench_long(const bench_summary& s, std::ostream& out) {
  out << "method,trial,iter,objective\n";
  for (const auto& m : s.methods) {
    for (std::size_t t = 0; t < m.traces.size(); ++t) {
      for (const auto& p : m.traces[t].points) {
        out << m.name << ',' << t << ',' << p.k << ',' << format_double(p.objective) << '\n';
      }
    }
  }
}

// method,iter,mean,std
inline void write_bench_summary(const bench_summary& s, std::ostream& out) {
  out << "method,iter,mean,std\n";
  for (const auto& m : s.methods) {
    for (std::size_t i = 0; i < m.objective.k.size(); ++i) {
      out << m.name << ',' << m.objective.k[i] << ',' << format_double(m.objective.mean[i]) << ','
          << format_double(m.objective.stddev[i]) << '\n';
    }
  }
}

// gnuplot script drawing mean +- one standard deviation per method.
inline void write_gnuplot(const bench_summary& s, const std::string& summary_csv,
                          std::ostream& out) {
  out << "set datafile separator ','\nset logscale y\nset xlabel 'iteration'\n"
         "set ylabel 'objective'\nset key top right\nplot \\\n";
  for (std::size_t i = 0; i < s.methods.size(); ++i) {
    const auto& name = s.methods[i].name;
    const std::string filter = "(strcol(1) eq '" + name + "' ? ";
    out << "  '" << summary_csv << "' every ::1 using 2:" << filter << "$3-$4 : NaN):" << filter
        << "$3+$4 : NaN) with filledcurves fs transparent solid 0.2 notitle, \\\n"
        << "  '" << summary_csv << "' every ::1 using 2:" << filter << "$3 : NaN) with lines title '"
        << name << "'" << (i + 1 < s.methods.size() ? ", \\\n" : "\n");
  }
}

struct bench_files {
  std::string long_csv;
  std::string summary_csv;
  std::string gnuplot;
};

inline bench_files write_bench_outputs(const bench_summary& s, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  bench_files f{(dir / "bench_long.csv").string(), (dir / "bench_summary.csv").string(),
                (dir / "bench.gp").string()};
  {
    std::ofstream o(f.long_csv, std::ios::binary);
    write_bench_long(s, o);
  }
  {
    std::ofstream o(f.summary_csv, std::ios::binary);
    write_bench_summary(s, o);
  }
  {
    std::ofstream o(f.gnuplot, std::ios::binary);
    write_gnuplot(s, "bench_summary.csv", o);
  }
  return f;
}

// trial,iter,objective,gap,bound,B_hat,gamma_over_A,wall_ns. gap and bound
// are empty without a reference solution; bound is empty for SRSG.
inline void write_trace_csv(const std::vector<trace>& traces,
                            const std::optional<reference_result>& ref, std::ostream& out) {
  out << "trial,iter,objective,gap,bound,B_hat,gamma_over_A,wall_ns\n";
  const double psi = ref ? euclidean_prox_function::value(ref->x) : 0.0;
  auto cell = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
  for (std::size_t t = 0; t < traces.size(); ++t) {
    for (const auto& p : traces[t].points) {
      const bool has_bound = ref && p.A > 0.0 && std::isfinite(p.B_hat);
      out << t << ',' << p.k << ',' << cell(p.objective) << ','
          << (ref ? cell(p.objective - ref->F) : std::string()) << ','
          << (has_bound ? cell(theorem_bound(p.gamma, p.A, psi, p.B_hat)) : std::string()) << ','
          << cell(p.B_hat) << ',' << (p.A > 0.0 ? cell(p.gamma_over_A()) : std::string()) << ','
          << p.wall_ns << '\n';
    }
  }
}

struct solve_result {
  std::vector<trace> traces;
  std::optional<reference_result> reference;

  bool ok() const {
    for (const auto& t : traces) {
      if (!t.ok()) return false;
    }
    return true;
  }
};

inline solve_result run_solve(const huber_regression_problem& problem,
                              const experiment_config& cfg) {
  cfg.validate();
  solve_result out;
  if (cfg.with_reference) out.reference = reference_solution(problem, cfg.reference_budget);
  bench_arm arm{"solve", cfg.solver, std::nullopt};
  if (cfg.solver == method::rqm) arm.sched = cfg.make_schedule();
  out.traces = run_trials(
      cfg.trials,
      [&](std::size_t t) { return run_arm(arm, problem, cfg.iters, cfg.seed, t, cfg.stride); },
      cfg.workers);
  return out;
}

struct verify_report {
  std::vector<check_result> checks;
  nlohmann::json extra = nlohmann::json::object();

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["pass"] = pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) j["checks"].push_back(rqm::to_json(c));
    if (!extra.empty()) j["info"] = extra;
    return j;
  }
};

// The small instance used by the deterministic checks: d = 3, N = 50.
inline dataset small_instance(std::uint64_t seed) { return generate(seed, 50, 3, 2); }

// checks: any of "prox", "lyapunov", "bound", "rate", "all". Without a data
// path, lyapunov/bound use small_instance(seed) and rate uses a generated
// N = 2000, d = 10 set.
inline verify_report run_verify(const experiment_config& cfg, const std::vector<std::string>& checks) {
  auto wants = [&](std::string_view c) {
    for (const auto& x : checks) {
      if (x == c || x == "all") return true;
    }
    return false;
  };
  for (const auto& c : checks) {
    if (c != "prox" && c != "lyapunov" && c != "bound" && c != "rate" && c != "all") {
      throw configuration_error("unknown check '" + c + "' (expected prox|lyapunov|bound|rate|all)");
    }
  }
  verify_report report;
  if (wants("prox")) {
    report.checks.push_back(check_prox_oracle(cfg.seed));
    report.checks.push_back(check_phi_gradient(cfg.seed));
  }
  const std::vector<schedule> det_schedules{schedule::corollary_one(), schedule::corollary_two()};
  if (wants("lyapunov") || wants("bound")) {
    const dataset data = cfg.data_path.empty() ? small_instance(cfg.seed) : load_dataset(cfg.data_path);
    const auto problem = make_problem(data, cfg.problem);
    const std::size_t iters = std::min<std::size_t>(cfg.iters, 1000);
    if (wants("lyapunov")) {
      report.checks.push_back(check_lyapunov_descent(problem, det_schedules, iters, 10, cfg.seed));
    }
    if (wants("bound")) {
      const auto ref = reference_solution(problem, cfg.reference_budget);
      report.checks.push_back(check_theorem_bound(problem, det_schedules, iters, ref.x, ref.F));
    }
  }
  if (wants("rate")) {
    const dataset data =
        cfg.data_path.empty() ? generate(cfg.seed, 2000, cfg.dim, cfg.nnz, cfg.generation)
                              : load_dataset(cfg.data_path);
    const auto problem = make_problem(data, cfg.problem);
    const auto ref = reference_solution(problem, cfg.reference_budget);
    envelope_config ec;
    ec.sched = problem.regularizer().sigma > 0.0 ? schedule::corollary_two() : schedule::corollary_one();
    ec.iters = cfg.iters;
    ec.trials = cfg.trials;
    ec.seed = cfg.seed;
    ec.stride = cfg.stride;
    ec.window_lo = std::min<std::size_t>(500, cfg.iters / 10);
    ec.window_hi = cfg.iters;
    ec.max_slope = ec.sched.kind() == schedule_kind::corollary_two ? -0.7 : -0.35;
    ec.workers = cfg.workers;
    const auto env = check_corollary_envelope(problem, ec, ref.x, ref.F,
                                              problem.analytic_subgradient_bound());
    report.checks.push_back(env.theorem);
    report.checks.push_back(env.envelope);
    report.checks.push_back(env.slope);
    report.extra["F_star"] = ref.F;
    report.extra["G2_hat"] = env.G2_hat;
    report.extra["G_analytic"] = env.G_analytic;
    report.extra["slope"] = env.fit.slope;
    report.extra["slope_stderr"] = env.fit.std_error;
  }
  return report;
}

}  // namespace rqm
