#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rqm/brute_force.hpp"
#include "rqm/diagnostics.hpp"
#include "rqm/problem.hpp"
#include "rqm/prox.hpp"
#include "rqm/random.hpp"
#include "rqm/schedules.hpp"
#include "rqm/solver_rqm.hpp"
#include "rqm/trials.hpp"

namespace rqm {

// margin is the signed slack of the worst case: >= 0 iff the check passes.
struct check_result {
  std::string check;
  bool pass = false;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline nlohmann::json to_json(const check_result& r) {
  nlohmann::json j{{"check", r.check}, {"pass", r.pass}, {"tolerance", r.tolerance}};
  // JSON has no NaN/inf; report those margins as null.
  if (std::isfinite(r.margin)) j["margin"] = r.margin; else j["margin"] = nullptr;
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

namespace detail {

inline check_result finish(std::string name, double margin, double tolerance, std::string detail) {
  return {std::move(name), std::isfinite(margin) && margin >= 0.0, margin, tolerance,
          std::move(detail)};
}

inline vector_t uniform_vector(rng_t& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  vector_t v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Draws from (0, hi].
inline double positive(rng_t& rng, double hi) {
  std::uniform_real_distribution<double> u(0.0, hi);
  return hi - u(rng);
}

}  // namespace detail

using rqm_prox_fn = std::function<vector_t(const vector_t&, double, double, double, double)>;
using srsg_prox_fn = std::function<vector_t(const vector_t&, const vector_t&, double, double)>;

inline vector_t default_rqm_prox(const vector_t& s, double A, double lambda, double sigma,
                                 double gamma) {
  return rqm_prox(s, A, lambda, sigma, gamma);
}

inline vector_t default_srsg_prox(const vector_t& w, const vector_t& y, double lambda,
                                  double gamma) {
  return srsg_prox(w, y, lambda, gamma);
}

// Closed-form prox vs brute-force minimization on random instances with
// s, w, y in [-10, 10] and A, lambda, sigma, gamma in (0, 10].
inline check_result check_prox_oracle(std::uint64_t seed, std::size_t instances = 1000,
                                      const rqm_prox_fn& rqm_fn = default_rqm_prox,
                                      const srsg_prox_fn& srsg_fn = default_srsg_prox,
                                      double tolerance = 1e-6) {
  rng_t rng = make_stream(seed, verify_stream);
  std::uniform_int_distribution<int> dim(1, 4);
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const Eigen::Index n = dim(rng);
    const vector_t s = detail::uniform_vector(rng, n, -10.0, 10.0);
    const double A = detail::positive(rng, 10.0), lambda = detail::positive(rng, 10.0),
                 sigma = detail::positive(rng, 10.0), gamma = detail::positive(rng, 10.0);
    worst = std::max(worst, (rqm_fn(s, A, lambda, sigma, gamma) -
                             brute_force::rqm_subproblem(s, A, lambda, sigma, gamma))
                                .lpNorm<Eigen::Infinity>());
    const vector_t w = detail::uniform_vector(rng, n, -10.0, 10.0);
    const vector_t y = detail::uniform_vector(rng, n, -10.0, 10.0);
    worst = std::max(worst, (srsg_fn(w, y, lambda, gamma) -
                             brute_force::srsg_subproblem(w, y, lambda, gamma))
                                .lpNorm<Eigen::Infinity>());
  }
  return detail::finish("prox_oracle_equivalence", tolerance - worst, tolerance,
                        "max abs error " + detail::num(worst) + " over " +
                            std::to_string(instances) + " rqm + srsg instances");
}

// Finite-difference gradient of phi against its maximizer.
inline check_result check_phi_gradient(std::uint64_t seed, std::size_t instances = 100,
                                       double h = 1e-4, double tolerance = 1e-5) {
  rng_t rng = make_stream(seed + 1, verify_stream);
  std::uniform_int_distribution<int> dim(1, 4);
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const vector_t s = detail::uniform_vector(rng, dim(rng), -10.0, 10.0);
    const double A = detail::positive(rng, 10.0), lambda = detail::positive(rng, 10.0),
                 sigma = detail::positive(rng, 10.0), gamma = detail::positive(rng, 10.0);
    worst = std::max(worst, phi_gradient_check(s, A, lambda, sigma, gamma, h));
  }
  return detail::finish("phi_gradient_identity", tolerance - worst, tolerance,
                        "max abs error " + detail::num(worst) + " over " +
                            std::to_string(instances) + " instances, h = " + detail::num(h));
}

// Exact-oracle runs: V_{k+1} - V_k <= tol (1 + |V_k|) and V_0 <= tol for
// `refs` random reference points drawn from [-ref_radius, ref_radius]^n.
template <composite_problem P>
check_result check_lyapunov_descent(const P& problem, const std::vector<schedule>& schedules,
                                    std::size_t iters, std::size_t refs, std::uint64_t seed,
                                    double tolerance = 1e-8, double ref_radius = 3.0) {
  const exact_oracle<P> oracle(problem);
  rng_t ref_rng = make_stream(seed + 2, verify_stream);
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  for (const auto& sched : schedules) {
    for (std::size_t r = 0; r < refs; ++r) {
      const vector_t x_ref =
          detail::uniform_vector(ref_rng, static_cast<Eigen::Index>(problem.dim()), -ref_radius,
                                 ref_radius);
      const double F_ref = problem.objective(x_ref);
      double prev = std::numeric_limits<double>::quiet_NaN();
      auto observe = [&](const rqm_state& st) {
        const double V = lyapunov(st, problem, x_ref, F_ref).V;
        const double slack = st.k == 0 ? tolerance - V : tolerance * (1.0 + std::abs(prev)) - (V - prev);
        if (!(slack >= worst)) {
          worst = slack;
          where = std::string(to_string(sched.kind())) + " ref " + std::to_string(r) + " k " +
                  std::to_string(st.k);
        }
        prev = V;
      };
      rng_t unused = make_stream(0, 0);
      const auto tr = rqm_run(oracle, sched, iters, unused, trace_options{0}, observe);
      if (!tr.ok()) return detail::finish("lyapunov_descent", -1.0, tolerance, *tr.failure);
    }
  }
  return detail::finish("lyapunov_descent", worst, tolerance, "worst slack at " + where);
}

// Exact-oracle runs: F(x_k) - F_ref <= (gamma_k Psi(x_ref) + B_k)/A_k + tol.
template <composite_problem P>
check_result check_theorem_bound(const P& problem, const std::vector<schedule>& schedules,
                                 std::size_t iters, const vector_t& x_ref, double F_ref,
                                 double tolerance = 1e-8) {
  const exact_oracle<P> oracle(problem);
  const double psi = euclidean_prox_function::value(x_ref);
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  for (const auto& sched : schedules) {
    auto observe = [&](const rqm_state& st) {
      if (!(st.A > 0.0)) return;
      const double gap = problem.objective(st.x) - F_ref;
      const double slack = theorem_bound(st.gamma, st.A, psi, st.B_hat) + tolerance - gap;
      if (!(slack >= worst)) {
        worst = slack;
        where = std::string(to_string(sched.kind())) + " k " + std::to_string(st.k);
      }
    };
    rng_t unused = make_stream(0, 0);
    const auto tr = rqm_run(oracle, sched, iters, unused, trace_options{0}, observe);
    if (!tr.ok()) return detail::finish("theorem_bound", -1.0, tolerance, *tr.failure);
  }
  return detail::finish("theorem_bound", worst, tolerance, "worst slack at " + where);
}

struct envelope_config {
  schedule sched = schedule::corollary_one();
  std::size_t iters = 5000;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t stride = 10;
  std::size_t window_lo = 500;
  std::size_t window_hi = 5000;
  double max_slope = -0.35;
  double z = 3.0;  // standard errors of allowance
  std::size_t workers = 1;
};

struct envelope_report {
  check_result theorem;   // mean gap <= mean (gamma Psi + B)/A + z SE
  check_result envelope;  // mean gap <= corollary envelope + z SE
  check_result slope;     // fitted log-log slope <= max_slope
  slope_fit fit;
  double G2_hat = 0.0;
  double G_analytic = 0.0;
};

// Stochastic multi-trial runs of a corollary schedule against the reference
// point (x_ref, F_ref). The cor2 envelope needs sigma > 0.
template <composite_problem P>
envelope_report check_corollary_envelope(const P& problem, const envelope_config& cfg,
                                         const vector_t& x_ref, double F_ref,
                                         double G_analytic = std::numeric_limits<double>::quiet_NaN()) {
  const bool second = cfg.sched.kind() == schedule_kind::corollary_two;
  const double sigma = problem.regularizer().sigma;
  if (second && !(sigma > 0.0)) {
    throw configuration_error("cor2 envelope requires sigma > 0");
  }
  const auto traces = run_trials(
      cfg.trials,
      [&](std::size_t t) {
        rng_t rng = make_trial_stream(cfg.seed, t);
        return rqm_run(problem, cfg.sched, cfg.iters, rng, trace_options{cfg.stride});
      },
      cfg.workers);
  for (const auto& t : traces) {
    if (!t.ok()) throw numerical_failure(0, "envelope run failed: " + *t.failure);
  }
  const double psi = euclidean_prox_function::value(x_ref);
  const auto obj = summarize(traces, [](const trace_point& p) { return p.objective; });
  const auto bnd = summarize(traces, [psi](const trace_point& p) {
    return p.A > 0.0 ? theorem_bound(p.gamma, p.A, psi, p.B_hat) : 0.0;
  });
  const auto g2 = summarize(traces, [](const trace_point& p) { return p.g2_mean; });

  envelope_report out;
  out.G_analytic = G_analytic;
  double worst_thm = std::numeric_limits<double>::infinity();
  double worst_env = std::numeric_limits<double>::infinity();
  std::size_t k_thm = 0, k_env = 0;
  double G2 = 0.0;
  for (std::size_t i = 0; i < obj.k.size(); ++i) {
    const std::size_t k = obj.k[i];
    G2 = std::max(G2, g2.mean[i]);
    const double gap = obj.mean[i] - F_ref;
    const double allowance = cfg.z * obj.stderr_at(i);
    const double thm = bnd.mean[i] + cfg.z * bnd.stderr_at(i) + allowance - gap;
    if (thm < worst_thm) worst_thm = thm, k_thm = k;
    const double env = second ? corollary_two_bound(k, psi, G2, sigma)
                              : corollary_one_bound(k, psi, G2, cfg.sched.beta());
    const double s = env + allowance - gap;
    if (s < worst_env) worst_env = s, k_env = k;
  }
  out.G2_hat = G2;
  out.theorem = detail::finish("theorem_bound_stochastic", worst_thm, cfg.z,
                               "worst slack at k " + std::to_string(k_thm));
  out.envelope = detail::finish(second ? "corollary_two_envelope" : "corollary_one_envelope",
                                worst_env, cfg.z,
                                "worst slack at k " + std::to_string(k_env) + ", G2_hat " +
                                    detail::num(G2));
  try {
    out.fit = rate_slope(traces, F_ref, cfg.window_lo, cfg.window_hi);
    out.slope = detail::finish(second ? "corollary_two_slope" : "corollary_one_slope",
                               cfg.max_slope - out.fit.slope, cfg.max_slope,
                               "slope " + detail::num(out.fit.slope) + " +- " +
                                   detail::num(out.fit.std_error) + " on k in [" +
                                   std::to_string(cfg.window_lo) + ", " +
                                   std::to_string(cfg.window_hi) + "]");
  } catch (const error& e) {
    out.slope = detail::finish(second ? "corollary_two_slope" : "corollary_one_slope",
                               std::numeric_limits<double>::quiet_NaN(), cfg.max_slope, e.what());
  }
  return out;
}

}  // namespace rqm
