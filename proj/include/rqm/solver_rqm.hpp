#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <utility>

#include "rqm/error.hpp"
#include "rqm/problem.hpp"
#include "rqm/prox.hpp"
#include "rqm/schedules.hpp"
#include "rqm/trace.hpp"
#include "rqm/types.hpp"

namespace rqm {

// State at index k: x_k, the aggregate s_k = sum_{l<=k} a_l w(x_l), the
// forecast x+_k = argmin <s_k,x> + A_{k+1} g(x) + gamma_{k+1} Psi(x), and
// B_k = 1/2 sum_{l<=k} a_l^2/mu_l ||w_l||^2. The oracle is queried at x_k when
// x_k is formed, so the state always carries the full Lyapunov quadruple.
struct rqm_state {
  std::size_t k = 0;
  vector_t x;
  vector_t x_plus;
  vector_t s;
  vector_t w;  // last oracle answer, w(x_k)
  double A = 0.0;
  double gamma = 0.0;
  double B_hat = 0.0;
  double g2_sum = 0.0;
  double g2_max = 0.0;
};

namespace detail {

inline void require_finite(const rqm_state& st) {
  if (!st.x.allFinite()) throw numerical_failure(st.k, "non-finite iterate x");
  if (!st.x_plus.allFinite()) throw numerical_failure(st.k, "non-finite forecast x+");
  if (!st.s.allFinite()) throw numerical_failure(st.k, "non-finite aggregate s");
  if (!std::isfinite(st.B_hat)) throw numerical_failure(st.k, "non-finite B_hat");
}

// Oracle call at x_k, aggregation, B update and forecast (steps 1-3).
template <composite_problem P, typename Rng>
void absorb_sample(rqm_state& st, const P& problem, const schedule& sched, Rng& rng) {
  const auto& reg = problem.regularizer();
  const double g2 = problem.sample_subgradient(st.x, rng, st.w);
  const double a = sched.a(st.k);
  st.s.noalias() += a * st.w;
  if (a != 0.0) {
    const double mu = modulus_mu(st.A, st.gamma, reg.sigma, sched.beta());
    st.B_hat += a * a / (2.0 * mu) * g2;
  }
  st.g2_sum += g2;
  st.g2_max = std::max(st.g2_max, g2);
  rqm_prox_into(st.s, sched.A(st.k + 1), reg.lambda, reg.sigma, sched.gamma(st.k + 1), st.x_plus);
  require_finite(st);
}

}  // namespace detail

template <composite_problem P, typename Rng>
rqm_state rqm_init(const P& problem, const schedule& sched, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(problem.dim());
  const auto& reg = problem.regularizer();
  rqm_state st;
  st.A = sched.A(0);
  st.gamma = sched.gamma(0);
  st.s = vector_t::Zero(n);
  st.w = vector_t::Zero(n);
  st.x_plus = vector_t::Zero(n);
  st.x = rqm_prox(vector_t::Zero(n), st.A, reg.lambda, reg.sigma, st.gamma);
  detail::absorb_sample(st, problem, sched, rng);
  return st;
}

// x_{k+1} = (A_k x_k + a_{k+1} x+_k) / A_{k+1}, then one oracle call at x_{k+1}.
template <composite_problem P, typename Rng>
void rqm_step(rqm_state& st, const P& problem, const schedule& sched, Rng& rng) {
  const auto next = sched.weights(st.k + 1);
  if (!(next.A > 0.0)) throw degenerate_subproblem_error("rqm_step: A_{k+1} must be positive");
  st.x = (st.A / next.A) * st.x + (next.a / next.A) * st.x_plus;
  st.k += 1;
  st.A = next.A;
  st.gamma = sched.gamma(st.k);
  detail::absorb_sample(st, problem, sched, rng);
}

struct no_observer {
  void operator()(const rqm_state&) const noexcept {}
};

// Runs init plus `iters` steps, recording x_0..x_iters at the trace stride.
// `observe` sees every state. A numerical failure ends the run early with
// the partial trace annotated.
template <composite_problem P, typename Rng, typename Observer = no_observer>
trace rqm_run(const P& problem, const schedule& sched, std::size_t iters, Rng& rng,
              const trace_options& opt = {}, Observer&& observe = {}) {
  using clock = std::chrono::steady_clock;
  if (iters == 0) throw configuration_error("rqm_run: iters must be >= 1");
  trace out;
  const auto start = clock::now();
  auto record = [&](const rqm_state& st) {
    trace_point p;
    p.k = st.k;
    p.objective = problem.objective(st.x);
    p.B_hat = st.B_hat;
    p.gamma = st.gamma;
    p.A = st.A;
    p.g2_mean = st.g2_sum / static_cast<double>(st.k + 1);
    p.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count();
    out.points.push_back(p);
  };
  out.points.reserve(opt.stride ? iters / opt.stride + 2 : 2);
  try {
    rqm_state st = rqm_init(problem, sched, rng);
    for (;;) {
      observe(std::as_const(st));
      if (should_record(opt, st.k, iters)) record(st);
      if (st.k == iters) break;
      rqm_step(st, problem, sched, rng);
    }
    out.final_x = std::move(st.x);
  } catch (const numerical_failure& e) {
    out.failure = e.what();
  }
  return out;
}

}  // namespace rqm
