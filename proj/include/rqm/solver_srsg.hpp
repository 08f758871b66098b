#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <utility>

#include "rqm/error.hpp"
#include "rqm/problem.hpp"
#include "rqm/prox.hpp"
#include "rqm/trace.hpp"
#include "rqm/types.hpp"

namespace rqm {

// Stochastic regularized subgradient method with Nesterov extrapolation:
//   y_k       = xh_k + theta_k (1/theta_{k-1} - 1)(xh_k - xh_{k-1})
//   xh_{k+1}  = argmin <w(y_k), x> + g(x) + gamma_k Psi(x - y_k)
// with theta_k = 2/(k+1) and gamma_k = (k+1)^{3/2}.
struct srsg_state {
  std::size_t k = 0;
  vector_t x_hat;
  vector_t x_hat_prev;
  vector_t y;
  vector_t w;
  double g2_sum = 0.0;
};

inline double srsg_theta(std::size_t k) { return 2.0 / (static_cast<double>(k) + 1.0); }

inline double srsg_gamma(std::size_t k) { return std::pow(static_cast<double>(k) + 1.0, 1.5); }

// theta_{-1} is undefined; xh_{-1} = xh_0 makes the k = 0 term vanish.
inline double srsg_extrapolation(std::size_t k) {
  if (k == 0) return 0.0;
  return srsg_theta(k) * (1.0 / srsg_theta(k - 1) - 1.0);
}

template <composite_problem P>
srsg_state srsg_init(const P& problem) {
  const auto n = static_cast<Eigen::Index>(problem.dim());
  return {0, vector_t::Zero(n), vector_t::Zero(n), vector_t::Zero(n), vector_t::Zero(n), 0.0};
}

template <composite_problem P, typename Rng>
void srsg_step(srsg_state& st, const P& problem, Rng& rng) {
  const auto& reg = problem.regularizer();
  st.y = st.x_hat + srsg_extrapolation(st.k) * (st.x_hat - st.x_hat_prev);
  st.g2_sum += problem.sample_subgradient(st.y, rng, st.w);
  std::swap(st.x_hat_prev, st.x_hat);
  srsg_prox_into(st.w, st.y, reg.lambda, srsg_gamma(st.k), st.x_hat, reg.sigma);
  st.k += 1;
  if (!st.x_hat.allFinite() || !st.y.allFinite()) {
    throw numerical_failure(st.k, "non-finite SRSG iterate");
  }
}

// Records F(xh_k), never F(y_k).
template <composite_problem P, typename Rng>
trace srsg_run(const P& problem, std::size_t iters, Rng& rng, const trace_options& opt = {}) {
  using clock = std::chrono::steady_clock;
  if (iters == 0) throw configuration_error("srsg_run: iters must be >= 1");
  trace out;
  const auto start = clock::now();
  out.points.reserve(opt.stride ? iters / opt.stride + 2 : 2);
  srsg_state st = srsg_init(problem);
  try {
    for (;;) {
      if (should_record(opt, st.k, iters)) {
        trace_point p;
        p.k = st.k;
        p.objective = problem.objective(st.x_hat);
        p.gamma = srsg_gamma(st.k);
        if (st.k > 0) p.g2_mean = st.g2_sum / static_cast<double>(st.k);
        p.wall_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count();
        out.points.push_back(p);
      }
      if (st.k == iters) break;
      srsg_step(st, problem, rng);
    }
    out.final_x = std::move(st.x_hat);
  } catch (const numerical_failure& e) {
    out.failure = e.what();
  }
  return out;
}

}  // namespace rqm
