#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rqm/error.hpp"
#include "rqm/problem.hpp"
#include "rqm/prox.hpp"
#include "rqm/random.hpp"
#include "rqm/schedules.hpp"
#include "rqm/solver_rqm.hpp"
#include "rqm/trace.hpp"
#include "rqm/types.hpp"

namespace rqm {

struct lyapunov_record {
  std::size_t k = 0;
  double V = 0.0;
  double F_gap_term = 0.0;   // A_k (F(x_k) - F(x_ref))
  double phi_term = 0.0;     // phi_k(-s_k)
  double linear_term = 0.0;  // <s_k, x_ref> + A_k g(x_ref)
  double B_term = 0.0;       // B_k
};

// V_k = A_k (F(x_k) - F_ref) + phi_k(-s_k) + <s_k, x_ref> + A_k g(x_ref) - B_k.
// Nonincreasing along the method whenever the oracle is exact, for any x_ref.
template <composite_problem P>
lyapunov_record lyapunov(const rqm_state& st, const P& problem, const vector_t& x_ref,
                         double F_ref) {
  if (x_ref.size() != st.x.size()) throw shape_error("lyapunov: reference dimension mismatch");
  const auto& reg = problem.regularizer();
  lyapunov_record r;
  r.k = st.k;
  r.F_gap_term = st.A * (problem.objective(st.x) - F_ref);
  r.phi_term = phi_eval(-st.s, st.A, reg.lambda, reg.sigma, st.gamma).value;
  r.linear_term = st.s.dot(x_ref) + st.A * reg.value(x_ref);
  r.B_term = st.B_hat;
  r.V = r.F_gap_term + r.phi_term + r.linear_term - r.B_term;
  return r;
}

// (gamma_k Psi(x_ref) + B_k) / A_k
inline double theorem_bound(double gamma, double A, double psi_ref, double B_hat) {
  return (gamma * psi_ref + B_hat) / A;
}

// (Psi(x_ref) + G^2/beta) / sqrt(k+1)
inline double corollary_one_bound(std::size_t k, double psi_ref, double G2, double beta = 1.0) {
  return (psi_ref + G2 / beta) / std::sqrt(static_cast<double>(k) + 1.0);
}

// (Psi(x_ref) + G^2/sigma) ln(2k+3)/(k+1)
inline double corollary_two_bound(std::size_t k, double psi_ref, double G2, double sigma) {
  const auto kd = static_cast<double>(k);
  return (psi_ref + G2 / sigma) * std::log(2.0 * kd + 3.0) / (kd + 1.0);
}

struct bound_record {
  std::size_t k = 0;
  double theorem_bound = 0.0;
  double corollary_bound = 0.0;
  double gap = 0.0;
};

struct reference_options {
  schedule sched = schedule::quadratic(10.0);
  double rel_tol = 1e-6;
  std::size_t max_doublings = 4;
};

struct reference_result {
  vector_t x;
  double F = 0.0;
  std::size_t iterations = 0;
  double last_improvement = 0.0;  // relative improvement of the final doubling
};

// Deterministic full-batch RQM; returns the best iterate seen. The budget is
// doubled until a doubling improves F by at most rel_tol relative.
template <composite_problem P>
reference_result reference_solution(const P& problem, std::size_t budget,
                                    const reference_options& opt = {}) {
  if (budget == 0) throw configuration_error("reference_solution: budget must be positive");
  const exact_oracle<P> oracle(problem);
  rng_t unused = make_stream(0, 0);
  rqm_state st = rqm_init(oracle, opt.sched, unused);
  reference_result best{st.x, problem.objective(st.x), 0, 0.0};
  auto advance_to = [&](std::size_t target) {
    while (st.k < target) {
      rqm_step(st, oracle, opt.sched, unused);
      for (const vector_t* cand : {&st.x, &st.x_plus}) {
        const double f = problem.objective(*cand);
        if (f < best.F) {
          best.F = f;
          best.x = *cand;
        }
      }
    }
    best.iterations = st.k;
  };
  advance_to(budget);
  std::size_t target = budget;
  for (std::size_t d = 0; d <= opt.max_doublings; ++d) {
    const double before = best.F;
    target *= 2;
    advance_to(target);
    best.last_improvement = (before - best.F) / std::max(std::abs(before), 1e-300);
    if (best.last_improvement <= opt.rel_tol) return best;
  }
  throw reference_not_converged("reference_solution: relative improvement " +
                                detail::num(best.last_improvement) + " after " +
                                std::to_string(best.iterations) + " iterations exceeds " +
                                detail::num(opt.rel_tol));
}

// Cross-trial mean and unbiased standard deviation of one recorded field.
struct trace_summary {
  std::vector<std::size_t> k;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::size_t trials = 0;

  double stderr_at(std::size_t i) const {
    return trials > 1 ? stddev[i] / std::sqrt(static_cast<double>(trials)) : 0.0;
  }
};

// All traces must share the same recorded iterations.
inline trace_summary summarize(const std::vector<trace>& traces,
                               const std::function<double(const trace_point&)>& field) {
  trace_summary out;
  if (traces.empty()) return out;
  out.trials = traces.size();
  const auto& first = traces.front().points;
  for (const auto& t : traces) {
    if (t.points.size() != first.size()) throw shape_error("summarize: traces differ in length");
  }
  out.k.reserve(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    double sum = 0.0;
    for (const auto& t : traces) {
      if (t.points[i].k != first[i].k) throw shape_error("summarize: traces recorded different k");
      sum += field(t.points[i]);
    }
    const double mean = sum / static_cast<double>(traces.size());
    double ss = 0.0;
    for (const auto& t : traces) {
      const double d = field(t.points[i]) - mean;
      ss += d * d;
    }
    out.k.push_back(first[i].k);
    out.mean.push_back(mean);
    out.stddev.push_back(traces.size() > 1 ? std::sqrt(ss / static_cast<double>(traces.size() - 1))
                                           : 0.0);
  }
  return out;
}

struct slope_fit {
  double slope = 0.0;
  double std_error = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares of log(gap) on log(k + 1).
inline slope_fit fit_log_log(const std::vector<std::size_t>& k, const std::vector<double>& gap) {
  if (k.size() != gap.size()) throw shape_error("fit_log_log: size mismatch");
  if (k.size() < 3) throw error(error_kind::check_failure, "fit_log_log: need at least 3 points");
  const auto n = static_cast<double>(k.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(gap[i] > 0.0)) {
      throw error(error_kind::check_failure,
                  "rate not measurable: nonpositive gap at k = " + std::to_string(k[i]));
    }
    xs.push_back(std::log(static_cast<double>(k[i]) + 1.0));
    ys.push_back(std::log(gap[i]));
    sx += xs.back();
    sy += ys.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  slope_fit fit;
  fit.points = xs.size();
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - intercept - fit.slope * xs[i];
    rss += r * r;
  }
  fit.std_error = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

// Slope of log(mean gap) against log(k+1) over recorded k in [k_lo, k_hi].
inline slope_fit rate_slope(const std::vector<trace>& traces, double F_star, std::size_t k_lo,
                            std::size_t k_hi) {
  const auto s = summarize(traces, [](const trace_point& p) { return p.objective; });
  std::vector<std::size_t> ks;
  std::vector<double> gaps;
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    if (s.k[i] < k_lo || s.k[i] > k_hi) continue;
    ks.push_back(s.k[i]);
    gaps.push_back(s.mean[i] - F_star);
  }
  return fit_log_log(ks, gaps);
}

}  // namespace rqm
