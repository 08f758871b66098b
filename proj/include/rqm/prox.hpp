#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "rqm/error.hpp"
#include "rqm/types.hpp"

namespace rqm {

// Psi(x) = 1/2 ||x||_2^2, 1-strongly convex in the Euclidean norm. The
// Euclidean norm is self-dual, so ||.||_* is ||.||_2 as well.
struct euclidean_prox_function {
  static constexpr double beta = 1.0;
  static constexpr double center_value = 0.0;

  template <typename Derived>
  static double value(const Eigen::MatrixBase<Derived>& x) {
    return 0.5 * x.squaredNorm();
  }
};

// g(x) = lambda ||x||_1 + sigma/2 ||x||_2^2. Strongly convex iff sigma > 0.
struct l1_regularizer {
  double lambda = 0.1;
  double sigma = 0.0;

  template <typename Derived>
  double value(const Eigen::MatrixBase<Derived>& x) const {
    return lambda * x.template lpNorm<1>() + 0.5 * sigma * x.squaredNorm();
  }
};

namespace detail {

inline double checked_curvature(double gamma, double A, double sigma, const char* who) {
  const double c = gamma + A * sigma;
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw degenerate_subproblem_error(std::string(who) + ": effective curvature gamma + A*sigma = " +
                                      std::to_string(c) + " is not positive");
  }
  return c;
}

}  // namespace detail

// argmin_x <s,x> + A (lambda ||x||_1 + sigma/2 ||x||^2) + gamma/2 ||x||^2
//   = sign(-s) max(|s| - A lambda, 0) / (gamma + A sigma), componentwise.
template <typename Derived, typename Out>
void rqm_prox_into(const Eigen::MatrixBase<Derived>& s, double A, double lambda, double sigma,
                   double gamma, Eigen::MatrixBase<Out>& out) {
  const double curvature = detail::checked_curvature(gamma, A, sigma, "rqm_prox");
  out.derived() =
      ((-s).array().sign() * (s.array().abs() - A * lambda).max(0.0) / curvature).matrix();
}

template <typename Derived>
vector_t rqm_prox(const Eigen::MatrixBase<Derived>& s, double A, double lambda, double sigma,
                  double gamma) {
  vector_t out(s.size());
  rqm_prox_into(s, A, lambda, sigma, gamma, out);
  return out;
}

// argmin_x <w,x> + lambda ||x||_1 + sigma/2 ||x||^2 + gamma/2 ||x - y||^2.
// With sigma = 0 this is sign(y - w/gamma) max(|y - w/gamma| - lambda/gamma, 0).
template <typename DW, typename DY, typename Out>
void srsg_prox_into(const Eigen::MatrixBase<DW>& w, const Eigen::MatrixBase<DY>& y,
                    double lambda, double gamma, Eigen::MatrixBase<Out>& out,
                    double sigma = 0.0) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw degenerate_subproblem_error("srsg_prox: gamma = " + std::to_string(gamma) +
                                      " is not positive");
  }
  if (w.size() != y.size()) throw shape_error("srsg_prox: w and y differ in dimension");
  const double curvature = detail::checked_curvature(gamma, 1.0, sigma, "srsg_prox");
  if (sigma == 0.0) {
    const auto z = (y - w / gamma).array();
    out.derived() = (z.sign() * (z.abs() - lambda / gamma).max(0.0)).matrix();
  } else {
    const auto z = (gamma * y - w).array();
    out.derived() = (z.sign() * (z.abs() - lambda).max(0.0) / curvature).matrix();
  }
}

template <typename DW, typename DY>
vector_t srsg_prox(const Eigen::MatrixBase<DW>& w, const Eigen::MatrixBase<DY>& y,
                   double lambda, double gamma, double sigma = 0.0) {
  vector_t out(w.size());
  srsg_prox_into(w, y, lambda, gamma, out, sigma);
  return out;
}

struct phi_result {
  double value;
  vector_t maximizer;
};

// phi(s) = max_x <s,x> - A g(x) - gamma Psi(x). Its gradient is the maximizer,
// which is (gamma + A sigma)^{-1}-Lipschitz in s.
template <typename Derived>
phi_result phi_eval(const Eigen::MatrixBase<Derived>& s, double A, double lambda, double sigma,
                    double gamma) {
  const double curvature = detail::checked_curvature(gamma, A, sigma, "phi_eval");
  const double shrunk = (s.array().abs() - A * lambda).max(0.0).square().sum();
  return {shrunk / (2.0 * curvature), rqm_prox(-s, A, lambda, sigma, gamma)};
}

// Max over coordinates of |central difference of phi - maximizer_j|.
template <typename Derived>
double phi_gradient_check(const Eigen::MatrixBase<Derived>& s, double A, double lambda,
                          double sigma, double gamma, double h) {
  if (!(h > 0.0)) throw configuration_error("phi_gradient_check: h must be positive");
  const vector_t base = s;
  const vector_t grad = phi_eval(base, A, lambda, sigma, gamma).maximizer;
  double worst = 0.0;
  vector_t probe = base;
  for (Eigen::Index j = 0; j < base.size(); ++j) {
    probe[j] = base[j] + h;
    const double up = phi_eval(probe, A, lambda, sigma, gamma).value;
    probe[j] = base[j] - h;
    const double down = phi_eval(probe, A, lambda, sigma, gamma).value;
    probe[j] = base[j];
    worst = std::max(worst, std::abs((up - down) / (2.0 * h) - grad[j]));
  }
  return worst;
}

}  // namespace rqm
