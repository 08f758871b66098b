#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "rqm/types.hpp"

// Reference minimizers that never touch the closed-form prox formulas. They
// work from the one-dimensional optimality condition of a strongly convex
// piecewise-quadratic objective: a grid scan locates where the right
// derivative turns nonnegative, then bisection refines the bracket.
namespace rqm::brute_force {

// Minimizer of a strongly convex 1-D function on [lo, hi], given its right
// derivative (nondecreasing). `cells` sets the scan resolution.
inline double argmin_1d(const std::function<double(double)>& right_derivative, double lo, double hi,
                        std::size_t cells = 2000) {
  if (right_derivative(lo) >= 0.0) return lo;
  const double step = (hi - lo) / static_cast<double>(cells);
  double left = lo, right = hi;
  for (std::size_t i = 1; i <= cells; ++i) {
    const double x = i == cells ? hi : lo + step * static_cast<double>(i);
    if (right_derivative(x) >= 0.0) {
      left = x - step;
      right = x;
      break;
    }
    left = x;
  }
  for (int it = 0; it < 200 && right - left > 0.0; ++it) {
    const double mid = 0.5 * (left + right);
    if (mid <= left || mid >= right) break;
    (right_derivative(mid) >= 0.0 ? right : left) = mid;
  }
  return right;
}

// sign(x) with the right-limit convention, so that d/dx|x| at 0 from the
// right is +1.
inline double right_sign(double x) { return x >= 0.0 ? 1.0 : -1.0; }

// argmin_x s x + A(lambda |x| + sigma/2 x^2) + gamma/2 x^2, per coordinate.
inline vector_t rqm_subproblem(const vector_t& s, double A, double lambda, double sigma,
                               double gamma) {
  vector_t out(s.size());
  const double curvature = gamma + A * sigma;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const double sj = s[j];
    const double radius = (std::abs(sj) + A * lambda) / curvature + 1.0;
    out[j] = argmin_1d(
        [&](double x) { return sj + A * lambda * right_sign(x) + curvature * x; }, -radius, radius);
  }
  return out;
}

// argmin_x w x + lambda |x| + sigma/2 x^2 + gamma/2 (x - y)^2, per coordinate.
inline vector_t srsg_subproblem(const vector_t& w, const vector_t& y, double lambda, double gamma,
                                double sigma = 0.0) {
  vector_t out(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double wj = w[j], yj = y[j];
    const double radius = (std::abs(wj) + lambda + gamma * std::abs(yj)) / (gamma + sigma) + 1.0;
    out[j] = argmin_1d(
        [&](double x) { return wj + lambda * right_sign(x) + sigma * x + gamma * (x - yj); },
        -radius, radius);
  }
  return out;
}

}  // namespace rqm::brute_force
