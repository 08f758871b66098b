#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <utility>

#include "rqm/error.hpp"
#include "rqm/problem.hpp"
#include "rqm/prox.hpp"
#include "rqm/types.hpp"

namespace rqm {

// L_delta(z) = z^2/2 inside [-delta, delta], delta(|z| - delta/2) outside.
inline double huber_value(double z, double delta) {
  const double a = std::abs(z);
  return a <= delta ? 0.5 * z * z : delta * (a - 0.5 * delta);
}

// The boundary |z| = delta takes the interior branch; both agree there.
inline double huber_subgradient(double z, double delta) {
  if (std::abs(z) <= delta) return z;
  return z > 0.0 ? delta : -delta;
}

// How the data term aggregates over samples: the plain sum, or the sum
// divided by N.
enum class objective_scale { sum, mean };

inline objective_scale parse_objective_scale(std::string_view name) {
  if (name == "sum") return objective_scale::sum;
  if (name == "mean") return objective_scale::mean;
  throw configuration_error("unknown objective scale '" + std::string(name) +
                            "' (expected sum|mean)");
}

inline std::string_view to_string(objective_scale s) {
  return s == objective_scale::sum ? "sum" : "mean";
}

struct huber_options {
  double delta = 2.0;
  l1_regularizer regularizer{};
  std::size_t batch = 1;
  objective_scale scale = objective_scale::mean;
};

struct subgradient_sample {
  vector_t w;
  double squared_dual_norm;
};

// Robust regression on parameters theta = (a, b):
//   F(theta) = c * sum_i L_delta(a^T x_i + b - y_i) + lambda ||theta||_1 + sigma/2 ||theta||^2
// with c = 1 (sum) or 1/N (mean). The intercept is regularized too.
class huber_regression_problem {
 public:
  huber_regression_problem(const matrix_t& inputs, vector_t targets, huber_options options = {})
      : targets_(std::move(targets)), options_(options) {
    if (inputs.rows() == 0) throw configuration_error("huber problem: empty dataset");
    if (inputs.rows() != targets_.size()) {
      throw shape_error("huber problem: " + std::to_string(inputs.rows()) + " inputs vs " +
                        std::to_string(targets_.size()) + " targets");
    }
    if (!(options_.delta > 0.0)) throw configuration_error("huber problem: delta must be positive");
    if (options_.batch == 0) throw configuration_error("huber problem: batch must be >= 1");
    if (options_.regularizer.lambda < 0.0 || options_.regularizer.sigma < 0.0) {
      throw configuration_error("huber problem: lambda and sigma must be nonnegative");
    }
    design_.resize(inputs.rows(), inputs.cols() + 1);
    design_.leftCols(inputs.cols()) = inputs;
    design_.col(inputs.cols()).setOnes();
    scale_ = options_.scale == objective_scale::sum ? 1.0 : 1.0 / static_cast<double>(samples());
  }

  std::size_t dim() const { return static_cast<std::size_t>(design_.cols()); }
  std::size_t samples() const { return static_cast<std::size_t>(design_.rows()); }
  std::size_t features() const { return dim() - 1; }
  const huber_options& options() const { return options_; }
  const l1_regularizer& regularizer() const { return options_.regularizer; }
  double delta() const { return options_.delta; }
  const matrix_t& design() const { return design_; }
  const vector_t& targets() const { return targets_; }

  // Data term only.
  double loss(const vector_t& theta) const {
    check_shape(theta);
    const vector_t r = design_ * theta - targets_;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) acc += huber_value(r[i], options_.delta);
    return scale_ * acc;
  }

  double objective(const vector_t& theta) const {
    return loss(theta) + options_.regularizer.value(theta);
  }

  void full_subgradient(const vector_t& theta, vector_t& out) const {
    check_shape(theta);
    vector_t r = design_ * theta - targets_;
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = huber_subgradient(r[i], options_.delta);
    out.noalias() = scale_ * (design_.transpose() * r);
  }

  // Draws `batch` indices uniformly with replacement and rescales by
  // N/batch, so E[w] is a subgradient of the full data term.
  template <typename Rng>
  double sample_subgradient(const vector_t& theta, Rng& rng, vector_t& out) const {
    check_shape(theta);
    std::uniform_int_distribution<Eigen::Index> pick(0, design_.rows() - 1);
    out.setZero(design_.cols());
    for (std::size_t b = 0; b < options_.batch; ++b) {
      const Eigen::Index i = pick(rng);
      const double r = design_.row(i).dot(theta) - targets_[i];
      out.noalias() += huber_subgradient(r, options_.delta) * design_.row(i).transpose();
    }
    out *= scale_ * static_cast<double>(samples()) / static_cast<double>(options_.batch);
    return out.squaredNorm();
  }

  // Almost-sure bound on ||w||_2 from the data: delta * max_i ||(x_i, 1)|| * c N.
  double analytic_subgradient_bound() const {
    return options_.delta * design_.rowwise().norm().maxCoeff() * scale_ *
           static_cast<double>(samples());
  }

 private:
  void check_shape(const vector_t& theta) const {
    if (theta.size() != design_.cols()) {
      throw shape_error("huber problem: parameter dimension " + std::to_string(theta.size()) +
                        " != " + std::to_string(design_.cols()));
    }
  }

  matrix_t design_;
  vector_t targets_;
  huber_options options_;
  double scale_ = 1.0;
};

static_assert(composite_problem<huber_regression_problem>);

inline double full_objective(const vector_t& theta, const huber_regression_problem& problem) {
  return problem.objective(theta);
}

template <typename Rng>
subgradient_sample sample_subgradient(const vector_t& theta,
                                      const huber_regression_problem& problem, Rng& rng) {
  subgradient_sample s{vector_t(problem.dim()), 0.0};
  s.squared_dual_norm = problem.sample_subgradient(theta, rng, s.w);
  return s;
}

}  // namespace rqm
