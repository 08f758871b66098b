#pragma once

#include <concepts>
#include <cstddef>

#include "rqm/prox.hpp"
#include "rqm/random.hpp"
#include "rqm/types.hpp"

namespace rqm {

// F = f + g with g an l1 (+ quadratic) regularizer. sample_subgradient
// writes an unbiased estimate of a subgradient of f into `out` and returns
// its squared Euclidean norm; full_subgradient writes an exact one.
template <typename P>
concept composite_problem = requires(const P& p, const vector_t& x, vector_t& out, rng_t& rng) {
  { p.dim() } -> std::convertible_to<std::size_t>;
  { p.loss(x) } -> std::convertible_to<double>;
  { p.objective(x) } -> std::convertible_to<double>;
  { p.regularizer() } -> std::convertible_to<l1_regularizer>;
  p.full_subgradient(x, out);
  { p.sample_subgradient(x, rng, out) } -> std::convertible_to<double>;
};

// Wraps a problem so that the stochastic oracle returns the exact
// subgradient. Used by the deterministic Lyapunov and bound checks and by
// the reference solver.
template <composite_problem P>
class exact_oracle {
 public:
  explicit exact_oracle(const P& inner) : inner_(&inner) {}

  std::size_t dim() const { return inner_->dim(); }
  double loss(const vector_t& x) const { return inner_->loss(x); }
  double objective(const vector_t& x) const { return inner_->objective(x); }
  const l1_regularizer& regularizer() const { return inner_->regularizer(); }
  void full_subgradient(const vector_t& x, vector_t& out) const { inner_->full_subgradient(x, out); }

  template <typename Rng>
  double sample_subgradient(const vector_t& x, Rng&, vector_t& out) const {
    inner_->full_subgradient(x, out);
    return out.squaredNorm();
  }

  const P& inner() const { return *inner_; }

 private:
  const P* inner_;
};

}  // namespace rqm
