#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rqm/brute_force.hpp"
#include "rqm/prox.hpp"
#include "support/oracles.hpp"

namespace {

using rqm::vector_t;

vector_t vec(std::initializer_list<double> v) {
  vector_t out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// <s,x> + A(lambda|x| + sigma/2 x^2) + gamma/2 x^2 for one coordinate.
double rqm_objective_1d(double s, double A, double lambda, double sigma, double gamma, double x) {
  return s * x + A * (lambda * std::abs(x) + 0.5 * sigma * x * x) + 0.5 * gamma * x * x;
}

TEST(RqmProx, ExampleTwoCoordinates) {
  const vector_t x = rqm::rqm_prox(vec({3.0, -0.5}), 2.0, 1.0, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(x[0], -0.5);
  EXPECT_EQ(x[1], 0.0);
  // Golden-section cross-check on [-10, 10].
  for (int j = 0; j < 2; ++j) {
    const double s = j == 0 ? 3.0 : -0.5;
    const double g = test_oracles::golden_section(
        [&](double t) { return rqm_objective_1d(s, 2.0, 1.0, 0.0, 2.0, t); }, -10.0, 10.0);
    EXPECT_NEAR(x[j], g, 1e-7);
  }
}

TEST(RqmProx, ZeroAggregateGivesOrigin) {
  EXPECT_EQ(rqm::rqm_prox(vector_t::Zero(4), 3.0, 0.7, 0.2, 1.0), vector_t::Zero(4));
}

TEST(RqmProx, ElasticNetExample) {
  const vector_t x = rqm::rqm_prox(vec({3.0}), 2.0, 1.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(x[0], -0.25);
  const double grid = test_oracles::grid_min_arg(
      [](double t) { return rqm_objective_1d(3.0, 2.0, 1.0, 1.0, 2.0, t); }, -2.0, 2.0, 1e-5);
  EXPECT_NEAR(x[0], grid, 2e-5);
}

TEST(RqmProx, DegenerateCurvatureThrows) {
  EXPECT_THROW(rqm::rqm_prox(vec({1.0}), 1.0, 1.0, 0.0, 0.0), rqm::degenerate_subproblem_error);
  EXPECT_THROW(rqm::rqm_prox(vec({1.0}), 0.0, 1.0, 1.0, -1.0), rqm::degenerate_subproblem_error);
  EXPECT_NO_THROW(rqm::rqm_prox(vec({1.0}), 1.0, 1.0, 1.0, 0.0));
}

TEST(RqmProx, ThresholdBoundaryIsExactlyZero) {
  const vector_t x = rqm::rqm_prox(vec({2.0, -2.0}), 2.0, 1.0, 0.0, 3.0);
  EXPECT_EQ(x[0], 0.0);
  EXPECT_EQ(x[1], 0.0);
}

// Printed form: sgn(-s/gamma) max{|-s/gamma| - A lambda/gamma, 0}.
TEST(RqmProx, ReducesToPrintedFormulaWithoutSigma) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0), p(1e-3, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double s = u(rng), A = p(rng), lambda = p(rng), gamma = p(rng);
    const double z = -s / gamma;
    const double sgn = z > 0 ? 1.0 : (z < 0 ? -1.0 : 0.0);
    const double printed = sgn * std::max(std::abs(z) - A * lambda / gamma, 0.0);
    const double ours = rqm::rqm_prox(vec({s}), A, lambda, 0.0, gamma)[0];
    ASSERT_NEAR(ours, printed, 1e-12 * (1.0 + std::abs(printed)));
  }
}

TEST(SrsgProx, Examples) {
  EXPECT_DOUBLE_EQ(rqm::srsg_prox(vec({0.5}), vec({1.0}), 1.0, 2.0)[0], 0.25);
  EXPECT_EQ(rqm::srsg_prox(vec({0.0}), vec({0.0}), 1.0, 1.0)[0], 0.0);
  EXPECT_DOUBLE_EQ(rqm::srsg_prox(vec({4.0}), vec({0.0}), 1.0, 2.0)[0], -1.5);
  const double grid = test_oracles::grid_min_arg(
      [](double t) { return 0.5 * t + std::abs(t) + (t - 1.0) * (t - 1.0); }, -3.0, 3.0, 1e-5);
  EXPECT_NEAR(grid, 0.25, 2e-5);
}

TEST(SrsgProx, Errors) {
  EXPECT_THROW(rqm::srsg_prox(vec({1.0}), vec({0.0}), 1.0, 0.0), rqm::degenerate_subproblem_error);
  EXPECT_THROW(rqm::srsg_prox(vec({1.0, 2.0}), vec({0.0}), 1.0, 1.0), rqm::shape_error);
}

TEST(SrsgProx, SigmaZeroMatchesElasticNetLimit) {
  const vector_t w = vec({0.3, -4.0, 9.0}), y = vec({1.0, 0.5, -2.0});
  const vector_t plain = rqm::srsg_prox(w, y, 0.7, 2.5);
  const vector_t tiny = rqm::srsg_prox(w, y, 0.7, 2.5, 1e-12);
  EXPECT_LT((plain - tiny).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(ProxOracle, RandomInstancesMatchBruteForce) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-10.0, 10.0), p(0.0, 10.0);
  auto pos = [&] { return 10.0 - p(rng); };
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const vector_t s = vec({u(rng), u(rng)});
    const double A = pos(), lambda = pos(), sigma = pos(), gamma = pos();
    worst = std::max(worst, (rqm::rqm_prox(s, A, lambda, sigma, gamma) -
                             rqm::brute_force::rqm_subproblem(s, A, lambda, sigma, gamma))
                                .lpNorm<Eigen::Infinity>());
    const vector_t y = vec({u(rng), u(rng)});
    worst = std::max(worst, (rqm::srsg_prox(s, y, lambda, gamma) -
                             rqm::brute_force::srsg_subproblem(s, y, lambda, gamma))
                                .lpNorm<Eigen::Infinity>());
    worst = std::max(worst, (rqm::srsg_prox(s, y, lambda, gamma, sigma) -
                             rqm::brute_force::srsg_subproblem(s, y, lambda, gamma, sigma))
                                .lpNorm<Eigen::Infinity>());
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Phi, Examples) {
  auto r = rqm::phi_eval(vec({3.0}), 2.0, 1.0, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(r.value, 0.25);
  EXPECT_DOUBLE_EQ(r.maximizer[0], 0.5);
  // Inner objective at the maximizer equals the value.
  const double x = r.maximizer[0];
  EXPECT_NEAR(3.0 * x - 2.0 * std::abs(x) - x * x, r.value, 1e-15);

  r = rqm::phi_eval(vector_t::Zero(1), 1.0, 1.0, 0.0, 1.0);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.maximizer[0], 0.0);

  r = rqm::phi_eval(vec({1.0}), 2.0, 1.0, 0.0, 1.0);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.maximizer[0], 0.0);
}

TEST(Phi, GradientCheckExamples) {
  EXPECT_LE(rqm::phi_gradient_check(vec({3.0}), 2.0, 1.0, 0.0, 2.0, 1e-4), 1e-6);
  EXPECT_LE(rqm::phi_gradient_check(vector_t::Zero(3), 2.0, 1.0, 0.0, 2.0, 1e-4), 1e-6);
  EXPECT_LE(rqm::phi_gradient_check(vec({10.0}), 1.0, 1.0, 0.0, 1.0, 1e-4), 1e-5);
  EXPECT_DOUBLE_EQ(rqm::phi_eval(vec({10.0}), 1.0, 1.0, 0.0, 1.0).maximizer[0], 9.0);
  EXPECT_THROW(rqm::phi_gradient_check(vec({1.0}), 1.0, 1.0, 0.0, 1.0, 0.0),
               rqm::configuration_error);
}

TEST(Phi, ValueDominatesAnyFeasiblePoint) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0), p(0.1, 5.0);
  for (int i = 0; i < 500; ++i) {
    const vector_t s = vec({u(rng), u(rng), u(rng)});
    const vector_t xbar = vec({u(rng), u(rng), u(rng)});
    const double A = p(rng), lambda = p(rng), sigma = p(rng) - 0.1, gamma = p(rng);
    const rqm::l1_regularizer g{lambda, sigma};
    const double lower = s.dot(xbar) - A * g.value(xbar) - gamma * 0.5 * xbar.squaredNorm();
    ASSERT_GE(rqm::phi_eval(s, A, lambda, sigma, gamma).value, lower - 1e-12);
  }
}

TEST(Phi, GradientLipschitzAndConvexity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0), p(0.01, 10.0), unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const vector_t s1 = vec({u(rng), u(rng), u(rng)}), s2 = vec({u(rng), u(rng), u(rng)});
    const double A = p(rng), lambda = p(rng), sigma = p(rng), gamma = p(rng);
    const auto r1 = rqm::phi_eval(s1, A, lambda, sigma, gamma);
    const auto r2 = rqm::phi_eval(s2, A, lambda, sigma, gamma);
    const double lip = (s1 - s2).norm() / (gamma + A * sigma);
    ASSERT_LE((r1.maximizer - r2.maximizer).norm(), lip * (1.0 + 1e-10));
    const double a = unit(rng);
    const double mid = rqm::phi_eval(a * s1 + (1 - a) * s2, A, lambda, sigma, gamma).value;
    ASSERT_LE(mid, a * r1.value + (1 - a) * r2.value + 1e-10);
  }
}

TEST(ProxFunction, EuclideanIsOneStronglyConvex) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0), unit(0.0, 1.0);
  using psi = rqm::euclidean_prox_function;
  for (int i = 0; i < 1000; ++i) {
    const vector_t x = vec({u(rng), u(rng)}), y = vec({u(rng), u(rng)});
    const double a = unit(rng);
    const double lhs = psi::value(vector_t(a * x + (1 - a) * y));
    const double rhs = a * psi::value(x) + (1 - a) * psi::value(y) -
                       0.5 * psi::beta * a * (1 - a) * (x - y).squaredNorm();
    ASSERT_LE(lhs, rhs + 1e-9);
    ASSERT_GE(psi::value(x), 0.0);
  }
  EXPECT_EQ(psi::value(vector_t::Zero(3)), psi::center_value);
}

}  // namespace
