#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rqm/datagen.hpp"
#include "rqm/huber.hpp"
#include "rqm/solver_rqm.hpp"
#include "support/toy_problems.hpp"

namespace {

using rqm::schedule;
using rqm::vector_t;

rqm::huber_regression_problem small_huber(std::uint64_t seed, rqm::huber_options opt = {}) {
  const auto d = rqm::generate(seed, 200, 10, 4);
  return rqm::huber_regression_problem(d.inputs, d.targets, opt);
}

TEST(RqmInit, StartsAtOrigin) {
  const auto problem = small_huber(1);
  auto rng = rqm::make_stream(1, rqm::trial_stream);
  for (const auto& sched : {schedule::corollary_one(), schedule::quadratic(10.0)}) {
    const auto st = rqm::rqm_init(problem, sched, rng);
    EXPECT_EQ(st.k, 0u);
    EXPECT_TRUE(st.x.isZero(0.0));
    EXPECT_EQ(st.x.size(), 11);
    EXPECT_EQ(st.x_plus.size(), 11);
    EXPECT_EQ(st.s.size(), 11);
    EXPECT_EQ(st.w.size(), 11);
  }
}

TEST(RqmInit, QuadraticScheduleHasNoInitialWeight) {
  const auto problem = small_huber(2);
  auto rng = rqm::make_stream(2, rqm::trial_stream);
  const auto st = rqm::rqm_init(problem, schedule::quadratic(10.0), rng);
  EXPECT_EQ(st.A, 0.0);
  EXPECT_EQ(st.gamma, 10.0);
  EXPECT_EQ(st.B_hat, 0.0);
  EXPECT_TRUE(st.s.isZero(0.0));
}

TEST(RqmStep, ConvexCombinationExample) {
  const toy::zero_loss problem(2);
  const auto sched = schedule::corollary_one();
  rqm::rqm_state st;
  st.k = 0;
  st.A = 1.0;
  st.gamma = 1.0;
  st.x = vector_t::Zero(2);
  st.x_plus = (vector_t(2) << -2.0, 1.0).finished();
  st.s = vector_t::Zero(2);
  st.w = vector_t::Zero(2);
  auto rng = rqm::make_stream(0, 0);
  rqm::rqm_step(st, problem, sched, rng);
  EXPECT_EQ(st.k, 1u);
  EXPECT_DOUBLE_EQ(st.A, 2.0);
  EXPECT_DOUBLE_EQ(st.x[0], -1.0);
  EXPECT_DOUBLE_EQ(st.x[1], 0.5);
}

TEST(RqmStep, ZeroOracleStaysAtOrigin) {
  const toy::zero_loss problem(4, {0.3, 0.1});
  auto rng = rqm::make_stream(0, 0);
  for (const auto& sched : {schedule::corollary_one(), schedule::corollary_two(),
                            schedule::quadratic(10.0)}) {
    auto st = rqm::rqm_init(problem, sched, rng);
    for (int k = 0; k < 50; ++k) {
      rqm::rqm_step(st, problem, sched, rng);
      ASSERT_TRUE(st.x.isZero(0.0));
      ASSERT_TRUE(st.x_plus.isZero(0.0));
    }
  }
}

TEST(RqmStep, MatchesScriptedRecurrenceOneDimension) {
  // f(x) = |x - 1|, lambda = 0, a_k = 1, A_k = k + 1, gamma_k = sqrt(k + 1).
  const toy::shifted_abs problem(vector_t::Ones(1));
  const auto sched = schedule::corollary_one();
  auto rng = rqm::make_stream(0, 0);
  auto st = rqm::rqm_init(problem, sched, rng);

  double x = 0.0, s = 0.0;
  auto sign = [](double r) { return r > 0 ? 1.0 : (r < 0 ? -1.0 : 0.0); };
  s += sign(x - 1.0);
  double xp = -s / std::sqrt(2.0);
  EXPECT_NEAR(st.x[0], x, 1e-12);
  EXPECT_NEAR(st.x_plus[0], xp, 1e-12);
  for (int k = 0; k < 3; ++k) {
    const double A = k + 1.0, A_next = k + 2.0;
    x = (A * x + xp) / A_next;
    s += sign(x - 1.0);
    xp = -s / std::sqrt(A_next + 1.0);
    rqm::rqm_step(st, problem, sched, rng);
    EXPECT_NEAR(st.x[0], x, 1e-12) << "k=" << k + 1;
    EXPECT_NEAR(st.x_plus[0], xp, 1e-12) << "k=" << k + 1;
    EXPECT_NEAR(st.s[0], s, 1e-12);
  }
  // x_1 = -1/(2 sqrt 2), then the iterates head toward 1.
  EXPECT_GT(st.x[0], -1.0);
}

TEST(RqmStep, IterateIsWeightedAverageOfForecasts) {
  rqm::huber_options opt;
  opt.regularizer = {0.1, 0.05};
  const auto problem = small_huber(3, opt);
  for (const auto& sched : {schedule::corollary_one(), schedule::corollary_two(),
                            schedule::quadratic(10.0)}) {
    auto rng = rqm::make_stream(3, rqm::trial_stream);
    auto st = rqm::rqm_init(problem, sched, rng);
    vector_t shadow = sched.a(0) * st.x;
    vector_t prev_plus = st.x_plus;
    for (std::size_t k = 1; k <= 2000; ++k) {
      rqm::rqm_step(st, problem, sched, rng);
      shadow += sched.a(k) * prev_plus;
      prev_plus = st.x_plus;
      const double err = (st.x - shadow / st.A).lpNorm<Eigen::Infinity>();
      ASSERT_LE(err, 1e-10 * (1.0 + st.x.lpNorm<Eigen::Infinity>())) << "k=" << k;
    }
  }
}

TEST(RqmStep, AggregateAndBAccumulator) {
  const auto problem = small_huber(4);
  const auto sched = schedule::corollary_two();
  auto rng = rqm::make_stream(4, rqm::trial_stream);
  auto st = rqm::rqm_init(problem, sched, rng);
  vector_t s = st.w * sched.a(0);
  double prev_B = st.B_hat;
  for (std::size_t k = 1; k <= 500; ++k) {
    rqm::rqm_step(st, problem, sched, rng);
    s += sched.a(k) * st.w;
    EXPECT_GE(st.B_hat, prev_B);
    prev_B = st.B_hat;
  }
  EXPECT_LE((st.s - s).lpNorm<Eigen::Infinity>(), 1e-9 * (1.0 + s.lpNorm<Eigen::Infinity>()));
}

TEST(RqmStep, BAccumulatorMatchesDefinition) {
  // Deterministic oracle so the per-step terms can be replayed.
  const toy::shifted_abs problem((vector_t(3) << 1.0, -2.0, 0.5).finished(), {0.2, 0.3});
  const auto sched = schedule::corollary_one();
  auto rng = rqm::make_stream(0, 0);
  auto st = rqm::rqm_init(problem, sched, rng);
  double B = 0.5 * sched.a(0) * sched.a(0) / sched.mu(0, 0.3) * st.w.squaredNorm();
  EXPECT_NEAR(st.B_hat, B, 1e-14);
  for (std::size_t k = 1; k <= 100; ++k) {
    rqm::rqm_step(st, problem, sched, rng);
    B += 0.5 * sched.a(k) * sched.a(k) / sched.mu(k, 0.3) * st.w.squaredNorm();
  }
  EXPECT_NEAR(st.B_hat, B, 1e-12 * B);
}

TEST(RqmRun, TraceLengthAndContent) {
  const auto problem = small_huber(5);
  auto rng = rqm::make_stream(5, rqm::trial_stream);
  const auto t = rqm::rqm_run(problem, schedule::corollary_one(), 1, rng, {10});
  ASSERT_TRUE(t.ok());
  ASSERT_EQ(t.points.size(), 2u);
  EXPECT_EQ(t.points[0].k, 0u);
  EXPECT_EQ(t.points[1].k, 1u);
  EXPECT_DOUBLE_EQ(t.points[0].objective, problem.objective(vector_t::Zero(11)));
  EXPECT_DOUBLE_EQ(t.points[1].gamma_over_A(), std::sqrt(2.0) / 2.0);
}

TEST(RqmRun, StrideKeepsFinalIterate) {
  const auto problem = small_huber(6);
  auto rng = rqm::make_stream(6, rqm::trial_stream);
  const auto t = rqm::rqm_run(problem, schedule::corollary_one(), 25, rng, {10});
  std::vector<std::size_t> ks;
  for (const auto& p : t.points) ks.push_back(p.k);
  EXPECT_EQ(ks, (std::vector<std::size_t>{0, 10, 20, 25}));
}

TEST(RqmRun, SameSeedSameTrace) {
  const auto problem = small_huber(7);
  auto run = [&] {
    auto rng = rqm::make_trial_stream(7, 3);
    return rqm::rqm_run(problem, schedule::quadratic(10.0), 300, rng, {1});
  };
  const auto a = run();
  const auto b = run();
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].objective, b.points[i].objective);
    EXPECT_EQ(a.points[i].B_hat, b.points[i].B_hat);
  }
  EXPECT_EQ(a.final_x, b.final_x);
}

TEST(RqmRun, BHatNondecreasingInTrace) {
  const auto problem = small_huber(8);
  auto rng = rqm::make_stream(8, rqm::trial_stream);
  const auto t = rqm::rqm_run(problem, schedule::corollary_two(), 1000, rng, {1});
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    EXPECT_GE(t.points[i].B_hat, t.points[i - 1].B_hat);
  }
}

TEST(RqmRun, NonFiniteStateEndsRunWithAnnotation) {
  const toy::poisoned problem(2, 5);
  auto rng = rqm::make_stream(0, 0);
  const auto t = rqm::rqm_run(problem, schedule::corollary_one(), 100, rng, {1});
  EXPECT_FALSE(t.ok());
  ASSERT_TRUE(t.failure);
  EXPECT_NE(t.failure->find("iteration 5"), std::string::npos) << *t.failure;
  EXPECT_EQ(t.points.size(), 5u);
}

TEST(RqmRun, NonFiniteStepThrowsWithIteration) {
  const toy::poisoned problem(2, 2);
  auto rng = rqm::make_stream(0, 0);
  auto st = rqm::rqm_init(problem, schedule::corollary_one(), rng);
  rqm::rqm_step(st, problem, schedule::corollary_one(), rng);
  try {
    rqm::rqm_step(st, problem, schedule::corollary_one(), rng);
    FAIL() << "expected numerical_failure";
  } catch (const rqm::numerical_failure& e) {
    EXPECT_EQ(e.iteration(), 2u);
    EXPECT_EQ(e.kind(), rqm::error_kind::numerical);
  }
}

TEST(RqmRun, RejectsZeroIterations) {
  const auto problem = small_huber(9);
  auto rng = rqm::make_stream(9, 0);
  EXPECT_THROW(rqm::rqm_run(problem, schedule::corollary_one(), 0, rng), rqm::configuration_error);
}

}  // namespace
