#include "c3bf/errors.hpp"
#include "c3bf/safety_filter.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace c3bf;
using c3bf::testing::Sampler;

namespace {

BarrierEval make(double h, double lf, Vec3 lg) {
  BarrierEval e;
  e.h = h;
  e.lf_h = lf;
  e.lg_h = lg;
  return e;
}

BarrierEval random_eval(Sampler& s) {
  return make(s.uniform(-100, 100), s.uniform(-100, 100), s.vec(-10, 10));
}

}  // namespace

TEST(Psi, Examples) {
  const ControlInput u{3, -1, 2};
  EXPECT_EQ(psi(make(2, -1, Vec3::Zero()), u, {1}), 1.0);
  EXPECT_EQ(psi(make(0, 0, Vec3(1, 0, 0)), {0, 5, 5}, {1}), 0.0);
  EXPECT_EQ(psi(make(-1, 0, Vec3::Zero()), u, {1}), -1.0);
  EXPECT_EQ(psi(make(2, 0, Vec3::Zero()), u, {3}), 6.0);
}

TEST(Filter, InactiveReturnsDesiredInput) {
  const ControlInput u{0.3, -0.7, 1.1};
  FilterOutput out = filter(make(5, 0, Vec3(1, 2, 3)), {0, 0, 0}, {1});
  EXPECT_EQ(out.psi, 5.0);
  EXPECT_FALSE(out.active);
  EXPECT_EQ(out.u_safe, ControlInput{});

  FilterOutput same = filter(make(5, 0, Vec3(1, 2, 3)), u, {1});
  EXPECT_EQ(same.u_star, u);
}

TEST(Filter, ActiveProjection) {
  FilterOutput out = filter(make(-2, 0, Vec3(1, 0, 0)), {0, 0, 0}, {1});
  EXPECT_TRUE(out.active);
  EXPECT_TRUE(out.feasible);
  EXPECT_EQ(out.u_safe, (ControlInput{2, 0, 0}));
  EXPECT_EQ(out.u_star, (ControlInput{2, 0, 0}));
}

TEST(Filter, DegenerateGradientIsFlagged) {
  const ControlInput u{1, 2, 3};
  FilterOutput out = filter(make(-1, 0, Vec3::Zero()), u, {1});
  EXPECT_TRUE(out.active);
  EXPECT_FALSE(out.feasible);
  EXPECT_EQ(out.u_safe, ControlInput{});
  EXPECT_EQ(out.u_star, u);

  FilterOutput tiny = filter(make(-1, 0, Vec3(1e-6, 0, 0)), u, {1});
  EXPECT_FALSE(tiny.feasible);
  FilterOutput loose = filter(make(-1, 0, Vec3(1e-6, 0, 0)), u, {1}, 1e-14);
  EXPECT_TRUE(loose.feasible);
}

TEST(QpReference, Examples) {
  const ControlInput u{0.5, 0.5, 0.5};
  EXPECT_EQ(qp_reference_solve(make(1, 0, Vec3(1, 0, 0)), u, {1}), u);
  ControlInput sol = qp_reference_solve(make(-3, 0, Vec3(1, 0, 0)), {0, 0, 0}, {1});
  EXPECT_NEAR(sol.a_t, 3, 1e-12);
  EXPECT_NEAR(sol.p, 0, 1e-12);
  EXPECT_NEAR(sol.q, 0, 1e-12);
  EXPECT_THROW(qp_reference_solve(make(-3, 0, Vec3::Zero()), u, {1}), Infeasible);
}

TEST(QpReference, MatchesClosedForm) {
  Sampler s(31);
  int active = 0;
  for (int i = 0; i < 1000; ++i) {
    BarrierEval e = random_eval(s);
    const ControlInput u = s.input();
    const ClassKappa k{s.uniform(0.1, 5)};
    FilterOutput out = filter(e, u, k);
    ControlInput ref = qp_reference_solve(e, u, k);
    EXPECT_LE((out.u_star.as_vector() - ref.as_vector()).cwiseAbs().maxCoeff(), 1e-9);
    if (out.active && out.feasible) {
      ++active;
      EXPECT_LE(std::abs(e.hdot(out.u_star) + k(e.h)), 1e-9);
    }
  }
  EXPECT_GT(active, 100);
}

TEST(Filter, CorrectionIsParallelToGradient) {
  Sampler s(32);
  for (int i = 0; i < 1000; ++i) {
    BarrierEval e = random_eval(s);
    FilterOutput out = filter(e, s.input(), {1});
    if (!out.active || !out.feasible) continue;
    const Vec3 us = out.u_safe.as_vector();
    EXPECT_LE(us.cross(e.lg_h).norm() / (e.lg_h.norm() * std::max(1.0, us.norm())), 1e-9);
    EXPECT_GE(us.dot(e.lg_h), 0.0);
  }
}

TEST(Filter, NoFeasiblePointIsCloser) {
  Sampler s(33);
  for (int i = 0; i < 200; ++i) {
    BarrierEval e = random_eval(s);
    const ControlInput u = s.input();
    FilterOutput out = filter(e, u, {1});
    const double best = out.u_safe.as_vector().norm();
    for (int j = 0; j < 200; ++j) {
      Vec3 cand = out.u_star.as_vector() + s.vec(-1, 1);
      if (e.lf_h + e.lg_h.dot(cand) + e.h < 0) continue;
      EXPECT_GE((cand - u.as_vector()).norm(), best - 1e-12);
    }
  }
}

TEST(Filter, CorrectionVanishesAtSwitch) {
  const Vec3 lg(0.3, -1.2, 2.0);
  const ControlInput u{0, 0, 0};
  double prev = std::numeric_limits<double>::infinity();
  for (double p = -1.0; p < 0; p *= 0.5) {
    FilterOutput out = filter(make(0, p, lg), u, {1});
    ASSERT_TRUE(out.active);
    const double mag = out.u_safe.as_vector().norm();
    EXPECT_LT(mag, prev);
    prev = mag;
    if (p > -1e-12) break;
  }
  EXPECT_LT(prev, 1e-11);
  EXPECT_EQ(filter(make(0, 0, lg), u, {1}).u_safe, ControlInput{});
}

TEST(ComposeObstacles, SingleEqualsFilter) {
  Sampler s(34);
  for (int i = 0; i < 200; ++i) {
    BarrierEval e = random_eval(s);
    const ControlInput u = s.input();
    std::vector<BarrierEval> one{e};
    FilterOutput a = compose_obstacles(one, u, {1});
    FilterOutput b = filter(e, u, {1});
    EXPECT_EQ(a.u_star, b.u_star);
    EXPECT_EQ(a.psi, b.psi);
    EXPECT_EQ(a.binding, 0u);
  }
}

TEST(ComposeObstacles, BothInactive) {
  const ControlInput u{1, 1, 1};
  std::vector<BarrierEval> evals{make(3, 0, Vec3::Zero()), make(7, 0, Vec3::Zero())};
  FilterOutput out = compose_obstacles(evals, u, {1});
  EXPECT_EQ(out.u_star, u);
  EXPECT_FALSE(out.active);
}

TEST(ComposeObstacles, MostViolatedWins) {
  const ControlInput u{0, 0, 0};
  std::vector<BarrierEval> evals{make(-1, 0, Vec3(0, 0, 2)), make(2, 0, Vec3(1, 0, 0))};
  FilterOutput out = compose_obstacles(evals, u, {1});
  FilterOutput first = filter(evals[0], u, {1});
  EXPECT_EQ(out.u_star, first.u_star);
  EXPECT_EQ(out.binding, 0u);

  std::swap(evals[0], evals[1]);
  EXPECT_EQ(compose_obstacles(evals, u, {1}).binding, 1u);
}

TEST(ComposeObstacles, TieKeepsLowestIndex) {
  std::vector<BarrierEval> evals{make(-1, 0, Vec3(1, 0, 0)), make(-1, 0, Vec3(0, 1, 0))};
  EXPECT_EQ(compose_obstacles(evals, {}, {1}).binding, 0u);
}

TEST(ComposeObstacles, EmptyThrows) {
  std::vector<BarrierEval> none;
  EXPECT_THROW(compose_obstacles(none, {}, {1}), std::invalid_argument);
}
