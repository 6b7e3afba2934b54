#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "chest/autodiff.hpp"
#include "chest/error.hpp"
#include "chest/geometry.hpp"
#include "chest/ops.hpp"
#include "support.hpp"

namespace chest {
namespace {

using testing::Gen;

TEST(ParamSet, RejectsDuplicatesAndNonFinite) {
  ParamSet p;
  p.add("w", Tensor({2}, {1.0, 2.0}));
  EXPECT_THROW(p.add("w", Tensor({1}, {0.0})), Error);
  EXPECT_THROW(p.add("bad", Tensor({1}, {NAN})), Error);
  EXPECT_TRUE(p.contains("w"));
  EXPECT_FALSE(p.contains("bad"));
  EXPECT_THROW(p.get("missing"), Error);
}

TEST(Backward, ConstantLossHasZeroGradients) {
  ParamSet p;
  p.add("w", Tensor({3}, {1.0, -2.0, 0.5}));
  const LossFn fn = [](Tape& t, const ParamVars&) { return t.constant(Tensor::scalar(4.2)); };
  const GradientReport r = backward(fn, p);
  EXPECT_EQ(r.loss, 4.2);
  EXPECT_TRUE(r.finite);
  for (double g : r.grad("w").data) EXPECT_EQ(g, 0.0);
  EXPECT_EQ(r.grad("w").shape, p.get("w").shape);
}

TEST(Backward, HalfSquaredNormGradientIsIdentity) {
  ParamSet p;
  p.add("w", Tensor({2}, {1.0, 2.0}));
  const LossFn fn = [](Tape&, const ParamVars& v) { return ops::half_squared_norm(v["w"]); };
  const GradientReport r = backward(fn, p);
  EXPECT_EQ(r.loss, 2.5);
  EXPECT_EQ(r.grad("w").data, (std::vector<double>{1.0, 2.0}));
}

TEST(Backward, NonFiniteLossNamesParameter) {
  ParamSet p;
  p.add("x", Tensor::matrix(1, 1, {1e200}));
  p.add("W", Tensor::matrix(1, 1, {1.0}));
  p.add("b", Tensor({1}, {0.0}));
  const LossFn fn = [](Tape&, const ParamVars& v) { return ops::half_squared_norm(ops::linear(v["x"], v["W"], v["b"])); };
  try {
    backward(fn, p);
    FAIL() << "expected an evaluation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Evaluation);
    EXPECT_NE(std::string(e.what()).find("W"), std::string::npos) << e.what();
  }
}

TEST(Backward, DoesNotMutateParams) {
  Gen g(1);
  ParamSet p;
  p.add("w", g.tensor({4, 3}));
  const ParamSet before = p;
  const LossFn fn = [](Tape&, const ParamVars& v) { return ops::half_squared_norm(ops::relu(v["w"])); };
  backward(fn, p);
  finite_difference_check(fn, p);
  EXPECT_EQ(p, before);
}

TEST(Backward, IsBitwiseDeterministic) {
  Gen g(2);
  ParamSet p;
  p.add("x", g.tensor({3, 4}, 0.5));
  p.add("q", g.tensor({5, 4}, 0.3));
  BallConfig ball;
  const LossFn fn = [&](Tape&, const ParamVars& v) {
    const Var xh = ops::exp_map_zero_rows(v["x"], ball);
    const Var qh = ops::exp_map_zero_rows(v["q"], ball);
    return ops::mean(ops::poincare_distances(xh, qh, ball));
  };
  const GradientReport a = backward(fn, p);
  const GradientReport b = backward(fn, p);
  for (std::size_t i = 0; i < a.grads.size(); ++i) {
    const auto& x = a.grads[i].second.data;
    const auto& y = b.grads[i].second.data;
    ASSERT_EQ(x.size(), y.size());
    EXPECT_EQ(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)), 0);
  }
}

TEST(FiniteDifference, QuadraticIsExactUpToRoundoff) {
  Gen g(3);
  ParamSet p;
  p.add("w", g.tensor({6}));
  const LossFn fn = [](Tape&, const ParamVars& v) { return ops::half_squared_norm(v["w"]); };
  for (double h : {1e-3, 1e-4, 1e-5}) {
    const FdReport r = finite_difference_check(fn, p, h, 1e-4);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.max_rel_error, 1e-8);
  }
}

TEST(FiniteDifference, ReportsWrongGradientWithoutThrowing) {
  ParamSet p;
  p.add("w", Tensor({2}, {1.0, 2.0}));
  // Forward is |w|^2/2 but the backward doubles the gradient.
  const LossFn fn = [](Tape& t, const ParamVars& v) {
    const Var w = v["w"];
    double s = 0.0;
    for (double x : w.value().data) s += 0.5 * x * x;
    return t.record(Tensor::scalar(s), {w}, [w](Tape& tape, std::size_t self) {
      const double g = tape.grad(self)[0];
      auto gw = tape.grad_target(w.id());
      for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += 2.0 * g * w.value().data[i];
    });
  };
  const FdReport r = finite_difference_check(fn, p);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].name, "w");
  EXPECT_NEAR(r.entries[0].max_rel_error, 0.5, 1e-6);
}

TEST(FiniteDifference, DistanceOfExpMapMatches) {
  Gen g(4);
  BallConfig ball;
  for (int i = 0; i < 50; ++i) {
    ParamSet p;
    p.add("w", g.tensor({1, 4}, 0.7));
    Tensor q({1, 4}, g.in_ball(4, 0.9 / std::sqrt(ball.curvature)));
    p.add("p", q);
    const LossFn fn = [&](Tape&, const ParamVars& v) {
      return ops::mean(ops::poincare_distance_rows(ops::exp_map_zero_rows(v["w"], ball), v["p"], ball));
    };
    const FdReport r = finite_difference_check(fn, p);
    EXPECT_TRUE(r.pass) << "config " << i << " err " << r.max_rel_error;
  }
}

TEST(FiniteDifference, RelativeErrorFloor) {
  EXPECT_EQ(relative_error(0.0, 0.0), 0.0);
  EXPECT_NEAR(relative_error(1e-12, 0.0), 1e-4, 1e-18);
  EXPECT_NEAR(relative_error(2.0, 1.0), 0.5, 1e-15);
}

TEST(DistanceGradient, FiniteNearBoundary) {
  BallConfig ball;
  const double r = (1.0 - 1e-6) / std::sqrt(ball.curvature);
  ParamSet p;
  p.add("u", Tensor::matrix(1, 2, {r, 0.0}));
  p.add("v", Tensor::matrix(1, 2, {0.0, r}));
  p.add("w", Tensor::matrix(1, 2, {-r, 0.0}));
  const LossFn fn = [&](Tape&, const ParamVars& v) {
    const Var a = ops::poincare_distance_rows(v["u"], v["v"], ball);
    const Var b = ops::poincare_distance_rows(v["u"], v["w"], ball);
    const std::array<std::pair<Var, double>, 2> terms{{{a, 1.0}, {b, 1.0}}};
    return ops::weighted_sum(terms);
  };
  const GradientReport g = backward(fn, p);
  EXPECT_TRUE(g.finite);
  EXPECT_TRUE(std::isfinite(g.loss));
}

TEST(Tape, UntrackedTapeRecordsNoGradients) {
  Tape t(false);
  const Var x = t.leaf(Tensor({2}, {1.0, 2.0}));
  EXPECT_FALSE(t.needs_grad(x.id()));
  EXPECT_TRUE(t.grad_target(x.id()).empty());
}

}  // namespace
}  // namespace chest
