#include <gtest/gtest.h>

#include <cmath>

#include "chest/error.hpp"
#include "chest/geometry.hpp"
#include "support.hpp"

namespace chest {
namespace {

using testing::Gen;

BallConfig ball(double c) {
  BallConfig b;
  b.curvature = c;
  return b;
}

// Mobius addition spelled out per coordinate; independent of the library's coefficient form.
std::vector<double> mobius_oracle(const std::vector<double>& u, const std::vector<double>& v, double c) {
  double uv = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = ((1 + 2 * c * uv + c * vv) * u[i] + (1 - c * uu) * v[i]) / (1 + 2 * c * uv + c * c * uu * vv);
  }
  return out;
}

TEST(Mobius, LeftIdentityExample) {
  const auto r = mobius_add({0.0, 0.0}, {0.3, 0.1}, ball(0.5));
  EXPECT_DOUBLE_EQ(r.coords[0], 0.3);
  EXPECT_DOUBLE_EQ(r.coords[1], 0.1);
}

TEST(Mobius, CancellationExample) {
  const auto r = mobius_add({0.5, 0.0}, {-0.5, 0.0}, ball(1.0));
  EXPECT_NEAR(r.coords[0], 0.0, 1e-15);
  EXPECT_NEAR(r.coords[1], 0.0, 1e-15);
}

TEST(Mobius, OneDimensionalClosedForm) {
  const auto r = mobius_add({0.5, 0.0}, {0.2, 0.0}, ball(1.0));
  EXPECT_NEAR(r.coords[0], 0.7 / 1.1, 1e-15);
  EXPECT_NEAR(r.coords[0], 0.636364, 1e-6);
  EXPECT_EQ(r.coords[1], 0.0);
}

TEST(Mobius, MatchesCoordinateOracle) {
  Gen g(1);
  for (double c : {0.5, 1.0, 2.0}) {
    for (int i = 0; i < 500; ++i) {
      const auto u = g.in_ball(5, 0.9 / std::sqrt(c));
      const auto v = g.in_ball(5, 0.9 / std::sqrt(c));
      const auto r = mobius_add(PoincarePoint(u), PoincarePoint(v), ball(c));
      const auto o = mobius_oracle(u, v, c);
      for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(r.coords[k], o[k], 1e-13);
    }
  }
}

TEST(Mobius, Errors) {
  const BallConfig b = ball(1.0);
  EXPECT_THROW(mobius_add({0.1, 0.1}, {0.1}, b), Error);
  try {
    mobius_add({0.1, NAN}, {0.1, 0.0}, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
  try {
    mobius_add({0.1, 0.1}, {0.1}, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Dimension);
  }
}

TEST(Distance, ClosedValues) {
  EXPECT_NEAR(poincare_distance({0.0, 0.0}, {0.5, 0.0}, ball(1.0)), 2.0 * std::atanh(0.5), 1e-15);
  EXPECT_NEAR(poincare_distance({0.0, 0.0}, {0.5, 0.0}, ball(1.0)), 1.098612, 1e-6);
  const double expected = 2.0 / std::sqrt(0.5) * std::atanh(std::sqrt(0.5) * 0.5);
  EXPECT_NEAR(poincare_distance({0.0, 0.0}, {0.5, 0.0}, ball(0.5)), expected, 1e-15);
  EXPECT_NEAR(expected, 1.045101, 1e-6);
  EXPECT_EQ(poincare_distance({0.3, -0.2}, {0.3, -0.2}, ball(1.0)), 0.0);
}

TEST(Distance, OneDimensionalOracle) {
  // On a line through the origin D(u, v) = (2/sqrt c) |artanh(sqrt c v) - artanh(sqrt c u)|.
  Gen g(2);
  for (double c : {0.5, 1.0}) {
    const double sc = std::sqrt(c);
    for (int i = 0; i < 1000; ++i) {
      const double u = g.uniform(-0.95, 0.95) / sc;
      const double v = g.uniform(-0.95, 0.95) / sc;
      const double expected = 2.0 / sc * std::abs(std::atanh(sc * v) - std::atanh(sc * u));
      EXPECT_NEAR(poincare_distance({u, 0.0}, {v, 0.0}, ball(c)), expected, 1e-11 * (1 + expected));
    }
  }
}

TEST(Distance, PropertiesOnRandomTriples) {
  Gen g(3);
  for (double c : {0.5, 1.0}) {
    const BallConfig b = ball(c);
    for (int i = 0; i < 2000; ++i) {
      const PoincarePoint u(g.in_ball(6, 0.9 / std::sqrt(c)));
      const PoincarePoint v(g.in_ball(6, 0.9 / std::sqrt(c)));
      const PoincarePoint w(g.in_ball(6, 0.9 / std::sqrt(c)));
      const double duv = poincare_distance(u, v, b);
      EXPECT_GE(duv, 0.0);
      EXPECT_NEAR(duv, poincare_distance(v, u, b), 1e-10);
      EXPECT_LE(poincare_distance(u, w, b), duv + poincare_distance(v, w, b) + 1e-9);
    }
  }
}

TEST(Distance, SmallCurvatureLimit) {
  Gen g(4);
  const BallConfig b = ball(1e-6);
  for (int i = 0; i < 1000; ++i) {
    const auto u = g.in_ball(4, 0.5);
    const auto v = g.in_ball(4, 0.5);
    std::vector<double> d(4);
    for (int k = 0; k < 4; ++k) d[k] = u[k] - v[k];
    const double e = 2.0 * testing::norm(d);
    EXPECT_LE(std::abs(poincare_distance(PoincarePoint(u), PoincarePoint(v), b) - e) / e, 1e-4);
  }
}

TEST(Distance, FiniteNearBoundary) {
  const double c = 0.5;
  const double r = (1.0 - 1e-6) / std::sqrt(c);
  const double d = poincare_distance({r, 0.0}, {-r, 0.0}, ball(c));
  EXPECT_TRUE(std::isfinite(d));
  EXPECT_GT(d, 0.0);
}

TEST(ConformalFactor, Examples) {
  EXPECT_DOUBLE_EQ(conformal_factor({0.0, 0.0}, ball(0.7)), 2.0);
  EXPECT_NEAR(conformal_factor({std::sqrt(0.5), 0.0}, ball(1.0)), 4.0, 1e-12);
  EXPECT_NEAR(conformal_factor({1.0, 0.0}, ball(0.5)), 4.0, 1e-12);
  try {
    conformal_factor({1.0, 0.0}, ball(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Boundary);
  }
}

TEST(ExpMapZero, Examples) {
  const auto z = exp_map_zero({0.0, 0.0, 0.0}, ball(1.0));
  for (double x : z.coords) EXPECT_EQ(x, 0.0);
  const auto y = exp_map_zero({0.6, 0.0}, ball(1.0));
  EXPECT_NEAR(y.coords[0], std::tanh(0.6), 1e-15);
  EXPECT_NEAR(y.coords[0], 0.537050, 1e-6);
}

TEST(ExpMapZero, AlwaysStrictlyInside) {
  Gen g(5);
  for (double c : {0.5, 1.0}) {
    for (int i = 0; i < 2000; ++i) {
      const auto y = exp_map_zero(EuclideanVector(g.in_ball(8, 200.0)), ball(c));
      const double n = testing::norm(y.coords);
      EXPECT_LT(c * n * n, 1.0);
      EXPECT_LT(n, 1.0 / std::sqrt(c));
    }
  }
}

TEST(ExpMapAnchor, Examples) {
  const BallConfig b = ball(1.0);
  const auto y = exp_map_anchor({0.0, 0.0}, {0.6, 0.0}, b);
  EXPECT_NEAR(y.coords[0], 0.537050, 1e-6);
  const auto z = exp_map_anchor({0.2, -0.1}, {0.0, 0.0}, b);
  EXPECT_NEAR(z.coords[0], 0.2, 1e-15);
  EXPECT_NEAR(z.coords[1], -0.1, 1e-15);
  // Composition of the audited primitives: z ⊕ tanh(sqrt c λ_z |x| / 2) x / (sqrt c |x|).
  const double lambda = 2.0 / (1.0 - 0.04);
  const double step = std::tanh(lambda * 0.5 / 2.0);
  const auto expected = mobius_add({0.2, 0.0}, {step, 0.0}, b);
  const auto got = exp_map_anchor({0.2, 0.0}, {0.5, 0.0}, b);
  EXPECT_NEAR(got.coords[0], expected.coords[0], 1e-14);
}

TEST(ExpMapAnchor, OriginMatchesExpMapZero) {
  Gen g(6);
  const BallConfig b = ball(0.5);
  for (int i = 0; i < 1000; ++i) {
    const EuclideanVector x(g.vec(5));
    const auto a = exp_map_anchor(PoincarePoint(std::vector<double>(5, 0.0)), x, b);
    const auto z = exp_map_zero(x, b);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(a.coords[k], z.coords[k], 1e-12);
  }
}

TEST(Clip, Examples) {
  const BallConfig b = ball(0.5);
  const auto same = clip_features({0.6, 0.8}, b);
  EXPECT_EQ(same.coords, (std::vector<double>{0.6, 0.8}));
  const auto half = clip_features({4.6 * 0.6, 4.6 * 0.8}, b);
  EXPECT_NEAR(half.coords[0], 2.3 * 0.6, 1e-15);
  EXPECT_NEAR(half.coords[1], 2.3 * 0.8, 1e-15);
  EXPECT_EQ(b.clip_radius, 2.3);
}

TEST(Project, Examples) {
  BallConfig b = ball(1.0);
  EXPECT_EQ(project_to_ball(std::vector<double>{0.5, 0.0}, b).coords, (std::vector<double>{0.5, 0.0}));
  EXPECT_NEAR(project_to_ball(std::vector<double>{2.0, 0.0}, b).coords[0], 0.99999, 1e-15);
  EXPECT_NEAR(project_to_ball(std::vector<double>{1.0, 0.0}, b).coords[0], 0.99999, 1e-15);
  b = ball(0.5);
  const auto p = project_to_ball(std::vector<double>{2.0, 1.0}, b);
  EXPECT_NEAR(testing::norm(p.coords), (1.0 - 1e-5) / std::sqrt(0.5), 1e-15);
}

TEST(BallConfigValidation, RejectsBadFields) {
  BallConfig b;
  EXPECT_NO_THROW(b.validate());
  b.curvature = 0.0;
  EXPECT_THROW(b.validate(), Error);
  b = BallConfig{};
  b.arctanh_eps = 1e-3;
  EXPECT_THROW(b.validate(), Error);
  b = BallConfig{};
  b.boundary_eps = 1.0;
  EXPECT_THROW(b.validate(), Error);
}

}  // namespace
}  // namespace chest
