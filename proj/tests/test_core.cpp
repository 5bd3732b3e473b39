#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "eqprox/bench.hpp"
#include "eqprox/core.hpp"

using namespace eqprox;

namespace {

Point random_point(std::mt19937_64& rng, std::size_t n, double scale = 10.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> c(n);
  for (double& v : c) v = u(rng);
  return Point(std::move(c));
}

}  // namespace

TEST(Point, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Point(std::vector<double>{}), ArgumentError);
  EXPECT_THROW(Point({1.0, std::numeric_limits<double>::quiet_NaN()}), NumericalError);
  EXPECT_THROW(Point::scalar(std::numeric_limits<double>::infinity()), NumericalError);
}

TEST(Point, ArithmeticAndNorms) {
  const Point a{1.0, 2.0};
  const Point b{4.0, 6.0};
  EXPECT_EQ(a + b, (Point{5.0, 8.0}));
  EXPECT_EQ(b - a, (Point{3.0, 4.0}));
  EXPECT_EQ(2.0 * a, (Point{2.0, 4.0}));
  EXPECT_DOUBLE_EQ(dot(a, b), 16.0);
  EXPECT_DOUBLE_EQ(distance(a, b), 5.0);
  EXPECT_DOUBLE_EQ(max_abs_difference(a, b), 4.0);
  EXPECT_THROW(a + Point::scalar(1.0), ArgumentError);
  EXPECT_THROW((Point{1.0, 2.0}).value(), ArgumentError);
}

TEST(EvalBifunction, LinearMonotoneHandValue) {
  const auto p = build_linear_monotone();
  EXPECT_DOUBLE_EQ(eval_bifunction(p, Point::scalar(2.0), Point::scalar(5.0)), 6.0);
}

TEST(EvalBifunction, MaxTypeVanishesOnDiagonal) {
  const auto p = build_max_type(2, 99);
  for (double x : {0.0, 1.0, 79.2, 88.5, 99.0, 4000.0, 10000.0}) {
    EXPECT_EQ(eval_bifunction(p, Point::scalar(x), Point::scalar(x)), 0.0) << x;
  }
}

TEST(EvalBifunction, MaxTypeAtZeroAndQ) {
  const auto p = build_max_type(2, 99);
  // 2 sqrt(99) - 2 * 9702
  EXPECT_NEAR(eval_bifunction(p, Point::scalar(0.0), Point::scalar(99.0)), -19384.10025125786760, 1e-9);
}

TEST(EvalBifunction, DimensionMismatchThrows) {
  const auto p = build_linear_monotone(2);
  EXPECT_THROW(eval_bifunction(p, Point::scalar(1.0), Point{1.0, 2.0}), ArgumentError);
}

TEST(EquilibriumProblem, RejectsBadConstants) {
  ProblemSpec s;
  s.f = [](const Point&, const Point&) { return 0.0; };
  s.eta = 0.0;
  EXPECT_THROW(EquilibriumProblem{s}, ArgumentError);
  s.eta = 0.5;
  s.gamma = -1.0;
  EXPECT_THROW(EquilibriumProblem{s}, ArgumentError);
}

TEST(EquilibriumProblem, RejectsNonVanishingDiagonal) {
  ProblemSpec s;
  s.f = [](const Point& x, const Point& y) { return 1e-6 + dot(x, y - x); };
  EXPECT_THROW(EquilibriumProblem{s}, ArgumentError);
}

TEST(MembershipResidual, Examples) {
  EXPECT_EQ(membership_residual(WholeSpace{}, Point{3.0, -4.0}), 0.0);
  EXPECT_EQ(membership_residual(Interval(0, 100), Point::scalar(79.2)), 0.0);
  EXPECT_DOUBLE_EQ(membership_residual(Interval(0, 100), Point::scalar(105.0)), 5.0);
  EXPECT_DOUBLE_EQ(membership_residual(Interval(0, 100), Point::scalar(-2.5)), 2.5);
}

TEST(MembershipResidual, AffineSubspace) {
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 1.0;
  Eigen::VectorXd b(1);
  b << 2.0;
  const AffineSubspace line(a, b);
  EXPECT_NEAR(membership_residual(line, Point{1.0, 1.0}), 0.0, 1e-12);
  EXPECT_NEAR(membership_residual(line, Point{2.0, 2.0}), 2.0, 1e-12);
  const Point p = project(line, Point{2.0, 2.0});
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  EXPECT_NEAR(p[1], 1.0, 1e-12);
  EXPECT_THROW(membership_residual(line, Point::scalar(1.0)), ArgumentError);
}

TEST(MembershipResidual, NonnegativeAndZeroOnSet) {
  std::mt19937_64 rng(11);
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(2, 4);
  Eigen::VectorXd b = Eigen::VectorXd::Random(2);
  const FeasibleSet sets[] = {WholeSpace{}, AffineSubspace(a, b)};
  for (const auto& set : sets) {
    for (int i = 0; i < 50; ++i) {
      const Point x = random_point(rng, 4);
      EXPECT_GE(membership_residual(set, x), 0.0);
      EXPECT_LE(membership_residual(set, project(set, x)), 1e-12);
    }
  }
}

TEST(AffineSubspace, InconsistentSystemThrows) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  Eigen::VectorXd b(2);
  b << 0.0, 1.0;
  EXPECT_THROW(AffineSubspace(a, b), ArgumentError);
}

TEST(Interval, RequiresOrderedBounds) {
  EXPECT_THROW(Interval(1.0, 1.0), ArgumentError);
  EXPECT_THROW(Interval(2.0, 1.0), ArgumentError);
}

TEST(IdentityA, CoincidentPoints) {
  const Point x{1.5, -2.0, 0.25};
  const auto s = identity_a(x, x, x, 0.7, -1.3);
  EXPECT_NEAR(s.lhs, squared_norm(x), 1e-12);
  EXPECT_NEAR(s.rhs, squared_norm(x), 1e-12);
}

TEST(IdentityA, HandExample) {
  const auto s = identity_a(Point{1.0, 0.0}, Point{0.0, 1.0}, Point{0.0, 0.0}, 1.0, -1.0);
  EXPECT_DOUBLE_EQ(s.lhs, 8.0);
  EXPECT_DOUBLE_EQ(s.rhs, 8.0);
}

TEST(IdentityB, Examples) {
  const Point x{0.3, -1.0};
  const auto same = identity_b(x, x, Point{4.0, 2.0});
  EXPECT_EQ(same.lhs, 0.0);
  EXPECT_NEAR(same.rhs, 0.0, 1e-12);

  const auto s = identity_b(Point::scalar(0.0), Point::scalar(2.0), Point::scalar(1.0));
  EXPECT_DOUBLE_EQ(s.lhs, -2.0);
  EXPECT_DOUBLE_EQ(s.rhs, -2.0);
}

TEST(IdentityC, Examples) {
  const Point x{2.0, -1.0};
  const Point y{0.5, 3.0};
  const auto b0 = identity_c(x, y, 0.0);
  EXPECT_DOUBLE_EQ(b0.lhs, squared_norm(y));
  EXPECT_DOUBLE_EQ(b0.rhs, squared_norm(y));
  const auto b1 = identity_c(x, y, 1.0);
  EXPECT_DOUBLE_EQ(b1.lhs, squared_norm(x));
  EXPECT_DOUBLE_EQ(b1.rhs, squared_norm(x));
  const auto h = identity_c(Point::scalar(3.0), Point::scalar(-1.0), 0.5);
  EXPECT_DOUBLE_EQ(h.lhs, 1.0);
  EXPECT_DOUBLE_EQ(h.rhs, 1.0);
}

TEST(Identities, RandomTriplesDimensionTen) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Point x = random_point(rng, 10);
    const Point y = random_point(rng, 10);
    const Point z = random_point(rng, 10);
    const auto a = identity_a(x, y, z, coef(rng), coef(rng));
    EXPECT_LE(std::abs(a.lhs - a.rhs), 1e-9 * (1.0 + std::abs(a.lhs)));
    const auto b = identity_b(x, y, z);
    EXPECT_LE(std::abs(b.lhs - b.rhs), 1e-9 * (1.0 + std::abs(b.lhs)));
    EXPECT_TRUE(identity_holds(identity_c(x, y, coef(rng))));
  }
}

TEST(Identities, DimensionMismatchThrows) {
  EXPECT_THROW(identity_b(Point::scalar(1.0), Point{1.0, 2.0}, Point::scalar(0.0)), ArgumentError);
  EXPECT_THROW(identity_c(Point::scalar(1.0), Point{1.0, 2.0}, 0.5), ArgumentError);
}
