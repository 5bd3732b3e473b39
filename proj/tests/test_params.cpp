#include <cmath>

#include <gtest/gtest.h>

#include "eqprox/bench.hpp"
#include "eqprox/params.hpp"

using namespace eqprox;

namespace {

SolverConfig experiment_config() {
  SolverConfig c;
  c.theta = 0.25;
  c.beta = -0.0001;
  c.rho = 0.4;
  c.rho_k = Schedule::constant(1.4);
  c.lambda_k = Schedule::constant(0.2);
  c.epsilon_step = 0.25;
  c.epsilon_stop = 1e-13;
  return c;
}

SolverConfig convex_config() {
  SolverConfig c;
  c.theta = 0.0;
  c.beta = 0.0;
  c.rho = 0.0;
  c.rho_k = Schedule::constant(1.0);
  c.lambda_k = Schedule::constant(0.2);
  c.epsilon_step = 0.25;
  return c;
}

const Check& check_named(const ReportEntry& e, const std::string& name) {
  for (const auto& c : e.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(AlphaBounds, NoRelaxationSmallStep) {
  const auto b = alpha_bounds(1.0, 1e-12, 0.5);
  EXPECT_DOUBLE_EQ(b.alpha_max, 1.0);
  EXPECT_NEAR(b.alpha_min, 1.0, 1e-11);
}

TEST(AlphaBounds, ExperimentValues) {
  const auto b = alpha_bounds(1.4, 0.2, 0.5);
  EXPECT_NEAR(b.alpha_max, 3.0 / 7.0, 1e-12);
  EXPECT_NEAR(b.alpha_min, 1.0 / 7.0, 1e-12);
}

TEST(AlphaBounds, RhoTwoGivesZero) { EXPECT_EQ(alpha_bounds(2.0, 0.1, 0.5).alpha_max, 0.0); }

TEST(AlphaBounds, RejectsNonPositiveInputs) {
  EXPECT_THROW(alpha_bounds(0.0, 0.2, 0.5), ArgumentError);
  EXPECT_THROW(alpha_bounds(1.0, 0.0, 0.5), ArgumentError);
  EXPECT_THROW(alpha_bounds(1.0, 0.2, -0.5), ArgumentError);
}

TEST(AlphaBounds, MonotoneInLambda) {
  double prev_min = alpha_bounds(1.2, 0.01, 0.5).alpha_min;
  for (double l = 0.02; l < 1.0; l += 0.01) {
    const auto b = alpha_bounds(1.2, l, 0.5);
    EXPECT_LT(b.alpha_min, prev_min);
    EXPECT_EQ(b.alpha_max, alpha_bounds(1.2, 0.01, 0.5).alpha_max);
    EXPECT_GE(b.alpha_max, b.alpha_min);
    prev_min = b.alpha_min;
  }
}

TEST(ValidateC1, LowerBoundVacuousWhenGammaSmall) {
  const auto entries = validate_c1(experiment_config(), 0.1, 0.5, 1);
  ASSERT_EQ(entries.size(), 1u);
  const auto& e = entries[0];
  EXPECT_EQ(e.status, Status::Pass);
  EXPECT_EQ(e.checks[0].status, Status::Vacuous);
  EXPECT_EQ(check_named(e, "lambda_k < epsilon_step").status, Status::Pass);
  EXPECT_EQ(check_named(e, "epsilon_step <= 1/(4eta)").status, Status::Pass);
  EXPECT_FALSE(e.message.empty());
}

TEST(ValidateC1, ExperimentGammaAlsoVacuous) {
  const auto m = describe_max_type(2, 99);
  const auto entries = validate_c1(experiment_config(), m.gamma, m.eta, 1);
  EXPECT_EQ(entries[0].checks[0].status, Status::Vacuous);
}

TEST(ValidateC1, StepAboveEpsilonFails) {
  SolverConfig c = convex_config();
  c.lambda_k = Schedule::constant(2.0);
  const auto e = validate_c1(c, 9.0, 1.0, 1)[0];
  EXPECT_EQ(e.status, Status::Fail);
  EXPECT_EQ(check_named(e, "lambda_k < epsilon_step").status, Status::Fail);
  EXPECT_EQ(check_named(e, "epsilon_step <= 1/(4eta)").status, Status::Pass);
}

TEST(ValidateC1, StrictUpperBound) {
  SolverConfig c = convex_config();
  c.lambda_k = Schedule::constant(0.25);
  EXPECT_EQ(validate_c1(c, 0.1, 0.5, 1)[0].status, Status::Fail);
}

TEST(ValidateC1, LowerBoundActiveWhenGammaLarge) {
  SolverConfig c = convex_config();
  c.lambda_k = Schedule::constant(0.1);
  c.epsilon_step = 0.2;
  // 1/(gamma - 8 eta) = 1/(20 - 4) = 0.0625 < 0.1
  const auto e = validate_c1(c, 20.0, 0.5, 1)[0];
  EXPECT_EQ(e.checks[0].status, Status::Pass);
  EXPECT_EQ(e.status, Status::Pass);
  c.lambda_k = Schedule::constant(0.05);
  EXPECT_EQ(validate_c1(c, 20.0, 0.5, 1)[0].status, Status::Fail);
}

TEST(ValidateC2, ExperimentPasses) {
  const auto e = validate_c2(experiment_config(), 0.5, 1)[0];
  EXPECT_EQ(e.status, Status::Pass);
}

TEST(ValidateC2, UnrelaxedPasses) { EXPECT_EQ(validate_c2(convex_config(), 0.5, 1)[0].status, Status::Pass); }

TEST(ValidateC2, RhoTooLargeFails) {
  SolverConfig c = experiment_config();
  c.rho = 0.6;
  c.rho_k = Schedule::constant(1.0);
  const auto e = validate_c2(c, 0.5, 1)[0];
  EXPECT_EQ(e.status, Status::Fail);
  EXPECT_EQ(check_named(e, "rho <= 1-4eta*epsilon_step").status, Status::Fail);
}

TEST(ValidateC3, ThetaZeroPasses) {
  const auto e = validate_c3(0.0, 0.0, alpha_bounds(1.0, 0.2, 0.5));
  EXPECT_EQ(e.status, Status::Pass);
  EXPECT_DOUBLE_EQ(check_named(e, "m1").lhs, -1.0);
  EXPECT_LT(check_named(e, "m2").lhs, 0.0);
}

TEST(ValidateC3, ExperimentFails) {
  const auto e = validate_c3(0.25, -0.0001, alpha_bounds(1.4, 0.2, 0.5));
  EXPECT_EQ(e.status, Status::Fail);
  EXPECT_NEAR(check_named(e, "m1").lhs, 2.75, 1e-10);
  EXPECT_NEAR(check_named(e, "m2").lhs, 0.13, 1e-10);
}

TEST(ValidateC3, ZeroAlphaMinIsDegenerate) {
  const auto e = validate_c3(0.25, -0.1, AlphaBounds{0.5, 0.0});
  EXPECT_EQ(e.status, Status::Degenerate);
}

TEST(ValidateC4, ThetaBetaZeroIsMinusAlphaMin) {
  const AlphaBounds b{0.8, 0.3};
  EXPECT_DOUBLE_EQ(c4_value(0.0, 0.0, b), -0.3);
  EXPECT_EQ(validate_c4(0.0, 0.0, b).status, Status::Pass);
  EXPECT_EQ(validate_c4(0.0, 0.0, AlphaBounds{0.8, 0.0}).status, Status::Fail);
}

TEST(ValidateC4, ExperimentFails) {
  const auto b = alpha_bounds(1.4, 0.2, 0.5);
  EXPECT_NEAR(c4_value(0.25, -0.0001, b), 0.30369286571428571, 1e-12);
  EXPECT_EQ(validate_c4(0.25, -0.0001, b).status, Status::Fail);
}

TEST(ValidateC4, SmallThetaPasses) {
  // 0.0001*0.5 + 0.01*(1 + 2 - 1) - 0.5
  EXPECT_NEAR(c4_value(0.01, 0.0, AlphaBounds{1.0, 0.5}), -0.47995, 1e-12);
  EXPECT_EQ(validate_c4(0.01, 0.0, AlphaBounds{1.0, 0.5}).status, Status::Pass);
}

TEST(ValidateAll, ExperimentReport) {
  const auto problem = build_max_type(2, 99);
  const auto r = validate_all(problem, experiment_config(), 1);
  EXPECT_EQ(r.status_of("structure"), Status::Pass);
  EXPECT_EQ(r.status_of("C1"), Status::Pass);
  EXPECT_EQ(r.find("C1")[0]->checks[0].status, Status::Vacuous);
  EXPECT_EQ(r.status_of("C2"), Status::Pass);
  EXPECT_EQ(r.status_of("C3"), Status::Fail);
  EXPECT_EQ(r.status_of("C4"), Status::Fail);
  EXPECT_FALSE(r.all_ok());
}

TEST(ValidateAll, ConvexConfigPasses) {
  const auto problem = build_quadratic();
  const auto r = validate_all(problem, convex_config(), 1);
  EXPECT_TRUE(r.all_ok());
  for (const char* c : {"C1", "C2", "C3", "C4"}) EXPECT_EQ(r.status_of(c), Status::Pass) << c;
}

TEST(ValidateAll, ZeroHorizonOnlyStructure) {
  const auto r = validate_all(build_quadratic(), experiment_config(), 0);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].condition, "structure");
}

TEST(ValidateAll, StructureCatchesRanges) {
  SolverConfig c = convex_config();
  c.theta = 0.5;
  EXPECT_EQ(validate_all(build_quadratic(), c, 1).status_of("structure"), Status::Fail);
  c.theta = 0.1;
  c.beta = 0.1;
  EXPECT_EQ(validate_all(build_quadratic(), c, 1).status_of("structure"), Status::Fail);
}

TEST(ValidateAll, ConstantSchedulesIndependentOfHorizon) {
  const auto problem = build_max_type(2, 99);
  const auto a = validate_all(problem, experiment_config(), 1);
  const auto b = validate_all(problem, experiment_config(), 50);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].condition, b.entries[i].condition);
    EXPECT_EQ(a.entries[i].status, b.entries[i].status);
    EXPECT_FALSE(a.entries[i].k_last.has_value());
  }
}

TEST(ValidateAll, VaryingScheduleCheckedPerK) {
  SolverConfig c = convex_config();
  c.lambda_k = Schedule([](int k) { return k < 3 ? 0.2 : 0.3; });
  const auto r = validate_all(build_quadratic(), c, 4);
  const auto c1 = r.find("C1");
  ASSERT_EQ(c1.size(), 4u);
  EXPECT_EQ(c1[0]->status, Status::Pass);
  EXPECT_EQ(c1[2]->status, Status::Fail);
  EXPECT_EQ(c1[2]->k_first, 3);
}

TEST(ValidateAll, Pure) {
  const auto problem = build_max_type(2, 99);
  const auto a = validate_all(problem, experiment_config(), 3);
  const auto b = validate_all(problem, experiment_config(), 3);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    ASSERT_EQ(a.entries[i].checks.size(), b.entries[i].checks.size());
    for (std::size_t j = 0; j < a.entries[i].checks.size(); ++j) {
      EXPECT_EQ(a.entries[i].checks[j].lhs, b.entries[i].checks[j].lhs);
      EXPECT_EQ(a.entries[i].checks[j].rhs, b.entries[i].checks[j].rhs);
    }
  }
}

TEST(ValidateC3C4, ThetaBetaZeroForcedPass) {
  for (double rk : {0.5, 1.0, 1.3}) {
    for (double lk : {0.05, 0.1, 0.2}) {
      const auto b = alpha_bounds(rk, lk, 0.5);
      if (b.alpha_min <= 0.0) continue;
      EXPECT_EQ(validate_c3(0.0, 0.0, b).status, Status::Pass);
      EXPECT_EQ(validate_c4(0.0, 0.0, b).status, Status::Pass);
    }
  }
}

TEST(SolverConfig, VariantForcesWeights) {
  SolverConfig c = experiment_config();
  c.variant = Variant::OneStepInertial;
  EXPECT_EQ(c.effective_beta(), 0.0);
  EXPECT_EQ(c.effective_theta(), 0.25);
  c.variant = Variant::PlainRelaxedPPA;
  EXPECT_EQ(c.effective_theta(), 0.0);
  EXPECT_EQ(c.effective_beta(), 0.0);
}
