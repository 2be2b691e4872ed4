#include <cmath>

#include <gtest/gtest.h>

#include "isac/beamform_opt.hpp"
#include "isac/fim_crb.hpp"
#include "oracles.hpp"

using namespace isac;

namespace {

Scenario constrained(Rng& rng, int m_tx, double fraction) {
  Scenario sc = oracle::random_scenario(m_tx, 4, rng);
  sc.gamma0 = fraction * max_sinr(sc);
  return sc;
}

double linearized_value(const Scenario& sc, const HermitianCov& r_k, const CovPair& x) {
  const double kappa = std::norm(sc.alpha) * sc.ula.m_rx() / sc.sigma_s2;
  const double g = 1.0 + kappa * target_quad(sc, r_k);
  return (1.0 - 1.0 / (g * g)) * target_quad(sc, x.r_c) + target_quad(sc, x.r_s);
}

}  // namespace

TEST(Mrt, SpendsFullPowerOnTarget) {
  Rng rng(1);
  const Scenario sc = oracle::random_scenario(6, 4, rng);
  const HermitianCov r = mrt_cov(sc.p_max, sc.a());
  EXPECT_NEAR(r.trace(), sc.p_max, 1e-13);
  EXPECT_NEAR(target_quad(sc, r), sc.p_max * 6, 1e-12);
}

TEST(Mrt, BeatsRandomCovariances) {
  Rng rng(2);
  const Scenario sc = oracle::random_scenario(4, 4, rng);
  const double best = crb_gaussian(sc, mrt_cov(sc.p_max, sc.a()));
  for (int k = 0; k < 10000; ++k) {
    const ComplexMat r = oracle::random_psd(4, 1 + k % 4, sc.p_max, rng);
    EXPECT_GE(crb_gaussian(sc, HermitianCov::from_matrix(r)), best * (1.0 - 1e-12));
  }
}

TEST(GaussianDesign, ZeroThresholdGivesMrt) {
  Rng rng(3);
  Scenario sc = oracle::random_scenario(6, 4, rng);
  sc.gamma0 = 0.0;
  EXPECT_LT((solve_p2(sc).matrix() - mrt_cov(sc.p_max, sc.a()).matrix()).norm(), 1e-12);
}

TEST(GaussianDesign, ConstrainedBranchIsTight) {
  Rng rng(4);
  int constrained_hits = 0;
  for (int k = 0; k < 50; ++k) {
    const Scenario sc = constrained(rng, 6, 0.3 + 0.7 * (k / 50.0));
    const HermitianCov r = solve_p2(sc);
    EXPECT_TRUE(is_hermitian_psd(r.matrix()));
    EXPECT_NEAR(r.trace() / sc.p_max, 1.0, 1e-10);
    const double sinr = r.quad_form(sc.h) / sc.sigma_c2;
    const double mrt_sinr = mrt_cov(sc.p_max, sc.a()).quad_form(sc.h) / sc.sigma_c2;
    if (mrt_sinr < sc.gamma0) {
      ++constrained_hits;
      EXPECT_NEAR(sinr / sc.gamma0, 1.0, 1e-10);
    } else {
      EXPECT_GE(sinr, sc.gamma0 * (1.0 - 1e-12));
    }
  }
  EXPECT_GT(constrained_hits, 10);
}

TEST(GaussianDesign, MatchesProjectedGradientOracle) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const Scenario sc = constrained(rng, 4, u(rng));
    const oracle::LinearSdpValue ref = oracle::p2_reference(sc);
    EXPECT_LT((ref.dual - ref.primal) / ref.primal, 1e-9);
    EXPECT_NEAR(target_quad(sc, solve_p2(sc)) / ref.primal, 1.0, 1e-6) << "instance " << k;
  }
}

TEST(GaussianDesign, RejectsInfeasibleThreshold) {
  Rng rng(6);
  Scenario sc = oracle::random_scenario(4, 4, rng);
  sc.gamma0 = 1.01 * max_sinr(sc);
  EXPECT_THROW(solve_p2(sc), InfeasibleError);
  EXPECT_THROW(solve_p4(sc), InfeasibleError);
}

TEST(SensingOnlyDesign, DeterministicOnlyOptimum) {
  Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Scenario sc = oracle::random_scenario(8, 6, rng);
  const CovPair opt = solve_p3(sc);
  EXPECT_NEAR(opt.total_trace() / sc.p_max, 1.0, 1e-12);
  EXPECT_NEAR(crb_super(sc, opt.r_c, opt.r_s) / crb_min_closed_forms(sc).super, 1.0, 1e-10);
  const double f_opt = super_objective(sc, opt.r_c, opt.r_s);
  const HermitianCov mrt = mrt_cov(sc.p_max, sc.a());
  for (int i = 1; i <= 9; ++i) {
    const double c = i / 10.0;
    EXPECT_GT(f_opt, super_objective(sc, mrt.scaled(c), mrt.scaled(1.0 - c)));
  }
}

TEST(SuperposedSubproblem, SensingOnlyStartGoesDeterministic) {
  Rng rng(8);
  Scenario sc = oracle::random_scenario(6, 4, rng);
  sc.gamma0 = 0.0;
  const CovPair x = inner_solve_p4k(sc, HermitianCov(6));
  EXPECT_LT(x.r_c.trace(), 1e-7 * sc.p_max);
  EXPECT_LT((x.r_s.matrix() - mrt_cov(sc.p_max, sc.a()).matrix()).norm(), 1e-6 * sc.p_max);
}

TEST(SuperposedSubproblem, MatchesFullDimensionOracle) {
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const Scenario sc = constrained(rng, 4, u(rng));
    const HermitianCov r_k =
        HermitianCov::from_matrix(oracle::random_psd(4, 1 + k % 3, sc.p_max * u(rng), rng));
    const oracle::LinearSdpValue ref = oracle::p4k_reference(sc, r_k);
    const CovPair x = inner_solve_p4k(sc, r_k);
    EXPECT_NEAR(linearized_value(sc, r_k, x) / ref.dual, 1.0, 1e-6) << "instance " << k;
    EXPECT_LE(x.total_trace(), sc.p_max * (1.0 + 1e-9));
    EXPECT_GE(cu_sinr(sc, x), sc.gamma0 * (1.0 - 1e-7));
  }
}

TEST(SuperposedSubproblem, SinrConstraintActiveWhenViolatedOtherwise) {
  Rng rng(10);
  for (int k = 0; k < 20; ++k) {
    const Scenario sc = constrained(rng, 6, 0.5);
    Scenario free = sc;
    free.gamma0 = 0.0;
    const HermitianCov r_k = mrt_cov(0.5 * sc.p_max, sc.a());
    if (cu_sinr(sc, inner_solve_p4k(free, r_k)) >= sc.gamma0) continue;
    EXPECT_NEAR(cu_sinr(sc, inner_solve_p4k(sc, r_k)) / sc.gamma0, 1.0, 1e-6);
  }
}

TEST(Sca, ObjectiveNeverDecreases) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Scenario sc = constrained(rng, 2 + 2 * (k % 4), u(rng));
    const P4Solution sol = solve_p4(sc);
    const auto& f = sol.trace.objectives;
    ASSERT_GE(f.size(), 2u);
    for (std::size_t i = 1; i < f.size(); ++i) EXPECT_GE(f[i], f[i - 1] * (1.0 - 1e-9));
    EXPECT_TRUE(sol.trace.converged);
    EXPECT_LE(sol.trace.iterations, 100);
    EXPECT_LE(crb_super(sc, sol.cov.r_c, sol.cov.r_s), crb_gaussian(sc, solve_p2(sc)) * (1 + 1e-9));
  }
}

TEST(Sca, SensingOnlyConvergesToDeterministicOptimum) {
  Rng rng(12);
  for (int k = 0; k < 10; ++k) {
    Scenario sc = oracle::random_scenario(6, 4, rng);
    sc.gamma0 = 0.0;
    const P4Solution sol = solve_p4(sc);
    EXPECT_LE(sol.cov.r_c.trace(), 1e-6 * sc.p_max);
    const double target = sc.p_max * sc.ula.m_tx() * sc.b_dot().squaredNorm();
    EXPECT_NEAR(super_objective(sc, sol.cov.r_c, sol.cov.r_s) / target, 1.0, 1e-6);
  }
}

TEST(Sca, NearMaximumThresholdServesOnlyTheUser) {
  Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    const Scenario sc = constrained(rng, 4, 0.999);
    const P4Solution sol = solve_p4(sc);
    EXPECT_LE(sol.cov.r_s.trace(), 1e-3 * sc.p_max * (1.0 + 1e-6));
    EXPECT_GE(cu_sinr(sc, sol.cov) / sc.gamma0, 1.0 - 1e-7);
    const oracle::LinearSdpValue ref = oracle::p4k_reference(sc, sol.cov.r_c);
    const CovPair again = inner_solve_p4k(sc, sol.cov.r_c);
    EXPECT_NEAR(linearized_value(sc, sol.cov.r_c, again) / ref.dual, 1.0, 1e-6);
  }
}

TEST(PowerSplitting, MeetsThresholdWithFullBudget) {
  Rng rng(14);
  for (int k = 0; k < 20; ++k) {
    const Scenario sc = constrained(rng, 8, 0.05 + 0.9 * k / 20.0);
    const CovPair x = power_splitting(sc);
    EXPECT_NEAR(x.total_trace() / sc.p_max, 1.0, 1e-12);
    EXPECT_NEAR(cu_sinr(sc, x) / sc.gamma0, 1.0, 1e-9);
  }
}
