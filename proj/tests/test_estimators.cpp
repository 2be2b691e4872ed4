#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "isac/beamform_opt.hpp"
#include "isac/estimators.hpp"
#include "isac/fim_crb.hpp"
#include "isac/harness.hpp"
#include "oracles.hpp"

using namespace isac;
using std::numbers::pi;

namespace {

Scenario desk_scenario(double theta, double snr_db) {
  Scenario sc;
  sc.ula = UlaConfig::half_wavelength(8, 8);
  sc.theta = Radians(theta);
  sc.phi = Radians(-0.2);
  sc.alpha = std::polar(0.8, 1.1);
  sc.h = ComplexVec::Ones(8);
  sc.p_max = 1.0;
  sc.t_symbols = 64;
  sc.sigma_s2 = std::norm(sc.alpha) * sc.p_max * 8 * 8 / db_to_linear(snr_db);
  return sc;
}

// Angle that lies exactly on the default coarse grid.
constexpr double kOnGrid = -pi / 2 + 380 * 0.005;

}  // namespace

TEST(SynthGaussian, ZeroCovarianceGivesZeroSamples) {
  const Scenario sc = desk_scenario(0.0, 10.0);
  const TxRealization tx = synth_gaussian(sc, HermitianCov(8), 1);
  EXPECT_EQ(tx.gaussian.norm(), 0.0);
  EXPECT_EQ(tx.gaussian.cols(), 64);
}

TEST(SynthGaussian, RankOneColumnsAlignWithSteering) {
  const Scenario sc = desk_scenario(0.0, 10.0);
  const ComplexVec u = sc.a().conjugate().normalized();
  const TxRealization tx = synth_gaussian(sc, mrt_cov(1.0, sc.a()), 2);
  for (Eigen::Index t = 0; t < tx.gaussian.cols(); ++t) {
    const ComplexVec col = tx.gaussian.col(t);
    EXPECT_LT((col - u * u.dot(col)).norm(), 1e-12 * std::max(col.norm(), 1e-300));
  }
}

TEST(SynthGaussian, SampleCovarianceConcentrates) {
  Rng rng(3);
  Scenario sc = oracle::random_scenario(4, 2, rng);
  sc.t_symbols = 100000;
  const ComplexMat r = oracle::random_psd(4, 3, 2.0, rng);
  const TxRealization tx = synth_gaussian(sc, HermitianCov::from_matrix(r), 9);
  const ComplexMat est = tx.gaussian * tx.gaussian.adjoint() / sc.t_symbols;
  EXPECT_LT((est - r).norm() / r.norm(), 0.03);
}

TEST(SynthDeterministic, RankOneIsSteeringTimesUnitPhases) {
  const Scenario sc = desk_scenario(0.0, 10.0);
  const TxRealization tx = synth_deterministic(sc, mrt_cov(2.0, sc.a()), 4);
  const ComplexVec u = sc.a().conjugate() / std::sqrt(8.0);
  for (Eigen::Index t = 0; t < tx.deterministic.cols(); ++t) {
    const ComplexVec col = tx.deterministic.col(t);
    const Complex coef = u.dot(col);
    EXPECT_NEAR(std::abs(coef), std::sqrt(2.0), 1e-12);
    EXPECT_LT((col - coef * u).norm(), 1e-12);
  }
  const ComplexMat est = tx.deterministic * tx.deterministic.adjoint() / 64.0;
  EXPECT_LT((est - mrt_cov(2.0, sc.a()).matrix()).norm(), 1e-10);
}

TEST(SynthDeterministic, SampleCovarianceIsExact) {
  Rng rng(5);
  Scenario sc = oracle::random_scenario(4, 2, rng);
  sc.t_symbols = 8;
  const ComplexMat scaled_identity = ComplexMat::Identity(4, 4) * (sc.p_max / 4.0);
  for (const ComplexMat& r : {scaled_identity, oracle::random_psd(4, 2, 1.5, rng)}) {
    const TxRealization tx = synth_deterministic(sc, HermitianCov::from_matrix(r), 6);
    const ComplexMat est = tx.deterministic * tx.deterministic.adjoint() / 8.0;
    EXPECT_LT((est - r).norm(), 1e-10);
  }
}

TEST(SynthDeterministic, RankAboveBlockLengthThrows) {
  Rng rng(6);
  Scenario sc = oracle::random_scenario(8, 2, rng);
  sc.t_symbols = 3;
  const HermitianCov r = HermitianCov::from_matrix(oracle::random_psd(8, 5, 1.0, rng));
  EXPECT_THROW(synth_deterministic(sc, r, 1), std::invalid_argument);
}

TEST(Receive, ZeroGainLeavesOnlyNoise) {
  Scenario sc = desk_scenario(0.3, 10.0);
  const TxRealization tx = synth_superposed(sc, mrt_cov(0.5, sc.a()), mrt_cov(0.5, sc.a()), 7);
  const RxBlock noisy = receive(sc, tx, 8);
  TxRealization silent{ComplexMat::Zero(8, 64), ComplexMat::Zero(8, 64)};
  const RxBlock noise = receive(sc, silent, 8);
  sc.alpha = 0.0;
  EXPECT_EQ(receive(sc, tx, 8).samples, noise.samples);
  EXPECT_NE(noisy.samples, noise.samples);
}

TEST(Receive, NoiselessEchoIsRankOneProduct) {
  Scenario sc = desk_scenario(0.3, 10.0);
  sc.sigma_s2 = 1e-300;
  const TxRealization tx = synth_deterministic(sc, mrt_cov(1.0, sc.a()), 9);
  const ComplexMat expect = sc.alpha * sc.b() * (sc.a().transpose() * tx.deterministic);
  EXPECT_LT((receive(sc, tx, 10).samples - expect).norm(), 1e-12 * expect.norm());
}

TEST(Receive, SecondMomentMatchesModel) {
  Rng rng(11);
  Scenario sc = oracle::random_scenario(4, 4, rng);
  sc.t_symbols = 8;
  const HermitianCov r_c = HermitianCov::from_matrix(oracle::random_psd(4, 2, 0.5, rng));
  const HermitianCov r_s = HermitianCov::from_matrix(oracle::random_psd(4, 2, 0.5, rng));
  const double model = std::norm(sc.alpha) * (target_quad(sc, r_c) + target_quad(sc, r_s)) * 4 +
                       sc.sigma_s2 * 4;
  double acc = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const TxRealization tx = synth_superposed(sc, r_c, r_s, stream_seed(1, k));
    acc += receive(sc, tx, stream_seed(2, k)).samples.squaredNorm() / sc.t_symbols;
  }
  EXPECT_NEAR(acc / n / model, 1.0, 0.02);
}

TEST(MleGaussian, NoiselessRecoversGridAngle) {
  Scenario sc = desk_scenario(kOnGrid, 10.0);
  sc.sigma_s2 = 1e-12;
  const HermitianCov r = mrt_cov(1.0, sc.a());
  const RxBlock rx = receive(sc, synth_gaussian(sc, r, 12), 13);
  const EstimateResult est = mle_gaussian(rx, sc, r);
  EXPECT_NEAR(est.theta_hat.value, kOnGrid, 1e-12);
  EXPECT_NEAR(est.alpha_mag_hat / std::abs(sc.alpha), 1.0, 0.3);
  EXPECT_FALSE(est.alpha_phase_hat.has_value());
}

TEST(MleGaussian, PureNoiseClampsMagnitude) {
  Scenario sc = desk_scenario(0.2, 10.0);
  sc.alpha = 0.0;
  const HermitianCov r = mrt_cov(1.0, sc.a());
  int clamped = 0;
  for (int s = 0; s < 40; ++s) {
    RxBlock rx = receive(sc, synth_gaussian(sc, r, s), 1000 + s);
    rx.samples *= 0.5;  // weaker than the assumed noise floor
    const EstimateResult est = mle_gaussian(rx, sc, r);
    EXPECT_GE(est.alpha_mag_hat, 0.0);
    if (est.alpha_mag_hat == 0.0) ++clamped;
  }
  EXPECT_EQ(clamped, 40);
}

TEST(MleGaussian, AllZeroBlockThrows) {
  const Scenario sc = desk_scenario(0.2, 10.0);
  const RxBlock rx{ComplexMat::Zero(8, 64), SignalMode::kGaussianOnly};
  EXPECT_THROW(mle_gaussian(rx, sc, mrt_cov(1.0, sc.a())), std::invalid_argument);
}

TEST(MleSuper, NoiselessDeterministicRecoversAngleAndPhase) {
  Scenario sc = desk_scenario(kOnGrid, 10.0);
  sc.sigma_s2 = 1e-12;
  const HermitianCov zero(8);
  const HermitianCov r_s = mrt_cov(1.0, sc.a());
  const TxRealization tx = synth_superposed(sc, zero, r_s, 14);
  const EstimateResult est = mle_super(receive(sc, tx, 15), sc, zero, r_s, tx);
  EXPECT_NEAR(est.theta_hat.value, kOnGrid, 1e-12);
  ASSERT_TRUE(est.alpha_phase_hat.has_value());
  EXPECT_NEAR(*est.alpha_phase_hat, std::arg(sc.alpha), 1e-6);
  EXPECT_NEAR(est.alpha_mag_hat, std::abs(sc.alpha), 1e-6);
}

TEST(MleSuper, WithoutDeterministicPartTracksGaussianEstimator) {
  const Scenario sc = desk_scenario(0.4, 15.0);
  const HermitianCov r_c = mrt_cov(1.0, sc.a());
  const HermitianCov zero(8);
  double se_g = 0.0;
  double se_s = 0.0;
  for (int k = 0; k < 200; ++k) {
    const TxRealization tx = synth_superposed(sc, r_c, zero, stream_seed(3, k));
    const RxBlock rx = receive(sc, tx, stream_seed(4, k));
    se_g += std::pow(mle_gaussian(rx, sc, r_c).theta_hat.value - 0.4, 2);
    se_s += std::pow(mle_super(rx, sc, r_c, zero, tx).theta_hat.value - 0.4, 2);
  }
  EXPECT_LT(std::abs(linear_to_db(se_s / se_g)), 0.5);
}

TEST(MleEfficiency, ApproachesBoundsAtHighSnr) {
  const Scenario sc = desk_scenario(0.3, 15.0);
  const HermitianCov mrt = mrt_cov(1.0, sc.a());
  const CovPair gauss{mrt, HermitianCov(8)};
  const CovPair super{mrt.scaled(0.5), mrt.scaled(0.5)};
  double se_g = 0.0;
  double se_s = 0.0;
  const int n = 300;
  for (int k = 0; k < n; ++k) {
    se_g += estimator_squared_error(sc, gauss, false, stream_seed(5, k));
    se_s += estimator_squared_error(sc, super, true, stream_seed(6, k));
  }
  EXPECT_LE(linear_to_db(se_g / n / crb_gaussian(sc, mrt)), 1.0);
  EXPECT_LE(linear_to_db(se_s / n / crb_super(sc, super.r_c, super.r_s)), 1.0);
}

TEST(GridSearch, TiesResolveToSmallerAngle) {
  const GridSpec grid;
  const double th = grid_argmax([](double x) { return -std::abs(std::abs(x) - 0.5); }, grid);
  EXPECT_LT(th, 0.0);
  EXPECT_NEAR(th, -0.5, 1e-5);
}

TEST(GridSearch, CurveCoversFullRange) {
  GridSpec grid;
  grid.coarse_step = 0.1;
  std::vector<std::pair<double, double>> curve;
  grid_argmax([](double x) { return std::cos(x - 0.3); }, grid, &curve);
  ASSERT_FALSE(curve.empty());
  EXPECT_DOUBLE_EQ(curve.front().first, -pi / 2);
  EXPECT_DOUBLE_EQ(curve.back().first, pi / 2);
}
