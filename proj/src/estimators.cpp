#include "isac/estimators.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "isac/fim_crb.hpp"
#include "isac/rng.hpp"

namespace isac {
namespace {

struct EigenFactor {
  ComplexMat vectors;        // retained eigenvectors, columns
  Eigen::VectorXd values;    // retained eigenvalues, > threshold
};

// Eigenpairs with λ > 1e-12·trace.
EigenFactor significant_eigen(const HermitianCov& r) {
  Eigen::SelfAdjointEigenSolver<ComplexMat> es(r.matrix());
  const double cutoff = 1e-12 * std::max(r.trace(), 0.0);
  std::vector<int> keep;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > cutoff && es.eigenvalues()[i] > 0.0) keep.push_back(i);
  }
  EigenFactor f;
  f.vectors.resize(r.dim(), static_cast<Eigen::Index>(keep.size()));
  f.values.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    f.vectors.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    f.values[static_cast<Eigen::Index>(k)] = es.eigenvalues()[keep[k]];
  }
  return f;
}

ComplexMat gaussian_block(const HermitianCov& r, int t, std::uint64_t seed) {
  const EigenFactor f = significant_eigen(r);
  ComplexMat out = ComplexMat::Zero(r.dim(), t);
  if (f.values.size() == 0) return out;
  Rng rng(seed);
  ComplexMat z(f.values.size(), t);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = draw_cn(rng);
  }
  const ComplexMat l = f.vectors * f.values.cwiseSqrt().asDiagonal();
  out = l * z;
  return out;
}

ComplexMat deterministic_block(const HermitianCov& r, int t, std::uint64_t seed) {
  const EigenFactor f = significant_eigen(r);
  const auto rank = static_cast<int>(f.values.size());
  if (rank > t) {
    throw std::invalid_argument(
        fmt::format("sensing covariance rank {} exceeds the block length {}", rank, t));
  }
  ComplexMat out = ComplexMat::Zero(r.dim(), t);
  if (rank == 0) return out;

  // Rows q_k(t) = exp(j(ψ_t + 2π k t / T)) are unit modulus and mutually
  // orthogonal with squared norm T for k < T.
  Rng rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> psi(static_cast<std::size_t>(t));
  for (auto& p : psi) p = phase(rng);
  ComplexMat q(rank, t);
  for (int k = 0; k < rank; ++k) {
    for (int s = 0; s < t; ++s) {
      q(k, s) = std::polar(1.0, psi[static_cast<std::size_t>(s)] +
                                    2.0 * std::numbers::pi * k * s / static_cast<double>(t));
    }
  }
  out = f.vectors * f.values.cwiseSqrt().asDiagonal() * q;
  return out;
}

void check_cov(const Scenario& sc, const HermitianCov& r) {
  if (r.dim() != sc.ula.m_tx()) {
    throw std::invalid_argument("covariance dimension does not match the transmit array");
  }
}

void check_rx(const RxBlock& rx, const Scenario& sc) {
  if (rx.samples.rows() != sc.ula.m_rx() || rx.samples.cols() != sc.t_symbols) {
    throw std::invalid_argument(fmt::format("received block is {}x{}, expected {}x{}",
                                            rx.samples.rows(), rx.samples.cols(), sc.ula.m_rx(),
                                            sc.t_symbols));
  }
  if (rx.samples.cwiseAbs2().sum() == 0.0) {
    throw std::invalid_argument("received block is identically zero");
  }
}

// |α| estimate from the beamformed power, radicand clamped at zero.
double alpha_magnitude(double beam_power_per_symbol, double b_norm2, double rho,
                       double sigma2) {
  const double radicand =
      beam_power_per_symbol / (b_norm2 * b_norm2 * rho) - sigma2 / (b_norm2 * rho);
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

}  // namespace

TxRealization synth_gaussian(const Scenario& sc, const HermitianCov& r_c, std::uint64_t seed) {
  check_cov(sc, r_c);
  TxRealization tx;
  tx.gaussian = gaussian_block(r_c, sc.t_symbols, substream_seed(seed, Substream::kGaussianTx));
  tx.deterministic = ComplexMat::Zero(sc.ula.m_tx(), sc.t_symbols);
  return tx;
}

TxRealization synth_deterministic(const Scenario& sc, const HermitianCov& r_s,
                                  std::uint64_t seed) {
  check_cov(sc, r_s);
  TxRealization tx;
  tx.gaussian = ComplexMat::Zero(sc.ula.m_tx(), sc.t_symbols);
  tx.deterministic =
      deterministic_block(r_s, sc.t_symbols, substream_seed(seed, Substream::kDeterministicTx));
  return tx;
}

TxRealization synth_superposed(const Scenario& sc, const HermitianCov& r_c,
                               const HermitianCov& r_s, std::uint64_t seed) {
  TxRealization tx = synth_gaussian(sc, r_c, seed);
  tx.deterministic = synth_deterministic(sc, r_s, seed).deterministic;
  return tx;
}

RxBlock receive(const Scenario& sc, const TxRealization& tx, std::uint64_t seed) {
  const int t = sc.t_symbols;
  if (tx.gaussian.rows() != sc.ula.m_tx() || tx.gaussian.cols() != t ||
      tx.deterministic.rows() != sc.ula.m_tx() || tx.deterministic.cols() != t) {
    throw std::invalid_argument("transmit block dimensions do not match the scenario");
  }
  const ComplexVec a = sc.a();
  const ComplexVec b = sc.b();
  // aᵀ(S + X₀): plain transpose, no conjugation.
  const Eigen::RowVectorXcd projected = a.transpose() * (tx.gaussian + tx.deterministic);

  RxBlock rx;
  rx.mode = tx.deterministic.isZero(0.0) ? SignalMode::kGaussianOnly : SignalMode::kSuperposed;
  rx.samples = sc.alpha * (b * projected);
  Rng rng(substream_seed(seed, Substream::kNoise));
  const double sigma = std::sqrt(sc.sigma_s2);
  for (Eigen::Index j = 0; j < rx.samples.cols(); ++j) {
    for (Eigen::Index i = 0; i < rx.samples.rows(); ++i) rx.samples(i, j) += sigma * draw_cn(rng);
  }
  return rx;
}

EstimateResult mle_gaussian(const RxBlock& rx, const Scenario& sc, const HermitianCov& r_c,
                            const GridSpec& grid) {
  check_rx(rx, sc);
  check_cov(sc, r_c);
  const double rho = target_quad(sc, r_c);
  if (rho <= 0.0) throw UnobservableError("Gaussian covariance sends no power toward the target");

  const double t = sc.t_symbols;
  const double s2 = sc.sigma_s2;
  const ComplexMat gram = rx.samples * rx.samples.adjoint();

  // Σ_t |bᴴ y(t)|² for a candidate angle.
  auto beam_power = [&](double theta) {
    const ComplexVec b = steering_rx(sc.ula, Radians(theta));
    return std::max(b.dot(gram * b).real(), 0.0);
  };
  // Concentrated log-likelihood on noise-whitened samples, x = Σ|bᴴy|²/(σ²‖b‖²).
  // Below the noise floor (x < T) the |α| estimate clamps to zero and the
  // likelihood is the θ-independent noise-only value T.
  auto objective = [&](double theta) {
    const double x = beam_power(theta) / (s2 * sc.ula.m_rx());
    if (x <= t) return t;
    return x - t * std::log(x / t);
  };

  EstimateResult res;
  const double theta_hat =
      grid_argmax(objective, grid, grid.keep_curve ? &res.objective_curve : nullptr);
  res.theta_hat = Radians(theta_hat);
  res.alpha_mag_hat = alpha_magnitude(beam_power(theta_hat) / t, sc.ula.m_rx(), rho, s2);
  return res;
}

EstimateResult mle_super(const RxBlock& rx, const Scenario& sc, const HermitianCov& r_c,
                         const HermitianCov& r_s, const TxRealization& tx, const GridSpec& grid,
                         PhaseReference phase_ref) {
  check_rx(rx, sc);
  check_cov(sc, r_c);
  check_cov(sc, r_s);
  const double rho_c = target_quad(sc, r_c);
  const double rho_tot = rho_c + target_quad(sc, r_s);
  if (rho_tot <= 0.0) throw UnobservableError("no transmit power toward the target");

  const double t = sc.t_symbols;
  const double s2 = sc.sigma_s2;
  const double m = sc.ula.m_rx();
  const ComplexVec a = sc.a();
  // Known DoD: c(t) = aᵀx₀(t) enters the mean, r(t) is the phase reference.
  const Eigen::RowVectorXcd c = a.transpose() * tx.deterministic;
  const Eigen::RowVectorXcd ref = phase_ref == PhaseReference::kDeterministic
                                      ? c
                                      : Eigen::RowVectorXcd(a.transpose() * tx.gaussian);

  struct AlphaFit {
    Complex alpha;
    double loglik;
  };
  auto fit = [&](double theta) {
    const ComplexVec b = steering_rx(sc.ula, Radians(theta));
    const Eigen::RowVectorXcd z = b.adjoint() * rx.samples;  // bᴴ y(t)
    const Complex corr = (ref.conjugate().array() * z.array()).sum();
    const double mag = alpha_magnitude(z.squaredNorm() / t, m, rho_tot, s2);
    const Complex alpha_hat = corr == Complex(0.0) ? Complex(mag) : std::polar(mag, std::arg(corr));

    const double q = std::norm(alpha_hat) * rho_c;
    const double shrink = q / (s2 + q * m);
    double quad = 0.0;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const Complex mean = alpha_hat * c[k];
      // ‖y − mean·b‖² − ‖y‖² and bᴴ(y − mean·b), using ‖b‖² = M_r.
      const double resid = -2.0 * std::real(std::conj(mean) * z[k]) + std::norm(mean) * m;
      const Complex proj = z[k] - mean * m;
      quad += resid - shrink * std::norm(proj);
    }
    const double loglik = -quad / s2 - t * std::log1p(q * m / s2);
    return AlphaFit{alpha_hat, loglik};
  };

  EstimateResult res;
  const double theta_hat = grid_argmax([&](double th) { return fit(th).loglik; }, grid,
                                       grid.keep_curve ? &res.objective_curve : nullptr);
  const AlphaFit best = fit(theta_hat);
  res.theta_hat = Radians(theta_hat);
  res.alpha_mag_hat = std::abs(best.alpha);
  res.alpha_phase_hat = std::arg(best.alpha);
  return res;
}

}  // namespace isac
