#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "isac/channel.hpp"
#include "isac/hermitian.hpp"

namespace isac {

enum class SignalMode { kGaussianOnly, kSuperposed };

/// Transmitted block. `deterministic` is all-zero in Gaussian-only mode.
struct TxRealization {
  ComplexMat gaussian;       ///< m_tx × T, columns s(t)
  ComplexMat deterministic;  ///< m_tx × T, columns x₀(t)
};

/// Received echo block Y (m_rx × T).
struct RxBlock {
  ComplexMat samples;
  SignalMode mode = SignalMode::kGaussianOnly;
};

/// Coarse-to-fine θ grid over [−π/2, π/2]: a uniform pass at `coarse_step`,
/// then `refinements` rounds that each shrink the step by `refine_factor`
/// around the incumbent.
struct GridSpec {
  double coarse_step = 0.005;
  int refinements = 3;
  int refine_factor = 10;
  bool keep_curve = false;  ///< record the coarse-pass objective
};

struct EstimateResult {
  Radians theta_hat{};
  double alpha_mag_hat = 0.0;
  std::optional<double> alpha_phase_hat;  ///< superposed mode only
  std::vector<std::pair<double, double>> objective_curve;
};

/// Which transmitted sequence the phase of α is matched against.
enum class PhaseReference {
  kDeterministic,  ///< correlate with the known x₀(t)
  kGaussianAsPrinted,  ///< correlate with s(t), the typeset variant
};

/// Columns i.i.d. CN(0, R_c); eigenvalues below 1e-12·trace are truncated.
TxRealization synth_gaussian(const Scenario& sc, const HermitianCov& r_c, std::uint64_t seed);

/// X₀ = V Λ^{1/2} Q with (1/T) Q Qᴴ = I, built from seeded unit-modulus
/// sequences, so the sample covariance of X₀ equals R_s exactly.
/// Throws std::invalid_argument when rank(R_s) > T.
TxRealization synth_deterministic(const Scenario& sc, const HermitianCov& r_s, std::uint64_t seed);

/// Gaussian and deterministic parts drawn together (superposed transmission).
TxRealization synth_superposed(const Scenario& sc, const HermitianCov& r_c,
                               const HermitianCov& r_s, std::uint64_t seed);

/// Y = α b aᵀ (S + X₀) + N, N columns i.i.d. CN(0, σ_s² I).
RxBlock receive(const Scenario& sc, const TxRealization& tx, std::uint64_t seed);

/// Gaussian-only ML estimate of θ (concentrated likelihood over |α|) and of |α|.
/// Throws std::invalid_argument on an all-zero block.
EstimateResult mle_gaussian(const RxBlock& rx, const Scenario& sc, const HermitianCov& r_c,
                            const GridSpec& grid = {});

/// Superposed-signal estimate: α from phase matching against the known
/// sequence and the power-based magnitude, θ maximizing the Gaussian
/// log-likelihood with that α plugged in.
EstimateResult mle_super(const RxBlock& rx, const Scenario& sc, const HermitianCov& r_c,
                         const HermitianCov& r_s, const TxRealization& tx,
                         const GridSpec& grid = {},
                         PhaseReference phase_ref = PhaseReference::kDeterministic);

/// Generic coarse-to-fine maximizer used by both estimators. Ties resolve to
/// the smaller angle.
template <typename Objective>
double grid_argmax(Objective&& objective, const GridSpec& grid,
                   std::vector<std::pair<double, double>>* curve = nullptr);

}  // namespace isac

#include "isac/detail/grid_search.hpp"
