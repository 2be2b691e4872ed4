#pragma once

#include <Eigen/Dense>

#include "isac/channel.hpp"
#include "isac/hermitian.hpp"

namespace isac {

/// Fisher information on (θ, |α|) when only Gaussian information signals are
/// transmitted.
struct FimGaussian {
  double f_tt = 0.0;
  double f_ta = 0.0;
  double f_aa = 0.0;
};

/// Fisher information on (θ, Re α, Im α) for superposed Gaussian and
/// deterministic signals.
struct FimSuper {
  double f_tt = 0.0;
  Eigen::Vector2d f_ta = Eigen::Vector2d::Zero();
  Eigen::Matrix2d f_aa = Eigen::Matrix2d::Zero();
};

struct CrbReport {
  double crb_gaussian = 0.0;
  double crb_deterministic = 0.0;
  double crb_super = 0.0;
  double gamma_ran = 0.0;
};

struct MinCrbs {
  double gaussian = 0.0;       ///< MRT Gaussian-only minimum
  double deterministic = 0.0;  ///< MRT deterministic-only minimum
  double super = 0.0;          ///< superposed minimum (equals deterministic)
};

/// aᵀ R a* evaluated as (a*)ᴴ R a*; asserts the imaginary residue is negligible.
double target_quad(const Scenario& sc, const HermitianCov& r);

/// Radar sensing SNR |α|² aᵀR a* ‖b‖² / σ_s².
double gamma_ran(const Scenario& sc, const HermitianCov& r_c);

FimGaussian fim_gaussian(const Scenario& sc, const HermitianCov& r_c);

/// Throws UnobservableError when aᵀR_c a* = 0 or α = 0.
double crb_gaussian(const Scenario& sc, const HermitianCov& r_c);

double crb_deterministic(const Scenario& sc, const HermitianCov& r_s);

FimSuper fim_super(const Scenario& sc, const HermitianCov& r_c, const HermitianCov& r_s);

/// f(R_c, R_s) = aᵀR_s a*‖ḃ‖² + γ/(1+γ) aᵀR_c a*‖ḃ‖², the quantity maximized
/// by the superposed-signal beamformers.
double super_objective(const Scenario& sc, const HermitianCov& r_c, const HermitianCov& r_s);

double crb_super(const Scenario& sc, const HermitianCov& r_c, const HermitianCov& r_s);

/// All three CRBs with R_c and R_s used as given, plus γ_ran(R_c + R_s).
CrbReport crb_report(const Scenario& sc, const HermitianCov& r_c, const HermitianCov& r_s);

/// Closed-form minima under the power budget, written with the cos²θ geometry
/// factor of ‖ḃ‖².
MinCrbs crb_min_closed_forms(const Scenario& sc);

/// How the geometry term E(γ_0) of the constrained closed form is evaluated.
enum class SinrGainForm {
  /// (√λ₁|u₁ᴴa*| + √(λ₂ (M_t − |u₁ᴴa*|²)))², the value of aᵀR a* at the
  /// constrained optimum.
  kExact,
  /// The typeset variant with √(λ₂² (M_t − |u₁ᴴa*|²)²); kept for comparison.
  kAsPrinted,
};

/// E(γ_0) for the constrained branch (independent of the branch test).
double sinr_geometry_gain(const Scenario& sc, SinrGainForm form = SinrGainForm::kExact);

/// Minimum Gaussian-only CRB under the CU SINR constraint γ_0 (closed form).
/// Throws InfeasibleError when γ_0 > P‖h‖²/σ_c².
double crb_sinr_gaussian_closed(const Scenario& sc, SinrGainForm form = SinrGainForm::kExact);

}  // namespace isac
