#pragma once

#include <cstdint>

#include "isac/array.hpp"
#include "isac/types.hpp"

namespace isac {

/// L(d) = K_0 (d / d_0)^(−exponent).
struct PathLossModel {
  double k0_db = -30.0;
  double d0 = 1.0;
  double exponent = 2.5;

  /// Throws ConfigError unless d0 > 0 and exponent > 0.
  void validate() const;
};

/// Full physical scene seen by the estimators and optimizers. Powers in watts.
struct Scenario {
  UlaConfig ula = UlaConfig::half_wavelength(2, 2);
  Radians theta{};       ///< target DoA at the sensing receiver
  Radians phi{};         ///< target DoD at the BS
  Complex alpha{1.0};    ///< BS-target-receiver complex gain
  ComplexVec h;          ///< BS -> CU channel, length m_tx
  double p_max = 1.0;
  double sigma_c2 = 1.0;
  double sigma_s2 = 1.0;
  int t_symbols = 1;
  double gamma0 = 0.0;   ///< linear SINR threshold

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  ComplexVec a() const { return steering_tx(ula, phi); }
  ComplexVec b() const { return steering_rx(ula, theta); }
  ComplexVec b_dot() const { return steering_rx_deriv(ula, theta); }
};

/// Linear-scale path loss. Throws std::domain_error for d <= 0.
double path_loss(const PathLossModel& model, double d);

/// Rician BS->CU channel √gain (√(K/(K+1)) a(los_angle) + √(1/(K+1)) h_nlos).
/// k_factor >= 1e12 is treated as pure line of sight.
ComplexVec rician_cu_channel(const UlaConfig& cfg, double k_factor, Radians los_angle,
                             double gain, std::uint64_t rng_seed);

/// α = β √(L(d_bt) L(d_tr)).
Complex target_gain(const PathLossModel& model, double d_bt, double d_tr, Complex beta);

}  // namespace isac
