#pragma once

#include "isac/types.hpp"

namespace isac {

/// Geometry of the transmit (BS) and receive (sensing) uniform linear arrays.
/// Element counts must be even; the phase reference is the array midpoint.
class UlaConfig {
 public:
  /// Throws ConfigError on odd or < 2 element counts, or non-positive lengths.
  UlaConfig(int m_tx, int m_rx, double spacing, double wavelength);

  /// Half-wavelength spacing with unit wavelength.
  static UlaConfig half_wavelength(int m_tx, int m_rx);

  int m_tx() const { return m_tx_; }
  int m_rx() const { return m_rx_; }
  double spacing() const { return spacing_; }
  double wavelength() const { return wavelength_; }

 private:
  int m_tx_;
  int m_rx_;
  double spacing_;
  double wavelength_;
};

/// Transmit steering vector a(φ). Entry m carries phase
/// π(2m − (M_t − 1)) d sin φ / λ.
ComplexVec steering_tx(const UlaConfig& cfg, Radians phi);

/// Receive steering vector b(θ).
ComplexVec steering_rx(const UlaConfig& cfg, Radians theta);

/// ∂b/∂θ = (jπ d cos θ / λ) D b with D = diag(−(M_r−1), …, M_r−1).
ComplexVec steering_rx_deriv(const UlaConfig& cfg, Radians theta);

/// ‖∂b/∂θ‖² in closed form: (π d cos θ / λ)² M_r (M_r² − 1) / 3.
double steering_rx_deriv_norm2(const UlaConfig& cfg, Radians theta);

}  // namespace isac
