#include "isac/array.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace isac {
namespace {

void check_angle(Radians angle) {
  // Small slack so that ±π/2 computed in floating point is accepted.
  if (!(std::abs(angle.value) <= std::numbers::pi / 2 + 1e-12)) {
    throw std::domain_error(fmt::format("angle {} rad outside [-pi/2, pi/2]", angle.value));
  }
}

ComplexVec ula_response(int m, double spacing, double wavelength, Radians angle) {
  check_angle(angle);
  const double kd = std::numbers::pi * spacing * std::sin(angle.value) / wavelength;
  ComplexVec v(m);
  for (int i = 0; i < m; ++i) {
    const double offset = 2.0 * i - (m - 1);
    v[i] = std::polar(1.0, offset * kd);
  }
  return v;
}

}  // namespace

UlaConfig::UlaConfig(int m_tx, int m_rx, double spacing, double wavelength)
    : m_tx_(m_tx), m_rx_(m_rx), spacing_(spacing), wavelength_(wavelength) {
  if (m_tx < 2 || m_tx % 2 != 0) {
    throw ConfigError(fmt::format("m_tx must be an even integer >= 2, got {}", m_tx));
  }
  if (m_rx < 2 || m_rx % 2 != 0) {
    throw ConfigError(fmt::format("m_rx must be an even integer >= 2, got {}", m_rx));
  }
  if (!(spacing > 0.0) || !(wavelength > 0.0)) {
    throw ConfigError("element spacing and wavelength must be positive");
  }
}

UlaConfig UlaConfig::half_wavelength(int m_tx, int m_rx) { return {m_tx, m_rx, 0.5, 1.0}; }

ComplexVec steering_tx(const UlaConfig& cfg, Radians phi) {
  return ula_response(cfg.m_tx(), cfg.spacing(), cfg.wavelength(), phi);
}

ComplexVec steering_rx(const UlaConfig& cfg, Radians theta) {
  return ula_response(cfg.m_rx(), cfg.spacing(), cfg.wavelength(), theta);
}

ComplexVec steering_rx_deriv(const UlaConfig& cfg, Radians theta) {
  ComplexVec b = steering_rx(cfg, theta);
  const double scale =
      std::numbers::pi * cfg.spacing() * std::cos(theta.value) / cfg.wavelength();
  const int m = cfg.m_rx();
  for (int i = 0; i < m; ++i) {
    b[i] *= Complex(0.0, scale * (2.0 * i - (m - 1)));
  }
  return b;
}

double steering_rx_deriv_norm2(const UlaConfig& cfg, Radians theta) {
  const double g = std::numbers::pi * cfg.spacing() * std::cos(theta.value) / cfg.wavelength();
  const double m = cfg.m_rx();
  return g * g * m * (m * m - 1.0) / 3.0;
}

}  // namespace isac
