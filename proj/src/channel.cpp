#include "isac/channel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "isac/rng.hpp"

namespace isac {

void PathLossModel::validate() const {
  if (!(d0 > 0.0)) throw ConfigError("path loss reference distance d0 must be positive");
  if (!(exponent > 0.0)) throw ConfigError("path loss exponent must be positive");
  if (!std::isfinite(k0_db)) throw ConfigError("path loss K0 must be finite");
}

void Scenario::validate() const {
  if (h.size() != ula.m_tx()) {
    throw ConfigError(fmt::format("CU channel has {} entries, array has {}", h.size(), ula.m_tx()));
  }
  if (!(p_max > 0.0)) throw ConfigError("transmit power must be positive");
  if (!(sigma_c2 > 0.0)) throw ConfigError("CU noise power must be positive");
  if (!(sigma_s2 > 0.0)) throw ConfigError("sensing noise power must be positive");
  if (t_symbols < 1) throw ConfigError("symbol count must be >= 1");
  if (!(gamma0 >= 0.0)) throw ConfigError("SINR threshold must be >= 0");
  if (std::abs(theta.value) > std::numbers::pi / 2 || std::abs(phi.value) > std::numbers::pi / 2) {
    throw ConfigError("angles must lie in [-pi/2, pi/2]");
  }
}

double path_loss(const PathLossModel& model, double d) {
  if (!(d > 0.0)) throw std::domain_error(fmt::format("distance must be positive, got {}", d));
  return db_to_linear(model.k0_db) * std::pow(d / model.d0, -model.exponent);
}

ComplexVec rician_cu_channel(const UlaConfig& cfg, double k_factor, Radians los_angle,
                             double gain, std::uint64_t rng_seed) {
  if (!(k_factor >= 0.0)) throw std::domain_error("Rician factor must be >= 0");
  if (!(gain > 0.0)) throw std::domain_error("channel gain must be positive");
  const ComplexVec los = steering_tx(cfg, los_angle);
  if (k_factor >= 1e12) return std::sqrt(gain) * los;

  Rng rng(rng_seed);
  ComplexVec nlos(cfg.m_tx());
  for (auto& z : nlos) z = draw_cn(rng);
  const double w_los = std::sqrt(k_factor / (k_factor + 1.0));
  const double w_nlos = std::sqrt(1.0 / (k_factor + 1.0));
  return std::sqrt(gain) * (w_los * los + w_nlos * nlos);
}

Complex target_gain(const PathLossModel& model, double d_bt, double d_tr, Complex beta) {
  return beta * std::sqrt(path_loss(model, d_bt) * path_loss(model, d_tr));
}

}  // namespace isac
