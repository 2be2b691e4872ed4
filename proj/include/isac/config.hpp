#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "isac/channel.hpp"

namespace isac {

/// Physical setup in configuration units (dB, dBm, degrees, meters).
struct PhysicalConfig {
  int m_tx = 32;
  int m_rx = 32;
  double spacing = 0.5;
  double wavelength = 1.0;

  double theta_deg = 0.0;
  double phi_deg = 0.0;
  double cu_los_deg = 30.0;
  double d_bt_m = 200.0;
  double d_tr_m = 200.0;
  double d_bc_m = 1000.0;

  PathLossModel path_loss;
  double rician_k = 1.0;
  Complex beta{1.0, 0.0};
  std::uint64_t channel_seed = 1;
  /// Replaces the two-hop |α|² when set (β keeps supplying the phase).
  std::optional<double> alpha_gain_db;

  double p_max_dbm = 30.0;
  double sigma_c2_dbm = -80.0;
  double sigma_s2_dbm = -80.0;

  int t_symbols = 1024;
  std::optional<double> sinr_threshold_db;
};

enum class SweepAxis { kPowerDbm, kSensingSnrDb, kTargetDistanceM, kRateBps, kSinrThresholdDb };

enum class Scheme {
  kGaussian,         ///< Gaussian-only, MRT
  kDeterministic,    ///< deterministic-only, MRT
  kIsac,             ///< fixed MRT split between Gaussian and deterministic
  kGaussianOpt,      ///< SINR-constrained Gaussian-only optimum
  kIsacOpt,          ///< SINR-constrained superposed design (SCA)
  kKnownRealization, ///< deterministic CRB on the Gaussian-only optimum
  kTimeSwitching,
  kPowerSplitting,
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::kPowerDbm;
  std::vector<double> values;
  int trials = 100;
  std::vector<Scheme> schemes;
  std::uint64_t seed = 1;
  /// Share of the budget given to the Gaussian signal in the fixed-split scheme.
  double gaussian_fraction = 0.1;

  /// Throws ConfigError unless values are strictly monotone and trials >= 1.
  void validate() const;
};

struct EstimateSpec {
  bool superposed = true;
  double gaussian_fraction = 0.5;
  std::uint64_t seed = 1;
  bool keep_curve = false;
};

struct RunConfig {
  PhysicalConfig physical;
  SweepSpec sweep;
  EstimateSpec estimate;
  /// Fully resolved configuration (preset merged with overrides), echoed in
  /// output metadata.
  std::string resolved_json;
};

std::string axis_name(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);
std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Parses a JSON configuration document. Unknown keys are rejected.
/// Throws ConfigError.
RunConfig parse_config(const std::string& text);

/// Reads and parses a configuration file. Throws ConfigError (including for
/// unreadable files).
RunConfig load_config(const std::filesystem::path& path);

/// The default preset reproducing the reference simulation setup.
RunConfig paper_preset();

/// Scenario in SI units built from the physical configuration.
Scenario build_scenario(const PhysicalConfig& cfg);

}  // namespace isac
