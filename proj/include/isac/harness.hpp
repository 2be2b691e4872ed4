#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isac/beamform_opt.hpp"
#include "isac/config.hpp"
#include "isac/estimators.hpp"

namespace isac {

struct SweepRow {
  double axis_value = 0.0;
  Scheme scheme = Scheme::kGaussian;
  bool feasible = true;
  std::optional<double> crb;         ///< rad²
  std::optional<double> mse;         ///< rad²
  std::optional<double> rate;        ///< bit/s/Hz
  std::optional<int> iterations;     ///< SCA iterations
  std::optional<double> gamma_ran;   ///< linear sensing SNR of the total covariance
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kPowerDbm;
  std::vector<SweepRow> rows;  ///< ordered by axis value, then by scheme order in the sweep
};

struct RunOptions {
  int workers = 1;
  /// Keep the configured array size and block length for Monte Carlo runs.
  /// Without it estimator sweeps are scaled down to 8 antennas and 64 symbols.
  bool heavy = false;
};

/// Runs `task(i)` for i in [0, n) on up to `workers` threads. Results must be
/// written to per-index slots; the first exception thrown is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task);

/// Applies one axis value to a copy of the physical configuration.
PhysicalConfig apply_axis(const PhysicalConfig& base, SweepAxis axis, double value);

/// Scenario for one sweep point. For the sensing-SNR axis the sensing noise is
/// set so that γ_ran of the full-power MRT covariance equals the axis value.
Scenario scenario_at(const PhysicalConfig& base, SweepAxis axis, double value);

/// Transmit covariances of the fixed-beam schemes (gaussian, deterministic,
/// isac) at full power.
CovPair fixed_scheme_cov(const Scenario& sc, Scheme scheme, double gaussian_fraction);

/// CRBs per axis value for the fixed-beam schemes.
SweepResult run_crb_sweep(const SweepSpec& spec, const PhysicalConfig& base,
                          const RunOptions& opts = {});

/// CRBs plus Monte Carlo MSE of the matching estimator.
SweepResult run_mse_sweep(const SweepSpec& spec, const PhysicalConfig& base,
                          const RunOptions& opts = {});

/// Per-trial squared DoA error of one scheme's estimator. Exposed for the
/// acceptance suite.
double estimator_squared_error(const Scenario& sc, const CovPair& cov, bool superposed,
                               std::uint64_t trial_seed, const GridSpec& grid = {});

/// CRB-rate boundary points of the optimized designs and benchmarks along a
/// rate or SINR-threshold axis. Infeasible points are marked, not fatal.
SweepResult run_tradeoff(const SweepSpec& spec, const PhysicalConfig& base,
                         const RunOptions& opts = {});

/// Time-switching benchmark: sensing with deterministic MRT for the symbols not
/// needed to deliver `rate_target` by full-power CU beamforming. Returns the
/// CRB, or nullopt when the rate is not achievable.
std::optional<double> time_switching_crb(const Scenario& sc, double rate_target);

/// Output of one end-to-end estimation run.
struct EstimateReport {
  EstimateResult result;
  Radians theta_true{};
  Complex alpha_true{};
  double crb = 0.0;
  bool superposed = true;
};

EstimateReport run_estimate(const RunConfig& cfg);

}  // namespace isac
