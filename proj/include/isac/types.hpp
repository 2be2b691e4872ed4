#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace isac {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;

/// Angle in radians. The library never accepts degrees; conversion happens
/// at the configuration boundary.
struct Radians {
  double value = 0.0;

  constexpr Radians() = default;
  constexpr explicit Radians(double v) : value(v) {}

  constexpr Radians operator-() const { return Radians(-value); }
  friend constexpr bool operator==(Radians, Radians) = default;
};

constexpr Radians from_degrees(double deg) {
  return Radians(deg * std::numbers::pi / 180.0);
}
constexpr double to_degrees(Radians r) { return r.value * 180.0 / std::numbers::pi; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
/// dBm to watts.
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// Error hierarchy. Config/IO problems map to exit code 2 in the CLI, everything
// else derived from NumericalError maps to exit code 1.

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The target direction receives no power (or the path gain is zero), so the
/// Fisher information on the angle vanishes.
class UnobservableError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// SINR threshold exceeds what the power budget can deliver.
class InfeasibleError : public NumericalError {
 public:
  InfeasibleError(const std::string& what, double gamma0, double gamma_max)
      : NumericalError(what), gamma0_(gamma0), gamma_max_(gamma_max) {}

  double gamma0() const { return gamma0_; }
  /// Largest achievable threshold P‖h‖²/σ_c².
  double gamma_max() const { return gamma_max_; }

 private:
  double gamma0_;
  double gamma_max_;
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, int iteration, double gap)
      : NumericalError(what), iteration_(iteration), gap_(gap) {}

  int iteration() const { return iteration_; }
  double gap() const { return gap_; }

 private:
  int iteration_;
  double gap_;
};

}  // namespace isac
