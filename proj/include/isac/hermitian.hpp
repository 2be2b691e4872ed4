#pragma once

#include "isac/types.hpp"

namespace isac {

/// Hermitian positive semidefinite covariance matrix (R_c, R_s or a sum).
/// Construction validates Hermitian symmetry and PSD-ness up to tolerance and
/// stores the exactly symmetrized matrix.
class HermitianCov {
 public:
  /// Zero matrix of the given dimension.
  explicit HermitianCov(int dim = 0);

  /// Validating constructor. Throws std::invalid_argument when the input is not
  /// Hermitian to 1e-12 (relative to its scale) or has an eigenvalue below
  /// -1e-10 * trace.
  static HermitianCov from_matrix(const ComplexMat& m);

  /// Rank-one p · v vᴴ / ‖v‖². A zero vector yields the zero matrix.
  static HermitianCov rank_one(double p, const ComplexVec& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMat& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  /// vᴴ R v, real by Hermitian symmetry.
  double quad_form(const ComplexVec& v) const;

  HermitianCov operator+(const HermitianCov& other) const;
  HermitianCov scaled(double c) const;

 private:
  struct Unchecked {};
  HermitianCov(Unchecked, ComplexMat m) : m_(std::move(m)) {}

  ComplexMat m_;
};

/// True when the matrix is Hermitian to `herm_tol` (relative) and its smallest
/// eigenvalue is at least -psd_tol * max(trace, tiny).
bool is_hermitian_psd(const ComplexMat& m, double herm_tol = 1e-12, double psd_tol = 1e-10);

}  // namespace isac
