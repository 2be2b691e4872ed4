#include "isac/hermitian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace isac {

HermitianCov::HermitianCov(int dim) : m_(ComplexMat::Zero(dim, dim)) {}

bool is_hermitian_psd(const ComplexMat& m, double herm_tol, double psd_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  if (!m.allFinite()) return false;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale) return false;
  const ComplexMat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMat> es(sym, Eigen::EigenvaluesOnly);
  const double tr = std::max(sym.trace().real(), 0.0);
  return es.eigenvalues().minCoeff() >= -psd_tol * std::max(tr, scale * 1e-300);
}

HermitianCov HermitianCov::from_matrix(const ComplexMat& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(
        fmt::format("covariance must be square, got {}x{}", m.rows(), m.cols()));
  }
  if (!is_hermitian_psd(m)) {
    throw std::invalid_argument("covariance is not Hermitian positive semidefinite");
  }
  return HermitianCov(Unchecked{}, 0.5 * (m + m.adjoint()));
}

HermitianCov HermitianCov::rank_one(double p, const ComplexVec& v) {
  if (p < 0.0) throw std::invalid_argument("rank-one covariance needs p >= 0");
  const double n2 = v.squaredNorm();
  if (n2 == 0.0 || p == 0.0) return HermitianCov(static_cast<int>(v.size()));
  return HermitianCov(Unchecked{}, (p / n2) * (v * v.adjoint()));
}

double HermitianCov::quad_form(const ComplexVec& v) const {
  const Complex q = v.dot(m_ * v);  // Eigen's dot conjugates the first argument.
  return q.real();
}

HermitianCov HermitianCov::operator+(const HermitianCov& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("covariance dimension mismatch");
  return HermitianCov(Unchecked{}, m_ + other.m_);
}

HermitianCov HermitianCov::scaled(double c) const {
  if (c < 0.0) throw std::invalid_argument("covariance scale must be nonnegative");
  return HermitianCov(Unchecked{}, c * m_);
}

}  // namespace isac
