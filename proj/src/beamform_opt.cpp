#include "isac/beamform_opt.hpp"

#include <cmath>

#include <fmt/format.h>

#include "isac/array.hpp"
#include "isac/fim_crb.hpp"
#include "small_sdp.hpp"

namespace isac {
namespace {

void check_feasible(const Scenario& sc) {
  const double gmax = max_sinr(sc);
  if (sc.gamma0 > gmax) {
    throw InfeasibleError(
        fmt::format("SINR threshold {} exceeds the achievable maximum {}", sc.gamma0, gmax),
        sc.gamma0, gmax);
  }
}

// Orthonormal basis of span{a*, h} (one or two columns).
ComplexMat target_cu_basis(const ComplexVec& a_conj, const ComplexVec& h) {
  const ComplexVec u1 = a_conj.normalized();
  const ComplexVec resid = h - u1.dot(h) * u1;
  if (resid.norm() <= 1e-9 * std::max(h.norm(), 1e-300)) return u1;
  ComplexMat u(a_conj.size(), 2);
  u.col(0) = u1;
  u.col(1) = resid.normalized();
  return u;
}

// Coefficients of the linear functional z ↦ vᴴXv for one cone block.
void quad_coeffs(const ComplexVec& v, Eigen::Ref<Eigen::RowVectorXd> row) {
  if (v.size() == 1) {
    row[0] = std::norm(v[0]);
    return;
  }
  const Complex w = std::conj(v[0]) * v[1];
  row[0] = std::norm(v[0]);
  row[1] = 2.0 * w.real();
  row[2] = -2.0 * w.imag();
  row[3] = std::norm(v[1]);
}

void trace_coeffs(int block, Eigen::Ref<Eigen::RowVectorXd> row) {
  row.setZero();
  row[0] = 1.0;
  if (block == 4) row[3] = 1.0;
}

ComplexMat block_matrix(const double* x, int block) {
  if (block == 1) return ComplexMat::Constant(1, 1, Complex(x[0]));
  ComplexMat m(2, 2);
  m(0, 0) = x[0];
  m(0, 1) = Complex(x[1], x[2]);
  m(1, 0) = Complex(x[1], -x[2]);
  m(1, 1) = x[3];
  return m;
}

// Identity in block coordinates.
void block_identity(double scale, int block, double* x) {
  if (block == 1) {
    x[0] = scale;
    return;
  }
  x[0] = scale;
  x[1] = x[2] = 0.0;
  x[3] = scale;
}

// Add scale · v vᴴ in block coordinates.
void block_add_outer(double scale, const ComplexVec& v, int block, double* x) {
  if (block == 1) {
    x[0] += scale * std::norm(v[0]);
    return;
  }
  const Complex off = v[0] * std::conj(v[1]);
  x[0] += scale * std::norm(v[0]);
  x[1] += scale * off.real();
  x[2] += scale * off.imag();
  x[3] += scale * std::norm(v[1]);
}

HermitianCov lift(const ComplexMat& u, const ComplexMat& x, double scale) {
  ComplexMat r = scale * (u * x * u.adjoint());
  r = 0.5 * (r + r.adjoint());
  return HermitianCov::from_matrix(r);
}

}  // namespace

HermitianCov mrt_cov(double p, const ComplexVec& a) {
  if (!(p >= 0.0)) throw std::invalid_argument("MRT power must be nonnegative");
  return HermitianCov::rank_one(p, a.conjugate());
}

double max_sinr(const Scenario& sc) { return sc.p_max * sc.h.squaredNorm() / sc.sigma_c2; }

double cu_sinr(const Scenario& sc, const CovPair& cov) {
  return cov.r_c.quad_form(sc.h) / (cov.r_s.quad_form(sc.h) + sc.sigma_c2);
}

HermitianCov solve_p2(const Scenario& sc) {
  check_feasible(sc);
  const ComplexVec a = sc.a();
  const ComplexVec a_conj = a.conjugate();
  const double mt = sc.ula.m_tx();
  const Complex ha = sc.h.dot(a_conj);  // hᴴ a*
  if (sc.p_max * std::norm(ha) >= mt * sc.gamma0 * sc.sigma_c2) return mrt_cov(sc.p_max, a);

  const double h2 = sc.h.squaredNorm();
  const ComplexVec u1 = sc.h / std::sqrt(h2);
  const Complex u1a = u1.dot(a_conj);
  const ComplexVec resid = a_conj - u1a * u1;
  if (resid.norm() <= 1e-12 * std::sqrt(mt)) {
    // a* ∥ h: only the CU direction is available.
    return HermitianCov::rank_one(sc.p_max, sc.h);
  }
  const ComplexVec u2 = resid.normalized();
  const double lam1 = sc.gamma0 * sc.sigma_c2 / h2;
  const double lam2 = sc.p_max - lam1;
  const Complex phase = std::abs(u1a) > 0.0 ? u1a / std::abs(u1a) : Complex(1.0);
  const Complex lam12 = std::sqrt(lam1 * lam2) * phase;

  ComplexMat basis(sc.ula.m_tx(), 2);
  basis.col(0) = u1;
  basis.col(1) = u2;
  ComplexMat core(2, 2);
  core << lam1, lam12, std::conj(lam12), lam2;
  return lift(basis, core, 1.0);
}

CovPair solve_p3(const Scenario& sc) {
  return {HermitianCov(sc.ula.m_tx()), mrt_cov(sc.p_max, sc.a())};
}

CovPair inner_solve_p4k(const Scenario& sc, const HermitianCov& linearization_point) {
  check_feasible(sc);
  if (linearization_point.dim() != sc.ula.m_tx()) {
    throw std::invalid_argument("linearization point has the wrong dimension");
  }
  const ComplexVec a_conj = sc.a().conjugate();
  const double mt = sc.ula.m_tx();
  const double p = sc.p_max;
  const double kappa = std::norm(sc.alpha) * sc.ula.m_rx() / sc.sigma_s2;
  const double rho_k = target_quad(sc, linearization_point);
  // d f₂/dρ_c = −‖ḃ‖²/(1 + κρ_k)², so the ρ_c weight relative to ρ_s is:
  const double w = 1.0 - 1.0 / ((1.0 + kappa * rho_k) * (1.0 + kappa * rho_k));

  const ComplexMat u = target_cu_basis(a_conj, sc.h);
  const int r = static_cast<int>(u.cols());
  const int block = r == 1 ? 1 : 4;
  const ComplexVec a_hat = u.adjoint() * a_conj / std::sqrt(mt);
  const double h_norm = sc.h.norm();
  const bool sinr_active = sc.gamma0 > 0.0;

  // Variables [X_c, X_s] in units of P.
  detail::SmallSdp prob;
  prob.block_sizes = {block, block};
  prob.c.setZero(2 * block);
  Eigen::RowVectorXd row(block);
  quad_coeffs(a_hat, row);
  prob.c.segment(0, block) = w * row.transpose();
  prob.c.segment(block, block) = row.transpose();

  const int n_ineq = sinr_active ? 2 : 1;
  prob.G.setZero(n_ineq, 2 * block);
  prob.g.setZero(n_ineq);
  trace_coeffs(block, row);
  prob.G.block(0, 0, 1, block) = row;
  prob.G.block(0, block, 1, block) = row;
  prob.g[0] = 1.0;
  double g_sinr = 0.0;
  ComplexVec h_hat;
  if (sinr_active) {
    h_hat = u.adjoint() * sc.h / h_norm;
    g_sinr = sc.gamma0 * sc.sigma_c2 / (p * h_norm * h_norm);
    quad_coeffs(h_hat, row);
    // −(ĥᴴX_c ĥ − γ₀ ĥᴴX_s ĥ) ≤ −g
    prob.G.block(1, 0, 1, block) = -row;
    prob.G.block(1, block, 1, block) = sc.gamma0 * row;
    prob.g[1] = -g_sinr;
  }

  // Strictly feasible start: X_c = τ ĥĥᴴ + δI, X_s = δI.
  const int rank = block == 1 ? 1 : 2;
  const double delta = (1.0 - g_sinr) / (4.0 * (sc.gamma0 + 2.0 * rank));
  const double tau = g_sinr + sc.gamma0 * delta + (1.0 - g_sinr) / 4.0;
  Eigen::VectorXd z0(2 * block);
  block_identity(delta, block, z0.data());
  block_identity(delta, block, z0.data() + block);
  if (sinr_active) {
    block_add_outer(tau, h_hat, block, z0.data());
  } else {
    block_add_outer(tau, a_hat.normalized(), block, z0.data());
  }
  if (!detail::strictly_feasible(prob, z0)) {
    throw InfeasibleError("SINR constraint has no interior at this threshold", sc.gamma0,
                          max_sinr(sc));
  }

  const detail::BarrierResult sol = detail::solve_barrier(prob, z0);
  CovPair out{lift(u, block_matrix(sol.z.data(), block), p),
              lift(u, block_matrix(sol.z.data() + block, block), p)};
  return out;
}

P4Solution solve_p4(const Scenario& sc, const ScaOptions& opts) {
  check_feasible(sc);
  P4Solution sol;
  sol.cov = CovPair{solve_p2(sc), HermitianCov(sc.ula.m_tx())};
  double f = super_objective(sc, sol.cov.r_c, sol.cov.r_s);
  sol.trace.objectives.push_back(f);

  for (int k = 1; k <= opts.max_iterations; ++k) {
    CovPair next;
    try {
      next = inner_solve_p4k(sc, sol.cov.r_c);
    } catch (const SolverError& e) {
      throw SolverError(fmt::format("SCA iteration {}: {}", k, e.what()), k, e.gap());
    }
    const double f_next = super_objective(sc, next.r_c, next.r_s);
    sol.trace.iterations = k;
    if (f_next <= f) {
      // Inexact inner solve landed at or below the current point: stationary.
      sol.trace.objectives.push_back(f);
      sol.trace.converged = true;
      break;
    }
    sol.cov = std::move(next);
    sol.trace.objectives.push_back(f_next);
    const bool done = f_next - f <= opts.rel_tol * f_next;
    f = f_next;
    if (done) {
      sol.trace.converged = true;
      break;
    }
  }
  return sol;
}

CovPair power_splitting(const Scenario& sc) {
  check_feasible(sc);
  const ComplexVec a = sc.a();
  const double h2 = sc.h.squaredNorm();
  // hᴴ(MRT at unit power)h = |hᴴa*|²/M_t
  const double leak = std::norm(sc.h.dot(a.conjugate())) / sc.ula.m_tx();
  const double p = sc.p_max;
  double p_c = h2 > 0.0 ? sc.gamma0 * (p * leak + sc.sigma_c2) / (h2 + sc.gamma0 * leak) : 0.0;
  p_c = std::clamp(p_c, 0.0, p);
  return {p_c > 0.0 ? HermitianCov::rank_one(p_c, sc.h) : HermitianCov(sc.ula.m_tx()),
          mrt_cov(p - p_c, a)};
}

}  // namespace isac
