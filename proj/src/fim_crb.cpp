#include "isac/fim_crb.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace isac {
namespace {

void check_dim(const Scenario& sc, const HermitianCov& r, const char* name) {
  if (r.dim() != sc.ula.m_tx()) {
    throw std::invalid_argument(
        fmt::format("{} has dimension {}, expected {}", name, r.dim(), sc.ula.m_tx()));
  }
}

double alpha2(const Scenario& sc) { return std::norm(sc.alpha); }

// Common factor 3λ² / (2Tπ²d²cos²θ (M_r−1)M_r(M_r+1)) of the closed-form minima,
// i.e. 1 / (2T‖ḃ‖²).
double geometry_factor(const Scenario& sc) {
  const auto& u = sc.ula;
  const double c = std::cos(sc.theta.value);
  const double mr = u.m_rx();
  return 3.0 * u.wavelength() * u.wavelength() /
         (2.0 * sc.t_symbols * std::numbers::pi * std::numbers::pi * u.spacing() * u.spacing() *
          c * c * (mr - 1.0) * mr * (mr + 1.0));
}

}  // namespace

double target_quad(const Scenario& sc, const HermitianCov& r) {
  check_dim(sc, r, "covariance");
  const ComplexVec a_conj = sc.a().conjugate();
  const Complex q = a_conj.dot(r.matrix() * a_conj);
  const double scale = std::max(r.matrix().cwiseAbs().sum(), 1e-300) * a_conj.squaredNorm();
  if (std::abs(q.imag()) > 1e-12 * scale) {
    throw NumericalError("quadratic form aT R a* has a non-negligible imaginary part");
  }
  return std::max(q.real(), 0.0);
}

double gamma_ran(const Scenario& sc, const HermitianCov& r_c) {
  return alpha2(sc) * target_quad(sc, r_c) * sc.b().squaredNorm() / sc.sigma_s2;
}

FimGaussian fim_gaussian(const Scenario& sc, const HermitianCov& r_c) {
  const double rho = target_quad(sc, r_c);
  const double a2 = alpha2(sc);
  const double bn2 = sc.b().squaredNorm();
  const double bdn2 = sc.b_dot().squaredNorm();
  const double g = a2 * rho * bn2 / sc.sigma_s2;
  const double s4 = sc.sigma_s2 * sc.sigma_s2;
  const double t = sc.t_symbols;

  FimGaussian f;
  f.f_tt = 2.0 * t * a2 * a2 * rho * rho * bdn2 * bn2 / (s4 * (1.0 + g));
  f.f_ta = 0.0;
  f.f_aa = 4.0 * t * a2 * rho * rho * bn2 * bn2 / (s4 * (1.0 + g) * (1.0 + g));
  return f;
}

double crb_gaussian(const Scenario& sc, const HermitianCov& r_c) {
  const double rho = target_quad(sc, r_c);
  const double a2 = alpha2(sc);
  if (rho <= 0.0 || a2 <= 0.0) {
    throw UnobservableError("no power reaches the target; Gaussian CRB is unbounded");
  }
  const double bn2 = sc.b().squaredNorm();
  const double bdn2 = sc.b_dot().squaredNorm();
  if (bdn2 <= 0.0) throw UnobservableError("steering derivative vanishes at |theta| = pi/2");
  return sc.sigma_s2 / (2.0 * sc.t_symbols * a2 * rho * bdn2) *
         (1.0 + sc.sigma_s2 / (a2 * rho * bn2));
}

double crb_deterministic(const Scenario& sc, const HermitianCov& r_s) {
  const double rho = target_quad(sc, r_s);
  const double a2 = alpha2(sc);
  if (rho <= 0.0 || a2 <= 0.0) {
    throw UnobservableError("no power reaches the target; deterministic CRB is unbounded");
  }
  const double bdn2 = sc.b_dot().squaredNorm();
  if (bdn2 <= 0.0) throw UnobservableError("steering derivative vanishes at |theta| = pi/2");
  return sc.sigma_s2 / (2.0 * sc.t_symbols * a2 * rho * bdn2);
}

FimSuper fim_super(const Scenario& sc, const HermitianCov& r_c, const HermitianCov& r_s) {
  const double rho_c = target_quad(sc, r_c);
  const double rho_s = target_quad(sc, r_s);
  const double a2 = alpha2(sc);
  const double bn2 = sc.b().squaredNorm();
  const double bdn2 = sc.b_dot().squaredNorm();
  const double g = a2 * rho_c * bn2 / sc.sigma_s2;
  const double s2 = sc.sigma_s2;
  const double s4 = s2 * s2;
  const double t = sc.t_symbols;

  FimSuper f;
  f.f_tt = 2.0 * t * a2 * a2 * rho_c * rho_c * bdn2 * bn2 / (s4 * (1.0 + g)) +
           2.0 * t * a2 * rho_s * bdn2 / s2;
  const Eigen::Vector2d alpha_vec(sc.alpha.real(), sc.alpha.imag());
  f.f_aa = 4.0 * t * rho_c * rho_c * bn2 * bn2 / (s4 * (1.0 + g) * (1.0 + g)) *
               (alpha_vec * alpha_vec.transpose()) +
           2.0 * t * rho_s * bn2 / (s2 * (1.0 + g)) * Eigen::Matrix2d::Identity();
  return f;
}

double super_objective(const Scenario& sc, const HermitianCov& r_c, const HermitianCov& r_s) {
  const double rho_c = target_quad(sc, r_c);
  const double rho_s = target_quad(sc, r_s);
  const double g = alpha2(sc) * rho_c * sc.b().squaredNorm() / sc.sigma_s2;
  const double bdn2 = sc.b_dot().squaredNorm();
  return rho_s * bdn2 + g / (1.0 + g) * rho_c * bdn2;
}

double crb_super(const Scenario& sc, const HermitianCov& r_c, const HermitianCov& r_s) {
  const double f = super_objective(sc, r_c, r_s);
  const double a2 = alpha2(sc);
  if (f <= 0.0 || a2 <= 0.0) {
    throw UnobservableError("no power reaches the target; superposed CRB is unbounded");
  }
  return sc.sigma_s2 / (2.0 * sc.t_symbols * a2 * f);
}

CrbReport crb_report(const Scenario& sc, const HermitianCov& r_c, const HermitianCov& r_s) {
  const HermitianCov total = r_c + r_s;
  CrbReport rep;
  rep.crb_gaussian = crb_gaussian(sc, total);
  rep.crb_deterministic = crb_deterministic(sc, total);
  rep.crb_super = crb_super(sc, r_c, r_s);
  rep.gamma_ran = gamma_ran(sc, total);
  return rep;
}

MinCrbs crb_min_closed_forms(const Scenario& sc) {
  const double a2 = alpha2(sc);
  const double p = sc.p_max;
  const double mt = sc.ula.m_tx();
  const double mr = sc.ula.m_rx();
  MinCrbs out;
  out.deterministic = sc.sigma_s2 * geometry_factor(sc) / (p * a2 * mt);
  out.gaussian = out.deterministic * (1.0 + sc.sigma_s2 / (p * a2 * mt * mr));
  out.super = out.deterministic;
  return out;
}

double sinr_geometry_gain(const Scenario& sc, SinrGainForm form) {
  const double h2 = sc.h.squaredNorm();
  const double mt = sc.ula.m_tx();
  const Complex ha = sc.h.dot(sc.a().conjugate());
  const double c = std::norm(ha) / h2;  // |u₁ᴴa*|²
  const double lam1 = sc.gamma0 * sc.sigma_c2 / h2;
  const double lam2 = sc.p_max - lam1;
  const double first = std::sqrt(sc.gamma0 * sc.sigma_c2) * std::abs(ha) / h2;
  const double rest = std::max(mt - c, 0.0);
  double second = 0.0;
  switch (form) {
    case SinrGainForm::kExact:
      second = std::sqrt(std::max(lam2, 0.0) * rest);
      break;
    case SinrGainForm::kAsPrinted:
      second = std::sqrt(lam2 * lam2 * rest * rest);
      break;
  }
  return (first + second) * (first + second);
}

double crb_sinr_gaussian_closed(const Scenario& sc, SinrGainForm form) {
  const double h2 = sc.h.squaredNorm();
  const double gamma_max = sc.p_max * h2 / sc.sigma_c2;
  if (sc.gamma0 > gamma_max) {
    throw InfeasibleError(
        fmt::format("SINR threshold {} exceeds the achievable maximum {}", sc.gamma0, gamma_max),
        sc.gamma0, gamma_max);
  }
  const double a2 = alpha2(sc);
  if (a2 <= 0.0) throw UnobservableError("zero target gain");
  const double mt = sc.ula.m_tx();
  const double mr = sc.ula.m_rx();
  const double ha2 = std::norm(sc.h.dot(sc.a().conjugate()));
  if (sc.p_max * ha2 >= mt * sc.gamma0 * sc.sigma_c2) {
    return crb_min_closed_forms(sc).gaussian;
  }
  const double e = sinr_geometry_gain(sc, form);
  if (e <= 0.0) throw UnobservableError("constrained optimum sends no power to the target");
  return sc.sigma_s2 * geometry_factor(sc) / (a2 * e) * (1.0 + sc.sigma_s2 / (a2 * mr * e));
}

}  // namespace isac
