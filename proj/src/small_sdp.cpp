#include "small_sdp.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "isac/types.hpp"

namespace isac::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double block_det(const double* x) { return x[0] * x[3] - x[1] * x[1] - x[2] * x[2]; }

int barrier_degree(const SmallSdp& p) {
  int m = static_cast<int>(p.g.size());
  for (int s : p.block_sizes) m += (s == 1) ? 1 : 2;
  return m;
}

// Barrier value −Σ log(slack) − Σ log det; +∞ outside the interior.
double barrier(const SmallSdp& p, const Eigen::VectorXd& z) {
  double v = 0.0;
  const Eigen::VectorXd slack = p.g - p.G * z;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    if (!(slack[i] > 0.0)) return kInf;
    v -= std::log(slack[i]);
  }
  int off = 0;
  for (int s : p.block_sizes) {
    const double* x = z.data() + off;
    if (s == 1) {
      if (!(x[0] > 0.0)) return kInf;
      v -= std::log(x[0]);
    } else {
      const double d = block_det(x);
      if (!(x[0] > 0.0) || !(x[3] > 0.0) || !(d > 0.0)) return kInf;
      v -= std::log(d);
    }
    off += s;
  }
  return v;
}

void barrier_derivatives(const SmallSdp& p, const Eigen::VectorXd& z, Eigen::VectorXd& grad,
                         Eigen::MatrixXd& hess) {
  const Eigen::Index n = z.size();
  grad.setZero(n);
  hess.setZero(n, n);
  const Eigen::VectorXd slack = p.g - p.G * z;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    const Eigen::VectorXd row = p.G.row(i).transpose();
    grad += row / slack[i];
    hess += row * row.transpose() / (slack[i] * slack[i]);
  }
  int off = 0;
  for (int s : p.block_sizes) {
    const double* x = z.data() + off;
    if (s == 1) {
      grad[off] -= 1.0 / x[0];
      hess(off, off) += 1.0 / (x[0] * x[0]);
    } else {
      const double d = block_det(x);
      const Eigen::Vector4d dd(x[3], -2.0 * x[1], -2.0 * x[2], x[0]);
      Eigen::Matrix4d d2 = Eigen::Matrix4d::Zero();
      d2(0, 3) = d2(3, 0) = 1.0;
      d2(1, 1) = d2(2, 2) = -2.0;
      grad.segment<4>(off) -= dd / d;
      hess.block<4, 4>(off, off) += dd * dd.transpose() / (d * d) - d2 / d;
    }
    off += s;
  }
}

}  // namespace

bool strictly_feasible(const SmallSdp& problem, const Eigen::VectorXd& z) {
  return std::isfinite(barrier(problem, z));
}

BarrierResult solve_barrier(const SmallSdp& p, const Eigen::VectorXd& z0,
                            const BarrierOptions& opts) {
  if (!strictly_feasible(p, z0)) {
    throw SolverError("barrier method needs a strictly feasible starting point", 0, kInf);
  }
  const int m = barrier_degree(p);
  BarrierResult res;
  res.z = z0;
  double t = opts.t_initial;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  for (;;) {
    ++res.outer_iterations;
    // Centering: minimize −t cᵀz + barrier(z).
    auto phi = [&](const Eigen::VectorXd& z) { return -t * p.c.dot(z) + barrier(p, z); };
    double phi_z = phi(res.z);
    int steps = 0;
    for (;; ++steps) {
      if (steps >= opts.max_newton_steps) {
        throw SolverError(
            fmt::format("barrier centering did not converge in {} Newton steps (t = {})", steps, t),
            res.newton_steps, static_cast<double>(m) / t);
      }
      barrier_derivatives(p, res.z, grad, hess);
      grad -= t * p.c;
      const Eigen::VectorXd dz = hess.ldlt().solve(-grad);
      const double lambda2 = -grad.dot(dz);
      if (!std::isfinite(lambda2)) {
        throw SolverError("barrier Newton system is singular", res.newton_steps,
                          static_cast<double>(m) / t);
      }
      if (lambda2 / 2.0 <= opts.newton_tol) break;

      double step = 1.0;
      Eigen::VectorXd trial = res.z + step * dz;
      double phi_trial = phi(trial);
      while (!(phi_trial <= phi_z + 0.25 * step * grad.dot(dz)) && step > 1e-14) {
        step *= 0.5;
        trial = res.z + step * dz;
        phi_trial = phi(trial);
      }
      ++res.newton_steps;
      const bool armijo = phi_trial <= phi_z + 0.25 * step * grad.dot(dz);
      if (!(phi_trial <= phi_z)) break;  // rounding floor reached; point is centered
      const double decrease = phi_z - phi_trial;
      res.z = trial;
      phi_z = phi_trial;
      if (!armijo || decrease <= 1e-15 * std::max(1.0, std::abs(phi_z))) break;
    }

    res.objective = p.c.dot(res.z);
    res.gap = static_cast<double>(m) / t;
    if (res.gap <= opts.gap_tol * std::max(std::abs(res.objective), opts.gap_floor)) break;
    t *= opts.mu;
  }
  return res;
}

}  // namespace isac::detail
