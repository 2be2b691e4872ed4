#pragma once

#include <vector>

#include <Eigen/Dense>

namespace isac::detail {

/// Linear program over a product of tiny Hermitian PSD cones:
///
///   maximize cᵀz  s.t.  G z ≤ g,  each cone block of z is PSD.
///
/// A block of size 1 is a nonnegative scalar x. A block of size 4 holds the
/// 2×2 Hermitian matrix [[x0, x1 + j x2], [x1 − j x2, x3]].
struct SmallSdp {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  std::vector<int> block_sizes;  // each 1 or 4, summing to c.size()
};

struct BarrierOptions {
  double t_initial = 1.0;
  double mu = 10.0;
  double newton_tol = 1e-10;    ///< on λ²/2
  double gap_tol = 1e-12;       ///< relative to max(|cᵀz|, gap_floor)
  double gap_floor = 1e-3;
  int max_newton_steps = 200;   ///< per centering
};

struct BarrierResult {
  Eigen::VectorXd z;
  double objective = 0.0;
  double gap = 0.0;
  int newton_steps = 0;
  int outer_iterations = 0;
};

/// Log-barrier interior point method with damped Newton centering and
/// backtracking line search. `z0` must be strictly feasible. Throws
/// SolverError when a centering step fails to converge.
BarrierResult solve_barrier(const SmallSdp& problem, const Eigen::VectorXd& z0,
                            const BarrierOptions& opts = {});

/// True when z lies strictly inside every cone and inequality.
bool strictly_feasible(const SmallSdp& problem, const Eigen::VectorXd& z);

}  // namespace isac::detail
