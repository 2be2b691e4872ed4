#pragma once

#include <vector>

#include "isac/channel.hpp"
#include "isac/hermitian.hpp"

namespace isac {

/// Information (Gaussian) and sensing (deterministic) covariances sharing one
/// power budget.
struct CovPair {
  HermitianCov r_c;
  HermitianCov r_s;

  double total_trace() const { return r_c.trace() + r_s.trace(); }
};

struct ScaOptions {
  int max_iterations = 100;
  double rel_tol = 1e-8;
};

struct ScaTrace {
  std::vector<double> objectives;  ///< f(R_c, R_s) at the start point and after each iteration
  int iterations = 0;
  bool converged = false;
};

struct P4Solution {
  CovPair cov;
  ScaTrace trace;
};

/// p · a* aᵀ / ‖a‖²: maximizes aᵀR a* over trace(R) ≤ p.
HermitianCov mrt_cov(double p, const ComplexVec& a);

/// Largest feasible SINR threshold P‖h‖²/σ_c².
double max_sinr(const Scenario& sc);

/// SINR at the CU: hᴴR_c h / (hᴴR_s h + σ_c²).
double cu_sinr(const Scenario& sc, const CovPair& cov);

/// Gaussian-only design: maximize aᵀR_c a* s.t. hᴴR_c h/σ_c² ≥ γ_0,
/// trace(R_c) ≤ P. Closed-form KKT solution. Throws InfeasibleError.
HermitianCov solve_p2(const Scenario& sc);

/// Sensing-only optimum with superposed signals: R_c = 0, R_s = MRT.
CovPair solve_p3(const Scenario& sc);

/// One convex subproblem of the SCA loop, linearized at `linearization_point`
/// (an R_c). Solved on span{a*, h} by a barrier method.
CovPair inner_solve_p4k(const Scenario& sc, const HermitianCov& linearization_point);

/// SINR-constrained design with superposed signals, solved by successive
/// convex approximation started from the Gaussian-only optimum. An inner
/// solution that does not improve the objective is rejected and the loop stops.
P4Solution solve_p4(const Scenario& sc, const ScaOptions& opts = {});

/// Two-beam benchmark: R_c = P_c hhᴴ/‖h‖² with the least P_c meeting γ_0
/// (deterministic beam counted as interference), R_s = (P − P_c) MRT.
CovPair power_splitting(const Scenario& sc);

}  // namespace isac
