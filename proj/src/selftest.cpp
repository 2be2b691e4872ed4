#include "isac/selftest.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "isac/beamform_opt.hpp"
#include "isac/fim_crb.hpp"
#include "isac/rng.hpp"

namespace isac {
namespace {

Scenario sample_scenario() {
  Scenario sc;
  sc.ula = UlaConfig::half_wavelength(8, 8);
  sc.theta = Radians(0.3);
  sc.phi = Radians(-0.2);
  sc.alpha = Complex(0.6, -0.3);
  Rng rng(2024);
  sc.h.resize(8);
  for (auto& z : sc.h) z = draw_cn(rng);
  sc.p_max = 2.0;
  sc.sigma_c2 = 0.5;
  sc.sigma_s2 = 1.5;
  sc.t_symbols = 16;
  sc.gamma0 = 0.8 * max_sinr(sc);
  return sc;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

bool run_selftest(std::ostream& log) {
  const Scenario sc = sample_scenario();
  struct Check {
    std::string name;
    std::function<bool()> run;
  };
  const std::vector<Check> checks = {
      {"steering derivative orthogonal to steering vector",
       [&] {
         const ComplexVec b = sc.b();
         const ComplexVec bd = sc.b_dot();
         return std::abs(b.dot(bd)) < 1e-12 * b.norm() * bd.norm() &&
                rel(bd.squaredNorm(), steering_rx_deriv_norm2(sc.ula, sc.theta)) < 1e-12;
       }},
      {"MRT Gaussian CRB equals closed-form minimum",
       [&] {
         return rel(crb_gaussian(sc, mrt_cov(sc.p_max, sc.a())),
                    crb_min_closed_forms(sc).gaussian) < 1e-10;
       }},
      {"CRB ordering deterministic <= superposed <= Gaussian",
       [&] {
         const HermitianCov total = mrt_cov(sc.p_max, sc.a());
         const double d = crb_deterministic(sc, total);
         const double s = crb_super(sc, total.scaled(0.3), total.scaled(0.7));
         const double g = crb_gaussian(sc, total);
         return d <= s * (1 + 1e-12) && s <= g * (1 + 1e-12);
       }},
      {"constrained Gaussian design meets SINR with equality",
       [&] {
         const HermitianCov r = solve_p2(sc);
         return rel(r.quad_form(sc.h) / sc.sigma_c2, sc.gamma0) < 1e-10 &&
                rel(r.trace(), sc.p_max) < 1e-10;
       }},
      {"closed-form constrained CRB matches the optimizer",
       [&] { return rel(crb_sinr_gaussian_closed(sc), crb_gaussian(sc, solve_p2(sc))) < 1e-8; }},
      {"SCA objective is non-decreasing",
       [&] {
         const P4Solution sol = solve_p4(sc);
         const auto& f = sol.trace.objectives;
         for (std::size_t i = 1; i < f.size(); ++i) {
           if (f[i] < f[i - 1] * (1 - 1e-9)) return false;
         }
         return sol.trace.converged;
       }},
  };

  bool ok = true;
  for (const auto& c : checks) {
    bool pass = false;
    try {
      pass = c.run();
    } catch (const std::exception& e) {
      log << fmt::format("error: {}\n", e.what());
    }
    log << fmt::format("[{}] {}\n", pass ? "PASS" : "FAIL", c.name);
    ok = ok && pass;
  }
  return ok;
}

}  // namespace isac
