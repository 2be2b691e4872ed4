#include "isac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "isac/fim_crb.hpp"
#include "isac/rng.hpp"

namespace isac {
namespace {

constexpr int kDeskArray = 8;
constexpr int kDeskSymbols = 64;

bool is_fixed_scheme(Scheme s) {
  return s == Scheme::kGaussian || s == Scheme::kDeterministic || s == Scheme::kIsac;
}

void require_fixed_schemes(const SweepSpec& spec) {
  for (Scheme s : spec.schemes) {
    if (!is_fixed_scheme(s)) {
      throw ConfigError(fmt::format("scheme '{}' is only available in the tradeoff sweep",
                                    scheme_name(s)));
    }
  }
}

std::optional<double> try_crb(const std::function<double()>& f) {
  try {
    return f();
  } catch (const UnobservableError&) {
    return std::nullopt;
  }
}

double rate_of(double sinr) { return std::log2(1.0 + sinr); }

PhysicalConfig desk_scale(PhysicalConfig cfg) {
  cfg.m_tx = std::min(cfg.m_tx, kDeskArray);
  cfg.m_rx = std::min(cfg.m_rx, kDeskArray);
  cfg.t_symbols = std::min(cfg.t_symbols, kDeskSymbols);
  return cfg;
}

SweepRow fixed_row(const Scenario& sc, Scheme scheme, double fraction, double axis_value) {
  SweepRow row;
  row.axis_value = axis_value;
  row.scheme = scheme;
  const CovPair cov = fixed_scheme_cov(sc, scheme, fraction);
  const HermitianCov total = cov.r_c + cov.r_s;
  row.gamma_ran = gamma_ran(sc, total);
  switch (scheme) {
    case Scheme::kGaussian:
      row.crb = try_crb([&] { return crb_gaussian(sc, cov.r_c); });
      break;
    case Scheme::kDeterministic:
      row.crb = try_crb([&] { return crb_deterministic(sc, cov.r_s); });
      break;
    default:
      row.crb = try_crb([&] { return crb_super(sc, cov.r_c, cov.r_s); });
      break;
  }
  row.feasible = row.crb.has_value();
  return row;
}

}  // namespace

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < std::min(threads, n); ++k) pool.emplace_back(worker);
  pool.clear();  // joins
  if (error) std::rethrow_exception(error);
}

PhysicalConfig apply_axis(const PhysicalConfig& base, SweepAxis axis, double value) {
  PhysicalConfig cfg = base;
  switch (axis) {
    case SweepAxis::kPowerDbm:
      cfg.p_max_dbm = value;
      break;
    case SweepAxis::kSensingSnrDb:
      break;  // applied on the scenario
    case SweepAxis::kTargetDistanceM:
      cfg.d_tr_m = value;
      break;
    case SweepAxis::kRateBps:
      cfg.sinr_threshold_db = linear_to_db(std::exp2(value) - 1.0);
      break;
    case SweepAxis::kSinrThresholdDb:
      cfg.sinr_threshold_db = value;
      break;
  }
  return cfg;
}

Scenario scenario_at(const PhysicalConfig& base, SweepAxis axis, double value) {
  Scenario sc = build_scenario(apply_axis(base, axis, value));
  if (axis == SweepAxis::kSensingSnrDb) {
    const double snr = db_to_linear(value);
    sc.sigma_s2 = std::norm(sc.alpha) * sc.p_max * sc.ula.m_tx() * sc.ula.m_rx() / snr;
  }
  if (axis == SweepAxis::kRateBps && value <= 0.0) sc.gamma0 = 0.0;
  return sc;
}

CovPair fixed_scheme_cov(const Scenario& sc, Scheme scheme, double gaussian_fraction) {
  const ComplexVec a = sc.a();
  const int m = sc.ula.m_tx();
  switch (scheme) {
    case Scheme::kGaussian:
      return {mrt_cov(sc.p_max, a), HermitianCov(m)};
    case Scheme::kDeterministic:
      return {HermitianCov(m), mrt_cov(sc.p_max, a)};
    case Scheme::kIsac:
      return {mrt_cov(gaussian_fraction * sc.p_max, a),
              mrt_cov((1.0 - gaussian_fraction) * sc.p_max, a)};
    default:
      throw ConfigError(fmt::format("'{}' is not a fixed-beam scheme", scheme_name(scheme)));
  }
}

SweepResult run_crb_sweep(const SweepSpec& spec, const PhysicalConfig& base,
                          const RunOptions& opts) {
  spec.validate();
  require_fixed_schemes(spec);
  const std::size_t ns = spec.schemes.size();
  SweepResult res;
  res.axis = spec.axis;
  res.rows.resize(spec.values.size() * ns);
  parallel_for(res.rows.size(), opts.workers, [&](std::size_t k) {
    const double v = spec.values[k / ns];
    const Scenario sc = scenario_at(base, spec.axis, v);
    res.rows[k] = fixed_row(sc, spec.schemes[k % ns], spec.gaussian_fraction, v);
  });
  return res;
}

double estimator_squared_error(const Scenario& sc, const CovPair& cov, bool superposed,
                               std::uint64_t trial_seed, const GridSpec& grid) {
  if (superposed) {
    const TxRealization tx = synth_superposed(sc, cov.r_c, cov.r_s, trial_seed);
    const RxBlock rx = receive(sc, tx, trial_seed);
    const EstimateResult est = mle_super(rx, sc, cov.r_c, cov.r_s, tx, grid);
    const double e = est.theta_hat.value - sc.theta.value;
    return e * e;
  }
  const TxRealization tx = synth_gaussian(sc, cov.r_c, trial_seed);
  const RxBlock rx = receive(sc, tx, trial_seed);
  const EstimateResult est = mle_gaussian(rx, sc, cov.r_c, grid);
  const double e = est.theta_hat.value - sc.theta.value;
  return e * e;
}

SweepResult run_mse_sweep(const SweepSpec& spec, const PhysicalConfig& base,
                          const RunOptions& opts) {
  spec.validate();
  require_fixed_schemes(spec);
  const PhysicalConfig cfg = opts.heavy ? base : desk_scale(base);
  const std::size_t ns = spec.schemes.size();
  const std::size_t points = spec.values.size() * ns;
  const auto trials = static_cast<std::size_t>(spec.trials);

  std::vector<Scenario> scenarios;
  for (double v : spec.values) scenarios.push_back(scenario_at(cfg, spec.axis, v));

  SweepResult res;
  res.axis = spec.axis;
  res.rows.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    res.rows[k] = fixed_row(scenarios[k / ns], spec.schemes[k % ns], spec.gaussian_fraction,
                            spec.values[k / ns]);
  }

  std::vector<double> sq_err(points * trials, 0.0);
  parallel_for(sq_err.size(), opts.workers, [&](std::size_t idx) {
    const std::size_t k = idx / trials;
    const std::size_t trial = idx % trials;
    if (!res.rows[k].feasible) return;
    const Scenario& sc = scenarios[k / ns];
    const Scheme scheme = spec.schemes[k % ns];
    const CovPair cov = fixed_scheme_cov(sc, scheme, spec.gaussian_fraction);
    const std::uint64_t seed = stream_seed(stream_seed(spec.seed, k), trial);
    sq_err[idx] = estimator_squared_error(sc, cov, scheme != Scheme::kGaussian, seed);
  });
  for (std::size_t k = 0; k < points; ++k) {
    if (!res.rows[k].feasible) continue;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) sum += sq_err[k * trials + t];
    res.rows[k].mse = sum / static_cast<double>(trials);
  }
  return res;
}

std::optional<double> time_switching_crb(const Scenario& sc, double rate_target) {
  const double r_max = rate_of(sc.p_max * sc.h.squaredNorm() / sc.sigma_c2);
  const double comm_share = std::max(rate_target, 0.0) / r_max;
  if (!(comm_share < 1.0)) return std::nullopt;
  const double sensing_share = 1.0 - comm_share;
  const HermitianCov r_s = mrt_cov(sc.p_max, sc.a());
  return try_crb([&] { return crb_deterministic(sc, r_s) / sensing_share; });
}

SweepResult run_tradeoff(const SweepSpec& spec, const PhysicalConfig& base,
                         const RunOptions& opts) {
  spec.validate();
  if (spec.axis != SweepAxis::kRateBps && spec.axis != SweepAxis::kSinrThresholdDb) {
    throw ConfigError("tradeoff needs a rate_bps or sinr_threshold_db axis");
  }
  for (Scheme s : spec.schemes) {
    if (is_fixed_scheme(s)) {
      throw ConfigError(fmt::format("scheme '{}' is not a tradeoff scheme", scheme_name(s)));
    }
  }
  const std::size_t ns = spec.schemes.size();
  SweepResult res;
  res.axis = spec.axis;
  res.rows.resize(spec.values.size() * ns);
  parallel_for(res.rows.size(), opts.workers, [&](std::size_t k) {
    const double v = spec.values[k / ns];
    const Scheme scheme = spec.schemes[k % ns];
    const Scenario sc = scenario_at(base, spec.axis, v);
    SweepRow row;
    row.axis_value = v;
    row.scheme = scheme;
    try {
      switch (scheme) {
        case Scheme::kGaussianOpt: {
          const HermitianCov r = solve_p2(sc);
          row.crb = crb_gaussian(sc, r);
          row.rate = rate_of(r.quad_form(sc.h) / sc.sigma_c2);
          row.gamma_ran = gamma_ran(sc, r);
          break;
        }
        case Scheme::kKnownRealization: {
          const HermitianCov r = solve_p2(sc);
          row.crb = crb_deterministic(sc, r);
          row.rate = rate_of(r.quad_form(sc.h) / sc.sigma_c2);
          row.gamma_ran = gamma_ran(sc, r);
          break;
        }
        case Scheme::kIsacOpt: {
          const P4Solution sol = solve_p4(sc);
          row.crb = crb_super(sc, sol.cov.r_c, sol.cov.r_s);
          row.rate = rate_of(cu_sinr(sc, sol.cov));
          row.iterations = sol.trace.iterations;
          row.gamma_ran = gamma_ran(sc, sol.cov.r_c + sol.cov.r_s);
          break;
        }
        case Scheme::kPowerSplitting: {
          const CovPair cov = power_splitting(sc);
          row.crb = crb_super(sc, cov.r_c, cov.r_s);
          row.rate = rate_of(cu_sinr(sc, cov));
          row.gamma_ran = gamma_ran(sc, cov.r_c + cov.r_s);
          break;
        }
        case Scheme::kTimeSwitching: {
          const double target = spec.axis == SweepAxis::kRateBps ? v : rate_of(sc.gamma0);
          row.crb = time_switching_crb(sc, target);
          if (row.crb) row.rate = std::max(target, 0.0);
          break;
        }
        default:
          break;
      }
    } catch (const InfeasibleError&) {
      row.crb.reset();
    } catch (const UnobservableError&) {
      row.crb.reset();
    }
    row.feasible = row.crb.has_value();
    res.rows[k] = row;
  });
  return res;
}

EstimateReport run_estimate(const RunConfig& cfg) {
  const Scenario sc = build_scenario(cfg.physical);
  const EstimateSpec& es = cfg.estimate;
  const ComplexVec a = sc.a();
  CovPair cov = es.superposed
                    ? CovPair{mrt_cov(es.gaussian_fraction * sc.p_max, a),
                              mrt_cov((1.0 - es.gaussian_fraction) * sc.p_max, a)}
                    : CovPair{mrt_cov(sc.p_max, a), HermitianCov(sc.ula.m_tx())};
  GridSpec grid;
  grid.keep_curve = es.keep_curve;

  EstimateReport rep;
  rep.superposed = es.superposed;
  rep.theta_true = sc.theta;
  rep.alpha_true = sc.alpha;
  if (es.superposed) {
    const TxRealization tx = synth_superposed(sc, cov.r_c, cov.r_s, es.seed);
    const RxBlock rx = receive(sc, tx, es.seed);
    rep.result = mle_super(rx, sc, cov.r_c, cov.r_s, tx, grid);
    rep.crb = crb_super(sc, cov.r_c, cov.r_s);
  } else {
    const TxRealization tx = synth_gaussian(sc, cov.r_c, es.seed);
    const RxBlock rx = receive(sc, tx, es.seed);
    rep.result = mle_gaussian(rx, sc, cov.r_c, grid);
    rep.crb = crb_gaussian(sc, cov.r_c);
  }
  return rep;
}

}  // namespace isac
