// Command-line front end: CRB/MSE sweeps, CRB-rate tradeoff, single
// estimation runs and a self test.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "isac/config.hpp"
#include "isac/harness.hpp"
#include "isac/output.hpp"
#include "isac/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  bool heavy = false;
  int workers = 1;
};

void report_error(const char* kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

isac::RunConfig resolve_config(const CommonFlags& f) {
  isac::RunConfig cfg =
      f.config_path.empty() ? isac::paper_preset() : isac::load_config(f.config_path);
  if (!f.seed && !f.trials) return cfg;
  // Re-resolve so the echoed configuration shows the overrides.
  auto doc = nlohmann::json::parse(cfg.resolved_json);
  if (f.seed) {
    doc["sweep"]["seed"] = *f.seed;
    doc["estimate"]["seed"] = *f.seed;
  }
  if (f.trials) doc["sweep"]["trials"] = *f.trials;
  return isac::parse_config(doc.dump());
}

void emit(const std::string& text, const CommonFlags& f) {
  if (f.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(f.out_path, std::ios::binary);
  if (!out) throw isac::ConfigError(fmt::format("cannot write output file '{}'", f.out_path));
  out << text;
  if (!out) throw isac::ConfigError(fmt::format("failed writing '{}'", f.out_path));
}

std::string render_sweep(const isac::SweepResult& res, const isac::RunConfig& cfg,
                         const CommonFlags& f, const std::string& command, bool desk) {
  std::ostringstream os;
  if (f.format == "json") {
    isac::OutputMeta meta{command, cfg.sweep.seed, cfg.resolved_json,
                          desk ? "desk" : "configured"};
    isac::write_sweep_json(res, meta, os);
  } else {
    isac::write_sweep_csv(res, os);
  }
  return os.str();
}

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "Configuration file (JSON)");
  sub->add_option("--out", f.out_path, "Output file (default: stdout)");
  sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", f.seed, "Master seed override");
  sub->add_option("--trials", f.trials, "Monte Carlo trials per point");
  sub->add_flag("--heavy", f.heavy, "Run estimators at the configured array size");
  sub->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bistatic ISAC CRB analysis, beamforming and DoA estimation"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* crb = app.add_subcommand("crb-sweep", "CRB of fixed-beam schemes along an axis");
  auto* mse = app.add_subcommand("mse-sweep", "CRB and Monte Carlo estimator MSE along an axis");
  auto* tradeoff = app.add_subcommand("tradeoff", "CRB-rate boundary of designs and benchmarks");
  auto* estimate = app.add_subcommand("estimate", "One synthesize/receive/estimate run");
  auto* selftest = app.add_subcommand("selftest", "Internal consistency checks");
  for (auto* sub : {crb, mse, tradeoff, estimate}) add_common(sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (selftest->parsed()) {
      return isac::run_selftest(std::cout) ? kExitOk : kExitNumerical;
    }
    const isac::RunConfig cfg = resolve_config(flags);
    const isac::RunOptions opts{flags.workers, flags.heavy};

    if (estimate->parsed()) {
      const isac::EstimateReport rep = isac::run_estimate(cfg);
      std::ostringstream os;
      isac::write_estimate_json(rep, {"estimate", cfg.estimate.seed, cfg.resolved_json, "configured"},
                                os);
      emit(os.str(), flags);
      return kExitOk;
    }
    if (crb->parsed()) {
      emit(render_sweep(isac::run_crb_sweep(cfg.sweep, cfg.physical, opts), cfg, flags,
                        "crb-sweep", false),
           flags);
    } else if (mse->parsed()) {
      emit(render_sweep(isac::run_mse_sweep(cfg.sweep, cfg.physical, opts), cfg, flags,
                        "mse-sweep", !flags.heavy),
           flags);
    } else if (tradeoff->parsed()) {
      emit(render_sweep(isac::run_tradeoff(cfg.sweep, cfg.physical, opts), cfg, flags, "tradeoff",
                        false),
           flags);
    }
    return kExitOk;
  } catch (const isac::ConfigError& e) {
    report_error("config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    report_error("numerical", e.what());
    return kExitNumerical;
  }
}
