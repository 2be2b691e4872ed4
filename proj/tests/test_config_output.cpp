#include <filesystem>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "isac/config.hpp"
#include "isac/output.hpp"

using namespace isac;
using nlohmann::json;

TEST(Config, PresetCarriesDefaults) {
  const RunConfig cfg = paper_preset();
  const PhysicalConfig& p = cfg.physical;
  EXPECT_EQ(p.m_tx, 32);
  EXPECT_EQ(p.m_rx, 32);
  EXPECT_EQ(p.t_symbols, 1024);
  EXPECT_DOUBLE_EQ(p.p_max_dbm, 30.0);
  EXPECT_DOUBLE_EQ(p.sigma_s2_dbm, -80.0);
  EXPECT_DOUBLE_EQ(p.sigma_c2_dbm, -80.0);
  EXPECT_DOUBLE_EQ(p.d_bt_m, 200.0);
  EXPECT_DOUBLE_EQ(p.d_tr_m, 200.0);
  EXPECT_DOUBLE_EQ(p.d_bc_m, 1000.0);
  EXPECT_DOUBLE_EQ(p.path_loss.k0_db, -30.0);
  EXPECT_DOUBLE_EQ(p.path_loss.exponent, 2.5);
  EXPECT_DOUBLE_EQ(p.rician_k, 1.0);
  EXPECT_FALSE(p.alpha_gain_db.has_value());
  EXPECT_EQ(parse_config(R"({"preset": "paper-sec5"})").resolved_json, cfg.resolved_json);
}

TEST(Config, OverridesMergeIntoPreset) {
  const RunConfig cfg = parse_config(
      R"({"array": {"m_tx": 8}, "channel": {"alpha_gain_db": -120},
          "sweep": {"axis": "sensing_snr_db", "values": [-10, 0, 10], "trials": 7}})");
  EXPECT_EQ(cfg.physical.m_tx, 8);
  EXPECT_EQ(cfg.physical.m_rx, 32);
  ASSERT_TRUE(cfg.physical.alpha_gain_db.has_value());
  EXPECT_EQ(cfg.sweep.axis, SweepAxis::kSensingSnrDb);
  EXPECT_EQ(cfg.sweep.trials, 7);
  const Scenario sc = build_scenario(cfg.physical);
  EXPECT_NEAR(linear_to_db(std::norm(sc.alpha)), -120.0, 1e-9);
  EXPECT_EQ(sc.h.size(), 8);
}

TEST(Config, RejectsUnknownOrMalformedInput) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config("[]"), ConfigError);
  EXPECT_THROW(parse_config(R"({"arrays": {}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"array": {"mtx": 4}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"array": {"m_tx": "four"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"array": {"m_tx": 5}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"preset": "unknown-preset"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweep": {"values": [1, 1]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweep": {"trials": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweep": {"schemes": ["mystery"]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"power": {"sigma_s2_dbm": null}})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/isac.json"), ConfigError);
}

TEST(Config, NamesRoundTrip) {
  for (const char* name : {"power_dbm", "sensing_snr_db", "target_distance_m", "rate_bps",
                           "sinr_threshold_db"}) {
    EXPECT_EQ(axis_name(parse_axis(name)), name);
  }
  for (const char* name : {"gaussian", "deterministic", "isac", "gaussian-opt", "isac-opt",
                           "known-realization", "time-switching", "power-splitting"}) {
    EXPECT_EQ(scheme_name(parse_scheme(name)), name);
  }
  EXPECT_THROW(parse_axis("power"), ConfigError);
}

TEST(Config, ShippedConfigsParse) {
  const std::filesystem::path dir = ISAC_CONFIG_DIR;
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    ++seen;
  }
  EXPECT_GE(seen, 3);
}

namespace {

SweepResult sample_result() {
  SweepResult res;
  res.axis = SweepAxis::kRateBps;
  SweepRow a;
  a.axis_value = 1.5;
  a.scheme = Scheme::kIsacOpt;
  a.crb = 0.01;
  a.rate = 1.5;
  a.iterations = 4;
  a.gamma_ran = 10.0;
  SweepRow b;
  b.axis_value = 9.0;
  b.scheme = Scheme::kGaussianOpt;
  b.feasible = false;
  res.rows = {a, b};
  return res;
}

}  // namespace

TEST(Output, CsvIsColumnStable) {
  std::ostringstream os;
  write_sweep_csv(sample_result(), os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line,
            "axis,axis_value,scheme,feasible,crb_rad2,crb_db,mse_rad2,mse_db,rate_bps_hz,"
            "iterations,gamma_ran_db");
  std::getline(is, line);
  EXPECT_EQ(line, "rate_bps,1.5,isac-opt,1,0.01,-20,,,1.5,4,10");
  std::getline(is, line);
  EXPECT_EQ(line, "rate_bps,9,gaussian-opt,0,,,,,,,");
}

TEST(Output, JsonHasMetaAndRows) {
  std::ostringstream os;
  write_sweep_json(sample_result(), {"tradeoff", 77, paper_preset().resolved_json, "configured"},
                   os);
  const json doc = json::parse(os.str());
  EXPECT_EQ(doc["meta"]["seed"], 77);
  EXPECT_EQ(doc["meta"]["command"], "tradeoff");
  EXPECT_EQ(doc["meta"]["axis"], "rate_bps");
  EXPECT_EQ(doc["meta"]["format_version"], kOutputFormatVersion);
  EXPECT_EQ(doc["meta"]["config"]["array"]["m_tx"], 32);
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["rows"][0]["iterations"], 4);
  EXPECT_TRUE(doc["rows"][1]["crb_rad2"].is_null());
  EXPECT_FALSE(doc["rows"][1]["feasible"].get<bool>());
}
