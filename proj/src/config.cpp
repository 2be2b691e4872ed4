#include "isac/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace isac {
namespace {

using nlohmann::json;

// Defaults of the "paper-sec5" preset.
const char* const kPresetJson = R"({
  "array": {"m_tx": 32, "m_rx": 32, "spacing": 0.5, "wavelength": 1.0},
  "geometry": {"theta_deg": 0.0, "phi_deg": 0.0, "cu_los_deg": 30.0,
               "d_bt_m": 200.0, "d_tr_m": 200.0, "d_bc_m": 1000.0},
  "path_loss": {"k0_db": -30.0, "d0_m": 1.0, "exponent": 2.5},
  "channel": {"rician_k": 1.0, "beta_re": 1.0, "beta_im": 0.0, "seed": 1, "alpha_gain_db": null},
  "power": {"p_max_dbm": 30.0, "sigma_c2_dbm": -80.0, "sigma_s2_dbm": -80.0},
  "signal": {"t_symbols": 1024, "sinr_threshold_db": null},
  "sweep": {"axis": "power_dbm", "values": [-10.0, 0.0, 10.0, 20.0, 30.0, 40.0],
            "trials": 100, "schemes": ["gaussian", "deterministic", "isac"],
            "seed": 1, "gaussian_fraction": 0.1},
  "estimate": {"mode": "superposed", "gaussian_fraction": 0.5, "seed": 1, "keep_curve": false}
})";

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"array", {"m_tx", "m_rx", "spacing", "wavelength"}},
      {"geometry", {"theta_deg", "phi_deg", "cu_los_deg", "d_bt_m", "d_tr_m", "d_bc_m"}},
      {"path_loss", {"k0_db", "d0_m", "exponent"}},
      {"channel", {"rician_k", "beta_re", "beta_im", "seed", "alpha_gain_db"}},
      {"power", {"p_max_dbm", "sigma_c2_dbm", "sigma_s2_dbm"}},
      {"signal", {"t_symbols", "sinr_threshold_db"}},
      {"sweep", {"axis", "values", "trials", "schemes", "seed", "gaussian_fraction"}},
      {"estimate", {"mode", "gaussian_fraction", "seed", "keep_curve"}},
  };
  return keys;
}

void check_keys(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [section, body] : doc.items()) {
    if (section == "preset") continue;
    auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError(fmt::format("unknown section '{}'", section));
    if (!body.is_object()) throw ConfigError(fmt::format("section '{}' must be an object", section));
    for (const auto& [key, value] : body.items()) {
      if (!it->second.contains(key)) {
        throw ConfigError(fmt::format("unknown key '{}.{}'", section, key));
      }
    }
  }
}

template <typename T>
T get(const json& doc, const char* section, const char* key) {
  try {
    return doc.at(section).at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad value for '{}.{}': {}", section, key, e.what()));
  }
}

std::optional<double> get_optional(const json& doc, const char* section, const char* key) {
  const json& v = doc.at(section).at(key);
  if (v.is_null()) return std::nullopt;
  return get<double>(doc, section, key);
}

RunConfig from_resolved(const json& doc) {
  RunConfig rc;
  PhysicalConfig& p = rc.physical;
  p.m_tx = get<int>(doc, "array", "m_tx");
  p.m_rx = get<int>(doc, "array", "m_rx");
  p.spacing = get<double>(doc, "array", "spacing");
  p.wavelength = get<double>(doc, "array", "wavelength");
  p.theta_deg = get<double>(doc, "geometry", "theta_deg");
  p.phi_deg = get<double>(doc, "geometry", "phi_deg");
  p.cu_los_deg = get<double>(doc, "geometry", "cu_los_deg");
  p.d_bt_m = get<double>(doc, "geometry", "d_bt_m");
  p.d_tr_m = get<double>(doc, "geometry", "d_tr_m");
  p.d_bc_m = get<double>(doc, "geometry", "d_bc_m");
  p.path_loss.k0_db = get<double>(doc, "path_loss", "k0_db");
  p.path_loss.d0 = get<double>(doc, "path_loss", "d0_m");
  p.path_loss.exponent = get<double>(doc, "path_loss", "exponent");
  p.rician_k = get<double>(doc, "channel", "rician_k");
  p.beta = Complex(get<double>(doc, "channel", "beta_re"), get<double>(doc, "channel", "beta_im"));
  p.channel_seed = get<std::uint64_t>(doc, "channel", "seed");
  p.alpha_gain_db = get_optional(doc, "channel", "alpha_gain_db");
  p.p_max_dbm = get<double>(doc, "power", "p_max_dbm");
  p.sigma_c2_dbm = get<double>(doc, "power", "sigma_c2_dbm");
  p.sigma_s2_dbm = get<double>(doc, "power", "sigma_s2_dbm");
  p.t_symbols = get<int>(doc, "signal", "t_symbols");
  p.sinr_threshold_db = get_optional(doc, "signal", "sinr_threshold_db");

  SweepSpec& s = rc.sweep;
  s.axis = parse_axis(get<std::string>(doc, "sweep", "axis"));
  s.values = get<std::vector<double>>(doc, "sweep", "values");
  s.trials = get<int>(doc, "sweep", "trials");
  s.schemes.clear();
  for (const auto& name : get<std::vector<std::string>>(doc, "sweep", "schemes")) {
    s.schemes.push_back(parse_scheme(name));
  }
  s.seed = get<std::uint64_t>(doc, "sweep", "seed");
  s.gaussian_fraction = get<double>(doc, "sweep", "gaussian_fraction");

  EstimateSpec& e = rc.estimate;
  const auto mode = get<std::string>(doc, "estimate", "mode");
  if (mode != "superposed" && mode != "gaussian") {
    throw ConfigError(fmt::format("estimate.mode must be 'gaussian' or 'superposed', got '{}'", mode));
  }
  e.superposed = mode == "superposed";
  e.gaussian_fraction = get<double>(doc, "estimate", "gaussian_fraction");
  e.seed = get<std::uint64_t>(doc, "estimate", "seed");
  e.keep_curve = get<bool>(doc, "estimate", "keep_curve");

  s.validate();
  if (!(s.gaussian_fraction >= 0.0 && s.gaussian_fraction <= 1.0) ||
      !(e.gaussian_fraction >= 0.0 && e.gaussian_fraction <= 1.0)) {
    throw ConfigError("gaussian_fraction must lie in [0, 1]");
  }
  // Surface physical errors (odd arrays, bad distances) at load time.
  build_scenario(p).validate();
  rc.resolved_json = doc.dump();
  return rc;
}

}  // namespace

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep needs at least one axis value");
  if (trials < 1) throw ConfigError("sweep trials must be >= 1");
  if (schemes.empty()) throw ConfigError("sweep needs at least one scheme");
  if (values.size() > 1) {
    const bool up = values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
        throw ConfigError("sweep values must be strictly monotone");
      }
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
  }
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kPowerDbm: return "power_dbm";
    case SweepAxis::kSensingSnrDb: return "sensing_snr_db";
    case SweepAxis::kTargetDistanceM: return "target_distance_m";
    case SweepAxis::kRateBps: return "rate_bps";
    case SweepAxis::kSinrThresholdDb: return "sinr_threshold_db";
  }
  return "?";
}

SweepAxis parse_axis(const std::string& name) {
  for (auto a : {SweepAxis::kPowerDbm, SweepAxis::kSensingSnrDb, SweepAxis::kTargetDistanceM,
                 SweepAxis::kRateBps, SweepAxis::kSinrThresholdDb}) {
    if (axis_name(a) == name) return a;
  }
  throw ConfigError(fmt::format("unknown sweep axis '{}'", name));
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kGaussian: return "gaussian";
    case Scheme::kDeterministic: return "deterministic";
    case Scheme::kIsac: return "isac";
    case Scheme::kGaussianOpt: return "gaussian-opt";
    case Scheme::kIsacOpt: return "isac-opt";
    case Scheme::kKnownRealization: return "known-realization";
    case Scheme::kTimeSwitching: return "time-switching";
    case Scheme::kPowerSplitting: return "power-splitting";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  for (auto s : {Scheme::kGaussian, Scheme::kDeterministic, Scheme::kIsac, Scheme::kGaussianOpt,
                 Scheme::kIsacOpt, Scheme::kKnownRealization, Scheme::kTimeSwitching,
                 Scheme::kPowerSplitting}) {
    if (scheme_name(s) == name) return s;
  }
  throw ConfigError(fmt::format("unknown scheme '{}'", name));
}

RunConfig parse_config(const std::string& text) {
  json user;
  try {
    user = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("configuration is not valid JSON: {}", e.what()));
  }
  check_keys(user);
  if (user.contains("preset")) {
    if (!user["preset"].is_string() || user["preset"].get<std::string>() != "paper-sec5") {
      throw ConfigError("only the 'paper-sec5' preset is available");
    }
    user.erase("preset");
  }
  json doc = json::parse(kPresetJson);
  doc.merge_patch(user);
  // merge_patch deletes keys patched with null; restore optional fields.
  if (!doc["channel"].contains("alpha_gain_db")) doc["channel"]["alpha_gain_db"] = nullptr;
  if (!doc["signal"].contains("sinr_threshold_db")) doc["signal"]["sinr_threshold_db"] = nullptr;
  return from_resolved(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open configuration file '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig paper_preset() { return parse_config("{}"); }

Scenario build_scenario(const PhysicalConfig& cfg) {
  cfg.path_loss.validate();
  Scenario sc;
  sc.ula = UlaConfig(cfg.m_tx, cfg.m_rx, cfg.spacing, cfg.wavelength);
  sc.theta = from_degrees(cfg.theta_deg);
  sc.phi = from_degrees(cfg.phi_deg);
  if (cfg.alpha_gain_db) {
    const double mag = std::sqrt(db_to_linear(*cfg.alpha_gain_db));
    sc.alpha = std::abs(cfg.beta) > 0.0 ? std::polar(mag, std::arg(cfg.beta)) : Complex(0.0);
  } else {
    try {
      sc.alpha = target_gain(cfg.path_loss, cfg.d_bt_m, cfg.d_tr_m, cfg.beta);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    sc.h = rician_cu_channel(sc.ula, cfg.rician_k, from_degrees(cfg.cu_los_deg),
                             path_loss(cfg.path_loss, cfg.d_bc_m), cfg.channel_seed);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  sc.p_max = dbm_to_watts(cfg.p_max_dbm);
  sc.sigma_c2 = dbm_to_watts(cfg.sigma_c2_dbm);
  sc.sigma_s2 = dbm_to_watts(cfg.sigma_s2_dbm);
  sc.t_symbols = cfg.t_symbols;
  sc.gamma0 = cfg.sinr_threshold_db ? db_to_linear(*cfg.sinr_threshold_db) : 0.0;
  sc.validate();
  return sc;
}

}  // namespace isac
