#include "isac/output.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

namespace isac {
namespace {

using nlohmann::json;

std::string num(std::optional<double> v) { return v ? fmt::format("{}", *v) : std::string(); }

std::string db(std::optional<double> v) {
  return v && *v > 0.0 ? fmt::format("{}", linear_to_db(*v)) : std::string();
}

json opt(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json opt_db(std::optional<double> v) {
  return v && *v > 0.0 ? json(linear_to_db(*v)) : json(nullptr);
}

json meta_json(const OutputMeta& meta) {
  json m;
  m["command"] = meta.command;
  m["seed"] = meta.seed;
  m["version"] = kToolVersion;
  m["format_version"] = kOutputFormatVersion;
  m["scale"] = meta.scale;
  m["config"] = meta.resolved_config.empty() ? json::object() : json::parse(meta.resolved_config);
  return m;
}

}  // namespace

std::string sweep_csv_header() {
  return "axis,axis_value,scheme,feasible,crb_rad2,crb_db,mse_rad2,mse_db,rate_bps_hz,"
         "iterations,gamma_ran_db";
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << sweep_csv_header() << '\n';
  const std::string axis = axis_name(result.axis);
  for (const SweepRow& r : result.rows) {
    out << axis << ',' << fmt::format("{}", r.axis_value) << ',' << scheme_name(r.scheme) << ','
        << (r.feasible ? 1 : 0) << ',' << num(r.crb) << ',' << db(r.crb) << ',' << num(r.mse)
        << ',' << db(r.mse) << ',' << num(r.rate) << ','
        << (r.iterations ? std::to_string(*r.iterations) : std::string()) << ','
        << db(r.gamma_ran) << '\n';
  }
}

void write_sweep_json(const SweepResult& result, const OutputMeta& meta, std::ostream& out) {
  json doc;
  doc["meta"] = meta_json(meta);
  doc["meta"]["axis"] = axis_name(result.axis);
  json rows = json::array();
  for (const SweepRow& r : result.rows) {
    json row;
    row["axis_value"] = r.axis_value;
    row["scheme"] = scheme_name(r.scheme);
    row["feasible"] = r.feasible;
    row["crb_rad2"] = opt(r.crb);
    row["crb_db"] = opt_db(r.crb);
    row["mse_rad2"] = opt(r.mse);
    row["mse_db"] = opt_db(r.mse);
    row["rate_bps_hz"] = opt(r.rate);
    row["iterations"] = r.iterations ? json(*r.iterations) : json(nullptr);
    row["gamma_ran_db"] = opt_db(r.gamma_ran);
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_estimate_json(const EstimateReport& report, const OutputMeta& meta, std::ostream& out) {
  json doc;
  doc["meta"] = meta_json(meta);
  json r;
  r["mode"] = report.superposed ? "superposed" : "gaussian";
  r["theta_hat"] = report.result.theta_hat.value;
  r["theta_hat_deg"] = to_degrees(report.result.theta_hat);
  r["theta_true"] = report.theta_true.value;
  r["alpha_mag_hat"] = report.result.alpha_mag_hat;
  r["alpha_phase_hat"] = opt(report.result.alpha_phase_hat);
  r["alpha_mag_true"] = std::abs(report.alpha_true);
  r["crb_rad2"] = report.crb;
  r["squared_error_rad2"] = std::pow(report.result.theta_hat.value - report.theta_true.value, 2);
  json curve = json::array();
  for (const auto& [theta, value] : report.result.objective_curve) {
    curve.push_back(json::array({theta, value}));
  }
  r["objective_curve"] = std::move(curve);
  doc["result"] = std::move(r);
  out << doc.dump(2) << '\n';
}

}  // namespace isac
