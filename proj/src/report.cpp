#include "holab/report.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace holab {

bool Report::pass() const {
  for (const CheckEntry& c : checks)
    if (!c.informational && !c.pass) return false;
  return true;
}

void Report::add_check(std::string name, double residual, double tolerance,
                       std::string method, std::string note) {
  CheckEntry c;
  c.name = std::move(name);
  c.method = std::move(method);
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = std::isfinite(residual) && residual <= tolerance;
  c.note = std::move(note);
  checks.push_back(std::move(c));
}

void Report::add_info(std::string name, double value, std::string method,
                      std::string note) {
  CheckEntry c;
  c.name = std::move(name);
  c.method = std::move(method);
  c.residual = value;
  c.informational = true;
  c.note = std::move(note);
  checks.push_back(std::move(c));
}

void Report::add_matrices(const std::string& name, const GradedLinearMap& m) {
  for (int deg : m.block_degrees()) {
    Matrix blk = m.block(deg);
    if (blk.size() == 0) continue;
    MatrixEntry e;
    e.name = name;
    e.source_degree = deg;
    e.rows = static_cast<int>(blk.rows());
    e.cols = static_cast<int>(blk.cols());
    for (int r = 0; r < e.rows; ++r)
      for (int c = 0; c < e.cols; ++c) e.values.push_back(blk(r, c));
    matrices.push_back(std::move(e));
  }
}

std::string report_to_text(const Report& r) {
  using json = nlohmann::ordered_json;
  json root;
  root["version"] = "0.1.0";
  root["schema_version"] = 1;
  root["command"] = r.command;
  root["scenario"] = r.scenario;
  root["seed"] = r.seed;
  json params = json::object();
  for (const auto& [k, v] : r.parameters) {
    if (v == std::floor(v) && std::abs(v) < 9.0e15)
      params[k] = static_cast<std::int64_t>(v);
    else
      params[k] = v;
  }
  root["parameters"] = std::move(params);
  json checks = json::array();
  for (const CheckEntry& c : r.checks) {
    json jc;
    jc["name"] = c.name;
    if (!c.method.empty()) jc["method"] = c.method;
    if (c.informational) {
      jc["value"] = c.residual;
    } else {
      jc["residual"] = c.residual;
      jc["tolerance"] = c.tolerance;
      jc["pass"] = c.pass;
    }
    if (!c.note.empty()) jc["note"] = c.note;
    checks.push_back(std::move(jc));
  }
  root["checks"] = std::move(checks);
  if (!r.matrices.empty()) {
    json ms = json::array();
    for (const MatrixEntry& m : r.matrices) {
      json jm;
      jm["name"] = m.name;
      jm["source_degree"] = m.source_degree;
      jm["rows"] = m.rows;
      jm["cols"] = m.cols;
      jm["values"] = m.values;
      ms.push_back(std::move(jm));
    }
    root["matrices"] = std::move(ms);
  }
  if (!r.timings.empty()) {
    json ts = json::object();
    for (const auto& [k, v] : r.timings) ts[k] = v;
    root["timings"] = std::move(ts);
  }
  root["pass"] = r.pass();
  return root.dump(2) + "\n";
}

void write_report_file(const Report& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write report file '" + path + "'");
  out << report_to_text(r);
}

}  // namespace holab
