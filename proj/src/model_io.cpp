#include "etcabs/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace etcabs {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ManifestError(path + ": " + what);
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "non-finite value");
  return v;
}

Matrix matrix_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  if (!j[0].is_array() || j[0].empty()) fail(path, "expected nested row arrays");
  cols = j[0].size();
  Matrix out(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      fail(path, "ragged rows (row " + std::to_string(r) + ")");
    for (size_t c = 0; c < cols; ++c)
      out(r, c) = number_at(j[r][c], path + "[" + std::to_string(r) + "][" +
                                         std::to_string(c) + "]");
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

const json& require(const json& j, const std::string& key,
                    const std::string& path) {
  if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing key");
  return j.at(key);
}

}  // namespace

RunManifest parse_manifest(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("manifest: invalid JSON: ") + e.what());
  }
  RunManifest m;

  const json& jp = require(j, "plant", "");
  m.plant.A = matrix_at(require(jp, "A", "plant"), "plant.A");
  m.plant.B = matrix_at(require(jp, "B", "plant"), "plant.B");
  m.plant.E = matrix_at(require(jp, "E", "plant"), "plant.E");
  const Eigen::Index n = m.plant.A.rows();
  if (m.plant.A.cols() != n) fail("plant.A", "must be square");
  if (m.plant.B.rows() != n)
    fail("plant.B", "row count must match A (" + std::to_string(n) + ")");
  if (m.plant.E.rows() != n)
    fail("plant.E", "row count must match A (" + std::to_string(n) + ")");
  m.plant.W = number_at(require(jp, "W", "plant"), "plant.W");
  if (m.plant.W < 0) fail("plant.W", "must be >= 0");
  m.plant.gamma = number_at(require(jp, "gamma", "plant"), "plant.gamma");
  if (m.plant.gamma <= 0) fail("plant.gamma", "must be > 0");
  m.plant.beta = number_at(require(jp, "beta", "plant"), "plant.beta");
  if (m.plant.beta <= 0) fail("plant.beta", "must be > 0");

  if (j.contains("config")) {
    const json& jc = j.at("config");
    AbstractionConfig& c = m.config;
    auto geti = [&](const char* key, int def, int lo) {
      if (!jc.contains(key)) return def;
      double v = number_at(jc.at(key), std::string("config.") + key);
      int i = static_cast<int>(v);
      if (i != v || i < lo)
        fail(std::string("config.") + key,
             "must be an integer >= " + std::to_string(lo));
      return i;
    };
    c.n_conv = geti("n_conv", c.n_conv, 1);
    c.l = geti("l", c.l, 1);
    c.m_bar = geti("m_bar", c.m_bar, 2);
    c.eta_samples = geti("eta_samples", c.eta_samples, 2);
    if (jc.contains("sigma")) {
      c.sigma = number_at(jc.at("sigma"), "config.sigma");
      if (c.sigma <= 0) fail("config.sigma", "must be > 0");
    }
    if (jc.contains("psi_scale")) {
      c.psi_scale = number_at(jc.at("psi_scale"), "config.psi_scale");
      if (c.psi_scale <= 0) fail("config.psi_scale", "must be > 0");
    }
    if (jc.contains("time_scale")) {
      double v = number_at(jc.at("time_scale"), "config.time_scale");
      if (v < 1 || v != std::floor(v))
        fail("config.time_scale", "must be a positive integer");
      c.time_scale = static_cast<long>(v);
    }
    if (jc.contains("tau_cap")) {
      c.tau_cap = number_at(jc.at("tau_cap"), "config.tau_cap");
      if (c.tau_cap < 0) fail("config.tau_cap", "must be >= 0");
    }
    // quantized bounds must fit the tick range
    if (c.sigma * static_cast<double>(c.time_scale) >= 9.0e18)
      fail("config.time_scale", "sigma * time_scale exceeds the tick range");
  }

  if (j.contains("outputs")) {
    const json& jo = j.at("outputs");
    if (jo.contains("dir")) {
      if (!jo.at("dir").is_string()) fail("outputs.dir", "expected a string");
      m.out_dir = jo.at("dir").get<std::string>();
    }
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      fail("seed", "expected a nonnegative integer");
    long long s = j.at("seed").get<long long>();
    if (s < 0) fail("seed", "expected a nonnegative integer");
    m.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("x0")) {
    Matrix v = matrix_at(j.at("x0"), "x0");
    if (v.cols() != 1 || v.rows() != n)
      fail("x0", "expected an n x 1 column vector");
    m.x0 = Vector(v.col(0));
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string serialize_manifest(const RunManifest& m) {
  json j;
  j["plant"] = {{"A", matrix_to_json(m.plant.A)},
                {"B", matrix_to_json(m.plant.B)},
                {"E", matrix_to_json(m.plant.E)},
                {"W", m.plant.W},
                {"gamma", m.plant.gamma},
                {"beta", m.plant.beta}};
  j["config"] = {{"n_conv", m.config.n_conv},
                 {"l", m.config.l},
                 {"sigma", m.config.sigma},
                 {"m_bar", m.config.m_bar},
                 {"psi_scale", m.config.psi_scale},
                 {"eta_samples", m.config.eta_samples},
                 {"time_scale", m.config.time_scale},
                 {"tau_cap", m.config.tau_cap}};
  j["outputs"] = {{"dir", m.out_dir}};
  j["seed"] = m.seed;
  if (m.x0) {
    Matrix v = *m.x0;
    j["x0"] = matrix_to_json(v);
  }
  return j.dump(2);
}

std::string emit_csv(const Table& table) {
  if (table.names.size() != table.columns.size())
    throw EtcabsError("emit_csv: name/column count mismatch");
  size_t rows = table.columns.empty() ? 0 : table.columns[0].size();
  for (const auto& col : table.columns)
    if (col.size() != rows) throw EtcabsError("emit_csv: ragged columns");

  std::string out;
  for (size_t c = 0; c < table.names.size(); ++c) {
    if (c) out += ',';
    out += table.names[c];
  }
  char buf[64];
  for (size_t r = 0; r < rows; ++r) {
    out += '\n';
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.9g", table.columns[c][r]);
      out += buf;
    }
  }
  return out;
}

}  // namespace etcabs
