#include "apm/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>

#include "apm/errors.hpp"

namespace apm {

namespace {

std::size_t get_count(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw ConfigError(std::string("config: '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double get_real(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

SolverChoice parse_solver(const std::string& s) {
  if (s == "auto") return SolverChoice::Auto;
  if (s == "direct") return SolverChoice::Direct;
  if (s == "decomposition") return SolverChoice::Decomposition;
  throw ConfigError("config: solver must be auto, direct or decomposition");
}

namespace {

const char* solver_name(SolverChoice s) {
  switch (s) {
    case SolverChoice::Auto:
      return "auto";
    case SolverChoice::Direct:
      return "direct";
    case SolverChoice::Decomposition:
      return "decomposition";
  }
  return "auto";
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw ConfigError("bad " + what + " '" + s + "'");
  return v;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.truncation == 0) throw ConfigError("config: truncation must be >= 1");
  if (!c.instance && c.descriptors.empty()) throw ConfigError("config: need an instance id or inline descriptors");
  if (c.instance && !c.descriptors.empty()) throw ConfigError("config: give an instance id or descriptors, not both");
  if (!(c.engine.tol_residual >= 0.0) || !std::isfinite(c.engine.tol_residual)) {
    throw ConfigError("config: tol_residual must be a finite non-negative number");
  }
  if (!(c.engine.eps_supp > 0.0)) throw ConfigError("config: eps_supp must be positive");
  if (c.engine.max_iters == 0) throw ConfigError("config: max_iters must be >= 1");
}

RunConfig parse_run_config(const Json& j) {
  require_keys(j,
               {"schema_version", "instance", "descriptors", "truncation", "start", "tol_residual", "max_iters",
                "snapshot_stride", "stall_window", "eps_supp", "solver", "out_dir", "write_snapshots"},
               "config");
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kConfigSchemaVersion) {
    throw ConfigError("config: unsupported schema_version (expected 1)");
  }
  RunConfig c;
  if (j.contains("instance")) {
    if (!j.at("instance").is_string()) throw ConfigError("config: instance must be a string");
    c.instance = j.at("instance").get<std::string>();
  }
  if (j.contains("descriptors")) {
    if (!j.at("descriptors").is_array()) throw ConfigError("config: descriptors must be an array");
    for (const auto& d : j.at("descriptors")) c.descriptors.push_back(descriptor_from_json(d));
  }
  if (j.contains("truncation")) c.truncation = get_count(j, "truncation");
  if (j.contains("start")) {
    const Json& s = j.at("start");
    if (s.is_string()) {
      c.start = s.get<std::string>();
    } else if (s.is_array()) {
      std::string joined;
      for (const auto& x : s) {
        if (!x.is_number()) throw ConfigError("config: start entries must be numbers");
        if (!joined.empty()) joined += ',';
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x.get<double>());
        joined += buf;
      }
      c.start = joined;
    } else {
      throw ConfigError("config: start must be a spec string or an array of numbers");
    }
  }
  if (j.contains("tol_residual")) c.engine.tol_residual = get_real(j, "tol_residual");
  if (j.contains("max_iters")) c.engine.max_iters = get_count(j, "max_iters");
  if (j.contains("snapshot_stride")) c.engine.snapshot_stride = get_count(j, "snapshot_stride");
  if (j.contains("stall_window")) c.engine.stall_window = get_count(j, "stall_window");
  if (j.contains("eps_supp")) c.engine.eps_supp = get_real(j, "eps_supp");
  if (j.contains("solver")) {
    if (!j.at("solver").is_string()) throw ConfigError("config: solver must be a string");
    c.solver = parse_solver(j.at("solver").get<std::string>());
  }
  if (j.contains("out_dir")) {
    if (!j.at("out_dir").is_string()) throw ConfigError("config: out_dir must be a string");
    c.out_dir = j.at("out_dir").get<std::string>();
  }
  if (j.contains("write_snapshots")) {
    if (!j.at("write_snapshots").is_boolean()) throw ConfigError("config: write_snapshots must be a boolean");
    c.write_snapshots = j.at("write_snapshots").get<bool>();
  }
  validate(c);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return parse_run_config(j);
}

Json run_config_to_json(const RunConfig& c) {
  Json j;
  j["schema_version"] = kConfigSchemaVersion;
  if (c.instance) {
    j["instance"] = *c.instance;
  } else {
    Json d = Json::array();
    for (const auto& g : c.descriptors) d.push_back(descriptor_to_json(g));
    j["descriptors"] = std::move(d);
  }
  j["truncation"] = c.truncation;
  if (!c.start.empty()) j["start"] = c.start;
  j["tol_residual"] = c.engine.tol_residual;
  j["max_iters"] = c.engine.max_iters;
  j["snapshot_stride"] = c.engine.snapshot_stride;
  j["stall_window"] = c.engine.stall_window;
  j["eps_supp"] = c.engine.eps_supp;
  j["solver"] = solver_name(c.solver);
  j["out_dir"] = c.out_dir;
  j["write_snapshots"] = c.write_snapshots;
  return j;
}

std::vector<double> uniform_doubles(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return out;
}

SeqVec parse_start(const std::string& spec, std::size_t n) {
  if (n == 0) throw ConfigError("start: truncation must be >= 1");
  if (spec == "zero") return SeqVec::zeros(n);
  if (spec.size() >= 2 && spec[0] == 'e' && std::isdigit(static_cast<unsigned char>(spec[1]))) {
    const std::uint64_t k = parse_u64(spec.substr(1), "unit-vector index");
    if (k == 0 || k > n) throw ConfigError("start: " + spec + " is outside 1.." + std::to_string(n));
    return SeqVec::unit(n, k);
  }
  for (const char* prefix : {"random:", "nonneg:"}) {
    const std::string p(prefix);
    if (spec.rfind(p, 0) == 0) {
      auto u = uniform_doubles(parse_u64(spec.substr(p.size()), "seed"), n);
      if (p == "random:") {
        for (auto& x : u) x = 2.0 * x - 1.0;
      }
      return SeqVec(std::move(u));
    }
  }
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t next = std::min(spec.find(',', pos), spec.size());
    const std::string tok = spec.substr(pos, next - pos);
    double v = 0.0;
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    while (b < e && *b == ' ') ++b;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (tok.empty() || ec != std::errc() || p != e || !std::isfinite(v)) {
      throw ConfigError("start: cannot parse '" + spec + "' (expected e<k>, zero, random:<seed>, nonneg:<seed> or a list)");
    }
    vals.push_back(v);
    pos = next + 1;
  }
  if (vals.size() > n) {
    for (std::size_t k = n; k < vals.size(); ++k) {
      if (vals[k] != 0.0) throw ConfigError("start: entries beyond the truncation");
    }
  }
  vals.resize(n, 0.0);
  return SeqVec(std::move(vals));
}

}  // namespace apm
