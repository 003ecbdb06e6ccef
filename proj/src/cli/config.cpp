#include "fkfp/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fkfp::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// setter map: dotted key -> parse-and-assign
using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

double parse_num(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (...) {
    throw ConfigError(key, "cannot parse number from '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  const double x = parse_num(key, v);
  const long long i = static_cast<long long>(x);
  if (static_cast<double>(i) != x) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return i;
}

std::string parse_string(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  if (!s.empty() && s.find_first_of(" \t[]\"") == std::string::npos) return s;
  throw ConfigError(key, "expected a string, got '" + v + "'");
}

std::vector<std::string> parse_array(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ConfigError(key, "expected an array [..], got '" + v + "'");
  s = s.substr(1, s.size() - 2);
  std::vector<std::string> items;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!trim(cur).empty()) items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) items.push_back(trim(cur));
  return items;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"params.alpha", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha = parse_num(k, v); }},
      {"params.beta", [](RunConfig& c, const std::string& k, const std::string& v) { c.beta = parse_num(k, v); }},
      {"params.d", [](RunConfig& c, const std::string& k, const std::string& v) { c.d = static_cast<int>(parse_int(k, v)); }},
      {"params.gamma", [](RunConfig& c, const std::string& k, const std::string& v) { c.gamma = parse_num(k, v); }},
      {"params.max_deriv", [](RunConfig& c, const std::string& k, const std::string& v) { c.max_deriv = static_cast<int>(parse_int(k, v)); }},
      {"grid.nx", [](RunConfig& c, const std::string& k, const std::string& v) { c.nx = static_cast<int>(parse_int(k, v)); }},
      {"grid.nv", [](RunConfig& c, const std::string& k, const std::string& v) { c.nv = static_cast<int>(parse_int(k, v)); }},
      {"grid.Lx", [](RunConfig& c, const std::string& k, const std::string& v) { c.Lx = parse_num(k, v); }},
      {"grid.Lv", [](RunConfig& c, const std::string& k, const std::string& v) { c.Lv = parse_num(k, v); }},
      {"time.kind", [](RunConfig& c, const std::string& k, const std::string& v) { c.time_kind = parse_string(k, v); }},
      {"time.horizon", [](RunConfig& c, const std::string& k, const std::string& v) { c.horizon = parse_num(k, v); }},
      {"time.samples", [](RunConfig& c, const std::string& k, const std::string& v) { c.samples = static_cast<int>(parse_int(k, v)); }},
      {"time.duhamel_j", [](RunConfig& c, const std::string& k, const std::string& v) { c.duhamel_j = static_cast<int>(parse_int(k, v)); }},
      {"time.grade_p", [](RunConfig& c, const std::string& k, const std::string& v) { c.grade_p = static_cast<int>(parse_int(k, v)); }},
      {"solver.tol_rel", [](RunConfig& c, const std::string& k, const std::string& v) { c.tol_rel = parse_num(k, v); }},
      {"solver.max_iter", [](RunConfig& c, const std::string& k, const std::string& v) { c.max_iter = static_cast<int>(parse_int(k, v)); }},
      {"solver.sigma", [](RunConfig& c, const std::string& k, const std::string& v) { c.sigma = parse_num(k, v); }},
      {"solver.cache_mb", [](RunConfig& c, const std::string& k, const std::string& v) { c.cache_mb = static_cast<std::uint64_t>(parse_int(k, v)); }},
      {"data.family", [](RunConfig& c, const std::string& k, const std::string& v) { c.family = parse_string(k, v); }},
      {"data.amplitude", [](RunConfig& c, const std::string& k, const std::string& v) { c.amplitude = parse_num(k, v); }},
      {"data.sigx", [](RunConfig& c, const std::string& k, const std::string& v) { c.sigx = parse_num(k, v); }},
      {"data.sigv", [](RunConfig& c, const std::string& k, const std::string& v) { c.sigv = parse_num(k, v); }},
      {"data.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
      {"kernel.times", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.kernel_times.clear();
         for (const auto& it : parse_array(k, v)) c.kernel_times.push_back(parse_num(k, it));
       }},
      {"kernel.nx", [](RunConfig& c, const std::string& k, const std::string& v) { c.kernel_nx = static_cast<int>(parse_int(k, v)); }},
      {"kernel.nv", [](RunConfig& c, const std::string& k, const std::string& v) { c.kernel_nv = static_cast<int>(parse_int(k, v)); }},
      {"run.out_dir", [](RunConfig& c, const std::string& k, const std::string& v) { c.out_dir = parse_string(k, v); }},
      {"run.threads", [](RunConfig& c, const std::string& k, const std::string& v) { c.threads = static_cast<int>(parse_int(k, v)); }},
      {"run.simd", [](RunConfig& c, const std::string& k, const std::string& v) { c.simd = parse_string(k, v); }},
      {"run.experiments", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.experiments.clear();
         for (const auto& it : parse_array(k, v)) c.experiments.push_back(parse_string(k, it));
       }},
  };
  return m;
}

}  // namespace

Params RunConfig::params() const {
  try {
    if (gamma > 0.0) return Params::make(alpha, beta, d, max_deriv, gamma);
    return Params::make(alpha, beta, d, max_deriv);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), "parameter regime invalid");
  }
}

std::string RunConfig::output_root() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv("FKFP_OUTPUT_ROOT")) return env;
  return "fkfp-out";
}

void RunConfig::validate() const {
  params();  // throws with field name
  auto pow2 = [](int n) { return n >= 2 && (n & (n - 1)) == 0; };
  if (!pow2(nx)) throw ConfigError("grid.nx", "must be a power of two >= 2");
  if (!pow2(nv)) throw ConfigError("grid.nv", "must be a power of two >= 2");
  if (!(Lx > 0.0)) throw ConfigError("grid.Lx", "must be positive");
  if (!(Lv > 0.0)) throw ConfigError("grid.Lv", "must be positive");
  if (time_kind != "dyadic" && time_kind != "uniform")
    throw ConfigError("time.kind", "must be 'dyadic' or 'uniform'");
  if (!(horizon > 0.0)) throw ConfigError("time.horizon", "must be positive");
  if (samples < 1) throw ConfigError("time.samples", "must be >= 1");
  if (duhamel_j < 2) throw ConfigError("time.duhamel_j", "must be >= 2");
  if (grade_p < 2) throw ConfigError("time.grade_p", "must be >= 2");
  if (!(tol_rel > 0.0)) throw ConfigError("solver.tol_rel", "must be positive");
  if (max_iter < 1) throw ConfigError("solver.max_iter", "must be >= 1");
  if (family != "gaussian" && family != "multimode" && family != "rough")
    throw ConfigError("data.family", "must be gaussian | multimode | rough");
  if (!(amplitude > 0.0)) throw ConfigError("data.amplitude", "must be positive");
  for (double t : kernel_times)
    if (!(t > 0.0)) throw ConfigError("kernel.times", "times must be positive");
  if (!pow2(kernel_nx)) throw ConfigError("kernel.nx", "must be a power of two >= 2");
  if (!pow2(kernel_nv)) throw ConfigError("kernel.nv", "must be a power of two >= 2");
  if (!simd.empty() && simd != "scalar" && simd != "avx2" && simd != "neon")
    throw ConfigError("run.simd", "must be scalar | avx2 | neon");
  for (const auto& e : experiments) {
    bool known = e == "reproducibility";
    for (const auto& id : verify::experiment_ids()) known = known || id == e;
    if (!known) throw ConfigError("run.experiments", "unknown experiment '" + e + "'");
  }
}

void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  auto it = setters().find(dotted_key);
  if (it == setters().end()) throw ConfigError(dotted_key, "unknown configuration key");
  it->second(cfg, dotted_key, value);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot open '" + path + "'");
  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  std::string pending;  // multi-line array continuation
  std::string pending_key;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!pending_key.empty()) {
      pending += line;
      if (line.find(']') == std::string::npos) continue;
      apply_override(cfg, pending_key, pending);
      pending_key.clear();
      pending.clear();
      continue;
    }
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("line " + std::to_string(lineno), "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string dotted = section.empty() ? key : section + "." + key;
    if (!value.empty() && value.front() == '[' && value.find(']') == std::string::npos) {
      pending_key = dotted;
      pending = value;
      continue;
    }
    apply_override(cfg, dotted, value);
  }
  return cfg;
}

verify::ExperimentConfig to_experiment_config(const RunConfig& cfg) {
  verify::ExperimentConfig e;
  e.params = cfg.params();
  e.nx = cfg.nx;
  e.nv = cfg.nv;
  e.Lx = cfg.Lx;
  e.Lv = cfg.Lv;
  e.horizon = cfg.horizon;
  e.time_k = cfg.samples;
  e.duhamel_j = cfg.duhamel_j;
  e.family = cfg.family;
  e.amplitude = cfg.amplitude;
  e.sigx = cfg.sigx;
  e.sigv = cfg.sigv;
  e.seed = cfg.seed;
  e.sigma_threshold = cfg.sigma;
  e.cache_mb = cfg.cache_mb;
  return e;
}

}  // namespace fkfp::cli
