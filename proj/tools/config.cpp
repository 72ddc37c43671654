// Copyright 2026 The gqspi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace gqspi::cli {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "command", "degree",  "kappa",  "band",   "band_units", "prior",  "objective",
      "seed",    "restarts", "max_iters", "tolerance", "points", "degrees", "trials",
      "betas",   "gammas",  "angles", "theta",  "phi",        "lambda0", "inject_fault",
      "out",     "format"};
  return keys;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("invalid number for " + key + ": '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  long long v = 0;
  std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("invalid integer for " + key + ": '" + text + "'");
  }
  return v;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(key, part));
  return out;
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    auto dots = part.find("..");
    if (dots != std::string::npos) {
      auto lo = parse_int("degrees", part.substr(0, dots));
      auto hi = parse_int("degrees", part.substr(dots + 2));
      if (hi < lo) throw ConfigError("empty degree range '" + part + "'");
      for (auto d = lo; d <= hi; ++d) out.push_back(static_cast<int>(d));
    } else {
      out.push_back(static_cast<int>(parse_int("degrees", part)));
    }
  }
  return out;
}

std::pair<double, double> parse_pair(const std::string& key, const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError(key + " expects a:b, got '" + text + "'");
  return {parse_double(key, text.substr(0, colon)), parse_double(key, text.substr(colon + 1))};
}

const std::string& single(const KeyValues& kv, const std::string& key) {
  const auto& v = kv.at(key);
  if (v.size() != 1) throw ConfigError("key '" + key + "' given more than once");
  return v.front();
}

bool has(const KeyValues& kv, const std::string& key) { return kv.count(key) && !kv.at(key).empty(); }

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

void add_line(KeyValues& kv, const std::string& raw, const std::string& where) {
  auto eq = raw.find('=');
  if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
  std::string key = trim(raw.substr(0, eq));
  std::replace(key.begin(), key.end(), '-', '_');
  if (!known_keys().count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  kv[key].push_back(trim(raw.substr(eq + 1)));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const std::string& text) {
  auto b = text.find_first_not_of(" \t\r\n");
  return b != std::string::npos && text[b] == '{';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

KeyValues read_config_file(const std::string& path) {
  std::string text = slurp(path);
  KeyValues kv;
  if (looks_like_json(text)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) throw ConfigError(path + ": no config object");
    for (const auto& [key, vals] : j["config"].items()) {
      if (!known_keys().count(key)) throw ConfigError(path + ": unknown key '" + key + "'");
      for (const auto& v : vals) kv[key].push_back(v.get<std::string>());
    }
    return kv;
  }
  std::istringstream in(text);
  std::string line;
  bool artifact = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (lineno == 1 && t.rfind("# gqspi", 0) == 0) artifact = true;
    std::string where = path + ":" + std::to_string(lineno);
    if (t.rfind("#@", 0) == 0) {
      add_line(kv, t.substr(2), where);
    } else if (t.empty() || t[0] == '#' || artifact) {
      continue;
    } else {
      add_line(kv, t, where);
    }
  }
  return kv;
}

KeyValues merge(const KeyValues& file, const KeyValues& flags) {
  KeyValues out = file;
  for (const auto& [k, v] : flags) out[k] = v;
  return out;
}

PhaseAngles read_angle_file(const std::string& path) {
  std::string text = slurp(path);
  std::map<int, double> theta, phi;
  std::optional<double> lambda0;
  try {
    if (looks_like_json(text)) {
      auto j = nlohmann::json::parse(text);
      const auto& a = j.at("angles");
      auto th = a.at("theta").get<std::vector<double>>();
      auto ph = a.at("phi").get<std::vector<double>>();
      return PhaseAngles(th, ph, a.at("lambda0").get<double>());
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key = value");
      std::string key = trim(t.substr(0, eq));
      std::string val = t.substr(eq + 1);
      if (key == "lambda0") {
        lambda0 = parse_double(key, val);
      } else if (key.rfind("theta_", 0) == 0) {
        theta[static_cast<int>(parse_int(key, key.substr(6)))] = parse_double(key, val);
      } else if (key.rfind("phi_", 0) == 0) {
        phi[static_cast<int>(parse_int(key, key.substr(4)))] = parse_double(key, val);
      }
    }
    if (theta.empty() || theta.size() != phi.size() || !lambda0) {
      throw ConfigError("needs theta_i, phi_i for i = 0..d and lambda0");
    }
    std::vector<double> th, ph;
    for (int i = 0; i < static_cast<int>(theta.size()); ++i) {
      if (!theta.count(i) || !phi.count(i)) throw ConfigError("missing index " + std::to_string(i));
      th.push_back(theta[i]);
      ph.push_back(phi[i]);
    }
    return PhaseAngles(th, ph, *lambda0);
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError("unreadable angle file " + path + ": " + e.what());
  }
}

RunConfig resolve(const std::string& command, const KeyValues& kv) {
  for (const auto& [k, v] : kv) {
    if (!known_keys().count(k)) throw ConfigError("unknown key '" + k + "'");
  }
  RunConfig c;
  c.command = command;
  if (has(kv, "degree")) c.degree = static_cast<int>(parse_int("degree", single(kv, "degree")));
  if (has(kv, "kappa")) c.kappa = parse_double("kappa", single(kv, "kappa"));
  if (c.kappa && !(*c.kappa > 0.0)) throw ConfigError("kappa must be positive");

  double unit = 1.0;
  if (has(kv, "band_units")) {
    const auto& u = single(kv, "band_units");
    if (u == "halfperiod") {
      if (!c.kappa) throw ConfigError("band_units = halfperiod needs kappa");
      unit = std::numbers::pi / (2.0 * *c.kappa);
    } else if (u != "beta") {
      throw ConfigError("band_units must be beta or halfperiod");
    }
  }
  if (has(kv, "band")) {
    for (const auto& b : kv.at("band")) {
      auto [lo, hi] = parse_pair("band", b);
      c.bands.push_back({lo * unit, hi * unit});
    }
  }
  if (has(kv, "prior")) {
    auto [mu, sigma] = parse_pair("prior", single(kv, "prior"));
    c.prior = GaussianPrior{mu, sigma};
  }
  if (has(kv, "objective")) {
    const auto& o = single(kv, "objective");
    if (o == "single") c.objective = Objective::single;
    else if (o == "multi") c.objective = Objective::multi;
    else if (o == "gaussian") c.objective = Objective::gaussian;
    else throw ConfigError("objective must be single, multi or gaussian");
  }
  if (has(kv, "seed")) {
    std::string t = trim(single(kv, "seed"));
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError("invalid seed '" + t + "'");
    c.seed = v;
  }
  if (has(kv, "restarts")) c.restarts = static_cast<int>(parse_int("restarts", single(kv, "restarts")));
  if (has(kv, "max_iters")) c.max_iters = static_cast<int>(parse_int("max_iters", single(kv, "max_iters")));
  if (has(kv, "tolerance")) c.tolerance = parse_double("tolerance", single(kv, "tolerance"));
  if (has(kv, "points")) c.points = static_cast<int>(parse_int("points", single(kv, "points")));
  if (has(kv, "degrees")) c.degrees = parse_degrees(single(kv, "degrees"));
  if (has(kv, "trials")) c.trials = static_cast<int>(parse_int("trials", single(kv, "trials")));
  if (has(kv, "betas")) c.betas = parse_doubles("betas", single(kv, "betas"));
  if (has(kv, "gammas")) c.gammas = parse_doubles("gammas", single(kv, "gammas"));
  if (has(kv, "inject_fault")) {
    const auto& v = single(kv, "inject_fault");
    if (v != "true" && v != "false") throw ConfigError("inject_fault must be true or false");
    c.inject_fault = v == "true";
  }
  if (has(kv, "out")) c.out = single(kv, "out");
  if (has(kv, "format")) {
    c.format = single(kv, "format");
    if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
  }
  if (c.restarts < 1) throw ConfigError("restarts must be at least 1");
  if (c.max_iters < 0) throw ConfigError("max_iters must be non-negative");
  if (c.points < 2) throw ConfigError("points must be at least 2");
  if (c.trials < 1) throw ConfigError("trials must be at least 1");

  if (has(kv, "theta") || has(kv, "phi")) {
    if (!has(kv, "theta") || !has(kv, "phi")) throw ConfigError("theta and phi must be given together");
    double l0 = has(kv, "lambda0") ? parse_double("lambda0", single(kv, "lambda0")) : 0.0;
    try {
      c.angles = PhaseAngles(parse_doubles("theta", single(kv, "theta")),
                             parse_doubles("phi", single(kv, "phi")), l0);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (has(kv, "angles")) {
    c.angles = read_angle_file(single(kv, "angles"));
  }
  return c;
}

KeyValues canonical(const RunConfig& c) {
  KeyValues kv;
  kv["command"] = {c.command};
  if (c.degree) kv["degree"] = {std::to_string(*c.degree)};
  if (c.kappa) kv["kappa"] = {format_double(*c.kappa)};
  for (const auto& b : c.bands) kv["band"].push_back(format_double(b.lo) + ":" + format_double(b.hi));
  if (c.prior) kv["prior"] = {format_double(c.prior->mu) + ":" + format_double(c.prior->sigma)};
  if (c.objective) {
    static const char* names[] = {"single", "multi", "gaussian"};
    kv["objective"] = {names[static_cast<int>(*c.objective)]};
  }
  kv["seed"] = {std::to_string(c.seed)};
  kv["restarts"] = {std::to_string(c.restarts)};
  kv["max_iters"] = {std::to_string(c.max_iters)};
  kv["tolerance"] = {format_double(c.tolerance)};
  kv["points"] = {std::to_string(c.points)};
  if (!c.degrees.empty()) {
    std::string s;
    for (std::size_t i = 0; i < c.degrees.size(); ++i) s += (i ? "," : "") + std::to_string(c.degrees[i]);
    kv["degrees"] = {s};
  }
  kv["trials"] = {std::to_string(c.trials)};
  if (!c.betas.empty()) kv["betas"] = {join(c.betas)};
  if (!c.gammas.empty()) kv["gammas"] = {join(c.gammas)};
  if (c.angles) {
    kv["theta"] = {join(c.angles->theta())};
    kv["phi"] = {join(c.angles->phi())};
    kv["lambda0"] = {format_double(c.angles->lambda0())};
  }
  kv["inject_fault"] = {c.inject_fault ? "true" : "false"};
  kv["format"] = {c.format};
  return kv;
}

}  // namespace gqspi::cli
