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

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "gqspi/dephasing.hpp"
#include "gqspi/errors.hpp"
#include "gqspi/fock.hpp"
#include "gqspi/laurent_poly.hpp"
#include "gqspi/response.hpp"

namespace gqspi::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

std::string scalar_text(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

struct Artifact {
  Artifact(std::string cmd, KeyValues conf) : command(std::move(cmd)), config(std::move(conf)) {}

  std::string command;
  KeyValues config;
  ojson results = ojson::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  ojson extra = ojson::object();  // JSON-only sections
  std::vector<std::string> csv_comments;
  std::vector<std::string> csv_body;  // replaces the table when set
};

void write_artifact(const Artifact& a, const RunConfig& cfg, std::ostream& fallback) {
  std::ostringstream os;
  if (cfg.format == "json") {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "gqspi";
    j["command"] = a.command;
    j["timestamp"] = timestamp();
    ojson conf = ojson::object();
    for (const auto& [k, v] : a.config) conf[k] = v;
    j["config"] = conf;
    j["results"] = a.results;
    for (const auto& [k, v] : a.extra.items()) j[k] = v;
    if (!a.columns.empty()) {
      j["columns"] = a.columns;
      ojson data = ojson::array();
      for (const auto& r : a.rows) data.push_back(r);
      j["data"] = data;
    }
    os << j.dump(2) << '\n';
  } else {
    os << "# gqspi " << a.command << '\n';
    os << "# schema_version = " << kSchemaVersion << '\n';
    os << "# timestamp = " << timestamp() << '\n';
    for (const auto& [k, vals] : a.config) {
      for (const auto& v : vals) os << "#@ " << k << " = " << v << '\n';
    }
    for (const auto& [k, v] : a.results.items()) os << "# " << k << " = " << scalar_text(v) << '\n';
    for (const auto& c : a.csv_comments) os << "# " << c << '\n';
    if (!a.csv_body.empty()) {
      for (const auto& line : a.csv_body) os << line << '\n';
    } else {
      for (std::size_t i = 0; i < a.columns.size(); ++i) os << (i ? "," : "") << a.columns[i];
      os << '\n';
      for (const auto& r : a.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
        os << '\n';
      }
    }
  }
  if (cfg.out.empty()) {
    fallback << os.str();
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw IoError("cannot write " + cfg.out);
  f << os.str();
  if (!f) throw IoError("write failed for " + cfg.out);
}

const PhaseAngles& need_angles(const RunConfig& c) {
  if (!c.angles) throw ConfigError("angles required (--angles file or --theta/--phi)");
  if (c.degree && *c.degree != c.angles->degree()) throw ConfigError("degree does not match the angles");
  return *c.angles;
}

double need_kappa(const RunConfig& c) {
  if (!c.kappa) throw ConfigError("--kappa is required");
  return *c.kappa;
}

ThresholdSpec thresholds_of(const RunConfig& c) {
  if (c.bands.empty()) throw ConfigError("at least one --band lo:hi is required");
  ThresholdSpec t{c.bands, need_kappa(c)};
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return t;
}

OptimizationProblem problem_of(const RunConfig& c) {
  OptimizationProblem pb;
  pb.thresholds = thresholds_of(c);
  pb.prior = c.prior;
  if (c.objective) {
    pb.objective = *c.objective;
  } else if (c.prior) {
    pb.objective = Objective::gaussian;
  } else {
    pb.objective = c.bands.size() > 1 ? Objective::multi : Objective::single;
  }
  pb.restarts = c.restarts;
  pb.max_iters = c.max_iters;
  pb.seed = c.seed;
  pb.tolerance = c.tolerance;
  try {
    pb.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return pb;
}

int cmd_response(const RunConfig& c, std::ostream& out) {
  const PhaseAngles& angles = need_angles(c);
  const double kappa = need_kappa(c);
  ResponseSpectrum spec = response_coefficients(gqsp_build(angles), kappa);
  ResponseCurve curve = response_curve(spec, c.points);
  Artifact a{"response", canonical(c)};
  a.results["degree"] = angles.degree();
  a.results["period"] = curve.period;
  if (!c.bands.empty()) {
    ThresholdSpec thr = thresholds_of(c);
    a.results["p_err"] = p_err_multi(spec, thr);
    a.results["p_err_quadrature"] = p_err_quadrature(spec, thr);
  }
  a.columns = {"beta", "probability"};
  for (std::size_t i = 0; i < curve.values.size(); ++i) a.rows.push_back({curve.beta_grid[i], curve.values[i]});
  write_artifact(a, c, out);
  return kOk;
}

int cmd_optimize(const RunConfig& c, std::ostream& out) {
  if (!c.degree) throw ConfigError("--degree is required");
  OptimizationProblem pb = problem_of(c);
  pb.degree = *c.degree;
  OptimizationResult r = optimize_angles(pb);
  Artifact a{"optimize", canonical(c)};
  a.results["degree"] = pb.degree;
  a.results["p_err"] = r.best_p_err;
  a.results["restart_index"] = r.restart_index;
  a.results["converged"] = r.converged;
  a.results["iterations"] = r.trace.empty() ? 0 : r.trace.back().iteration;
  const auto& th = r.best_angles.theta();
  const auto& ph = r.best_angles.phi();
  if (c.format == "json") {
    a.extra["angles"] = {{"theta", th}, {"phi", ph}, {"lambda0", r.best_angles.lambda0()}};
    ojson trace = ojson::array();
    for (const auto& t : r.trace) trace.push_back({t.iteration, t.p_err});
    a.extra["trace"] = trace;
  } else {
    for (const auto& t : r.trace) {
      a.csv_comments.push_back("trace = " + std::to_string(t.iteration) + "," + format_double(t.p_err));
    }
    for (std::size_t i = 0; i < th.size(); ++i) a.csv_body.push_back("theta_" + std::to_string(i) + " = " + format_double(th[i]));
    for (std::size_t i = 0; i < ph.size(); ++i) a.csv_body.push_back("phi_" + std::to_string(i) + " = " + format_double(ph[i]));
    a.csv_body.push_back("lambda0 = " + format_double(r.best_angles.lambda0()));
  }
  write_artifact(a, c, out);
  return kOk;
}

int cmd_scaling(const RunConfig& c, std::ostream& out) {
  OptimizationProblem pb = problem_of(c);
  std::vector<int> degrees = c.degrees.empty() ? std::vector<int>{1, 3, 6, 9, 13} : c.degrees;
  ScalingTable table;
  try {
    table = scaling_study(pb, degrees);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  RunConfig resolved = c;
  resolved.degrees = degrees;
  Artifact a{"scaling", canonical(resolved)};
  if (table.fit) {
    a.results["fit_a"] = table.fit->a;
    a.results["fit_r_squared"] = table.fit->r_squared;
    a.results["fit_r_squared_centered"] = table.fit->r_squared_centered;
    a.results["fit_log_residual_rms"] = table.fit->log_residual_rms;
    a.results["fit_points"] = table.fit->points;
  } else {
    a.results["fit"] = "skipped: needs at least 3 degrees >= 2";
  }
  a.columns = {"degree", "p_err"};
  for (const auto& row : table.rows) a.rows.push_back({double(row.degree), row.p_err});
  write_artifact(a, c, out);
  return kOk;
}

struct CheckStat {
  std::string name;
  int degree;
  int trials = 0;
  double max_dev = 0.0;
  double tolerance;
};

int cmd_oracle_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<int> degrees = c.degrees.empty() ? std::vector<int>{1, 2, 3, 4, 5} : c.degrees;
  for (int d : degrees) {
    if (d < 0 || d > 8) throw ConfigError("oracle-check degrees must lie in 0..8");
  }
  std::vector<double> kappas = c.kappa ? std::vector<double>{*c.kappa} : std::vector<double>{0.1, 0.25};
  SplitMix64 rng(derive_seed(c.seed, 0x0AC1E));
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  auto random_angles = [&](int d) {
    std::vector<double> th, ph;
    for (int i = 0; i <= d; ++i) {
      th.push_back(uni(-std::numbers::pi, std::numbers::pi));
      ph.push_back(uni(-std::numbers::pi, std::numbers::pi));
    }
    return PhaseAngles(th, ph, uni(-std::numbers::pi, std::numbers::pi));
  };
  auto corrupt = [&](ResponseSpectrum& s) {
    if (!c.inject_fault) return;
    int k = std::min(1, s.degree);
    s.c[static_cast<std::size_t>(s.degree + k)] += 1e-3;
    if (k) s.c[static_cast<std::size_t>(s.degree - k)] += 1e-3;
  };

  std::vector<CheckStat> stats;
  FockConfig fc;
  for (int d : degrees) {
    CheckStat rs{"response", d, 0, 0.0, 1e-6};
    for (int t = 0; t < c.trials; ++t) {
      double kappa = kappas[static_cast<std::size_t>(t) % kappas.size()];
      PhaseAngles a = random_angles(d);
      ResponseSpectrum s = response_coefficients(gqsp_build(a), kappa);
      corrupt(s);
      double beta = uni(-0.5, 0.5) * std::numbers::pi / kappa;
      double dev = std::abs(response_eval(s, beta) - fock_oracle_response(a, kappa, beta, fc));
      rs.max_dev = std::max(rs.max_dev, dev);
      ++rs.trials;
    }
    stats.push_back(rs);

    if (d >= 1 && d <= kMaxQuadrupleDegree) {
      CheckStat ds{"dephasing", d, 0, 0.0, 1e-5};
      for (int t = 0; t < c.trials; ++t) {
        double kappa = kappas[static_cast<std::size_t>(t) % kappas.size()];
        PhaseAngles a = random_angles(d);
        std::vector<double> g;
        for (int i = 0; i < d; ++i) g.push_back(uni(-0.3, 0.3));
        double beta = uni(-0.5, 0.5) * std::numbers::pi / kappa;
        double an = dephasing_response_analytic(a, kappa, beta, DephasingSchedule::make(g));
        if (c.inject_fault) an += 1e-3;
        double dev = std::abs(an - fock_oracle_response(a, kappa, beta, fc, g));
        ds.max_dev = std::max(ds.max_dev, dev);
        ++ds.trials;
      }
      stats.push_back(ds);
    }

    CheckStat gs{"gaussian_p_err", d, 0, 0.0, 1e-6};
    for (int t = 0; t < c.trials; ++t) {
      double kappa = kappas[static_cast<std::size_t>(t) % kappas.size()];
      double h = std::numbers::pi / (2.0 * kappa);
      ResponseSpectrum s = response_coefficients(gqsp_build(random_angles(d)), kappa);
      corrupt(s);
      double lo = uni(-0.9, 0.5) * h;
      double hi = lo + uni(0.05, 0.9) * (0.95 * h - lo);
      ThresholdSpec thr{{{lo, hi}}, kappa};
      GaussianPrior prior{uni(-0.5, 0.5) * h, uni(0.02, 0.3) * h};
      Diagnostics diag;
      double dev = std::abs(p_err_gaussian(s, thr, prior, &diag) - p_err_quadrature(s, thr, prior));
      gs.max_dev = std::max(gs.max_dev, dev);
      ++gs.trials;
    }
    stats.push_back(gs);
  }

  bool all_ok = true;
  Artifact a{"oracle-check", canonical(c)};
  ojson checks = ojson::array();
  for (const auto& s : stats) {
    bool ok = s.max_dev <= s.tolerance;
    all_ok = all_ok && ok;
    err << std::left << std::setw(16) << s.name << " d=" << s.degree << " trials=" << s.trials
        << " max_dev=" << format_double(s.max_dev) << " tol=" << format_double(s.tolerance)
        << (ok ? " ok" : " FAIL") << '\n';
    checks.push_back({{"check", s.name}, {"degree", s.degree}, {"trials", s.trials},
                      {"max_deviation", s.max_dev}, {"tolerance", s.tolerance}, {"pass", ok}});
  }
  a.csv_body.push_back("check,degree,trials,max_deviation,tolerance,pass");
  for (const auto& s : stats) {
    a.csv_body.push_back(s.name + "," + std::to_string(s.degree) + "," + std::to_string(s.trials) + "," +
                         format_double(s.max_dev) + "," + format_double(s.tolerance) + "," +
                         (s.max_dev <= s.tolerance ? "true" : "false"));
  }
  a.results["passed"] = all_ok;
  a.extra["checks"] = checks;
  write_artifact(a, c, out);
  err << "oracle-check: " << (all_ok ? "all checks within tolerance" : "FAILED") << '\n';
  return all_ok ? kOk : kNumericError;
}

int cmd_dephasing_sweep(const RunConfig& c, std::ostream& out) {
  const PhaseAngles& angles = need_angles(c);
  const double kappa = need_kappa(c);
  if (c.betas.empty()) throw ConfigError("--betas is required");
  std::vector<double> gammas = c.gammas.empty() ? std::vector<double>{0.0, 0.005, 0.01, 0.02, 0.03, 0.04} : c.gammas;
  for (double g : gammas) {
    if (!std::isfinite(g) || g < 0.0) throw ConfigError("gammas must be non-negative");
  }
  RunConfig resolved = c;
  resolved.gammas = gammas;
  Artifact a{"dephasing-sweep", canonical(resolved)};
  a.columns = {"gamma", "beta", "probability", "delta"};
  ojson orders = ojson::array();
  const int d = angles.degree();
  FockConfig fc;
  std::vector<double> fit_gammas;
  for (double g : gammas) {
    if (g > 0.0 && g <= 0.1) fit_gammas.push_back(g);
  }
  for (double beta : c.betas) {
    double p0 = fock_oracle_response(angles, kappa, beta, fc);
    std::map<double, double> delta;
    if (fit_gammas.size() >= 4) {
      OrderCheckResult oc = dephasing_order_check(angles, kappa, beta, fit_gammas, fc);
      for (std::size_t i = 0; i < oc.gammas.size(); ++i) delta[oc.gammas[i]] = oc.deltas[i];
      ojson o = {{"beta", beta}, {"slope", number_or_null(oc.slope)},
                 {"omega1", number_or_null(oc.omega1)},
                 {"omega2", oc.omega2 ? number_or_null(*oc.omega2) : ojson(nullptr)},
                 {"indeterminate", oc.indeterminate}};
      orders.push_back(o);
      a.csv_comments.push_back("order = beta " + format_double(beta) + ", slope " +
                               (oc.indeterminate ? std::string("nan") : format_double(oc.slope)) +
                               ", omega1 " + (oc.indeterminate ? std::string("nan") : format_double(oc.omega1)) +
                               (oc.indeterminate ? ", indeterminate" : ""));
    }
    for (double g : gammas) {
      double dv = 0.0;
      if (g > 0.0) {
        auto it = delta.find(g);
        if (it != delta.end()) {
          dv = it->second;
        } else {
          dv = p0 - fock_oracle_response(angles, kappa, beta, fc, std::vector<double>(static_cast<std::size_t>(d), g));
        }
      }
      a.rows.push_back({g, beta, p0 - dv, dv});
    }
  }
  if (fit_gammas.size() < 4) a.results["order_fit"] = "skipped: needs at least 4 gammas in (0, 0.1]";
  a.extra["orders"] = orders;
  write_artifact(a, c, out);
  return kOk;
}

struct FlagSet {
  std::map<std::string, std::string> scalars;
  std::vector<std::string> bands;
  bool inject_fault = false;
  std::string config;
};

void add_flags(CLI::App* sub, FlagSet& f) {
  static const std::vector<std::pair<std::string, std::string>> scalar_flags{
      {"degree", "polynomial degree d"},
      {"kappa", "momentum kick strength"},
      {"band-units", "beta (default) or halfperiod: band values in units of pi/(2 kappa)"},
      {"prior", "Gaussian prior mu:sigma"},
      {"objective", "single, multi or gaussian (default inferred)"},
      {"seed", "64-bit seed"},
      {"restarts", "optimizer restarts"},
      {"max-iters", "iterations per restart"},
      {"tolerance", "gradient-norm tolerance"},
      {"points", "curve samples per period"},
      {"degrees", "degree list, e.g. 1,3,6 or 1..5"},
      {"trials", "random trials per degree"},
      {"betas", "comma-separated beta values"},
      {"gammas", "comma-separated dephasing angles"},
      {"angles", "angle file"},
      {"theta", "comma-separated theta_0..theta_d"},
      {"phi", "comma-separated phi_0..phi_d"},
      {"lambda0", "lambda_0"},
      {"out", "output path (default stdout)"},
      {"format", "csv or json"}};
  for (const auto& [name, help] : scalar_flags) {
    sub->add_option("--" + name, f.scalars[name], help);
  }
  sub->add_option("--band", f.bands, "decision band lo:hi (repeatable; use --band=lo:hi for negative lo)");
  sub->add_flag("--inject-fault", f.inject_fault, "corrupt one analytic coefficient (oracle-check)");
  sub->add_option("--config", f.config, "key = value config file or a previous output artifact");
}

KeyValues flag_values(CLI::App* sub, const FlagSet& f) {
  KeyValues kv;
  for (const auto& [name, value] : f.scalars) {
    if (sub->get_option("--" + name)->count() == 0) continue;
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    kv[key] = {value};
  }
  if (sub->get_option("--band")->count() > 0) kv["band"] = f.bands;
  if (f.inject_fault) kv["inject_fault"] = {"true"};
  return kv;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gqspi: decision-response interferometry toolkit"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"response", "sample P(down | beta) over one period"},
      {"optimize", "optimize phase angles for a decision band"},
      {"scaling", "optimize across degrees and fit p_err = a log(d)/d"},
      {"oracle-check", "compare analytic forms against brute-force references"},
      {"dephasing-sweep", "sweep dephasing strength and fit the error order"}};
  std::map<std::string, std::unique_ptr<FlagSet>> flags;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    flags[name] = std::make_unique<FlagSet>();
    add_flags(sub, *flags[name]);
  }

  std::vector<const char*> argv{"gqspi"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const FlagSet& f = *flags[name];
    KeyValues file = f.config.empty() ? KeyValues{} : read_config_file(f.config);
    RunConfig cfg = resolve(name, merge(file, flag_values(sub, f)));
    if (name == "response") return cmd_response(cfg, out);
    if (name == "optimize") return cmd_optimize(cfg, out);
    if (name == "scaling") return cmd_scaling(cfg, out);
    if (name == "oracle-check") return cmd_oracle_check(cfg, out, err);
    return cmd_dephasing_sweep(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CapacityError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace gqspi::cli
