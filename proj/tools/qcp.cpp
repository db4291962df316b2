#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "qcp/oracle_l2.hpp"
#include "qcp/runner.hpp"

using namespace qcp;

namespace {

enum Exit { ok = 0, config_error = 2, solver_error = 3, fit_error = 4 };

// String-valued flags are parsed after CLI11 so that config-file values and
// flags go through the same checks.
struct Flags {
  std::string L = "4", gammas, observables, boundary, solver = "dense";
  std::optional<double> gamma_min, gamma_max, window_lo, window_hi, gc;
  std::string kind, input, json;
};

void add_model(CLI::App* c, RunConfig& cfg, Flags& f) {
  c->add_option("--L", f.L, "chain lengths, e.g. 4,6,8 or 4-12");
  c->add_option("--omega", cfg.omega, "coherent rate");
  c->add_option("--gamma-re", cfg.gamma_re, "real part of Gamma (fixed axis)");
  c->add_option("--gamma-im", cfg.gamma_im, "imaginary part of Gamma (fixed axis)");
  c->add_option("--boundary", f.boundary, "periodic or open");
  c->add_option("--solver", f.solver, "dense or targeted");
  c->add_option("--count", cfg.count, "eigenpairs per point (targeted)");
  c->add_option("--workers", cfg.workers, "worker threads");
  c->add_option("--out", cfg.out, "output CSV, - for stdout");
}

void add_grid(CLI::App* c, RunConfig& cfg, Flags& f) {
  c->add_option("--gamma-min", f.gamma_min, "grid start along the swept axis");
  c->add_option("--gamma-max", f.gamma_max, "grid end");
  c->add_option("--steps", cfg.steps, "grid points");
  c->add_option("--gammas", f.gammas, "explicit comma-separated grid");
}

void add_numerics(CLI::App* c, RunConfig& cfg) {
  c->add_option("--dh", cfg.dh, "probe field for chi");
  c->add_option("--tol", cfg.tol, "critical-point tolerance");
  c->add_option("--track-step", cfg.track_step, "largest tracking step");
  c->add_option("--search-lo", cfg.search_lo, "critical search start (before the transition)");
  c->add_option("--search-hi", cfg.search_hi, "critical search end");
  c->add_option("--refine-depth", cfg.refine_depth, "grid bisections on low overlap");
}

void finish(RunConfig& cfg, const Flags& f) {
  try {
    cfg.sizes = parse_sizes(f.L);
    if (!f.gammas.empty()) cfg.gammas = parse_list(f.gammas);
    if (!f.observables.empty()) cfg.observables = parse_observables(f.observables);
    if (!f.boundary.empty()) {
      cfg.boundary = parse_boundary(f.boundary);
      cfg.boundary_set = true;
    }
    cfg.solver = parse_solver(f.solver);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  cfg.gamma_min = f.gamma_min;
  cfg.gamma_max = f.gamma_max;
  cfg.window_lo = f.window_lo;
  cfg.window_hi = f.window_hi;
  cfg.gc = f.gc;
}

void emit(const std::string& command, const RunConfig& cfg, RunResult r) {
  r.table.comment = header_comment(command, cfg);
  write_csv(cfg.out, r.table);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

FitKind parse_kind(const std::string& s) {
  if (s == "beta") return FitKind::beta;
  if (s == "gamma") return FitKind::gamma;
  if (s == "xi") return FitKind::xi;
  if (s == "nu") return FitKind::nu;
  if (s == "extrapolate" || s == "gc-extrapolation") return FitKind::gc_extrapolation;
  throw ConfigError("unknown fit kind '" + s + "'");
}

nlohmann::json fit_json(const std::vector<FitRow>& rows, const std::string& input, const RunConfig& cfg) {
  nlohmann::json out;
  out["version"] = kVersion;
  out["input"] = input;
  out["config"] = cfg.describe();
  out["fits"] = nlohmann::json::array();
  for (const auto& r : rows) {
    const auto& f = r.fit;
    nlohmann::json j = {{"kind", to_string(f.kind)},
                        {"value", f.value},
                        {"amplitude", f.amplitude},
                        {"window", {f.lo, f.hi}},
                        {"normr", f.normr},
                        {"points_used", f.points_used},
                        {"low_confidence", f.low_confidence}};
    if (r.L) j["L"] = r.L;
    if (f.kind == FitKind::xi) j["gamma"] = r.gamma;
    if (r.gc != 0.0) j["gamma_c"] = r.gc;
    if (f.exponent_p) j["exponent_p"] = *f.exponent_p;
    out["fits"].push_back(j);
  }
  return out;
}

// Expands --config FILE into --key value pairs placed ahead of the other
// flags; options keep their last value, so explicit flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> in(argv + 1, argv + argc), out, file;
  for (std::size_t i = 0; i < in.size(); ++i) {
    std::string path;
    if (in[i] == "--config") {
      if (i + 1 == in.size()) throw ConfigError("--config needs a file");
      path = in[++i];
    } else if (in[i].rfind("--config=", 0) == 0) {
      path = in[i].substr(9);
    } else {
      out.push_back(in[i]);
      continue;
    }
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    std::string line;
    for (int n = 1; std::getline(is, line); ++n) {
      const auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
        return s;
      };
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError(path + ": line " + std::to_string(n) + ": expected key = value");
      file.push_back("--" + trim(t.substr(0, eq)));
      file.push_back(trim(t.substr(eq + 1)));
    }
  }
  if (!file.empty()) out.insert(out.begin() + (out.empty() ? 0 : 1), file.begin(), file.end());
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Non-Hermitian quantum contact process on spin chains"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig cfg;
  Flags f;

  auto* spectrum = app.add_subcommand("spectrum", "full complex spectrum on a grid");
  auto* sweep = app.add_subcommand("sweep", "tracked ground state and observables along imaginary Gamma");
  auto* hermitian = app.add_subcommand("hermitian", "tracked sweep along real Gamma");
  auto* corr = app.add_subcommand("corr", "connected sigma^x correlations");
  auto* entropy = app.add_subcommand("entropy", "entanglement entropy of every cut");
  auto* fit = app.add_subcommand("fit", "exponent fits and critical points");
  auto* oracle = app.add_subcommand("oracle", "closed-form two-site self-test");

  for (auto* c : {spectrum, sweep, hermitian, corr, entropy, fit}) {
    add_model(c, cfg, f);
    c->add_option("--config", "flat key = value file; flags win");
  }
  for (auto* c : {spectrum, sweep, hermitian, corr, entropy}) add_grid(c, cfg, f);
  for (auto* c : {sweep, hermitian, corr, entropy, fit}) add_numerics(c, cfg);
  for (auto* c : {sweep, hermitian}) c->add_option("--observables", f.observables, "comma-separated or all");
  for (auto* c : {corr, fit}) {
    c->add_option("--window-lo", f.window_lo, "fit window start");
    c->add_option("--window-hi", f.window_hi, "fit window end");
  }
  fit->add_option("--kind", f.kind, "beta, gamma, xi, nu, extrapolate or gc")->required();
  fit->add_option("--input", f.input, "CSV from sweep, corr or an (L, gamma_c) table");
  fit->add_option("--gc", f.gc, "reference critical point (skips the search)");
  fit->add_option("--json", f.json, "also write the fit as JSON");

  bool check = false;
  std::optional<double> tolerance;
  oracle->add_flag("--check", check, "run the cross-check suite");
  oracle->add_option("--tolerance", tolerance, "override every threshold");

  try {
    std::vector<std::string> args;
    try {
      args = expand_config(argc, argv);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return config_error;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }

  try {
    if (oracle->parsed()) {
      const auto report = run_oracle_checks(tolerance);
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " error=" << c.error << " tol=" << c.tol << "\n";
      return report.all_pass() ? ok : 1;
    }
    finish(cfg, f);
    if (spectrum->parsed()) {
      emit("spectrum", cfg, run_spectrum(cfg));
    } else if (sweep->parsed()) {
      emit("sweep", cfg, run_sweep(cfg));
    } else if (hermitian->parsed()) {
      cfg.axis = Axis::real;
      cfg.gamma_im = 0.0;
      if (f.observables.empty()) cfg.observables = {"mx", "my", "mz", "nup", "chi"};
      emit("hermitian", cfg, run_sweep(cfg));
    } else if (corr->parsed()) {
      emit("corr", cfg, run_corr(cfg));
    } else if (entropy->parsed()) {
      emit("entropy", cfg, run_entropy(cfg));
    } else if (fit->parsed()) {
      if (f.kind == "gc") {
        auto t = critical_table(run_critical(cfg));
        t.comment = header_comment("fit", cfg) + " kind=gc";
        write_csv(cfg.out, t);
        return ok;
      }
      const FitKind kind = parse_kind(f.kind);
      if (f.input.empty()) throw ConfigError("fit needs --input");
      cfg.validate(false);
      const auto rows = run_fit(kind, read_csv_file(f.input), cfg);
      auto t = fit_table(rows);
      t.comment = header_comment("fit", cfg) + " kind=" + f.kind + " input=" + f.input;
      write_csv(cfg.out, t);
      if (!f.json.empty()) {
        std::ofstream js(f.json);
        if (!js) throw ConfigError("cannot write " + f.json);
        js << fit_json(rows, f.input, cfg).dump(2) << "\n";
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const CsvError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return fit_error;
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return fit_error;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return solver_error;
  } catch (const std::length_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return solver_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
