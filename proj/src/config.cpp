#include "qcp/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcp/csv.hpp"

namespace qcp {
namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + v[i];
  return s;
}

}  // namespace

ModelParams RunConfig::model(int L) const {
  ModelParams p;
  p.L = L;
  p.omega = omega;
  p.gamma = cplx(gamma_re, gamma_im);
  p.boundary = boundary;
  return p;
}

SweepOptions RunConfig::sweep_options() const {
  SweepOptions o;
  o.solver = solver;
  o.axis = axis;
  o.count = count;
  o.refine_depth = refine_depth;
  return o;
}

std::vector<double> RunConfig::grid() const {
  if (!gammas.empty()) return gammas;
  if (!gamma_min || !gamma_max || steps == 0) throw ConfigError("no grid: give --gammas or --gamma-min/--gamma-max/--steps");
  try {
    return linear_grid(*gamma_min, *gamma_max, steps);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void RunConfig::validate(bool need_grid) const {
  if (sizes.empty()) throw ConfigError("no chain length given");
  for (int L : sizes) {
    try {
      model(L).validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  for (const auto& o : observables)
    if (!kObservables.count(o)) throw ConfigError("unknown observable '" + o + "'");
  if (observables.count("gap") && solver == SolverKind::targeted && count < 2)
    throw ConfigError("gap needs at least 2 eigenpairs from the targeted solver");
  if (count < 1) throw ConfigError("count must be positive");
  if (!(dh > 0.0)) throw ConfigError("dh must be positive");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(track_step > 0.0)) throw ConfigError("track-step must be positive");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (window_lo && window_hi && !(*window_lo < *window_hi)) throw ConfigError("window-lo must be below window-hi");
  if (need_grid) {
    const auto g = grid();
    if (g.empty()) throw ConfigError("empty grid");
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1])) throw ConfigError("gamma list must be strictly increasing");
  }
}

std::string RunConfig::describe() const {
  std::vector<std::string> kv;
  std::vector<std::string> ls;
  for (int L : sizes) ls.push_back(std::to_string(L));
  kv.push_back("L=" + join(ls, ','));
  kv.push_back("omega=" + format_number(omega));
  kv.push_back("gamma-re=" + format_number(gamma_re));
  kv.push_back("gamma-im=" + format_number(gamma_im));
  kv.push_back("boundary=" + to_string(boundary));
  kv.push_back(std::string("axis=") + (axis == Axis::imag ? "imag" : "real"));
  if (!gammas.empty()) {
    std::vector<std::string> gs;
    for (double g : gammas) gs.push_back(format_number(g));
    kv.push_back("gammas=" + join(gs, ','));
  } else {
    if (gamma_min) kv.push_back("gamma-min=" + format_number(*gamma_min));
    if (gamma_max) kv.push_back("gamma-max=" + format_number(*gamma_max));
    if (steps) kv.push_back("steps=" + std::to_string(steps));
  }
  kv.push_back("observables=" + join(std::vector<std::string>(observables.begin(), observables.end()), ','));
  kv.push_back("solver=" + to_string(solver));
  kv.push_back("count=" + std::to_string(count));
  kv.push_back("refine-depth=" + std::to_string(refine_depth));
  kv.push_back("dh=" + format_number(dh));
  kv.push_back("tol=" + format_number(tol));
  if (window_lo) kv.push_back("window-lo=" + format_number(*window_lo));
  if (window_hi) kv.push_back("window-hi=" + format_number(*window_hi));
  if (gc) kv.push_back("gc=" + format_number(*gc));
  return join(kv, ' ');
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_commas(s)) {
    const auto dash = item.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const int a = std::stoi(item.substr(0, dash)), b = std::stoi(item.substr(dash + 1));
        if (a > b) throw ConfigError("bad size range '" + item + "'");
        for (int L = a; L <= b; ++L) out.push_back(L);
      } else {
        std::size_t pos = 0;
        out.push_back(std::stoi(item, &pos));
        if (pos != item.size()) throw ConfigError("bad chain length '" + item + "'");
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad chain length '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("no chain length given");
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_commas(s)) {
    std::size_t pos = 0;
    try {
      out.push_back(std::stod(item, &pos));
    } catch (const std::logic_error&) {
      throw ConfigError("bad number '" + item + "'");
    }
    if (pos != item.size()) throw ConfigError("bad number '" + item + "'");
  }
  return out;
}

std::set<std::string> parse_observables(const std::string& s) {
  std::set<std::string> out;
  for (const auto& item : split_commas(s)) {
    if (item == "all") {
      out = kObservables;
      continue;
    }
    if (!kObservables.count(item)) throw ConfigError("unknown observable '" + item + "'");
    out.insert(item);
  }
  return out;
}

}  // namespace qcp
