#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcp/groundstate.hpp"
#include "qcp/models.hpp"

namespace qcp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::set<std::string> kObservables = {"mx", "my", "mz", "nup", "chi", "gap", "svn", "corr"};

struct RunConfig {
  std::vector<int> sizes{4};
  double omega = 1.0;
  double gamma_re = 0.0, gamma_im = 0.0;
  Boundary boundary = Boundary::periodic;
  bool boundary_set = false;
  Axis axis = Axis::imag;

  // Grid: explicit list wins over (min, max, steps).
  std::optional<double> gamma_min, gamma_max;
  int steps = 0;
  std::vector<double> gammas;

  std::set<std::string> observables{"mx", "my", "mz", "nup"};
  SolverKind solver = SolverKind::dense;
  int count = 8;
  int refine_depth = 0;
  double dh = 1e-5;
  double tol = 1e-4;  // critical-point bisection
  double track_step = 0.05;
  double search_lo = 13.0, search_hi = 16.0;
  std::optional<double> window_lo, window_hi;
  std::optional<double> gc;
  int workers = 1;
  std::string out;

  ModelParams model(int L) const;
  SweepOptions sweep_options() const;
  // Ascending grid along the swept axis.
  std::vector<double> grid() const;
  // Throws ConfigError on inconsistent settings.
  void validate(bool need_grid = true) const;
  // Flat key=value rendering used in output headers.
  std::string describe() const;
};

std::vector<int> parse_sizes(const std::string& s);
std::vector<double> parse_list(const std::string& s);
std::set<std::string> parse_observables(const std::string& s);

}  // namespace qcp
