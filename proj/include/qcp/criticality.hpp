#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcp/groundstate.hpp"
#include "qcp/observables.hpp"

namespace qcp {

enum class FitKind { beta, gamma, xi, nu, gc_extrapolation };

std::string to_string(FitKind k);

struct FitResult {
  FitKind kind = FitKind::beta;
  double value = 0.0;
  double amplitude = 0.0;
  double lo = 0.0, hi = 0.0;
  double normr = 0.0;
  int points_used = 0;
  bool low_confidence = false;
  std::optional<double> exponent_p;  // extrapolation only
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineFit {
  double slope = 0.0, intercept = 0.0, normr = 0.0;
  int n = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// ln|M^x| against ln(gc - gamma) over gc - gamma in [lo, hi].
FitResult fit_beta(const std::vector<double>& gamma, const std::vector<double>& mx, double gc,
                   double lo = 1e-3, double hi = 0.5);
// ln chi against ln(gamma - gc) over gamma - gc in [lo, hi]; slope is -gamma.
FitResult fit_gamma(const std::vector<double>& gamma, const std::vector<double>& chi, double gc,
                    double lo = 1e-2, double hi = 1.0);
// ln|value| against n over the given offsets; slope is -1/xi.
FitResult fit_xi(const CorrelationProfile& prof, double nlo, double nhi);
// Whole profile, n in [2, L].
FitResult fit_xi(const CorrelationProfile& prof);
// ln xi against ln(gamma - gc); slope is -nu.
FitResult fit_nu(const std::vector<double>& gamma, const std::vector<double>& xi, double gc);
// gc(L) = gc_inf - a L^-p with a, p > 0.
FitResult extrapolate_gc(const std::vector<double>& L, const std::vector<double>& gc);

struct CriticalPoint {
  int L = 0;
  double gamma_c = 0.0;
  std::string method = "spectral";
  double bracket_width = 0.0;
  double gamma_c_order = 0.0;  // order-parameter estimate
  int evaluations = 0;
};

struct CriticalOptions {
  double tol = 1e-4;
  double lo = 12.0;   // must lie before the transition
  double hi = 16.0;
  double step = 0.05;  // coarse tracked stepping
  double mx_zero = 1e-6;
  SweepOptions sweep;
};

// Transition of the tracked ground state on the imaginary-Gamma axis.
CriticalPoint find_gamma_c(const ModelParams& base, const CriticalOptions& opt = {});

// Real-Gamma axis: point where the ground state leaves the empty state
// (n_up crosses 1/2), located by bisection.
double find_hermitian_jump(const ModelParams& base, double lo, double hi, double tol = 1e-8,
                           const SweepOptions& opt = {});

}  // namespace qcp
