#pragma once

#include <optional>
#include <vector>

#include "qcp/groundstate.hpp"

namespace qcp {

struct ObservableRecord {
  cplx gamma;
  cplx e0;
  double mx = 0.0, my = 0.0, mz = 0.0, nup = 0.0;
  std::optional<double> chi;
  std::optional<double> svn_half;
  std::optional<double> gap;
};

struct CorrelationProfile {
  double gamma = 0.0;
  std::vector<int> n;  // 1-based site offsets 2..L
  std::vector<double> values;
  std::optional<double> xi;
};

// <psi|O|psi> for a unit vector.
cplx expect_rr(const Vec& state, const SparseOperator& O);
// Same, for Hermitian O: checks the imaginary part and drops it.
double expect_rr_real(const Vec& state, const SparseOperator& O);
// <L|O|R> / <L|R>
cplx expect_lr(const Vec& left, const Vec& right, const SparseOperator& O);

// Total spin operators of a chain, built once and reused.
struct SpinTotals {
  explicit SpinTotals(int L);
  int L;
  SparseOperator x, y, z, n;
};

const SpinTotals& spin_totals(int L);

struct Magnetization {
  double mx, my, mz, nup;
};

Magnetization magnetizations(const Vec& state, int L);

struct Susceptibility {
  double chi = 0.0;
  std::optional<double> chi_half;  // same with dh/2
  bool converged = true;
};

// Finite-difference response of M^z to the probe field, evaluated on the
// branch selected in `rec` (params.gamma must equal rec.gamma).
Susceptibility susceptibility(const ModelParams& params, const GroundStateRecord& rec, double dh,
                              const SweepOptions& opt, bool check_half = false);

// Delta sigma^x_1 sigma^x_n for n = 2..L.
CorrelationProfile correlation_profile(const Vec& state, int L, double gamma = 0.0);

// Von Neumann entropy of the first LA sites.
double entanglement_entropy(const Vec& state, int L, int LA);
int half_partition(int L);

// min over other eigenvalues of |E_n - E0|.
double energy_gap(const std::vector<cplx>& values, cplx e0);
double energy_gap(const Spectrum& spec, cplx e0);

}  // namespace qcp
