#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qcp/operator.hpp"

namespace qcp {

// Closed-form two-site chain. Energies are ordered E1 = 0 (both spins down),
// E2 = -Gamma/2 (antisymmetric single excitation), E3,4 = -3Gamma/4 +- s/4
// with s the principal root of 32 Omega^2 + Gamma^2.
struct L2Solution {
  std::array<cplx, 4> energies;
  int ground_index = 3;
  double mx = std::numeric_limits<double>::quiet_NaN();  // NaN where no closed form applies
  double ep = 0.0;
};

double l2_ep(double omega);
L2Solution l2_spectrum(double omega, cplx gamma);
// Order parameter on the E4 branch for purely imaginary Gamma = i*g, 0 <= g <= ep.
double l2_mx(double omega, double g);
// Real Gamma. Uses M^x = <sum_k sigma_x^k>, twice the half-spin expression.
double l2_hermitian_mx(double omega, double gamma_re);

struct OracleCheck {
  std::string name;
  double error = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct OracleFault {
  bool flip_mx_sign = false;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool all_pass() const;
};

// Cross-checks the closed forms against the library. A tolerance override
// replaces every per-check threshold.
OracleReport run_oracle_checks(std::optional<double> tolerance = std::nullopt, OracleFault fault = {});

}  // namespace qcp
