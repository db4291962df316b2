#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcp/operator.hpp"

namespace qcp {

enum class Boundary { periodic, open };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

struct ModelParams {
  int L = 4;
  double omega = 1.0;
  cplx gamma{0.0, 0.0};  // dissipative field; the pure non-Hermitian case is gamma = i*Gamma
  Boundary boundary = Boundary::periodic;
  double probe = 0.0;

  // Throws std::invalid_argument on hard violations, returns soft warnings.
  std::vector<std::string> validate() const;
};

inline constexpr double kProbeWarn = 1e-2;

// Nearest-neighbour pairs. A periodic chain of two sites has a single bond.
std::vector<std::pair<int, int>> bonds(int L, Boundary boundary);

SparseOperator build_h0(const ModelParams& p);
// H0 - (gamma/2) sum_k n_k
SparseOperator build_heff(const ModelParams& p);
// H - (dh/2) sum_k sigma_z^k
SparseOperator apply_probe(const SparseOperator& H, double dh);
// build_heff followed by apply_probe(p.probe)
SparseOperator build_hamiltonian(const ModelParams& p);

// Cyclic shift of sites k -> k+1 (mod L) as a permutation operator.
SparseOperator translation(int L);

}  // namespace qcp
