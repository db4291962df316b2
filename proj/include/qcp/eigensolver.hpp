#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcp/operator.hpp"

namespace qcp {

struct EigenPair {
  cplx value;
  Vec right;                // unit 2-norm, largest component real positive
  std::optional<Vec> left;  // scaled so that <left|right> = 1
};

struct Spectrum {
  std::vector<EigenPair> pairs;  // sorted by (Re, Im, index of largest component)
  Eigen::Index dim = 0;
  double max_residual = 0.0;
  double norm = 0.0;  // Frobenius norm of the operator
  bool residual_ok = true;
  bool left_degenerate = false;

  std::size_t size() const { return pairs.size(); }
  std::vector<cplx> values() const;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DenseOptions {
  Eigen::Index ceiling = 4096;
  double residual_tol = 1e-9;  // relative to the Frobenius norm
  bool vectors = true;
};

enum class Target { min_real_part, min_imag_part, nearest };

struct TargetedOptions {
  int count = 6;
  Target target = Target::min_real_part;
  cplx shift{0.0, 0.0};  // used by Target::nearest
  int ncv = 0;           // 0 picks max(2*count+1, 20)
  int max_iterations = 20000;
  double tol = 1e-14;
  double residual_tol = 1e-8;  // relative to the Frobenius norm
  std::uint64_t seed = 0x5eed;
};

Spectrum eig_full(const SparseOperator& H, const DenseOptions& opt = {});
// Sorted eigenvalues only.
std::vector<cplx> eigenvalues(const SparseOperator& H, const DenseOptions& opt = {});
// Left eigenvectors from the conjugate transpose, biorthonormalized within
// clusters of equal eigenvalues.
Spectrum eig_left(const SparseOperator& H, Spectrum spec, double cluster_tol = 1e-10);
Spectrum eig_targeted(const SparseOperator& H, const TargetedOptions& opt);

void fix_phase(Vec& v);
void sort_pairs(std::vector<EigenPair>& pairs);

}  // namespace qcp
