#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qcp {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using DenseMat = Eigen::MatrixXcd;
using SparseMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Basis: site 0 is the most significant bit of the basis index,
// bit value 0 is spin down and 1 is spin up.
enum class Pauli { X, Y, Z, Plus, Minus, N, Id };

struct PauliFactor {
  Pauli kind;
  int site;
};

// coefficient * product of single-site factors, sites strictly increasing.
class PauliString {
 public:
  explicit PauliString(cplx coefficient, std::vector<PauliFactor> factors = {});

  cplx coefficient() const { return coefficient_; }
  const std::vector<PauliFactor>& factors() const { return factors_; }

  // Image of basis state s: returns the output index and writes the amplitude.
  std::size_t apply(std::size_t s, int L, cplx& amplitude) const;

 private:
  cplx coefficient_;
  std::vector<PauliFactor> factors_;
};

class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(int L, SparseMat m);

  static SparseOperator zero(int L);
  static SparseOperator identity(int L);
  static SparseOperator diagonal(int L, const Eigen::VectorXcd& d);

  int sites() const { return L_; }
  Eigen::Index dim() const { return m_.rows(); }
  Eigen::Index nnz() const { return m_.nonZeros(); }
  const SparseMat& matrix() const { return m_; }

  cplx coeff(Eigen::Index row, Eigen::Index col) const { return m_.coeff(row, col); }
  Vec apply(const Vec& v) const;
  void apply(const cplx* in, cplx* out) const;
  DenseMat to_dense() const;
  SparseOperator adjoint() const;
  double frobenius_norm() const;
  cplx trace() const;
  bool is_hermitian(double tol = 1e-14) const;
  bool is_zero() const { return m_.nonZeros() == 0; }

 private:
  int L_ = 0;
  SparseMat m_;
};

SparseOperator embed(PauliFactor factor, int L);
SparseOperator assemble(const std::vector<PauliString>& terms, int L);

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(cplx c, const SparseOperator& a);
SparseOperator product(const SparseOperator& a, const SparseOperator& b);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
Vec matvec(const SparseOperator& a, const Vec& v);

// Sum over all sites of a single-site operator.
SparseOperator site_sum(Pauli kind, int L);

}  // namespace qcp
