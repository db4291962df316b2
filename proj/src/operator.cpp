#include "qcp/operator.hpp"

#include <stdexcept>
#include <string>

namespace qcp {
namespace {

constexpr int kMaxSites = 26;

void check_sites(int L) {
  if (L < 1 || L > kMaxSites)
    throw std::domain_error("chain length out of range: " + std::to_string(L));
}

void check_dims(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim())
    throw std::domain_error("operator dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
}

// Single-site action on bit b: returns new bit, writes amplitude (0 if annihilated).
int site_action(Pauli kind, int b, cplx& amp) {
  switch (kind) {
    case Pauli::X:
      amp = 1.0;
      return 1 - b;
    case Pauli::Y:
      amp = b == 0 ? cplx(0, -1) : cplx(0, 1);
      return 1 - b;
    case Pauli::Z:
      amp = b == 0 ? -1.0 : 1.0;
      return b;
    case Pauli::Plus:
      amp = b == 0 ? 1.0 : 0.0;
      return 1;
    case Pauli::Minus:
      amp = b == 1 ? 1.0 : 0.0;
      return 0;
    case Pauli::N:
      amp = b == 1 ? 1.0 : 0.0;
      return b;
    case Pauli::Id:
      amp = 1.0;
      return b;
  }
  throw std::logic_error("unknown Pauli kind");
}

SparseMat drop_zeros(SparseMat m) {
  m.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0.0); });
  m.makeCompressed();
  return m;
}

}  // namespace

PauliString::PauliString(cplx coefficient, std::vector<PauliFactor> factors)
    : coefficient_(coefficient), factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].site < 0) throw std::domain_error("negative site index");
    if (i > 0 && factors_[i].site <= factors_[i - 1].site)
      throw std::invalid_argument("Pauli string sites must be strictly increasing (site " +
                                  std::to_string(factors_[i].site) + ")");
  }
}

std::size_t PauliString::apply(std::size_t s, int L, cplx& amplitude) const {
  amplitude = coefficient_;
  for (const auto& f : factors_) {
    if (f.site >= L)
      throw std::domain_error("site " + std::to_string(f.site) + " outside chain of length " +
                              std::to_string(L));
    const int shift = L - 1 - f.site;
    const int b = static_cast<int>((s >> shift) & 1u);
    cplx a;
    const int nb = site_action(f.kind, b, a);
    amplitude *= a;
    if (amplitude == cplx(0.0)) return s;
    s ^= static_cast<std::size_t>(b ^ nb) << shift;
  }
  return s;
}

SparseOperator::SparseOperator(int L, SparseMat m) : L_(L), m_(std::move(m)) {
  check_sites(L);
  if (m_.rows() != (Eigen::Index(1) << L) || m_.cols() != m_.rows())
    throw std::domain_error("operator shape does not match 2^L");
  m_.makeCompressed();
}

SparseOperator SparseOperator::zero(int L) {
  check_sites(L);
  const Eigen::Index d = Eigen::Index(1) << L;
  return SparseOperator(L, SparseMat(d, d));
}

SparseOperator SparseOperator::identity(int L) { return assemble({PauliString(1.0)}, L); }

SparseOperator SparseOperator::diagonal(int L, const Eigen::VectorXcd& d) {
  check_sites(L);
  const Eigen::Index n = Eigen::Index(1) << L;
  if (d.size() != n) throw std::domain_error("diagonal length does not match 2^L");
  std::vector<Eigen::Triplet<cplx>> t;
  for (Eigen::Index i = 0; i < n; ++i)
    if (d[i] != cplx(0.0)) t.emplace_back(i, i, d[i]);
  SparseMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return SparseOperator(L, std::move(m));
}

Vec SparseOperator::apply(const Vec& v) const {
  if (v.size() != dim()) throw std::domain_error("vector length does not match operator");
  return m_ * v;
}

void SparseOperator::apply(const cplx* in, cplx* out) const {
  Eigen::Map<const Vec> x(in, dim());
  Eigen::Map<Vec> y(out, dim());
  y.noalias() = m_ * x;
}

DenseMat SparseOperator::to_dense() const { return DenseMat(m_); }

SparseOperator SparseOperator::adjoint() const {
  SparseMat a = m_.adjoint();
  return SparseOperator(L_, std::move(a));
}

double SparseOperator::frobenius_norm() const { return m_.norm(); }

cplx SparseOperator::trace() const {
  cplx t = 0.0;
  for (Eigen::Index i = 0; i < dim(); ++i) t += m_.coeff(i, i);
  return t;
}

bool SparseOperator::is_hermitian(double tol) const {
  SparseMat diff = m_ - SparseMat(m_.adjoint());
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMat::InnerIterator it(diff, k); it; ++it)
      if (std::abs(it.value()) > tol) return false;
  return true;
}

SparseOperator embed(PauliFactor factor, int L) {
  check_sites(L);
  if (factor.site < 0 || factor.site >= L)
    throw std::domain_error("site " + std::to_string(factor.site) + " outside chain of length " +
                            std::to_string(L));
  return assemble({PauliString(1.0, {factor})}, L);
}

SparseOperator assemble(const std::vector<PauliString>& terms, int L) {
  check_sites(L);
  const std::size_t d = std::size_t(1) << L;
  for (const auto& t : terms)
    for (const auto& f : t.factors())
      if (f.site >= L)
        throw std::domain_error("site " + std::to_string(f.site) + " outside chain of length " +
                                std::to_string(L));
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(terms.size() * d);
  for (const auto& t : terms) {
    for (std::size_t s = 0; s < d; ++s) {
      cplx a;
      const std::size_t r = t.apply(s, L, a);
      if (a != cplx(0.0)) trip.emplace_back(Eigen::Index(r), Eigen::Index(s), a);
    }
  }
  SparseMat m{Eigen::Index(d), Eigen::Index(d)};
  m.setFromTriplets(trip.begin(), trip.end());
  return SparseOperator(L, drop_zeros(std::move(m)));
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  check_dims(a, b);
  return SparseOperator(a.sites(), drop_zeros(a.matrix() + b.matrix()));
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  check_dims(a, b);
  return SparseOperator(a.sites(), drop_zeros(a.matrix() - b.matrix()));
}

SparseOperator operator*(cplx c, const SparseOperator& a) {
  return SparseOperator(a.sites(), drop_zeros(c * a.matrix()));
}

SparseOperator product(const SparseOperator& a, const SparseOperator& b) {
  check_dims(a, b);
  SparseMat p = a.matrix() * b.matrix();
  return SparseOperator(a.sites(), drop_zeros(std::move(p)));
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return product(a, b) - product(b, a);
}

Vec matvec(const SparseOperator& a, const Vec& v) { return a.apply(v); }

SparseOperator site_sum(Pauli kind, int L) {
  std::vector<PauliString> terms;
  for (int k = 0; k < L; ++k) terms.emplace_back(1.0, std::vector<PauliFactor>{{kind, k}});
  return assemble(terms, L);
}

}  // namespace qcp
