#include "qcp/models.hpp"

#include <cmath>
#include <stdexcept>

namespace qcp {

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw std::invalid_argument("unknown boundary '" + s + "' (expected periodic or open)");
}

std::vector<std::string> ModelParams::validate() const {
  if (L < 2) throw std::invalid_argument("L must be at least 2");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be positive");
  if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag()))
    throw std::invalid_argument("gamma must be finite");
  if (!(probe >= 0.0) || !std::isfinite(probe)) throw std::invalid_argument("probe must be >= 0");
  std::vector<std::string> warn;
  if (probe > kProbeWarn) warn.push_back("probe field " + std::to_string(probe) + " is not small");
  return warn;
}

std::vector<std::pair<int, int>> bonds(int L, Boundary boundary) {
  std::vector<std::pair<int, int>> b;
  for (int k = 0; k + 1 < L; ++k) b.emplace_back(k, k + 1);
  if (boundary == Boundary::periodic && L >= 3) b.emplace_back(L - 1, 0);
  return b;
}

SparseOperator build_h0(const ModelParams& p) {
  p.validate();
  std::vector<PauliString> terms;
  for (auto [a, b] : bonds(p.L, p.boundary)) {
    const int lo = std::min(a, b), hi = std::max(a, b);
    // sigma_x^a n^b + n^a sigma_x^b
    const Pauli ka = a == lo ? Pauli::X : Pauli::N;
    const Pauli kb = a == lo ? Pauli::N : Pauli::X;
    terms.emplace_back(p.omega, std::vector<PauliFactor>{{ka, lo}, {kb, hi}});
    terms.emplace_back(p.omega, std::vector<PauliFactor>{{kb, lo}, {ka, hi}});
  }
  return assemble(terms, p.L);
}

SparseOperator build_heff(const ModelParams& p) {
  p.validate();
  SparseOperator h = build_h0(p);
  if (p.gamma == cplx(0.0)) return h;
  return h + (-0.5 * p.gamma) * site_sum(Pauli::N, p.L);
}

SparseOperator apply_probe(const SparseOperator& H, double dh) {
  if (!(dh >= 0.0)) throw std::invalid_argument("probe must be >= 0");
  if (dh == 0.0) return H;
  return H + cplx(-0.5 * dh) * site_sum(Pauli::Z, H.sites());
}

SparseOperator build_hamiltonian(const ModelParams& p) { return apply_probe(build_heff(p), p.probe); }

SparseOperator translation(int L) {
  const Eigen::Index d = Eigen::Index(1) << L;
  std::vector<Eigen::Triplet<cplx>> t;
  for (Eigen::Index s = 0; s < d; ++s) {
    Eigen::Index r = 0;
    for (int k = 0; k < L; ++k) {
      const Eigen::Index bit = (s >> (L - 1 - k)) & 1;
      const int dest = (k + 1) % L;
      r |= bit << (L - 1 - dest);
    }
    t.emplace_back(r, s, 1.0);
  }
  SparseMat m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return SparseOperator(L, std::move(m));
}

}  // namespace qcp
