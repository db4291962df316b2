#include "qcp/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/SparseLU>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <arpack/arpack.hpp>

namespace qcp {
namespace {

Eigen::Index max_component(const Vec& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) >= m * (1.0 - 1e-10)) return i;
  return 0;
}

DenseMat densify(const SparseOperator& H, const DenseOptions& opt) {
  if (H.dim() > opt.ceiling)
    throw std::length_error("dimension " + std::to_string(H.dim()) + " exceeds the dense ceiling " +
                            std::to_string(opt.ceiling) + "; use the targeted solver");
  DenseMat A = H.to_dense();
  if (!A.allFinite()) throw std::domain_error("operator has non-finite entries");
  return A;
}

// zgeev on a copy of A; returns eigenvalues and (optionally) right vectors.
void geev(DenseMat A, bool vectors, Eigen::VectorXcd& w, DenseMat& vr) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  w.resize(n);
  if (vectors) vr.resize(n, n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, A.data(), n, w.data(), nullptr, 1,
                    vectors ? vr.data() : nullptr, vectors ? n : 1);
  if (info != 0) throw SolverError("zgeev failed with info " + std::to_string(info));
}

void finish(const SparseOperator& H, Spectrum& s, double tol) {
  s.norm = H.frobenius_norm();
  s.max_residual = 0.0;
  for (auto& p : s.pairs) {
    p.right.normalize();
    fix_phase(p.right);
    const double r = (H.apply(p.right) - p.value * p.right).norm();
    s.max_residual = std::max(s.max_residual, r);
  }
  s.residual_ok = s.max_residual <= tol * std::max(s.norm, 1.0);
  sort_pairs(s.pairs);
}

double target_key(const TargetedOptions& opt, cplx v) {
  switch (opt.target) {
    case Target::nearest:
      return std::abs(v - opt.shift);
    case Target::min_imag_part:
      return v.imag();
    default:
      return v.real();
  }
}

void keep_best(std::vector<EigenPair>& pairs, const TargetedOptions& opt) {
  std::stable_sort(pairs.begin(), pairs.end(), [&](const EigenPair& a, const EigenPair& b) {
    return target_key(opt, a.value) < target_key(opt, b.value);
  });
  pairs.resize(std::min<std::size_t>(pairs.size(), std::size_t(opt.count)));
  sort_pairs(pairs);
}

// Subset of a dense spectrum used when the problem is too small for Arnoldi.
Spectrum targeted_dense(const SparseOperator& H, const TargetedOptions& opt) {
  DenseOptions d;
  d.residual_tol = opt.residual_tol;
  Spectrum full = eig_full(H, d);
  keep_best(full.pairs, opt);
  return full;
}

// Basis states coupled to nothing else. Each is an exact eigenvector that a
// Krylov space started from a generic vector resolves only by chance.
std::vector<Eigen::Index> isolated_states(const SparseOperator& H) {
  const SparseMat& m = H.matrix();
  std::vector<char> coupled(std::size_t(m.rows()), 0);
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMat::InnerIterator it(m, r); it; ++it)
      if (it.row() != it.col()) coupled[std::size_t(it.row())] = coupled[std::size_t(it.col())] = 1;
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (!coupled[std::size_t(i)]) out.push_back(i);
  return out;
}

}  // namespace

std::vector<cplx> Spectrum::values() const {
  std::vector<cplx> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.value);
  return v;
}

void fix_phase(Vec& v) {
  if (v.size() == 0) return;
  const Eigen::Index i = max_component(v);
  const double a = std::abs(v[i]);
  if (a == 0.0) return;
  const cplx ph = std::conj(v[i]) / a;
  if (ph != cplx(1.0)) v *= ph;
  v[i] = a;
}

void sort_pairs(std::vector<EigenPair>& pairs) {
  std::vector<Eigen::Index> idx(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) idx[k] = max_component(pairs[k].right);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const cplx x = pairs[a].value, y = pairs[b].value;
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
    return idx[a] < idx[b];
  });
  std::vector<EigenPair> out;
  out.reserve(pairs.size());
  for (auto k : order) out.push_back(std::move(pairs[k]));
  pairs = std::move(out);
}

Spectrum eig_full(const SparseOperator& H, const DenseOptions& opt) {
  DenseMat A = densify(H, opt);
  Eigen::VectorXcd w;
  DenseMat vr;
  geev(std::move(A), true, w, vr);
  Spectrum s;
  s.dim = H.dim();
  s.pairs.resize(std::size_t(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) s.pairs[std::size_t(i)] = {w[i], vr.col(i), std::nullopt};
  finish(H, s, opt.residual_tol);
  return s;
}

std::vector<cplx> eigenvalues(const SparseOperator& H, const DenseOptions& opt) {
  DenseMat A = densify(H, opt);
  Eigen::VectorXcd w;
  DenseMat vr;
  geev(std::move(A), false, w, vr);
  std::vector<cplx> v(w.data(), w.data() + w.size());
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

Spectrum eig_left(const SparseOperator& H, Spectrum spec, double cluster_tol) {
  const std::size_t n = spec.pairs.size();
  if (Eigen::Index(n) != H.dim()) throw std::invalid_argument("eig_left needs a full spectrum");
  DenseOptions d;
  d.ceiling = std::max<Eigen::Index>(d.ceiling, H.dim());
  Eigen::VectorXcd mu;
  DenseMat U;
  geev(densify(H.adjoint(), d), true, mu, U);

  // Greedy nearest assignment of conj(mu_j) to E_i, each j used once.
  std::vector<int> match(n, -1);
  std::vector<char> used(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = INFINITY;
    int bj = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double dist = std::abs(std::conj(mu[Eigen::Index(j)]) - spec.pairs[i].value);
      if (dist < best) best = dist, bj = int(j);
    }
    const double scale = std::max(1.0, std::abs(spec.pairs[i].value));
    if (bj >= 0 && best <= 1e-6 * scale) {
      match[i] = bj;
      used[std::size_t(bj)] = 1;
    }
  }

  // Clusters of numerically equal eigenvalues. Sorting by real part does not
  // keep them adjacent when the real parts differ only by rounding.
  std::vector<char> done(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (done[start]) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = start; i < n; ++i)
      if (!done[i] && std::abs(spec.pairs[i].value - spec.pairs[start].value) <= cluster_tol) {
        members.push_back(i);
        done[i] = 1;
      }
    const Eigen::Index m = Eigen::Index(members.size());
    bool ok = true;
    DenseMat R(H.dim(), m), Lc(H.dim(), m);
    for (Eigen::Index c = 0; c < m; ++c) {
      const std::size_t i = members[std::size_t(c)];
      if (match[i] < 0) {
        ok = false;
        break;
      }
      R.col(c) = spec.pairs[i].right;
      Lc.col(c) = U.col(match[i]);
    }
    if (ok) {
      const DenseMat M = Lc.adjoint() * R;
      Eigen::JacobiSVD<DenseMat> svd(M);
      const auto& sv = svd.singularValues();
      if (sv(m - 1) <= 1e-12 * std::max(1.0, sv(0))) {
        ok = false;
      } else {
        const DenseMat Lb = Lc * M.inverse().adjoint();
        for (Eigen::Index c = 0; c < m; ++c) spec.pairs[members[std::size_t(c)]].left = Lb.col(c);
      }
    }
    if (!ok) {
      spec.left_degenerate = true;
      for (auto i : members) spec.pairs[i].left.reset();
    }
  }
  return spec;
}

Spectrum eig_targeted(const SparseOperator& H, const TargetedOptions& opt) {
  if (opt.count < 1) throw std::invalid_argument("targeted solver needs count >= 1");
  const a_int n = a_int(H.dim());
  const a_int nev = opt.count;
  if (n <= 64 || nev >= n - 2) return targeted_dense(H, opt);
  a_int ncv = opt.ncv > 0 ? opt.ncv : std::max<a_int>(2 * nev + 1, 20);
  ncv = std::min(ncv, n);
  if (ncv - nev < 2) throw std::invalid_argument("ncv must exceed count by at least 2");

  using LU = Eigen::SparseLU<Eigen::SparseMatrix<cplx, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>>;
  LU lu;
  const bool shift_invert = opt.target == Target::nearest;
  if (shift_invert) {
    Eigen::SparseMatrix<cplx, Eigen::ColMajor> A = H.matrix();
    Eigen::SparseMatrix<cplx, Eigen::ColMajor> eye(n, n);
    eye.setIdentity();
    A -= opt.shift * eye;
    A.makeCompressed();
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("factorization of H - sigma failed at sigma = (" +
                        std::to_string(opt.shift.real()) + "," + std::to_string(opt.shift.imag()) + ")");
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<cplx> resid{};
  resid.resize(std::size_t(n));
  for (auto& r : resid) r = cplx(uni(rng), uni(rng));
  const auto isolated = isolated_states(H);
  if (a_int(isolated.size()) + nev + 2 > n) return targeted_dense(H, opt);
  for (auto i : isolated) resid[std::size_t(i)] = 0.0;

  const a_int lworkl = 3 * ncv * ncv + 5 * ncv;
  std::vector<cplx> v(std::size_t(n) * std::size_t(ncv)), workd(3 * std::size_t(n)), workl;
  workl.resize(std::size_t(lworkl));
  std::vector<double> rwork;
  rwork.resize(std::size_t(ncv));
  a_int iparam[11] = {};
  a_int ipntr[14] = {};
  iparam[0] = 1;
  iparam[2] = opt.max_iterations;
  iparam[6] = 1;
  a_int ido = 0, info = 1;
  const char* which = shift_invert ? "LM" : opt.target == Target::min_imag_part ? "SI" : "SR";
  auto C = [](cplx* p) { return reinterpret_cast<double _Complex*>(p); };

  Vec x(n);
  while (true) {
    arpack::internal::znaupd_c(&ido, "I", n, which, nev, opt.tol, C(resid.data()), ncv, C(v.data()), n,
                               iparam, ipntr, C(workd.data()), C(workl.data()), lworkl, rwork.data(),
                               &info);
    if (ido != -1 && ido != 1) break;
    cplx* in = workd.data() + ipntr[0] - 1;
    cplx* out = workd.data() + ipntr[1] - 1;
    if (shift_invert) {
      x = lu.solve(Eigen::Map<const Vec>(in, n));
      std::copy(x.data(), x.data() + n, out);
    } else {
      H.apply(in, out);
    }
  }
  if (info == 1)
    throw SolverError("Arnoldi iteration did not converge within " + std::to_string(opt.max_iterations) +
                      " restarts (" + std::to_string(iparam[4]) + " of " + std::to_string(nev) +
                      " converged)");
  if (info != 0) throw SolverError("znaupd failed with info " + std::to_string(info));

  std::vector<a_int> select(std::size_t(ncv) + 0, 0);
  std::vector<cplx> d(std::size_t(nev) + 1), z(std::size_t(n) * std::size_t(nev)), workev(2 * std::size_t(ncv));
  double _Complex sigma{};
  arpack::internal::zneupd_c(1, "A", select.data(), C(d.data()), C(z.data()), n, sigma, C(workev.data()),
                             "I", n, which, nev, opt.tol, C(resid.data()), ncv, C(v.data()), n, iparam,
                             ipntr, C(workd.data()), C(workl.data()), lworkl, rwork.data(), &info);
  if (info != 0) throw SolverError("zneupd failed with info " + std::to_string(info));
  const a_int nconv = iparam[4];
  if (nconv < nev)
    throw SolverError("only " + std::to_string(nconv) + " of " + std::to_string(nev) +
                      " eigenpairs converged");

  Spectrum s;
  s.dim = H.dim();
  for (a_int k = 0; k < nev; ++k) {
    cplx val = d[std::size_t(k)];
    if (shift_invert) val = opt.shift + 1.0 / val;
    Vec r = Eigen::Map<Vec>(z.data() + std::size_t(k) * std::size_t(n), n);
    s.pairs.push_back({val, std::move(r), std::nullopt});
  }
  for (auto i : isolated) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    s.pairs.push_back({H.coeff(i, i), std::move(e), std::nullopt});
  }
  finish(H, s, opt.residual_tol);
  keep_best(s.pairs, opt);
  if (!s.residual_ok)
    throw SolverError("targeted eigenpair residual " + std::to_string(s.max_residual) +
                      " above tolerance");
  return s;
}

}  // namespace qcp
