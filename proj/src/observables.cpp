#include "qcp/observables.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace qcp {
namespace {

void check_norm(const Vec& v) {
  if (std::abs(v.norm() - 1.0) > 1e-8)
    throw std::domain_error("state is not normalized (norm " + std::to_string(v.norm()) + ")");
}

}  // namespace

cplx expect_rr(const Vec& state, const SparseOperator& O) {
  check_norm(state);
  return state.dot(O.apply(state));
}

double expect_rr_real(const Vec& state, const SparseOperator& O) {
  const cplx v = expect_rr(state, O);
  if (std::abs(v.imag()) > 1e-10)
    throw std::domain_error("expectation of a Hermitian operator has imaginary part " +
                            std::to_string(v.imag()));
  return v.real();
}

cplx expect_lr(const Vec& left, const Vec& right, const SparseOperator& O) {
  const cplx norm = left.dot(right);
  if (std::abs(norm) <= 1e-12) throw std::domain_error("vanishing biorthogonal norm <L|R>");
  return left.dot(O.apply(right)) / norm;
}

SpinTotals::SpinTotals(int L_)
    : L(L_),
      x(site_sum(Pauli::X, L_)),
      y(site_sum(Pauli::Y, L_)),
      z(site_sum(Pauli::Z, L_)),
      n(site_sum(Pauli::N, L_)) {}

const SpinTotals& spin_totals(int L) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<SpinTotals>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[L];
  if (!slot) slot = std::make_unique<SpinTotals>(L);
  return *slot;
}

Magnetization magnetizations(const Vec& state, int L) {
  const auto& t = spin_totals(L);
  return {expect_rr_real(state, t.x), expect_rr_real(state, t.y), expect_rr_real(state, t.z),
          expect_rr_real(state, t.n)};
}

Susceptibility susceptibility(const ModelParams& params, const GroundStateRecord& rec, double dh,
                              const SweepOptions& opt, bool check_half) {
  if (!(dh > 0.0)) throw std::invalid_argument("probe step must be positive");
  const auto& tot = spin_totals(params.L);
  const double eps = opt.tracker.eps_re * params.omega;

  auto mz_probe = [&](double h) {
    ModelParams p = params;
    p.probe = params.probe + h;
    const SparseOperator H = build_hamiltonian(p);
    SweepOptions o = opt;
    o.count = std::min(opt.count, 4);
    const Spectrum s = solve_point(H, o, &rec.energy, ground_target(p));
    std::size_t j = 0, m = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double ov = std::abs(rec.state.dot(s.pairs[i].right));
      if (ov > best) best = ov, j = i;
      if (s.pairs[i].value.real() < s.pairs[m].value.real()) m = i;
    }
    if (best < 0.9)
      throw SolverError("probe field moved the ground state (overlap " + std::to_string(best) + ")");
    if (rec.rule == Rule::min_real_part && rec.energy.real() < -eps &&
        std::abs(s.pairs[m].value - s.pairs[j].value) > 1e-9 * std::max(1.0, std::abs(rec.energy)))
      throw SolverError("probe field flipped the minimum-real-part branch");
    return expect_rr_real(s.pairs[j].right, tot.z);
  };

  const double mz0 = expect_rr_real(rec.state, tot.z);
  Susceptibility out;
  out.chi = (mz_probe(dh) - mz0) / (2.0 * dh);
  if (check_half) {
    const double h = 0.5 * dh;
    out.chi_half = (mz_probe(h) - mz0) / (2.0 * h);
    out.converged = std::abs(*out.chi_half - out.chi) <= 0.05 * std::abs(out.chi);
  }
  return out;
}

CorrelationProfile correlation_profile(const Vec& state, int L, double gamma) {
  CorrelationProfile prof;
  prof.gamma = gamma;
  std::vector<SparseOperator> x;
  std::vector<double> ex;
  for (int k = 0; k < L; ++k) {
    x.push_back(embed({Pauli::X, k}, L));
    ex.push_back(expect_rr_real(state, x.back()));
  }
  const Vec x0 = x[0].apply(state);
  for (int k = 1; k < L; ++k) {
    const cplx c = x[std::size_t(k)].apply(state).dot(x0);
    prof.n.push_back(k + 1);
    prof.values.push_back(c.real() - ex[0] * ex[std::size_t(k)]);
  }
  return prof;
}

double entanglement_entropy(const Vec& state, int L, int LA) {
  if (LA < 1 || LA >= L) throw std::invalid_argument("partition must satisfy 1 <= LA < L");
  check_norm(state);
  const Eigen::Index dA = Eigen::Index(1) << LA, dB = Eigen::Index(1) << (L - LA);
  // column a of this map holds the amplitudes with first-block index a
  Eigen::Map<const DenseMat> M(state.data(), dB, dA);
  Eigen::BDCSVD<DenseMat> svd(M);
  double s = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double lam = svd.singularValues()(i) * svd.singularValues()(i);
    if (lam > 1e-14) s -= lam * std::log(lam);
  }
  return s;
}

int half_partition(int L) { return L % 2 == 0 ? L / 2 : (L + 1) / 2; }

double energy_gap(const std::vector<cplx>& values, cplx e0) {
  if (values.size() < 2) throw std::invalid_argument("energy gap needs at least two eigenvalues");
  std::size_t self = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i] - e0) < std::abs(values[self] - e0)) self = i;
  double g = INFINITY;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (i != self) g = std::min(g, std::abs(values[i] - e0));
  return g;
}

double energy_gap(const Spectrum& spec, cplx e0) { return energy_gap(spec.values(), e0); }

}  // namespace qcp
