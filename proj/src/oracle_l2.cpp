#include "qcp/oracle_l2.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qcp/criticality.hpp"
#include "qcp/eigensolver.hpp"
#include "qcp/groundstate.hpp"
#include "qcp/models.hpp"
#include "qcp/observables.hpp"

namespace qcp {

double l2_ep(double omega) { return std::sqrt(32.0) * omega; }

L2Solution l2_spectrum(double omega, cplx gamma) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const cplx s = std::sqrt(32.0 * omega * omega + gamma * gamma);
  L2Solution r;
  r.energies = {cplx(0.0), -0.5 * gamma, -0.75 * gamma + 0.25 * s, -0.75 * gamma - 0.25 * s};
  r.ep = l2_ep(omega);
  if (gamma.real() == 0.0) {
    r.ground_index = 3;
    if (gamma.imag() >= 0.0) r.mx = gamma.imag() <= r.ep ? l2_mx(omega, gamma.imag()) : 0.0;
  } else {
    int m = 3;
    for (int i = 0; i < 4; ++i)
      if (r.energies[std::size_t(i)].real() < r.energies[std::size_t(m)].real()) m = i;
    r.ground_index = m;
    if (gamma.imag() == 0.0) r.mx = l2_hermitian_mx(omega, gamma.real());
  }
  return r;
}

double l2_mx(double omega, double g) {
  const double ep = l2_ep(omega);
  if (g < 0.0 || g > ep) throw std::domain_error("l2_mx is defined for 0 <= Gamma <= sqrt(32) Omega");
  const double s = std::sqrt(std::max(0.0, 32.0 * omega * omega - g * g));
  const cplx lam(-0.25 * s, -0.75 * g);
  return -omega * s / (2.0 * omega * omega + g * g + std::norm(lam) + 2.0 * g * lam.imag());
}

double l2_hermitian_mx(double omega, double gamma_re) {
  if (gamma_re <= -2.0 * omega) return 0.0;
  const double e = -0.75 * gamma_re - 0.25 * std::sqrt(32.0 * omega * omega + gamma_re * gamma_re);
  const double u = e + gamma_re;
  return 4.0 * omega * u / (2.0 * omega * omega + u * u);
}

bool OracleReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
}

namespace {

double spectrum_error(const std::vector<cplx>& got, const std::array<cplx, 4>& want) {
  std::vector<cplx> rest(got);
  double err = 0.0;
  for (const cplx w : want) {
    auto it = std::min_element(rest.begin(), rest.end(),
                               [&](cplx a, cplx b) { return std::abs(a - w) < std::abs(b - w); });
    err = std::max(err, std::abs(*it - w));
    rest.erase(it);
  }
  return err;
}

}  // namespace

OracleReport run_oracle_checks(std::optional<double> tolerance, OracleFault fault) {
  OracleReport rep;
  auto add = [&](const std::string& name, double err, double tol) {
    const double t = tolerance.value_or(tol);
    rep.checks.push_back({name, err, t, err <= t});
  };
  const double omega = 1.0;
  ModelParams p;
  p.L = 2;
  p.omega = omega;

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> nh(0.0, 10.0), herm(-6.0, 2.0);
  double e_nh = 0.0, e_h = 0.0, e_poly = 0.0;
  for (int k = 0; k < 50; ++k) {
    p.gamma = cplx(0.0, nh(rng));
    const auto want = l2_spectrum(omega, p.gamma).energies;
    const SparseOperator H = build_heff(p);
    e_nh = std::max(e_nh, spectrum_error(eig_full(H).values(), want));
    const DenseMat A = H.to_dense();
    for (const cplx e : want)
      e_poly = std::max(e_poly, std::abs((A - e * DenseMat::Identity(4, 4)).determinant()));
    p.gamma = cplx(herm(rng), 0.0);
    e_h = std::max(e_h, spectrum_error(eig_full(build_heff(p)).values(), l2_spectrum(omega, p.gamma).energies));
  }
  add("spectrum pure non-Hermitian (50 samples in [0,10])", e_nh, 1e-11);
  add("spectrum Hermitian (50 samples in [-6,2])", e_h, 1e-11);
  add("characteristic polynomial residual", e_poly, 1e-12);

  double e_pair = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double g = 5.5 * k / 49.0;
    const auto e = l2_spectrum(omega, cplx(0.0, g)).energies;
    e_pair = std::max(e_pair, std::abs(e[2] + std::conj(e[3])));
  }
  add("pseudo-Hermitian pair E3 + conj(E4) = 0", e_pair, 1e-12);

  const double sign = fault.flip_mx_sign ? -1.0 : 1.0;
  {
    p.gamma = 0.0;
    const auto trace = sweep(p, linear_grid(0.0, 5.5, 50));
    double e_e = 0.0, e_m = 0.0, e_rule = 0.0;
    for (std::size_t i = 0; i < trace.grid.size(); ++i) {
      const auto& r = trace.records[i];
      const double g = trace.grid[i];
      const auto sol = l2_spectrum(omega, cplx(0.0, g));
      e_e = std::max(e_e, std::abs(r.energy - sol.energies[3]));
      e_m = std::max(e_m, std::abs(magnetizations(r.state, 2).mx - sign * l2_mx(omega, g)));
      if (r.rule != Rule::min_real_part) e_rule = 1.0;
    }
    add("tracked ground energy on E4, Gamma in [0,5.5]", e_e, 1e-10);
    add("tracked M^x vs closed form, Gamma in [0,5.5]", e_m, 1e-10);
    add("rule is min-real-part below the EP", e_rule, 0.0);
  }
  {
    p.gamma = 0.0;
    SweepOptions so;
    so.axis = Axis::real;
    const auto trace = sweep(p, linear_grid(-6.0, 2.0, 50), so);
    double e_e = 0.0, e_m = 0.0;
    for (std::size_t i = 0; i < trace.grid.size(); ++i) {
      const auto& r = trace.records[i];
      const double g = trace.grid[i];
      const auto sol = l2_spectrum(omega, cplx(g, 0.0));
      e_e = std::max(e_e, std::abs(r.energy - sol.energies[std::size_t(sol.ground_index)]));
      e_m = std::max(e_m, std::abs(magnetizations(r.state, 2).mx - sign * l2_hermitian_mx(omega, g)));
    }
    add("Hermitian ground energy, Gamma_re in [-6,2]", e_e, 1e-10);
    add("Hermitian M^x vs closed form, Gamma_re in [-6,2]", e_m, 1e-10);
  }
  {
    p.gamma = cplx(-2.0 * omega, 0.0);
    const auto v = eig_full(build_heff(p)).values();
    add("Hermitian level crossing at -2 Omega", std::max(std::abs(v[0]), std::abs(v[1])), 1e-12);
  }
  {
    p.gamma = 0.0;
    CriticalOptions co;
    co.lo = 5.0;
    co.hi = 7.0;
    co.step = 0.05;
    co.tol = 1e-6;
    const auto cp = find_gamma_c(p, co);
    add("exceptional point at sqrt(32) Omega", std::abs(cp.gamma_c - l2_ep(omega)), 1e-4);
  }
  return rep;
}

}  // namespace qcp
