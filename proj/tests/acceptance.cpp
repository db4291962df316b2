// Reproduction checks at desk scale. One PASS/FAIL line per criterion,
// indented detail lines below it. Exit status is nonzero when a criterion
// fails that is not in kKnownFailures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qcp/criticality.hpp"
#include "qcp/csv.hpp"
#include "qcp/oracle_l2.hpp"

using namespace qcp;

namespace {

// gamma(L=10) with the default window; see the project notes.
const std::set<std::string> kKnownFailures = {"table-ii"};

struct Criterion {
  std::string id;
  std::vector<std::string> detail;
  bool pass = true;

  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Criterion::check(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  detail.push_back(std::string(ok ? "ok   " : "MISS ") + buf);
  pass = pass && ok;
}

double now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

int unexpected = 0;

void report(Criterion& c, double t0) {
  std::printf("%s %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", c.id.c_str(), now() - t0);
  for (const auto& d : c.detail) std::printf("    %s\n", d.c_str());
  if (!c.pass && !kKnownFailures.count(c.id)) ++unexpected;
  std::fflush(stdout);
}

SolverKind solver_for(int L) { return L <= 8 ? SolverKind::dense : SolverKind::targeted; }

ModelParams chain(int L, Boundary b = Boundary::periodic) {
  ModelParams p;
  p.L = L;
  p.boundary = b;
  return p;
}

SweepOptions options(int L, Axis axis = Axis::imag) {
  SweepOptions o;
  o.solver = solver_for(L);
  o.axis = axis;
  return o;
}

std::vector<double> arange(double lo, double hi, double step) {
  const int n = int(std::lround((hi - lo) / step));
  return linear_grid(lo, hi, n + 1);
}

double gamma_c(int L) {
  ModelParams p = chain(L);
  CriticalOptions o;
  o.sweep = options(L);
  return find_gamma_c(p, o).gamma_c;
}

// -------------------------------------------------------------------------

void oracle() {
  Criterion c{"l2-oracle", {}, true};
  const double t0 = now();
  const auto r = run_oracle_checks();
  for (const auto& k : r.checks) c.check(k.pass, "%s: error %.2e (tol %.0e)", k.name.c_str(), k.error, k.tol);
  const double dt = now() - t0;
  c.check(dt < 1.0, "runtime %.2f s < 1 s", dt);
  report(c, t0);
}

std::map<int, double> gc_cache;

struct BetaRun {
  std::vector<double> g, mx;
};

void table_i() {
  Criterion c{"table-i", {}, true};
  const double t0 = now();
  const std::map<int, double> gc_ref = {{4, 13.4396}, {6, 13.6969}, {8, 13.7720}, {10, 13.8016}};
  const std::map<int, double> beta_ref = {{4, 0.5102}, {6, 0.5303}, {8, 0.5261}, {10, 0.5026}};
  for (int L : {4, 6, 8, 10}) {
    const double t = now();
    const double gc = gamma_c(L);
    gc_cache[L] = gc;
    c.check(std::abs(gc - gc_ref.at(L)) <= 0.01, "L=%d Gamma_c = %.5f, paper %.4f (+-0.01)", L, gc, gc_ref.at(L));
    // 30 points log-spaced in gc - Gamma over the beta window.
    std::vector<double> grid;
    for (int i = 0; i < 30; ++i) grid.push_back(gc - 0.5 * std::pow(1e-3 / 0.5, i / 29.0));
    BetaRun run;
    const auto tr = sweep(chain(L), grid, options(L));
    for (std::size_t i = 0; i < tr.grid.size(); ++i) {
      run.g.push_back(tr.grid[i]);
      run.mx.push_back(magnetizations(tr.records[i].state, L).mx);
    }
    const auto f = fit_beta(run.g, run.mx, gc);
    c.check(std::abs(f.value - beta_ref.at(L)) <= 0.03, "L=%d beta = %.4f, paper %.4f (+-0.03), normr %.4f, %d pts",
            L, f.value, beta_ref.at(L), f.normr, f.points_used);
    if (L == 10) {
      const double dt = now() - t;
      c.check(dt < 600.0, "L=10 critical search + sweep + fit %.1f s < 600 s (targeted)", dt);
      const auto half = fit_beta(run.g, run.mx, gc, 1e-3, 0.25);
      gc_cache[-1] = f.value - half.value;  // read by the fit property suite
      // Dense spot check of the targeted branch well below the transition.
      ModelParams p = chain(10);
      p.gamma = cplx(0, 13.5);
      const auto dense = select_ground(eig_full(build_hamiltonian(p)), nullptr, 1.0);
      const auto targ = sweep(chain(10), {13.5}, options(10)).records.back();
      const double de = std::abs(dense.energy - targ.energy);
      c.check(de < 1e-8, "L=10 targeted vs dense ground energy at Gamma=13.5: |dE| = %.1e", de);
    }
  }
  report(c, t0);
}

void table_ii() {
  Criterion c{"table-ii", {}, true};
  const double t0 = now();
  const std::map<int, double> gc_ref = {{4, 13.4388}, {6, 13.6949}, {8, 13.7704}, {10, 13.8010}};
  const std::map<int, double> gamma_ref = {{4, 1.5198}, {6, 1.4975}, {8, 1.4986}, {10, 1.4969}};
  for (int L : {4, 6, 8, 10}) {
    const double gc = gc_cache.count(L) ? gc_cache[L] : gamma_c(L);
    c.check(std::abs(gc - gc_ref.at(L)) <= 0.01, "L=%d Gamma_c = %.5f, paper %.4f (+-0.01)", L, gc, gc_ref.at(L));
    // Approach from below so the tracked branch is the one that crossed;
    // chi is sampled at 30 log-spaced points above Gamma_c.
    std::vector<double> grid = {gc - 0.05, gc - 0.01, gc - 0.002};
    for (int i = 0; i < 30; ++i) grid.push_back(gc + 1e-2 * std::pow(100.0, i / 29.0));
    std::vector<double> g, chi;
    const SweepOptions so = options(L);
    sweep(chain(L), grid, so, [&](const SweepPoint& pt) {
      if (pt.params.gamma.imag() < gc) return;
      g.push_back(pt.params.gamma.imag());
      chi.push_back(susceptibility(pt.params, pt.record, 1e-5, so).chi);
    });
    const auto f = fit_gamma(g, chi, gc);
    c.check(std::abs(f.value - gamma_ref.at(L)) <= 0.06,
            "L=%d gamma = %.4f, paper %.4f (+-0.06), chi0 = %.3e, normr %.4f, %d pts", L, f.value, gamma_ref.at(L),
            f.amplitude, f.normr, f.points_used);
  }
  report(c, t0);
}

void extrapolation() {
  Criterion c{"extrapolation", {}, true};
  const double t0 = now();
  const auto t = read_csv_file(std::string(QCP_TEST_DATA) + "/table1_gc.csv");
  const auto a = extrapolate_gc(numeric_column(t, "L"), numeric_column(t, "gamma_c"));
  c.check(std::abs(a.value - 13.845) <= 0.01, "published L=4..16: Gamma_c(inf) = %.5f (13.845 +-0.01), p = %.3f",
          a.value, *a.exponent_p);
  std::vector<double> Ls, gcs;
  for (int L = 4; L <= 12; ++L) {
    Ls.push_back(L);
    gcs.push_back(gc_cache.count(L) ? gc_cache[L] : gamma_c(L));
  }
  const auto b = extrapolate_gc(Ls, gcs);
  c.check(std::abs(b.value - 13.845) <= 0.02, "computed L=4..12: Gamma_c(inf) = %.5f (13.845 +-0.02), p = %.3f",
          b.value, *b.exponent_p);
  for (std::size_t i = 0; i < Ls.size(); ++i) gc_cache[int(Ls[i])] = gcs[i];
  report(c, t0);
}

void spectral_symmetry() {
  Criterion c{"spectral-symmetry", {}, true};
  const double t0 = now();
  double worst_pair = 0.0, worst_trace = 0.0;
  for (int L : {4, 6, 8, 10}) {
    for (double g : {2.0, 8.0, 14.0, 18.0}) {
      ModelParams p = chain(L);
      p.gamma = cplx(0, g);
      const auto H = build_heff(p);
      const auto e = eigenvalues(H);
      std::vector<cplx> mirror;
      for (const cplx v : e) mirror.push_back(-std::conj(v));
      std::vector<char> used(e.size(), 0);
      double d = 0.0;
      for (const cplx m : mirror) {
        std::size_t best = 0;
        double bd = INFINITY;
        for (std::size_t j = 0; j < e.size(); ++j)
          if (!used[j] && std::abs(e[j] - m) < bd) bd = std::abs(e[j] - m), best = j;
        used[best] = 1;
        d = std::max(d, bd);
      }
      worst_pair = std::max(worst_pair, d);
      cplx tr = 0.0;
      for (const cplx v : e) tr += v;
      worst_trace = std::max(worst_trace, std::abs(tr - H.trace()) / std::abs(H.trace()));
    }
  }
  c.check(worst_pair <= 1e-9, "{E} = {-conj E}: max mismatch %.1e (<= 1e-9), 16 cases", worst_pair);
  c.check(worst_trace <= 1e-9, "sum E = tr H: max relative error %.1e (<= 1e-9)", worst_trace);
  double bio = 0.0, comp = 0.0;
  for (double g : {1.0, 5.0, 9.0, 15.0}) {
    ModelParams p = chain(4);
    p.gamma = cplx(0, g);
    const auto H = build_heff(p);
    const auto s = eig_left(H, eig_full(H));
    if (s.left_degenerate) {
      c.check(false, "Gamma=%.0f: left eigenvectors degenerate", g);
      continue;
    }
    DenseMat R(16, 16), Lm(16, 16);
    for (int i = 0; i < 16; ++i) {
      R.col(i) = s.pairs[std::size_t(i)].right;
      Lm.col(i) = *s.pairs[std::size_t(i)].left;
    }
    bio = std::max(bio, (Lm.adjoint() * R - DenseMat::Identity(16, 16)).cwiseAbs().maxCoeff());
    comp = std::max(comp, (R * Lm.adjoint() - DenseMat::Identity(16, 16)).cwiseAbs().maxCoeff());
  }
  c.check(bio <= 1e-8, "L=4 biorthogonality <L_i|R_j> = delta_ij: max error %.1e (<= 1e-8)", bio);
  c.check(comp <= 1e-8, "L=4 completeness sum |R_i><L_i| = 1: max error %.1e (<= 1e-8)", comp);
  report(c, t0);
}

void correlations() {
  Criterion c{"correlation-length", {}, true};
  const double t0 = now();
  const int L = 12;
  std::map<double, CorrelationProfile> prof;
  const std::set<double> want = {12.0, 13.0, 14.5, 15.0};
  sweep(chain(L, Boundary::open), arange(11.0, 15.0, 0.05), options(L), [&](const SweepPoint& pt) {
    const double g = std::round(pt.params.gamma.imag() * 1e6) / 1e6;
    if (want.count(g)) prof[g] = correlation_profile(pt.record.state, L, g);
  });
  const std::map<double, double> ref = {{14.5, 0.5879}, {15.0, 0.5304}};
  for (auto [g, xr] : ref) {
    const auto f = fit_xi(prof.at(g));
    c.check(std::abs(f.value - xr) <= 0.05, "Gamma=%.1f xi = %.4f, paper %.4f (+-0.05), n in [%g, %g]", g, f.value,
            xr, f.lo, f.hi);
  }
  // Tail of the profile relative to its head: max |C(n)|, n > L/2, over |C(2)|.
  auto tail = [&](double g) {
    const auto& p = prof.at(g);
    double t = 0.0;
    for (std::size_t i = 0; i < p.n.size(); ++i)
      if (p.n[i] > L / 2) t = std::max(t, std::abs(p.values[i]));
    return t / std::abs(p.values.front());
  };
  const double left = std::min(tail(12.0), tail(13.0)), right = std::max(tail(14.5), tail(15.0));
  c.check(left > 10.0 * right, "tail ratio: left side min %.2e > 10 x right side max %.2e", left, right);
  const double dt = now() - t0;
  c.check(dt < 300.0, "runtime %.1f s < 300 s", dt);
  report(c, t0);
}

void entanglement() {
  Criterion c{"entanglement", {}, true};
  const double t0 = now();
  // Non-analytic point of S(L/2): the largest drop between neighbouring
  // grid points.
  for (int L : {6, 8, 10}) {
    const auto grid = arange(13.0, 14.5, 0.01);
    std::vector<double> s;
    sweep(chain(L), grid, options(L), [&](const SweepPoint& pt) {
      s.push_back(entanglement_entropy(pt.record.state, L, half_partition(L)));
    });
    std::size_t k = 1;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i - 1] - s[i] > s[k - 1] - s[k]) k = i;
    const double peak = 0.5 * (grid[k - 1] + grid[k]);
    const double gc = gc_cache.count(L) ? gc_cache[L] : gamma_c(L);
    c.check(std::abs(peak - gc) <= 0.1, "L=%d peak of -dS/dGamma at %.3f, Gamma_c = %.4f (+-0.1)", L, peak, gc);
  }
  std::map<double, std::vector<double>> area;
  for (int L = 4; L <= 12; ++L) {
    sweep(chain(L), arange(11.0, 15.0, 0.05), options(L), [&](const SweepPoint& pt) {
      const double g = std::round(pt.params.gamma.imag() * 1e6) / 1e6;
      if (g == 12.0 || g == 15.0) area[g].push_back(entanglement_entropy(pt.record.state, L, half_partition(L)));
    });
  }
  for (auto& [g, v] : area) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x / double(v.size());
    const double spread = (*hi - *lo) / mean;
    c.check(spread < 0.10, "Gamma=%.0f S(L/2) over L=4..12 in [%.4f, %.4f], spread %.1f%% < 10%%", g, *lo, *hi,
            100 * spread);
  }
  report(c, t0);
}

void hermitian() {
  Criterion c{"hermitian", {}, true};
  const double t0 = now();
  const auto grid = linear_grid(-6.0, 0.0, 121);
  struct Curve {
    std::vector<double> nup, mx, chi, g;
  };
  std::map<int, Curve> cv;
  const double jump12 = find_hermitian_jump(chain(12), -6.0, 0.0, 1e-8, options(12, Axis::real));
  c.check(std::abs(jump12 + 4.0) < 0.05, "L=12 ground state leaves the empty state at Gamma_re = %.6f (~ -4)",
          jump12);
  for (int L : {8, 10, 12}) {
    const SweepOptions so = options(L, Axis::real);
    auto& k = cv[L];
    sweep(chain(L), grid, so, [&](const SweepPoint& pt) {
      const auto m = magnetizations(pt.record.state, L);
      k.nup.push_back(m.nup / L);
      k.mx.push_back(m.mx / L);
      const double gr = pt.params.gamma.real();
      if (L == 12 && gr - jump12 >= 1e-3) {
        k.g.push_back(gr);
        k.chi.push_back(susceptibility(pt.params, pt.record, 1e-5, so).chi);
      }
    });
  }
  {
    const auto& k = cv[12];
    std::size_t below = 0, above = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] <= jump12 - 0.02) below = i;
      if (above == 0 && grid[i] >= jump12 + 0.02) above = i;
    }
    c.check(k.nup[below] < 1e-6 && k.nup[above] > 0.1,
            "L=12 n_up/L jumps %.2e -> %.3f across Gamma_re = %.2f..%.2f", k.nup[below], k.nup[above], grid[below],
            grid[above]);
    c.check(std::abs(k.mx[below]) < 1e-6 && std::abs(k.mx[above]) > 0.1,
            "L=12 |M^x|/L jumps %.2e -> %.3f", std::abs(k.mx[below]), std::abs(k.mx[above]));
  }
  auto collapse = [&](auto member) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(grid[i] + 4.0) <= 0.1) continue;
      std::vector<double> v;
      for (int L : {8, 10, 12}) v.push_back((cv[L].*member)[i]);
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      const double scale = std::max(std::abs(*lo), std::abs(*hi));
      if (scale > 1e-12) worst = std::max(worst, (*hi - *lo) / scale);
    }
    return worst;
  };
  const double cn = collapse(&Curve::nup), cm = collapse(&Curve::mx);
  c.check(cn < 0.02, "n_up/L collapse over L=8,10,12: max deviation %.2f%% < 2%% (|Gamma_re+4| > 0.1)", 100 * cn);
  c.check(cm < 0.02, "M^x/L collapse over L=8,10,12: max deviation %.2f%% < 2%%", 100 * cm);
  const auto& k = cv[12];
  const double hi = *std::max_element(k.g.begin(), k.g.end()) - jump12;
  const auto f = fit_gamma(k.g, k.chi, jump12, 1e-2, hi);
  c.check(std::abs(f.value - 0.5699) <= 0.05, "L=12 Hermitian gamma = %.4f, paper 0.5699 (+-0.05), window [1e-2, %.2f]",
          f.value, hi);
  const double j2 = find_hermitian_jump(chain(2), -6.0, 0.0, 1e-12);
  c.check(std::abs(j2 + 2.0) < 1e-9, "L=2 level crossing at Gamma_re = %.12f (-2 Omega)", j2);
  report(c, t0);
}

void fit_properties() {
  Criterion c{"fit-properties", {}, true};
  const double t0 = now();
  const double gc = 13.8;
  double worst = 0.0;
  for (double e : {0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    std::vector<double> below, above, mx, chi, xi;
    CorrelationProfile prof;
    for (int k = 0; k < 25; ++k) {
      const double d = 1e-3 * std::pow(1e3, k / 24.0);
      below.push_back(gc - d);
      above.push_back(gc + d);
      mx.push_back(-1.3 * std::pow(d, e));
      chi.push_back(2e-5 * std::pow(d, -e));
      xi.push_back(0.4 * std::pow(d, -e));
    }
    for (int n = 2; n <= 12; ++n) {
      prof.n.push_back(n);
      // Amplitude keeps at least four offsets above the fit's noise floor at xi = 0.1.
      prof.values.push_back(1e3 * std::exp(-(n - 2) / e));
    }
    worst = std::max(worst, std::abs(fit_beta(below, mx, gc, 1e-3, 1.0).value - e));
    worst = std::max(worst, std::abs(fit_gamma(above, chi, gc, 1e-3, 1.0).value - e));
    worst = std::max(worst, std::abs(fit_nu(above, xi, gc).value - e));
    worst = std::max(worst, std::abs(fit_xi(prof).value - e));
  }
  c.check(worst <= 1e-10, "beta, gamma, nu, xi on exact power laws, exponents 0.1..3: max error %.1e", worst);
  if (gc_cache.count(-1)) {
    const double d = std::abs(gc_cache[-1]);
    c.check(d < 0.02, "L=10 window halving [1e-3, 0.5] -> [1e-3, 0.25]: |d beta| = %.4f < 0.02", d);
  } else {
    c.check(false, "L=10 beta fit unavailable");
  }
  report(c, t0);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> steps = {
      {"l2-oracle", oracle},
      {"table-i", table_i},
      {"table-ii", table_ii},
      {"extrapolation", extrapolation},
      {"spectral-symmetry", spectral_symmetry},
      {"correlation-length", correlations},
      {"entanglement", entanglement},
      {"hermitian", hermitian},
      {"fit-properties", fit_properties},
  };
  for (const auto& [id, fn] : steps) {
    try {
      fn();
    } catch (const std::exception& e) {
      std::printf("FAIL %s (error: %s)\n", id.c_str(), e.what());
      if (!kKnownFailures.count(id)) ++unexpected;
    }
  }
  std::printf("%d unexpected failure(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
