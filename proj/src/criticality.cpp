#include "qcp/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace qcp {
namespace {

FitResult log_log(FitKind kind, const std::vector<double>& x, const std::vector<double>& y, double lo,
                  double hi) {
  LineFit f = fit_line(x, y);
  FitResult r;
  r.kind = kind;
  r.lo = lo;
  r.hi = hi;
  r.normr = f.normr;
  r.points_used = f.n;
  r.value = f.slope;
  r.amplitude = std::exp(f.intercept);
  return r;
}

void need_points(std::size_t n, const char* what) {
  if (n < 3) throw FitError(std::string("fewer than 3 points in the ") + what + " fit window");
}

// Grid points built as gc -+ lo land within rounding of the edge.
bool in_window(double d, double lo, double hi) {
  const double slack = 1e-9;
  return d >= lo * (1.0 - slack) && d <= hi * (1.0 + slack);
}

void same_length(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("series lengths differ");
}

}  // namespace

std::string to_string(FitKind k) {
  switch (k) {
    case FitKind::beta:
      return "beta";
    case FitKind::gamma:
      return "gamma";
    case FitKind::xi:
      return "xi";
    case FitKind::nu:
      return "nu";
    case FitKind::gc_extrapolation:
      return "gc-extrapolation";
  }
  return "?";
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  same_length(x.size(), y.size());
  const std::size_t n = x.size();
  if (n < 2) throw FitError("line fit needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("degenerate abscissa in line fit");
  LineFit f;
  f.n = int(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.normr = std::sqrt(ss);
  return f;
}

FitResult fit_beta(const std::vector<double>& gamma, const std::vector<double>& mx, double gc, double lo,
                   double hi) {
  same_length(gamma.size(), mx.size());
  if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("invalid beta window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double d = gc - gamma[i];
    if (!in_window(d, lo, hi)) continue;
    if (!(std::abs(mx[i]) > 0.0)) throw FitError("zero order parameter inside the beta window");
    x.push_back(std::log(d));
    y.push_back(std::log(std::abs(mx[i])));
  }
  need_points(x.size(), "beta");
  return log_log(FitKind::beta, x, y, lo, hi);
}

FitResult fit_gamma(const std::vector<double>& gamma, const std::vector<double>& chi, double gc, double lo,
                    double hi) {
  same_length(gamma.size(), chi.size());
  if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("invalid gamma window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double d = gamma[i] - gc;
    if (!in_window(d, lo, hi)) continue;
    if (!(chi[i] > 0.0)) throw FitError("nonpositive susceptibility inside the gamma window");
    x.push_back(std::log(d));
    y.push_back(std::log(chi[i]));
  }
  need_points(x.size(), "gamma");
  FitResult r = log_log(FitKind::gamma, x, y, lo, hi);
  r.value = -r.value;
  return r;
}

FitResult fit_xi(const CorrelationProfile& prof, double nlo, double nhi) {
  same_length(prof.n.size(), prof.values.size());
  std::vector<double> x, y;
  for (std::size_t i = 0; i < prof.n.size(); ++i) {
    const double n = prof.n[i];
    if (n < nlo || n > nhi || !(std::abs(prof.values[i]) > 1e-12)) continue;
    x.push_back(n);
    y.push_back(std::log(std::abs(prof.values[i])));
  }
  if (x.size() < 4) throw FitError("fewer than 4 usable offsets in the correlation window");
  FitResult r = log_log(FitKind::xi, x, y, nlo, nhi);
  if (!(r.value < 0.0)) throw FitError("correlation profile does not decay in the window");
  r.value = -1.0 / r.value;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[i - 1] + 1e-9) r.low_confidence = true;
  return r;
}

FitResult fit_xi(const CorrelationProfile& prof) {
  if (prof.n.empty()) throw FitError("empty correlation profile");
  return fit_xi(prof, 2.0, prof.n.back());
}

FitResult fit_nu(const std::vector<double>& gamma, const std::vector<double>& xi, double gc) {
  same_length(gamma.size(), xi.size());
  std::vector<double> x, y;
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double d = gamma[i] - gc;
    if (!(d > 0.0)) throw FitError("nu fit needs gamma > gamma_c");
    if (!(xi[i] > 0.0)) throw FitError("nonpositive correlation length");
    x.push_back(std::log(d));
    y.push_back(std::log(xi[i]));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  need_points(x.size(), "nu");
  FitResult r = log_log(FitKind::nu, x, y, lo, hi);
  r.value = -r.value;
  return r;
}

FitResult extrapolate_gc(const std::vector<double>& L, const std::vector<double>& gc) {
  same_length(L.size(), gc.size());
  if (std::set<double>(L.begin(), L.end()).size() < 4) throw FitError("extrapolation needs >= 4 distinct L");
  for (double l : L)
    if (!(l > 0.0)) throw std::invalid_argument("system sizes must be positive");

  struct Lin {
    double ginf, a, ss;
  };
  const std::size_t n = L.size();
  // For fixed p the model is linear in (gc_inf, a).
  auto linear = [&](double p) {
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (std::size_t i = 0; i < n; ++i) {
      A(Eigen::Index(i), 0) = 1.0;
      A(Eigen::Index(i), 1) = -std::pow(L[i], -p);
      b(Eigen::Index(i)) = gc[i];
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    return Lin{c(0), c(1), (A * c - b).squaredNorm()};
  };

  const double plo = 0.05, phi = 12.0;
  const int scan = 240;
  std::vector<double> ps(scan), ss(scan);
  int best = 0;
  for (int k = 0; k < scan; ++k) {
    ps[std::size_t(k)] = plo * std::pow(phi / plo, double(k) / double(scan - 1));
    ss[std::size_t(k)] = linear(ps[std::size_t(k)]).ss;
    if (ss[std::size_t(k)] < ss[std::size_t(best)]) best = k;
  }
  auto trace = [&]() {
    std::ostringstream os;
    os.precision(6);
    for (int k = 0; k < scan; k += 24) os << " p=" << ps[std::size_t(k)] << ":" << ss[std::size_t(k)];
    return os.str();
  };
  if (best == 0 || best == scan - 1)
    throw FitError("extrapolation exponent ran to the search bound; residual trace:" + trace());

  std::uintmax_t iters = 500;
  const auto res = boost::math::tools::brent_find_minima([&](double p) { return linear(p).ss; },
                                                         ps[std::size_t(best - 1)], ps[std::size_t(best + 1)],
                                                         48, iters);
  if (iters >= 500) throw FitError("extrapolation did not converge; residual trace:" + trace());
  const double p = res.first;
  const Lin fit = linear(p);
  if (!(fit.a > 0.0)) throw FitError("extrapolation amplitude is not positive; residual trace:" + trace());

  FitResult r;
  r.kind = FitKind::gc_extrapolation;
  r.value = fit.ginf;
  r.amplitude = fit.a;
  r.exponent_p = p;
  r.lo = *std::min_element(L.begin(), L.end());
  r.hi = *std::max_element(L.begin(), L.end());
  r.normr = std::sqrt(fit.ss);
  r.points_used = int(n);
  return r;
}

CriticalPoint find_gamma_c(const ModelParams& base, const CriticalOptions& opt) {
  base.validate();
  if (!(opt.tol > 0.0) || !(opt.lo < opt.hi) || !(opt.step > 0.0))
    throw std::invalid_argument("invalid critical-point search options");
  const double eps = opt.sweep.tracker.eps_re * base.omega;
  CriticalPoint cp;
  cp.L = base.L;

  auto solve = [&](double g, const cplx* pred) {
    ModelParams p = base;
    p.gamma = gamma_at(base, Axis::imag, g);
    ++cp.evaluations;
    return solve_point(build_hamiltonian(p), opt.sweep, pred, ground_target(p));
  };

  GroundStateRecord prev = select_ground(solve(opt.lo, nullptr), nullptr, base.omega, opt.sweep.tracker);
  if (prev.rule != Rule::min_real_part || !(prev.energy.real() < -eps))
    throw FitError("lower search bound " + std::to_string(opt.lo) + " is not below the transition");
  double a = opt.lo, b = 0.0;
  GroundStateRecord post;
  std::optional<GroundStateRecord> prev2;
  double ga2 = a;
  bool found = false;
  for (double g = opt.lo + opt.step; g <= opt.hi + 1e-12; g += opt.step) {
    cplx pred = prev.energy;
    if (prev2) pred += (prev.energy - prev2->energy) * ((g - a) / (a - ga2));
    GroundStateRecord r = select_ground(solve(g, &pred), &prev, base.omega, opt.sweep.tracker);
    if (r.rule == Rule::continuity) {
      b = g;
      post = std::move(r);
      found = true;
      break;
    }
    prev2 = prev;
    ga2 = a;
    prev = std::move(r);
    a = g;
  }
  if (!found) throw FitError("no transition found below gamma = " + std::to_string(opt.hi));

  // Two bisections sharing solves while their midpoints coincide.
  struct Bracket {
    double a, b;
    GroundStateRecord ref;
  };
  Bracket spectral{a, b, prev}, order{a, b, prev};
  const auto& totals = spin_totals(base.L);
  auto probe = [&](const Bracket& br, double m) {
    const double t = (m - br.a) / (br.b - br.a);
    const cplx pred = br.ref.energy + (post.energy - br.ref.energy) * t;
    const Spectrum s = solve(m, &pred);
    std::size_t c = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double ov = std::abs(br.ref.state.dot(s.pairs[i].right));
      if (ov > best) best = ov, c = i;
    }
    GroundStateRecord r;
    r.energy = s.pairs[c].value;
    r.state = s.pairs[c].right;
    r.overlap_prev = best;
    return r;
  };
  while (spectral.b - spectral.a > opt.tol || order.b - order.a > opt.tol) {
    const double ms = 0.5 * (spectral.a + spectral.b), mo = 0.5 * (order.a + order.b);
    const bool run_s = spectral.b - spectral.a > opt.tol, run_o = order.b - order.a > opt.tol;
    std::optional<GroundStateRecord> rs, ro;
    if (run_s) rs = probe(spectral, ms);
    if (run_o) {
      if (run_s && ms == mo && spectral.a == order.a)
        ro = rs;
      else
        ro = probe(order, mo);
    }
    if (rs) {
      if (std::abs(rs->energy.real()) > eps)
        spectral.a = ms, spectral.ref = *rs;
      else
        spectral.b = ms;
    }
    if (ro) {
      if (std::abs(expect_rr_real(ro->state, totals.x)) >= opt.mx_zero)
        order.a = mo, order.ref = *ro;
      else
        order.b = mo;
    }
  }
  cp.gamma_c = 0.5 * (spectral.a + spectral.b);
  cp.bracket_width = spectral.b - spectral.a;
  cp.gamma_c_order = 0.5 * (order.a + order.b);
  if (std::abs(cp.gamma_c - cp.gamma_c_order) > 10.0 * opt.tol) {
    std::ostringstream os;
    os.precision(10);
    os << "critical-point methods disagree: spectral " << cp.gamma_c << ", order parameter " << cp.gamma_c_order;
    throw FitError(os.str());
  }
  return cp;
}

double find_hermitian_jump(const ModelParams& base, double lo, double hi, double tol, const SweepOptions& opt) {
  base.validate();
  if (!(lo < hi) || !(tol > 0.0)) throw std::invalid_argument("invalid jump search options");
  auto nup = [&](double g) {
    ModelParams p = base;
    p.gamma = cplx(g, base.gamma.imag());
    const Spectrum s = solve_point(build_hamiltonian(p), opt, nullptr, ground_target(p));
    return magnetizations(select_ground(s, nullptr, base.omega, opt.tracker).state, base.L).nup;
  };
  const double half = 0.5;
  if (!(nup(lo) < half) || !(nup(hi) >= half))
    throw FitError("no occupation jump inside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  while (hi - lo > tol) {
    const double m = 0.5 * (lo + hi);
    (nup(m) < half ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qcp
