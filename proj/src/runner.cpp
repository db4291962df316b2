#include "qcp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "qcp/eigensolver.hpp"
#include "qcp/observables.hpp"

namespace qcp {

const char* const kVersion = "1.0.0";

namespace {

const std::vector<std::string> kSweepColumns = {"L",   "omega", "gamma_re", "gamma_im", "e0_re",
                                                "e0_im", "rule", "overlap_prev", "mx", "my",
                                                "mz",  "nup",   "chi",      "gap",      "svn_half"};

std::string num(double v) { return format_number(v); }

// Concatenates per-L tables in the order of cfg.sizes.
RunResult gather(const std::vector<RunResult>& parts, CsvTable header) {
  RunResult out;
  out.table = std::move(header);
  for (const auto& p : parts) {
    for (const auto& r : p.table.rows) out.table.rows.push_back(r);
    out.warnings.insert(out.warnings.end(), p.warnings.begin(), p.warnings.end());
  }
  return out;
}

double axis_value(const ModelParams& p, Axis axis) { return axis == Axis::imag ? p.gamma.imag() : p.gamma.real(); }

// Requested values with intermediate points no further apart than `step`.
std::vector<double> tracking_grid(const std::vector<double>& want, double step) {
  std::vector<double> g;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (i > 0) {
      const double gap = want[i] - want[i - 1];
      const int k = int(std::ceil(gap / step - 1e-9));
      for (int j = 1; j < k; ++j) g.push_back(want[i - 1] + gap * double(j) / double(k));
    }
    g.push_back(want[i]);
  }
  return g;
}

bool is_requested(double g, const std::vector<double>& want) {
  return std::any_of(want.begin(), want.end(), [&](double w) { return w == g; });
}

struct Series {
  int L = 0;
  double omega = 1.0;
  std::vector<double> x, y;
};

// Groups rows by L (first-appearance order) along the swept axis.
std::vector<Series> group_by_L(const CsvTable& t, const std::string& ycol, Axis& axis) {
  const auto Ls = numeric_column(t, "L");
  const auto om = numeric_column(t, "omega");
  const auto gre = numeric_column(t, "gamma_re");
  const auto gim = numeric_column(t, "gamma_im");
  const auto y = numeric_column(t, ycol, true);
  if (Ls.empty()) throw FitError("input has no rows");
  const bool im_const = std::all_of(gim.begin(), gim.end(), [&](double v) { return v == gim.front(); });
  const bool re_const = std::all_of(gre.begin(), gre.end(), [&](double v) { return v == gre.front(); });
  axis = im_const && !re_const ? Axis::real : Axis::imag;
  std::vector<Series> out;
  std::map<int, std::size_t> at;
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    const int L = int(Ls[i]);
    if (!at.count(L)) {
      at[L] = out.size();
      out.push_back({L, om[i], {}, {}});
    }
    if (std::isnan(y[i]))
      throw FitError("column '" + ycol + "' is empty for L = " + std::to_string(L) +
                     "; rerun the sweep with that observable");
    auto& s = out[at[L]];
    s.x.push_back(axis == Axis::imag ? gim[i] : gre[i]);
    s.y.push_back(y[i]);
  }
  return out;
}

double reference_gc(const RunConfig& cfg, const Series& s, Axis axis, Boundary boundary) {
  if (cfg.gc) return *cfg.gc;
  RunConfig c = cfg;
  c.omega = s.omega;
  ModelParams p = c.model(s.L);
  p.boundary = boundary;
  SweepOptions so = cfg.sweep_options();
  if (axis == Axis::real) {
    p.gamma = 0.0;
    const auto [lo, hi] = std::minmax_element(s.x.begin(), s.x.end());
    return find_hermitian_jump(p, *lo, *hi, 1e-8, so);
  }
  p.gamma = 0.0;
  CriticalOptions co;
  co.tol = cfg.tol;
  co.lo = cfg.search_lo;
  co.hi = cfg.search_hi;
  co.step = cfg.track_step;
  co.sweep = so;
  return find_gamma_c(p, co).gamma_c;
}

struct Profiles {
  int L;
  double gamma;
  CorrelationProfile prof;
};

std::vector<Profiles> read_profiles(const CsvTable& t) {
  const auto Ls = numeric_column(t, "L");
  const auto gre = numeric_column(t, "gamma_re");
  const auto gim = numeric_column(t, "gamma_im");
  const auto n = numeric_column(t, "n");
  const auto v = numeric_column(t, "value");
  const bool im_const = std::all_of(gim.begin(), gim.end(), [&](double x) { return x == gim.front(); });
  std::vector<Profiles> out;
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    const double g = im_const && gim.front() == 0.0 ? gre[i] : gim[i];
    if (out.empty() || out.back().L != int(Ls[i]) || out.back().gamma != g) {
      out.push_back({int(Ls[i]), g, {}});
      out.back().prof.gamma = g;
    }
    out.back().prof.n.push_back(int(n[i]));
    out.back().prof.values.push_back(v[i]);
  }
  if (out.empty()) throw FitError("input has no rows");
  return out;
}

}  // namespace

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> err(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i);
      } catch (...) {
        err[i] = std::current_exception();
      }
    }
  };
  const std::size_t nt = std::min<std::size_t>(std::size_t(std::max(workers, 1)), n);
  if (nt <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
}

std::string header_comment(const std::string& command, const RunConfig& cfg) {
  return std::string("qcp ") + kVersion + " " + command + " " + cfg.describe();
}

RunResult run_spectrum(const RunConfig& cfg) {
  cfg.validate();
  const auto grid = cfg.grid();
  struct Job {
    int L;
    double g;
  };
  std::vector<Job> jobs;
  for (int L : cfg.sizes)
    for (double g : grid) jobs.push_back({L, g});
  std::vector<std::vector<cplx>> vals(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    ModelParams p = cfg.model(jobs[i].L);
    p.gamma = gamma_at(p, cfg.axis, jobs[i].g);
    vals[i] = eigenvalues(build_hamiltonian(p));
  });
  RunResult out;
  out.table.header = {"L", "omega", "gamma_re", "gamma_im", "e_re", "e_im"};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    ModelParams p = cfg.model(jobs[i].L);
    p.gamma = gamma_at(p, cfg.axis, jobs[i].g);
    for (const cplx e : vals[i])
      out.table.rows.push_back({format_int(p.L), num(p.omega), num(p.gamma.real()), num(p.gamma.imag()),
                                num(e.real()), num(e.imag())});
  }
  return out;
}

RunResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const auto grid = cfg.grid();
  const SweepOptions so = cfg.sweep_options();
  const auto& obs = cfg.observables;
  std::vector<RunResult> parts(cfg.sizes.size());
  parallel_for(cfg.sizes.size(), cfg.workers, [&](std::size_t k) {
    const int L = cfg.sizes[k];
    auto& part = parts[k];
    auto trace = sweep(cfg.model(L), grid, so, [&](const SweepPoint& pt) {
      const auto& r = pt.record;
      const Magnetization m = magnetizations(r.state, L);
      auto opt = [&](const char* key, double v) { return obs.count(key) ? num(v) : std::string(); };
      std::string chi, gap, svn;
      if (obs.count("chi")) chi = num(susceptibility(pt.params, r, cfg.dh, so).chi);
      if (obs.count("gap") && pt.spectrum.pairs.size() >= 2) gap = num(energy_gap(pt.spectrum, r.energy));
      if (obs.count("svn")) svn = num(entanglement_entropy(r.state, L, half_partition(L)));
      part.table.rows.push_back({format_int(L), num(pt.params.omega), num(pt.params.gamma.real()),
                                 num(pt.params.gamma.imag()), num(r.energy.real()), num(r.energy.imag()),
                                 to_string(r.rule), num(r.overlap_prev), opt("mx", m.mx), opt("my", m.my),
                                 opt("mz", m.mz), opt("nup", m.nup), chi, gap, svn});
    });
    for (auto& w : trace.warnings) part.warnings.push_back("L=" + std::to_string(L) + ": " + w);
  });
  CsvTable head;
  head.header = kSweepColumns;
  return gather(parts, head);
}

RunResult run_corr(const RunConfig& cfg) {
  cfg.validate();
  RunConfig c = cfg;
  if (!cfg.boundary_set) c.boundary = Boundary::open;
  const auto want = c.grid();
  const auto track = tracking_grid(want, c.track_step);
  const SweepOptions so = c.sweep_options();
  std::vector<RunResult> parts(c.sizes.size());
  parallel_for(c.sizes.size(), c.workers, [&](std::size_t k) {
    const int L = c.sizes[k];
    auto& part = parts[k];
    auto trace = sweep(c.model(L), track, so, [&](const SweepPoint& pt) {
      const double g = axis_value(pt.params, c.axis);
      if (!is_requested(g, want)) return;
      CorrelationProfile prof = correlation_profile(pt.record.state, L, g);
      std::string xi;
      try {
        const double lo = c.window_lo.value_or(2.0), hi = c.window_hi.value_or(double(L));
        const FitResult f = fit_xi(prof, lo, hi);
        xi = num(f.value);
        if (f.low_confidence)
          part.warnings.push_back("L=" + std::to_string(L) + ": non-monotone profile at gamma = " + num(g));
      } catch (const FitError& e) {
        part.warnings.push_back("L=" + std::to_string(L) + ": no xi at gamma = " + num(g) + " (" + e.what() + ")");
      }
      for (std::size_t i = 0; i < prof.n.size(); ++i)
        part.table.rows.push_back({format_int(L), num(pt.params.gamma.real()), num(pt.params.gamma.imag()),
                                   format_int(prof.n[i]), num(prof.values[i]), xi});
    });
    for (auto& w : trace.warnings) part.warnings.push_back("L=" + std::to_string(L) + ": " + w);
  });
  CsvTable head;
  head.header = {"L", "gamma_re", "gamma_im", "n", "value", "xi"};
  return gather(parts, head);
}

RunResult run_entropy(const RunConfig& cfg) {
  cfg.validate();
  const auto grid = cfg.grid();
  const SweepOptions so = cfg.sweep_options();
  std::vector<RunResult> parts(cfg.sizes.size());
  parallel_for(cfg.sizes.size(), cfg.workers, [&](std::size_t k) {
    const int L = cfg.sizes[k];
    auto& part = parts[k];
    auto trace = sweep(cfg.model(L), grid, so, [&](const SweepPoint& pt) {
      for (int la = 1; la < L; ++la)
        part.table.rows.push_back({format_int(L), num(pt.params.gamma.real()), num(pt.params.gamma.imag()),
                                   format_int(la), num(entanglement_entropy(pt.record.state, L, la))});
    });
    for (auto& w : trace.warnings) part.warnings.push_back("L=" + std::to_string(L) + ": " + w);
  });
  CsvTable head;
  head.header = {"L", "gamma_re", "gamma_im", "la", "svn"};
  return gather(parts, head);
}

std::vector<CriticalPoint> run_critical(const RunConfig& cfg) {
  cfg.validate(false);
  std::vector<CriticalPoint> out(cfg.sizes.size());
  parallel_for(cfg.sizes.size(), cfg.workers, [&](std::size_t k) {
    ModelParams p = cfg.model(cfg.sizes[k]);
    p.gamma = 0.0;
    CriticalOptions co;
    co.tol = cfg.tol;
    co.lo = cfg.search_lo;
    co.hi = cfg.search_hi;
    co.step = cfg.track_step;
    co.sweep = cfg.sweep_options();
    out[k] = find_gamma_c(p, co);
  });
  return out;
}

CsvTable critical_table(const std::vector<CriticalPoint>& cps) {
  CsvTable t;
  t.header = {"L", "gamma_c", "gamma_c_order", "bracket_width", "evaluations"};
  for (const auto& c : cps)
    t.rows.push_back({format_int(c.L), num(c.gamma_c), num(c.gamma_c_order), num(c.bracket_width),
                      format_int(c.evaluations)});
  return t;
}

std::vector<FitRow> run_fit(FitKind kind, const CsvTable& input, const RunConfig& cfg) {
  std::vector<FitRow> out;
  switch (kind) {
    case FitKind::beta:
    case FitKind::gamma: {
      Axis axis = Axis::imag;
      const auto series = group_by_L(input, kind == FitKind::beta ? "mx" : "chi", axis);
      for (const auto& s : series) {
        const double gc = reference_gc(cfg, s, axis, cfg.boundary);
        FitRow row;
        row.L = s.L;
        row.gc = gc;
        if (kind == FitKind::beta) {
          row.fit = fit_beta(s.x, s.y, gc, cfg.window_lo.value_or(1e-3), cfg.window_hi.value_or(0.5));
        } else {
          // A first-order jump has no divergence to resolve; the real axis
          // defaults to the whole ordered side.
          double hi = 1.0;
          if (axis == Axis::real) hi = *std::max_element(s.x.begin(), s.x.end()) - gc;
          row.fit = fit_gamma(s.x, s.y, gc, cfg.window_lo.value_or(1e-2), cfg.window_hi.value_or(hi));
        }
        out.push_back(row);
      }
      break;
    }
    case FitKind::xi:
      for (auto& p : read_profiles(input)) {
        FitRow row;
        row.L = p.L;
        row.gamma = p.gamma;
        row.fit = fit_xi(p.prof, cfg.window_lo.value_or(2.0), cfg.window_hi.value_or(double(p.L)));
        out.push_back(row);
      }
      break;
    case FitKind::nu: {
      std::map<int, Series> byL;
      for (auto& p : read_profiles(input)) {
        auto& s = byL[p.L];
        s.L = p.L;
        s.x.push_back(p.gamma);
        s.y.push_back(fit_xi(p.prof, 2.0, double(p.L)).value);
      }
      for (auto& [L, s] : byL) {
        const double gc = reference_gc(cfg, s, Axis::imag, cfg.boundary_set ? cfg.boundary : Boundary::open);
        std::vector<double> x, y;
        for (std::size_t i = 0; i < s.x.size(); ++i)
          if (s.x[i] > gc) x.push_back(s.x[i]), y.push_back(s.y[i]);
        FitRow row;
        row.L = L;
        row.gc = gc;
        row.fit = fit_nu(x, y, gc);
        out.push_back(row);
      }
      break;
    }
    case FitKind::gc_extrapolation: {
      const auto L = numeric_column(input, "L");
      const auto gc = numeric_column(input, "gamma_c");
      FitRow row;
      row.fit = extrapolate_gc(L, gc);
      out.push_back(row);
      break;
    }
  }
  return out;
}

CsvTable fit_table(const std::vector<FitRow>& rows) {
  CsvTable t;
  t.header = {"kind", "L", "gamma", "gc", "value", "amplitude", "window_lo", "window_hi",
              "normr", "points_used", "low_confidence", "exponent_p"};
  for (const auto& r : rows) {
    const auto& f = r.fit;
    t.rows.push_back({to_string(f.kind), r.L ? format_int(r.L) : "", f.kind == FitKind::xi ? num(r.gamma) : "",
                      r.gc != 0.0 ? num(r.gc) : "", num(f.value), num(f.amplitude), num(f.lo), num(f.hi),
                      num(f.normr), format_int(f.points_used), f.low_confidence ? "1" : "0",
                      format_number(f.exponent_p)});
  }
  return t;
}

}  // namespace qcp
