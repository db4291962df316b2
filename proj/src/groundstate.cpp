#include "qcp/groundstate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qcp {
namespace {

std::vector<double> overlaps(const Spectrum& spec, const GroundStateRecord* prev) {
  std::vector<double> ov(spec.size(), 1.0);
  if (!prev) return ov;
  for (std::size_t i = 0; i < spec.size(); ++i) ov[i] = std::abs(prev->state.dot(spec.pairs[i].right));
  return ov;
}

GroundStateRecord make_record(const Spectrum& spec, std::size_t i, Rule rule, double ov) {
  GroundStateRecord r;
  r.energy = spec.pairs[i].value;
  r.state = spec.pairs[i].right;
  r.rule = rule;
  r.overlap_prev = std::min(ov, 1.0);
  return r;
}

// Continuation among pairs on the imaginary axis. Past a coalescence both
// branches overlap the previous state about equally; the lower one is kept.
std::size_t follow(const Spectrum& spec, const std::vector<double>& ov, double eps, double band) {
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (std::abs(spec.pairs[i].value.real()) <= eps) cand.push_back(i);
  if (cand.empty())
    for (std::size_t i = 0; i < spec.size(); ++i) cand.push_back(i);
  double best = 0.0;
  for (auto i : cand) best = std::max(best, ov[i]);
  std::size_t pick = spec.size();
  for (auto i : cand) {
    if (ov[i] < best - band) continue;
    if (pick == spec.size() || spec.pairs[i].value.imag() < spec.pairs[pick].value.imag()) pick = i;
  }
  return pick;
}

std::string gamma_str(cplx g) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << g.real() << "," << g.imag() << ")";
  return os.str();
}

}  // namespace

std::string to_string(Rule r) { return r == Rule::min_real_part ? "min-real-part" : "continuity"; }

Rule parse_rule(const std::string& s) {
  if (s == "min-real-part") return Rule::min_real_part;
  if (s == "continuity") return Rule::continuity;
  throw std::invalid_argument("unknown rule '" + s + "'");
}

std::string to_string(SolverKind s) { return s == SolverKind::dense ? "dense" : "targeted"; }

SolverKind parse_solver(const std::string& s) {
  if (s == "dense") return SolverKind::dense;
  if (s == "targeted") return SolverKind::targeted;
  throw std::invalid_argument("unknown solver '" + s + "' (expected dense or targeted)");
}

GroundStateRecord select_ground(const Spectrum& spec, const GroundStateRecord* prev, double omega,
                                const TrackerOptions& opt) {
  if (spec.pairs.empty()) throw std::invalid_argument("empty spectrum");
  const double eps = opt.eps_re * omega;
  const auto ov = overlaps(spec, prev);
  const std::size_t n = spec.size();

  if (prev && prev->rule == Rule::continuity) {
    const auto i = follow(spec, ov, eps, opt.overlap_band);
    return make_record(spec, i, Rule::continuity, ov[i]);
  }

  if (prev && prev->energy.real() < -eps) {
    std::size_t c = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (ov[i] > ov[c]) c = i;
    if (std::abs(spec.pairs[c].value.real()) <= eps) {
      // Tracked branch has reached the imaginary axis.
      std::size_t pick = c;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(spec.pairs[i].value.real()) > eps || ov[i] < ov[c] - opt.overlap_band) continue;
        if (spec.pairs[i].value.imag() < spec.pairs[pick].value.imag()) pick = i;
      }
      return make_record(spec, pick, Rule::continuity, ov[pick]);
    }
  }

  // Minimum real part; ties go to larger |Im E|, then to sort order.
  std::size_t m = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const cplx a = spec.pairs[i].value, b = spec.pairs[m].value;
    if (a.real() < b.real() || (a.real() == b.real() && std::abs(a.imag()) > std::abs(b.imag()))) m = i;
  }
  const cplx em = spec.pairs[m].value;
  if (em.real() < -eps) return make_record(spec, m, Rule::min_real_part, ov[m]);

  bool ambiguous = false;
  for (std::size_t i = 0; i < n; ++i)
    if (spec.pairs[i].value.real() <= em.real() + eps && std::abs(spec.pairs[i].value - em) > eps)
      ambiguous = true;
  if (!ambiguous) return make_record(spec, m, Rule::min_real_part, ov[m]);

  if (prev) {
    const auto i = follow(spec, ov, eps, opt.overlap_band);
    return make_record(spec, i, Rule::continuity, ov[i]);
  }
  return make_record(spec, follow(spec, ov, eps, 1.0), Rule::continuity, 1.0);
}

cplx gamma_at(const ModelParams& base, Axis axis, double g) {
  return axis == Axis::imag ? cplx(base.gamma.real(), g) : cplx(g, base.gamma.imag());
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
  if (steps < 2) throw std::invalid_argument("grid needs at least 2 steps");
  if (!(lo < hi)) throw std::invalid_argument("grid needs gamma_min < gamma_max");
  std::vector<double> g;
  g.resize(std::size_t(steps));
  for (int i = 0; i < steps; ++i) g[std::size_t(i)] = lo + (hi - lo) * double(i) / double(steps - 1);
  g.back() = hi;
  return g;
}

Target ground_target(const ModelParams& p) {
  return p.gamma.real() == 0.0 && p.gamma.imag() > 0.0 ? Target::min_imag_part : Target::min_real_part;
}

Spectrum solve_point(const SparseOperator& H, const SweepOptions& opt, const cplx* predicted, Target target) {
  if (opt.solver == SolverKind::dense) return eig_full(H, opt.dense);
  TargetedOptions t;
  t.count = opt.count;
  t.target = target == Target::nearest ? Target::min_real_part : target;
  try {
    return eig_targeted(H, t);
  } catch (const SolverError&) {
    if (!predicted || H.is_hermitian()) {
      if (H.dim() > opt.dense.ceiling) throw;
      return eig_full(H, opt.dense);
    }
  }
  t.target = Target::nearest;
  double offset = 1e-7 * std::max(1.0, std::abs(*predicted));
  for (int attempt = 0;; ++attempt) {
    t.shift = *predicted + cplx(offset, offset);
    try {
      return eig_targeted(H, t);
    } catch (const SolverError&) {
      if (attempt == 3) throw;
      offset *= 100.0;
    }
  }
}

SweepTrace sweep(const ModelParams& base, const std::vector<double>& grid, const SweepOptions& opt,
                 const SweepVisitor& visit) {
  base.validate();
  if (grid.empty()) throw std::invalid_argument("empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");

  SweepTrace trace;
  trace.params = base;
  trace.axis = opt.axis;

  std::function<void(double, int)> run = [&](double g, int depth) {
    ModelParams p = base;
    p.gamma = gamma_at(base, opt.axis, g);
    const SparseOperator H = build_hamiltonian(p);
    const auto& recs = trace.records;
    const GroundStateRecord* prev = recs.empty() ? nullptr : &recs.back();
    cplx pred;
    if (recs.size() >= 2) {
      const std::size_t k = recs.size();
      const double h1 = trace.grid[k - 1] - trace.grid[k - 2];
      pred = recs[k - 1].energy + (recs[k - 1].energy - recs[k - 2].energy) * ((g - trace.grid[k - 1]) / h1);
    } else if (prev) {
      pred = prev->energy;
    }
    Spectrum spec;
    try {
      spec = solve_point(H, opt, prev ? &pred : nullptr, ground_target(p));
    } catch (const std::exception& e) {
      throw SolverError(std::string(e.what()) + " at gamma = " + gamma_str(p.gamma));
    }
    GroundStateRecord rec = select_ground(spec, prev, base.omega, opt.tracker);
    rec.gamma = p.gamma;
    if (prev && depth > 0 && (rec.overlap_prev < opt.refine_overlap || rec.rule != prev->rule)) {
      const double mid = 0.5 * (trace.grid.back() + g);
      run(mid, depth - 1);
      run(g, depth - 1);
      return;
    }
    if (prev && rec.overlap_prev < opt.warn_overlap)
      trace.warnings.push_back("low overlap " + std::to_string(rec.overlap_prev) + " at gamma = " +
                               gamma_str(p.gamma));
    if (!spec.residual_ok)
      trace.warnings.push_back("residual " + std::to_string(spec.max_residual) + " flagged at gamma = " +
                               gamma_str(p.gamma));
    if (visit) visit(SweepPoint{p, H, spec, rec, prev});
    trace.grid.push_back(g);
    trace.records.push_back(std::move(rec));
  };

  for (double g : grid) run(g, trace.records.empty() ? 0 : opt.refine_depth);
  return trace;
}

}  // namespace qcp
