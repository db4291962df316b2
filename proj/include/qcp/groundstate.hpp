#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcp/eigensolver.hpp"
#include "qcp/models.hpp"

namespace qcp {

enum class Rule { min_real_part, continuity };

std::string to_string(Rule r);
Rule parse_rule(const std::string& s);

struct GroundStateRecord {
  cplx gamma;
  cplx energy;
  Vec state;
  Rule rule = Rule::min_real_part;
  double overlap_prev = 1.0;
};

struct TrackerOptions {
  double eps_re = 1e-8;        // in units of omega
  double overlap_band = 0.05;  // overlaps this close to the best count as ties
};

// Picks the ground state from a (full or partial) spectrum.
//
// Below the transition the pair with minimum real part wins. Once the tracked
// branch reaches the imaginary axis the record switches to continuity and
// follows the state with maximal overlap on the imaginary axis; among
// near-equal overlaps the pair with the most negative imaginary part is kept.
// Without history in that regime the lowest pair on the axis is returned.
GroundStateRecord select_ground(const Spectrum& spec, const GroundStateRecord* prev, double omega,
                                const TrackerOptions& opt = {});

enum class SolverKind { dense, targeted };
enum class Axis { imag, real };

std::string to_string(SolverKind s);
SolverKind parse_solver(const std::string& s);

struct SweepOptions {
  SolverKind solver = SolverKind::dense;
  Axis axis = Axis::imag;
  int count = 8;  // eigenpairs per point for the targeted solver
  int refine_depth = 0;
  double refine_overlap = 0.9;
  double warn_overlap = 0.5;
  TrackerOptions tracker;
  DenseOptions dense;
};

struct SweepTrace {
  ModelParams params;  // gamma of the swept axis is ignored
  Axis axis = Axis::imag;
  std::vector<double> grid;
  std::vector<GroundStateRecord> records;
  std::vector<std::string> warnings;
};

struct SweepPoint {
  const ModelParams& params;  // gamma set for this point
  const SparseOperator& H;
  const Spectrum& spectrum;
  const GroundStateRecord& record;
  const GroundStateRecord* prev;
};

using SweepVisitor = std::function<void(const SweepPoint&)>;

cplx gamma_at(const ModelParams& base, Axis axis, double g);
std::vector<double> linear_grid(double lo, double hi, int steps);

// Ground-state search direction for the targeted solver: the lowest imaginary
// part for purely dissipative Gamma = i*g, the lowest real part otherwise.
Target ground_target(const ModelParams& p);
// Partial or full spectrum for one point. The targeted path falls back to
// shift-invert near `predicted`, then to dense when the dimension allows.
Spectrum solve_point(const SparseOperator& H, const SweepOptions& opt, const cplx* predicted,
                     Target target = Target::min_real_part);

SweepTrace sweep(const ModelParams& base, const std::vector<double>& grid, const SweepOptions& opt = {},
                 const SweepVisitor& visit = {});

}  // namespace qcp
