#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcp/config.hpp"
#include "qcp/criticality.hpp"
#include "qcp/csv.hpp"

namespace qcp {

extern const char* const kVersion;

struct RunResult {
  CsvTable table;
  std::vector<std::string> warnings;
};

// Runs fn(0..n-1) on up to `workers` threads. Every index runs; the error of
// the lowest failing index is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// One row per eigenvalue: L, omega, gamma_re, gamma_im, e_re, e_im.
RunResult run_spectrum(const RunConfig& cfg);
// Tracked sweep, one row per grid point (sweep CSV schema).
RunResult run_sweep(const RunConfig& cfg);
// Correlation profiles at the grid values, tracked from the first one.
RunResult run_corr(const RunConfig& cfg);
// Entanglement entropy for every cut of the tracked ground state.
RunResult run_entropy(const RunConfig& cfg);

std::vector<CriticalPoint> run_critical(const RunConfig& cfg);
CsvTable critical_table(const std::vector<CriticalPoint>& cps);

struct FitRow {
  FitResult fit;
  int L = 0;
  double gamma = 0.0;  // xi fits only
  double gc = 0.0;     // reference critical point, when one was used
};

// Fits on CSV produced by the sweep/corr commands, or on an (L, gamma_c) table
// for extrapolation.
std::vector<FitRow> run_fit(FitKind kind, const CsvTable& input, const RunConfig& cfg);
CsvTable fit_table(const std::vector<FitRow>& rows);

std::string header_comment(const std::string& command, const RunConfig& cfg);

}  // namespace qcp
