#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <cmphase/field.hpp>
#include <cmphase/optimizer.hpp>
#include <cmphase/potential.hpp>

namespace cmphase {

struct ExperimentConfig {
  Potential potential = Potential::standard_quartic();
  double a = 0.0;
  double b = 1.0;
  int n = 2001;
  BoundarySpec boundary = BoundarySpec::free();
  std::vector<double> k_values;
  std::vector<double> epsilon_values;
  SolveOptions solver;
  std::uint64_t seed = 0;
  /// Level for transition hysteresis.
  double transition_threshold = 0.9;
  /// Minimum extremum-to-extremum swing counted as an oscillation in sweep rows.
  double oscillation_floor = 0.1;
  std::string output = "sweep.csv";
  std::string format = "csv";
  std::vector<std::string> warnings; // filled by validate_config
};

/// Throws std::invalid_argument on empty lists or a bad grid; appends a
/// warning when h > eps / 8 for the smallest eps.
void validate_config(ExperimentConfig& cfg);

struct SweepRecord {
  double k = 0.0;
  double epsilon = 0.0;
  double total_energy = 0.0;
  double potential_term = 0.0;
  double gradient_term = 0.0;
  double curvature_term = 0.0;
  int transitions = 0;
  int oscillations = 0;
  bool converged = false;
};

/// Zero crossings between excursions beyond -threshold and +threshold.
int count_transitions(const Field& u, double threshold = 0.9);

/// Turning points of u whose swing from the previous extremum exceeds the floor.
int count_oscillations(const Field& u, double noise_floor = 1e-3);

struct CellResult {
  SweepRecord record;
  Field minimizer;
};

/// One (k, eps) cell: a tanh start and a seeded random start, best kept.
CellResult run_sweep_cell(const ExperimentConfig& cfg, std::size_t k_index, std::size_t eps_index);

/// Row-major over k then eps. A failing cell is recorded with NaN energies
/// and converged = false; the sweep continues.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& cfg);

std::uint64_t cell_seed(std::uint64_t seed, std::size_t k_index, std::size_t eps_index);

struct GammaRow {
  double epsilon = 0.0;
  int n = 0;
  double energy = 0.0;
  double target = 0.0; // jumps * m_k
  double abs_error = 0.0;
  int transitions = 0;
  bool converged = false;
};

struct GammaTable {
  double k = 0.0;
  int jumps = 1;
  double m_k = 0.0;
  std::vector<GammaRow> rows;
};

/// Minimum of F_eps^k on (0, 1) with u(0) = -1 and u(1) = 1 (one jump) or
/// u(0) = u(1) = -1 and the midpoint pinned at +1 (two jumps), against
/// jumps * m_k. The spacing is eps times the profile's unscaled spacing.
/// Requires k < lower_bound_k1() and strictly decreasing eps.
GammaTable gamma_limit_table(double k, const std::vector<double>& epsilon_values, int jumps,
                             const SolveOptions& opts = {});

struct OscillatoryWitness {
  double alpha = 0.0;
  double l = 0.0;
  int periods = 0;
  bool plus_well = false;
  double energy = 0.0;
};

/// Scans alpha and the period count of the sawtooth family for the lowest
/// F_eps^k on (0, 1) with free ends.
OscillatoryWitness tuned_oscillatory_witness(double k, double epsilon, int n = 12001);

struct BlowupRow {
  double epsilon = 0.0;
  int n = 0;
  double energy = 0.0;
  int oscillations = 0;
  bool converged = false;
};

struct BlowupTable {
  double k = 0.0;
  std::vector<BlowupRow> rows;
  bool strictly_decreasing = false;
  OscillatoryWitness witness; // at the last eps
};

/// Free-end minimization of F_eps^k on (0, 1) for each eps, from sine starts of
/// several wavelengths plus seeded restarts. Requires k > 0.9481.
BlowupTable blowup_probe(double k, const std::vector<double>& epsilon_values, const SolveOptions& opts = {},
                         double oscillation_floor = 0.1);

} // namespace cmphase
