#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <cmphase/field.hpp>

namespace cmphase {

/// A smooth objective over nodal values.
struct Objective {
  /// Returns the value and writes the full gradient into `grad`.
  std::function<double(std::span<const double> u, std::span<double> grad)> evaluate;
  /// Optional: applies a fixed SPD approximation of the inverse Hessian in
  /// place. Must leave zero entries of constrained nodes at zero.
  std::function<void(std::span<double> v)> precondition;
  /// Optional: maps a trial point onto the feasible set in place.
  std::function<void(std::span<double> u)> project;
};

struct SolveOptions {
  int max_iterations = 20000;
  /// Stop once ||g||_2 / max(1, |E|) falls below this.
  double gradient_tolerance = 1e-8;
  int memory = 10;
  int multistart_count = 1;
  std::uint64_t seed = 0;
  /// Amplitude of the smooth random perturbation used by restarts.
  double restart_amplitude = 0.1;
};

struct SolveReport {
  Field minimizer;
  double energy = 0.0;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  bool converged = false;
  int restarts_used = 0; // perturbed restarts performed after the first start
  int best_start = 0;    // 0 is the unperturbed start
  std::string message;
};

/// Raised by callers that require a converged solve; carries the last report.
class SolveError : public std::runtime_error {
public:
  SolveError(const std::string& what, SolveReport report) : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

private:
  SolveReport report_;
};

void validate(const SolveOptions& opts);

/// Limited-memory quasi-Newton descent (preconditioned two-loop recursion,
/// Armijo backtracking) over the nodes `bc` leaves free. Constrained nodes keep
/// their initial values bit for bit; `initial` must already satisfy `bc`.
///
/// With multistart_count > 1 the extra starts are seeded smooth perturbations
/// of `initial`; the lowest energy wins.
SolveReport minimize_energy(const Field& initial, const Objective& objective, const BoundarySpec& bc,
                            const SolveOptions& opts);

/// Optional per-iteration trace: (iteration, energy, gradient norm).
using TraceSink = std::function<void(int, double, double)>;

SolveReport minimize_energy(const Field& initial, const Objective& objective, const BoundarySpec& bc,
                            const SolveOptions& opts, const TraceSink& trace);

/// Max over free nodes of |g_i - fd_i| / max(|g|_inf, floor) where fd is the
/// central difference of the objective with the given step.
double gradient_fd_check(const Objective& objective, const Field& u, const BoundarySpec& bc, double step);

/// Seeded random trigonometric series with `modes` half-wavelength modes over
/// the grid, normalized to unit sup norm.
std::vector<double> smooth_noise(const Grid& g, int modes, std::uint64_t seed);

std::string report_to_json(const SolveReport& r);

} // namespace cmphase
