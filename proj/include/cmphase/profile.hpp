#pragma once

#include <string>

#include <cmphase/field.hpp>
#include <cmphase/optimizer.hpp>
#include <cmphase/potential.hpp>

namespace cmphase {

struct ProfileResult {
  double k = 0.0;
  double m_k = 0.0;
  Field profile;
  double truncation_T = 0.0;
  int n = 0;
  /// |u(-T) + 1| + |u(T) - 1| plus one-sided slopes at +-T of the final profile.
  double tail_residual = 0.0;
  /// Relative change of m_k when the spacing is halved at fixed T.
  double refinement_delta = 0.0;
  /// Relative change of m_k when T is doubled at fixed spacing.
  double truncation_delta = 0.0;
  SolveReport report;
};

struct ProfileControl {
  double tolerance = 1e-4; // relative, for both deltas
  int max_levels = 3;
  Potential potential = Potential::standard_quartic();
};

/// Minimal transition energy from -1 to +1 of W(f) - k (f')^2 + (f'')^2 on
/// (-T, T) with f = -+1 and f' = 0 clamped at the ends.
///
/// Each level solves at (T, h), (2T, h), (T, h/2) and (2T, h/2); the reported
/// constant and profile come from (2T, h/2). If either relative delta exceeds
/// the tolerance the offending parameter is refined and the level repeats.
/// Throws SolveError if a solve fails to converge.
ProfileResult optimal_profile(double k, double T = 8.0, int n = 401, const SolveOptions& opts = {},
                              const ProfileControl& control = {});

/// Single truncated solve, no refinement loop.
SolveReport solve_profile(double k, double T, int n, const SolveOptions& opts,
                          const Potential& pot = Potential::standard_quartic());

enum class LayerKind { G, H };

/// Boundary-layer infimum on (0, 1):
///   G: g(0) = w, g'(0) = z, g(1) = 1, g'(1) = 0;
///   H: h(0) = -1, h'(0) = 0, h(1) = w, h'(1) = z.
/// Throws SolveError if the solve fails to converge.
double boundary_layer_value(LayerKind kind, double k, double w, double z, int n = 401, const SolveOptions& opts = {},
                            const Potential& pot = Potential::standard_quartic());

std::string profile_to_json(const ProfileResult& r);

} // namespace cmphase
