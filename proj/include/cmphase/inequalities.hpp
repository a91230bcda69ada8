#pragma once

#include <string>
#include <vector>

#include <cmphase/field.hpp>
#include <cmphase/optimizer.hpp>
#include <cmphase/potential.hpp>

namespace cmphase {

struct RayleighEstimate {
  double L = 0.0;
  double quotient = 0.0;
  Field minimizer;
  double denominator = 0.0; // integral of (u')^2
  bool converged = false;
  int n = 0;
};

/// (int W(u) + int (u'')^2) / int (u')^2, or +infinity when the denominator is
/// at most 1e-14 * max(1, numerator).
double rayleigh_quotient(const Field& u, const Potential& pot, const BoundarySpec& bc);

/// Minimizes the quotient on (0, L) with u(0) = 0, u'(L) = 0 and u >= 0.
/// Starts: the optimal quadratic-family member stretched to L, a quarter sine,
/// a tanh ramp, the optimal member at its own length held constant beyond it,
/// then seeded random perturbations up to opts.multistart_count in total.
/// Throws std::runtime_error("degenerate") if every start collapses.
RayleighEstimate estimate_k1(double L, int n, const SolveOptions& opts);

const std::vector<double>& default_k1_lengths();

/// Best estimate_k1 over the lengths; ties go to the smaller L. With `refine`
/// and at least two lengths, a golden-section search on log L between the
/// neighbours of the best grid point follows; every probe is a candidate.
RayleighEstimate k1_search(const std::vector<double>& L_values, int n, const SolveOptions& opts, bool refine = true);

/// (I1 + I2) / I3 for u = h^2 (1 - (x - L)^2 / L^2) on (0, L), in closed form.
double quadratic_family_quotient(double h, double L);

struct QuadraticFamilyMinimum {
  double h = 0.0;
  double L = 0.0;
  double value = 0.0;
  double d_dh = 0.0; // partials of the closed form at the minimizer
  double d_dL = 0.0;
};

/// Partial derivatives (d/dh, d/dL) of quadratic_family_quotient.
std::pair<double, double> quadratic_family_gradient(double h, double L);

QuadraticFamilyMinimum minimize_quadratic_family();

/// max{2/L^2, 1/max(8, 2(1 + 12/L^2)^2)}: the larger of the two lower bounds
/// for the quotient on (0, L).
double lower_bound_k1_at(double L);

/// Infimum over L > 0 of lower_bound_k1_at.
double lower_bound_k1();

enum class FamilyCenter { zero_well, plus_well };

/// Periodic sawtooth with parabolic caps on (0, 1): period 6 l eps, lines of
/// slope +-alpha/eps, caps with |u''| = 2 alpha / (l eps^2). Throws
/// std::invalid_argument unless 1/(6 l eps) is a positive integer.
Field build_oscillatory_family(double alpha, double l, double epsilon, FamilyCenter center, int n);

/// (eps^3 int (u'')^2 + int W(u) / eps) / (eps int (u')^2), free ends.
double counterexample_ratio(const Field& u, double epsilon, const Potential& pot);

/// (L^2 / 2) int (u'')^2 - int (u')^2 on (a, b) with L = b - a.
double check_jensen(const Field& u, const BoundarySpec& bc);

/// c ||u''|| + (1/c + 12/(b-a)^2) ||u|| - ||u'|| in L^2.
double check_linear_interpolation(const Field& u, double c, const BoundarySpec& bc = BoundarySpec::free());

/// Both sides of
///   c^2 q^2 + (c^2 r + c q + p + s)^2 = c^4 r^2 + (p + s)^2 + 2c (c q + p + s)(c r + q)
/// for the triple (p, q, r) = (u, u', u'') and s = sign. Returns |lhs - rhs|.
double boundary_identity_residual(double p, double q, double r, double c, int sign);

struct BoundaryIdentityCheck {
  double max_residual = 0.0;
  /// c^3 int (u'')^2 + int (u + s)^2 / c - c int (u')^2
  ///   + (c u' + u + s)^2 at b - (c u' + u + s)^2 at a.
  double integrated_slack = 0.0;
};

BoundaryIdentityCheck check_boundary_identity(const Field& u, double c, int sign,
                                              const BoundarySpec& bc = BoundarySpec::free());

/// ||u'||_{4/3} / (||u||_1^{1/2} ||u''||_2^{1/2} + ||u||_1). Throws when ||u||_1 = 0.
double gn_quotient(const Field& u);

/// Upper bound for gn_quotient frozen from a scan of 5000 random smooth fields
/// on (0, 1) with n = 2001 (largest value seen: 1.2839).
inline constexpr double gn_constant_empirical = 1.3;

/// Slack of k0 int (u')^2 <= (b-a)^-2 int W(u) + (b-a)^2 int (u'')^2, free ends.
double interpolation_slack(const Field& u, double k0, const Potential& pot = Potential::standard_quartic());

/// Minimizes (int W + int (u'')^2) / int (u')^2 on (0, 1) with free ends.
RayleighEstimate estimate_k0_detailed(int n, const SolveOptions& opts);
double estimate_k0(int n, const SolveOptions& opts);

std::string estimate_to_json(const RayleighEstimate& e);

} // namespace cmphase
