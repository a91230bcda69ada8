#include <cmphase/profile.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include <cmphase/energy.hpp>

namespace cmphase {

namespace {

SolveReport solve_checked(const Field& initial, const EnergyModel& model, const SolveOptions& opts,
                          const char* what) {
  SolveReport rep = minimize_energy(initial, model.objective(), model.boundary(), opts);
  if (!rep.converged) throw SolveError(std::string(what) + ": solver did not converge (" + rep.message + ")", rep);
  return rep;
}

double relative_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Endpoint mismatch plus one-sided slopes at both ends, read off the nodal values.
double tail_residual(const Field& u) {
  const int n = u.size();
  const double h = u.grid.h();
  const double left_slope = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  const double right_slope = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return std::abs(u[0] + 1.0) + std::abs(u[n - 1] - 1.0) + std::abs(left_slope) + std::abs(right_slope);
}

} // namespace

SolveReport solve_profile(double k, double T, int n, const SolveOptions& opts, const Potential& pot) {
  if (!(T > 0.0)) throw std::invalid_argument("solve_profile: T must be positive");
  const Grid g = make_grid(-T, T, n);
  const auto bc = BoundarySpec::clamped(-1.0, 0.0, 1.0, 0.0);
  const auto model = EnergyModel::unscaled(g, bc, pot, k);
  Field init = sample_function(g, [](double x) { return std::tanh(x / std::sqrt(2.0)); });
  apply_constraints(init, bc);
  return solve_checked(init, model, opts, "optimal_profile");
}

ProfileResult optimal_profile(double k, double T, int n, const SolveOptions& opts, const ProfileControl& control) {
  if (!(k >= 0.0)) throw std::invalid_argument("optimal_profile: k must be nonnegative");
  if (n < 5) throw std::invalid_argument("optimal_profile: n must be at least 5");
  ProfileResult out;
  out.k = k;
  for (int level = 0; level < control.max_levels; ++level) {
    const int n_wide = 2 * (n - 1) + 1;
    const int n_fine = 2 * (n - 1) + 1;
    const int n_both = 4 * (n - 1) + 1;
    const double base = solve_profile(k, T, n, opts, control.potential).energy;
    const double wide = solve_profile(k, 2.0 * T, n_wide, opts, control.potential).energy;
    const double fine = solve_profile(k, T, n_fine, opts, control.potential).energy;
    SolveReport both = solve_profile(k, 2.0 * T, n_both, opts, control.potential);

    out.truncation_delta = relative_change(wide, base);
    out.refinement_delta = relative_change(fine, base);
    out.m_k = both.energy;
    out.truncation_T = 2.0 * T;
    out.n = n_both;
    out.tail_residual = tail_residual(both.minimizer);
    out.profile = both.minimizer;
    out.report = std::move(both);
    const bool t_ok = out.truncation_delta < control.tolerance;
    const bool h_ok = out.refinement_delta < control.tolerance;
    if (t_ok && h_ok) return out;
    if (!t_ok) {
      T *= 2.0;
      n = 2 * (n - 1) + 1;
    }
    if (!h_ok) n = 2 * (n - 1) + 1;
  }
  return out;
}

double boundary_layer_value(LayerKind kind, double k, double w, double z, int n, const SolveOptions& opts,
                            const Potential& pot) {
  const Grid g = make_grid(0.0, 1.0, n);
  const auto bc = kind == LayerKind::G ? BoundarySpec::clamped(w, z, 1.0, 0.0)
                                       : BoundarySpec::clamped(-1.0, 0.0, w, z);
  const double u0 = bc.left.value, s0 = bc.left.slope, u1 = bc.right.value, s1 = bc.right.slope;
  // Cubic Hermite interpolant of the boundary data.
  Field init = sample_function(g, [&](double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * s0 + (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * s1;
  });
  const auto model = EnergyModel::unscaled(g, bc, pot, k);
  return solve_checked(init, model, opts, "boundary_layer_value").energy;
}

std::string profile_to_json(const ProfileResult& r) {
  nlohmann::json j;
  j["k"] = r.k;
  j["m_k"] = r.m_k;
  j["truncation_T"] = r.truncation_T;
  j["n"] = r.n;
  j["tail_residual"] = r.tail_residual;
  j["refinement_delta"] = r.refinement_delta;
  j["truncation_delta"] = r.truncation_delta;
  j["iterations"] = r.report.iterations;
  j["profile"] = nlohmann::json::parse(field_to_json(r.profile));
  return j.dump();
}

} // namespace cmphase
