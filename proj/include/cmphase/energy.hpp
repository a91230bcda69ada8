#pragma once

#include <memory>
#include <span>

#include <cmphase/banded.hpp>
#include <cmphase/field.hpp>
#include <cmphase/optimizer.hpp>
#include <cmphase/potential.hpp>

namespace cmphase {

struct EnergyParams {
  double epsilon = 1.0;
  double k = 0.0;
  Potential potential = Potential::standard_quartic();
};

/// The three unsigned contributions and the signed total
/// total = potential_term - k * gradient_term + curvature_term.
struct EnergyBreakdown {
  double potential_term = 0.0;
  double gradient_term = 0.0;
  double curvature_term = 0.0;
  double total = 0.0;
};

/// Coefficients of the integrand a W(u) + b (u')^2 + c (u'')^2.
struct Integrand {
  double potential = 1.0;
  double gradient = 0.0;
  double curvature = 0.0;
};

/// Discrete integral functional on a fixed grid and boundary spec. Energy and
/// gradient share one set of stencils and trapezoid weights, so the gradient is
/// the exact derivative of the discrete energy.
class EnergyModel {
public:
  EnergyModel(const Grid& grid, const BoundarySpec& bc, Potential potential, Integrand integrand);

  static EnergyModel second_order(const Grid& grid, const BoundarySpec& bc, const EnergyParams& p);
  static EnergyModel modica_mortola(const Grid& grid, const BoundarySpec& bc, const Potential& pot, double epsilon);
  static EnergyModel unscaled(const Grid& grid, const BoundarySpec& bc, const Potential& pot, double k);

  /// Raw integrals of W(u), (u')^2 and (u'')^2.
  struct Integrals {
    double potential = 0.0;
    double gradient = 0.0;
    double curvature = 0.0;
  };
  Integrals integrals(std::span<const double> u) const;

  double value(std::span<const double> u) const;
  /// Gradient with respect to every nodal value; constrained nodes get 0.
  double value_and_gradient(std::span<const double> u, std::span<double> grad) const;

  /// Objective bound to a shared copy of this model, preconditioned by the
  /// convex part of the Hessian (mass, curvature and any positive gradient term).
  Objective objective() const;

  const Grid& grid() const { return grid_; }
  const BoundarySpec& boundary() const { return bc_; }
  const Integrand& integrand() const { return integrand_; }
  const Potential& potential() const { return potential_; }

private:
  Grid grid_;
  BoundarySpec bc_;
  Potential potential_;
  Integrand integrand_;
  std::vector<double> weights_;
  std::vector<bool> fixed_;
  DifferenceOperator d1_;
  DifferenceOperator d2_;
};

/// Assembles sum_i w_i (mass + stiff_1 (D1 u)_i^2 + stiff_2 (D2 u)_i^2) as a band
/// matrix (times 2 for the quadratic terms), with constrained rows decoupled.
BandedSpd convex_hessian(const Grid& g, const BoundarySpec& bc, double mass, double stiff_1, double stiff_2);

EnergyBreakdown energy_second_order(const Field& u, const EnergyParams& p, const BoundarySpec& bc);
EnergyBreakdown energy_e0(const Field& u, double epsilon, const Potential& pot, const BoundarySpec& bc);
double energy_modica_mortola(const Field& u, double epsilon, const Potential& pot, const BoundarySpec& bc);
/// The blown-up energy: integral of W(u) - k (u')^2 + (u'')^2 with no epsilon.
double energy_unscaled(const Field& u, double k, const Potential& pot, const BoundarySpec& bc);
Field energy_gradient(const Field& u, const EnergyParams& p, const BoundarySpec& bc);

/// F(u) - (1 - k / k0_est - delta) E(u); a nonnegative value certifies the
/// lower bound of F by E for this instance.
double stima_gap(const Field& u, const EnergyParams& p, double k0_est, double delta,
                 const BoundarySpec& bc = BoundarySpec::free());

std::string breakdown_to_json(const EnergyBreakdown& b);

} // namespace cmphase
