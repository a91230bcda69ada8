#include <cmphase/energy.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace cmphase {

EnergyModel::EnergyModel(const Grid& grid, const BoundarySpec& bc, Potential potential, Integrand integrand)
    : grid_(grid),
      bc_(bc),
      potential_(std::move(potential)),
      integrand_(integrand),
      weights_(trapezoid_weights(grid)),
      fixed_(constrained_nodes(grid, bc)),
      d1_(first_derivative_operator(grid, bc)),
      d2_(second_derivative_operator(grid, bc)) {}

EnergyModel EnergyModel::second_order(const Grid& grid, const BoundarySpec& bc, const EnergyParams& p) {
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double e = p.epsilon;
  return EnergyModel(grid, bc, p.potential, {1.0 / e, -p.k * e, e * e * e});
}

EnergyModel EnergyModel::modica_mortola(const Grid& grid, const BoundarySpec& bc, const Potential& pot,
                                        double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return EnergyModel(grid, bc, pot, {1.0 / epsilon, epsilon, 0.0});
}

EnergyModel EnergyModel::unscaled(const Grid& grid, const BoundarySpec& bc, const Potential& pot, double k) {
  return EnergyModel(grid, bc, pot, {1.0, -k, 1.0});
}

EnergyModel::Integrals EnergyModel::integrals(std::span<const double> u) const {
  const std::size_t n = u.size();
  std::vector<double> d1(n), d2(n);
  d1_.apply(u, d1);
  d2_.apply(u, d2);
  Integrals out;
  for (std::size_t i = 0; i < n; ++i) {
    out.potential += weights_[i] * potential_.value(u[i]);
    out.gradient += weights_[i] * d1[i] * d1[i];
    out.curvature += weights_[i] * d2[i] * d2[i];
  }
  return out;
}

double EnergyModel::value(std::span<const double> u) const {
  const auto in = integrals(u);
  return integrand_.potential * in.potential + integrand_.gradient * in.gradient +
         integrand_.curvature * in.curvature;
}

double EnergyModel::value_and_gradient(std::span<const double> u, std::span<double> grad) const {
  const std::size_t n = u.size();
  if (n != weights_.size() || grad.size() != n) throw std::invalid_argument("EnergyModel: size mismatch");
  std::vector<double> d1(n), d2(n);
  d1_.apply(u, d1);
  d2_.apply(u, d2);
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights_[i];
    e += w * (integrand_.potential * potential_.value(u[i]) + integrand_.gradient * d1[i] * d1[i] +
              integrand_.curvature * d2[i] * d2[i]);
    grad[i] = integrand_.potential != 0.0 ? w * integrand_.potential * potential_.derivative(u[i]) : 0.0;
    // d1, d2 now hold the weighted residuals fed to the transposes.
    d1[i] *= 2.0 * integrand_.gradient * w;
    d2[i] *= 2.0 * integrand_.curvature * w;
  }
  if (integrand_.gradient != 0.0) d1_.add_transpose(d1, grad);
  if (integrand_.curvature != 0.0) d2_.add_transpose(d2, grad);
  for (std::size_t i = 0; i < n; ++i)
    if (fixed_[i]) grad[i] = 0.0;
  return e;
}

BandedSpd convex_hessian(const Grid& g, const BoundarySpec& bc, double mass, double stiff_1, double stiff_2) {
  BandedSpd m(g.n, 3);
  const auto w = trapezoid_weights(g);
  for (int i = 0; i < g.n; ++i) m.add(i, i, w[static_cast<std::size_t>(i)] * mass);
  auto accumulate = [&](const DifferenceOperator& d, double scale) {
    if (scale == 0.0) return;
    for (int r = 0; r < d.size(); ++r) {
      const auto& row = d.rows()[static_cast<std::size_t>(r)];
      for (int p = 0; p < row.count; ++p)
        for (int q = 0; q <= p; ++q) {
          const int i = row.index[static_cast<std::size_t>(p)];
          const int j = row.index[static_cast<std::size_t>(q)];
          double v = 2.0 * scale * w[static_cast<std::size_t>(r)] * row.coef[static_cast<std::size_t>(p)] *
                     row.coef[static_cast<std::size_t>(q)];
          if (p != q && i == j) v *= 2.0;
          m.add(i, j, v);
        }
    }
  };
  accumulate(first_derivative_operator(g, bc), stiff_1);
  accumulate(second_derivative_operator(g, bc), stiff_2);
  const auto fixed = constrained_nodes(g, bc);
  for (int i = 0; i < g.n; ++i)
    if (fixed[static_cast<std::size_t>(i)]) m.decouple(i);
  m.factorize();
  return m;
}

Objective EnergyModel::objective() const {
  auto self = std::make_shared<const EnergyModel>(*this);
  // W'' = 2 at the wells of the quartic sets the mass scale.
  const double mass = 2.0 * std::abs(integrand_.potential);
  auto pre = std::make_shared<const BandedSpd>(convex_hessian(
      grid_, bc_, mass > 0.0 ? mass : 1.0, std::max(integrand_.gradient, 0.0), std::max(integrand_.curvature, 0.0)));
  Objective obj;
  obj.evaluate = [self](std::span<const double> u, std::span<double> g) { return self->value_and_gradient(u, g); };
  obj.precondition = [pre](std::span<double> v) { pre->solve_in_place(v); };
  return obj;
}

namespace {

EnergyBreakdown breakdown(const EnergyModel::Integrals& in, double epsilon, double k) {
  EnergyBreakdown b;
  b.potential_term = in.potential / epsilon;
  b.gradient_term = epsilon * in.gradient;
  b.curvature_term = epsilon * epsilon * epsilon * in.curvature;
  b.total = b.potential_term - k * b.gradient_term + b.curvature_term;
  return b;
}

} // namespace

EnergyBreakdown energy_second_order(const Field& u, const EnergyParams& p, const BoundarySpec& bc) {
  const auto model = EnergyModel::second_order(u.grid, bc, p);
  return breakdown(model.integrals(u.values), p.epsilon, p.k);
}

EnergyBreakdown energy_e0(const Field& u, double epsilon, const Potential& pot, const BoundarySpec& bc) {
  return energy_second_order(u, EnergyParams{epsilon, 0.0, pot}, bc);
}

double energy_modica_mortola(const Field& u, double epsilon, const Potential& pot, const BoundarySpec& bc) {
  const auto in = EnergyModel::modica_mortola(u.grid, bc, pot, epsilon).integrals(u.values);
  return in.potential / epsilon + epsilon * in.gradient;
}

double energy_unscaled(const Field& u, double k, const Potential& pot, const BoundarySpec& bc) {
  const auto in = EnergyModel::unscaled(u.grid, bc, pot, k).integrals(u.values);
  return in.potential - k * in.gradient + in.curvature;
}

Field energy_gradient(const Field& u, const EnergyParams& p, const BoundarySpec& bc) {
  const auto model = EnergyModel::second_order(u.grid, bc, p);
  Field g{u.grid, std::vector<double>(u.values.size())};
  model.value_and_gradient(u.values, g.values);
  return g;
}

double stima_gap(const Field& u, const EnergyParams& p, double k0_est, double delta, const BoundarySpec& bc) {
  if (!(k0_est > 0.0)) throw std::invalid_argument("stima_gap: k0_est must be positive");
  const auto b = energy_second_order(u, p, bc);
  const double e0 = b.potential_term + b.curvature_term;
  return b.total - (1.0 - p.k / k0_est - delta) * e0;
}

std::string breakdown_to_json(const EnergyBreakdown& b) {
  nlohmann::json j;
  j["potential"] = b.potential_term;
  j["gradient"] = b.gradient_term;
  j["curvature"] = b.curvature_term;
  j["total"] = b.total;
  return j.dump();
}

} // namespace cmphase
