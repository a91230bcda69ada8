#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <cmphase/energy.hpp>

#include "support.hpp"

using namespace cmphase;

TEST_CASE("breakdown of a linear field against hand integrals") {
  const Grid g = make_grid(0.0, 1.0, 4001);
  const Field u = sample_function(g, [](double x) { return x; });
  const double eps = 0.1, k = 0.3;
  const auto b = energy_second_order(u, {eps, k, Potential::standard_quartic()}, BoundarySpec::free());
  // int (x^2 - 1)^2 / 4 over (0, 1) = 2 / 15.
  CHECK(b.potential_term == doctest::Approx(2.0 / 15.0 / eps).epsilon(1e-6));
  CHECK(b.gradient_term == doctest::Approx(eps).epsilon(1e-12));
  CHECK(std::abs(b.curvature_term) < 1e-12);
  CHECK(b.total == doctest::Approx(b.potential_term - k * b.gradient_term + b.curvature_term).epsilon(1e-15));
}

TEST_CASE("curvature term of a quadratic") {
  const Grid g = make_grid(0.0, 2.0, 201);
  const Field u = sample_function(g, [](double x) { return 0.5 * x * x; });
  const double eps = 0.2;
  const auto b = energy_second_order(u, {eps, 0.0, Potential::standard_quartic()}, BoundarySpec::free());
  CHECK(b.curvature_term == doctest::Approx(eps * eps * eps * 2.0).epsilon(1e-12));
}

TEST_CASE("wells have zero energy and k = 0 reduces to E") {
  const Grid g = make_grid(0.0, 1.0, 101);
  CHECK(energy_e0(constant_field(g, 1.0), 0.05, Potential::standard_quartic(), BoundarySpec::free()).total == 0.0);
  const Field u = sample_function(g, [](double x) { return std::tanh(10 * (x - 0.4)); });
  const auto e0 = energy_e0(u, 0.05, Potential::standard_quartic(), BoundarySpec::free());
  const auto f0 = energy_second_order(u, {0.05, 0.0, Potential::standard_quartic()}, BoundarySpec::free());
  CHECK(e0.total == f0.total);
  CHECK(stima_gap(u, {0.05, 0.0, Potential::standard_quartic()}, 0.0142, 0.0) == 0.0);
}

TEST_CASE("analytic gradient matches finite differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Grid g = make_grid(0.0, 1.0, 201);
  for (int trial = 0; trial < 6; ++trial) {
    const double eps = 0.05 + 0.2 * unit(rng), k = 2.0 * unit(rng);
    Field u{g, smooth_noise(g, 2 + trial, 100 + static_cast<std::uint64_t>(trial))};
    for (double& v : u.values) v *= 1.5;
    const BoundarySpec bcs[] = {BoundarySpec::free(), BoundarySpec::dirichlet(-1.0, 1.0),
                                BoundarySpec::clamped(-1.0, 0.0, 1.0, 0.5),
                                BoundarySpec{EndCondition::make_value(0.0), EndCondition::make_slope(0.0), {}}};
    for (int b = 0; b < 4; ++b) {
      const BoundarySpec& bc = bcs[b];
      Field v = u;
      apply_constraints(v, bc);
      const auto model = EnergyModel::second_order(g, bc, {eps, k, Potential::standard_quartic()});
      CHECK(gradient_fd_check(model.objective(), v, bc, 1e-6) <= 1e-5);
    }
  }
}

TEST_CASE("energy_gradient zeroes constrained nodes") {
  const Grid g = make_grid(0.0, 1.0, 51);
  Field u = sample_function(g, [](double x) { return std::sin(3 * x); });
  const auto bc = BoundarySpec::clamped(0.0, 3.0, std::sin(3.0), 0.0);
  apply_constraints(u, bc);
  const Field gr = energy_gradient(u, {0.1, 0.5, Potential::standard_quartic()}, bc);
  CHECK(gr[0] == 0.0);
  CHECK(gr[50] == 0.0);
  CHECK(gr[25] != 0.0);
}

TEST_CASE("Modica-Mortola energy of the heteroclinic") {
  const double eps = 0.02;
  const Grid g = make_grid(0.0, 1.0, 8001);
  const auto bc = BoundarySpec::dirichlet(-1.0, 1.0);
  Field u = sample_function(g, [&](double x) { return std::tanh((x - 0.5) / (2.0 * eps)); });
  apply_constraints(u, bc);
  CHECK(energy_modica_mortola(u, eps, Potential::standard_quartic(), bc) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("invalid parameters") {
  const Grid g = make_grid(0.0, 1.0, 11);
  CHECK_THROWS_AS(energy_second_order(constant_field(g, 0.0), {0.0, 0.0, Potential::standard_quartic()},
                                      BoundarySpec::free()),
                  std::invalid_argument);
  CHECK_THROWS_AS(stima_gap(constant_field(g, 0.0), {}, 0.0, 0.0), std::invalid_argument);
  CHECK(breakdown_to_json({1.0, 2.0, 3.0, 4.0}).find("\"curvature\":3") != std::string::npos);
}
