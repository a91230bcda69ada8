#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <cmphase/energy.hpp>
#include <cmphase/optimizer.hpp>

using namespace cmphase;

namespace {

// sum_i (u_i - i / 10)^2 + (u_i - u_{i-1})^2
Objective coupled_quadratic() {
  Objective o;
  o.evaluate = [](std::span<const double> u, std::span<double> g) {
    double f = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = u[i] - 0.1 * static_cast<double>(i);
      f += r * r;
      g[i] = 2 * r;
    }
    for (std::size_t i = 1; i < u.size(); ++i) {
      const double d = u[i] - u[i - 1];
      f += d * d;
      g[i] += 2 * d;
      g[i - 1] -= 2 * d;
    }
    return f;
  };
  return o;
}

} // namespace

TEST_CASE("converges on a strictly convex quadratic") {
  const Grid g = make_grid(0.0, 1.0, 30);
  const auto rep = minimize_energy(constant_field(g, 5.0), coupled_quadratic(), BoundarySpec::free(), {});
  CHECK(rep.converged);
  // Oracle: (I + graph Laplacian) u = ramp, solved by the Thomas algorithm.
  const std::size_t n = 30;
  std::vector<double> diag(n), rhs(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = 1.0 + (i == 0 || i + 1 == n ? 1.0 : 2.0);
    rhs[i] = 0.1 * static_cast<double>(i);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double m = -1.0 / diag[i - 1];
    diag[i] += m;
    rhs[i] -= m * rhs[i - 1];
  }
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] + x[i + 1]) / diag[i];
  for (int i = 0; i < g.n; ++i)
    CHECK(rep.minimizer[i] == doctest::Approx(x[static_cast<std::size_t>(i)]).epsilon(1e-6));
}

TEST_CASE("constrained nodes are preserved bit for bit") {
  const Grid g = make_grid(0.0, 1.0, 30);
  BoundarySpec bc = BoundarySpec::dirichlet(0.123456789, -3.0);
  bc.pinned.push_back({7, 1.0 / 3.0});
  Field u = constant_field(g, 0.5);
  apply_constraints(u, bc);
  SolveOptions o;
  o.multistart_count = 3;
  o.seed = 9;
  const auto rep = minimize_energy(u, coupled_quadratic(), bc, o);
  CHECK(rep.minimizer[0] == 0.123456789);
  CHECK(rep.minimizer[29] == -3.0);
  CHECK(rep.minimizer[7] == 1.0 / 3.0);
  CHECK(rep.restarts_used == 2);
}

TEST_CASE("projection keeps iterates feasible") {
  const Grid g = make_grid(0.0, 1.0, 20);
  Objective o = coupled_quadratic();
  const auto base = o.evaluate;
  o.evaluate = [base](std::span<const double> u, std::span<double> gr) {
    // Pull every node towards -1; the projection forbids negative values.
    double f = base(u, gr);
    for (std::size_t i = 0; i < u.size(); ++i) {
      f += 4 * (u[i] + 1) * (u[i] + 1);
      gr[i] += 8 * (u[i] + 1);
    }
    return f;
  };
  o.project = [](std::span<double> u) {
    for (double& v : u) v = std::max(v, 0.0);
  };
  SolveOptions opts;
  opts.max_iterations = 500;
  const auto rep = minimize_energy(constant_field(g, 1.0), o, BoundarySpec::free(), opts);
  for (double v : rep.minimizer.values) CHECK(v >= 0.0);
}

TEST_CASE("errors") {
  const Grid g = make_grid(0.0, 1.0, 10);
  Field bad = constant_field(g, 0.0);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(minimize_energy(bad, coupled_quadratic(), BoundarySpec::free(), {}), std::domain_error);
  SolveOptions o;
  o.max_iterations = 0;
  CHECK_THROWS_AS(validate(o), std::invalid_argument);
  o = {};
  o.multistart_count = 0;
  CHECK_THROWS_AS(minimize_energy(constant_field(g, 0.0), coupled_quadratic(), BoundarySpec::free(), o),
                  std::invalid_argument);
}

TEST_CASE("same seed, same answer") {
  const Grid g = make_grid(0.0, 1.0, 301);
  const auto bc = BoundarySpec::dirichlet(-1.0, 1.0);
  const auto model = EnergyModel::second_order(g, bc, {0.05, 0.1, Potential::standard_quartic()});
  Field u = sample_function(g, [](double x) { return 2 * x - 1; });
  SolveOptions o;
  o.multistart_count = 3;
  o.seed = 42;
  const auto a = minimize_energy(u, model.objective(), bc, o);
  const auto b = minimize_energy(u, model.objective(), bc, o);
  CHECK(a.minimizer.values == b.minimizer.values);
  CHECK(a.energy == b.energy);
  CHECK(a.converged);
}

TEST_CASE("trace sink sees decreasing energies") {
  const Grid g = make_grid(0.0, 1.0, 201);
  const auto bc = BoundarySpec::dirichlet(-1.0, 1.0);
  const auto model = EnergyModel::second_order(g, bc, {0.05, 0.0, Potential::standard_quartic()});
  Field u = sample_function(g, [](double x) { return 2 * x - 1; });
  double last = std::numeric_limits<double>::infinity();
  bool monotone = true;
  minimize_energy(u, model.objective(), bc, {}, [&](int, double f, double) {
    monotone = monotone && f <= last;
    last = f;
  });
  CHECK(monotone);
}

TEST_CASE("smooth noise is seeded and normalized") {
  const Grid g = make_grid(0.0, 1.0, 101);
  const auto a = smooth_noise(g, 5, 3), b = smooth_noise(g, 5, 3), c = smooth_noise(g, 5, 4);
  CHECK(a == b);
  CHECK(a != c);
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(1.0));
}
