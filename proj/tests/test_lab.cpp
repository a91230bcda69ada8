#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <cmphase/energy.hpp>
#include <cmphase/inequalities.hpp>
#include <cmphase/lab.hpp>
#include <cmphase/report.hpp>

using namespace cmphase;

namespace {

ExperimentConfig base_config(double k, double eps, const BoundarySpec& bc) {
  ExperimentConfig cfg;
  cfg.n = 1601;
  cfg.boundary = bc;
  cfg.k_values = {k};
  cfg.epsilon_values = {eps};
  cfg.seed = 5;
  return cfg;
}

} // namespace

TEST_CASE("transition counts") {
  const Grid g = make_grid(0.0, 1.0, 1001);
  CHECK(count_transitions(sample_function(g, [](double x) { return std::tanh((x - 0.5) / 0.03); })) == 1);
  CHECK(count_transitions(constant_field(g, 1.0)) == 0);
  CHECK(count_transitions(sample_function(g, [](double x) {
          return std::tanh((x - 0.25) / 0.03) - std::tanh((x - 0.75) / 0.03) - 1.0;
        })) == 2);
  // Small wiggles around zero do not register.
  CHECK(count_transitions(sample_function(g, [](double x) { return 0.5 * std::sin(40.0 * x); })) == 0);
}

TEST_CASE("oscillation counts") {
  const Grid g = make_grid(0.0, 1.0, 1001);
  CHECK(count_oscillations(sample_function(g, [](double x) { return x * x; })) == 0);
  CHECK(count_oscillations(constant_field(g, 3.0)) == 0);
  const Field saw = build_oscillatory_family(1.0, 1.0, 1.0 / 60.0, FamilyCenter::zero_well, 12001);
  CHECK(count_oscillations(saw) >= 9);
  CHECK(count_oscillations(saw, 0.1) >= 9);
}

TEST_CASE("sweep cells") {
  SUBCASE("stable phases") {
    const auto cell = run_sweep_cell(base_config(0.05, 0.02, BoundarySpec::dirichlet(-1.0, 1.0)), 0, 0);
    CHECK(cell.record.converged);
    CHECK(cell.record.transitions == 1);
    CHECK(cell.record.oscillations <= 1);
    CHECK(cell.record.total_energy > 0.0);
  }
  SUBCASE("oscillating regime") {
    const auto cell = run_sweep_cell(base_config(1.2, 0.02, BoundarySpec::free()), 0, 0);
    CHECK(cell.record.total_energy < 0.0);
    CHECK(cell.record.oscillations >= 5);
  }
  SUBCASE("k = 0 is the first-order-free energy") {
    const ExperimentConfig cfg = base_config(0.0, 0.05, BoundarySpec::dirichlet(-1.0, 1.0));
    const auto cell = run_sweep_cell(cfg, 0, 0);
    const auto e0 = energy_e0(cell.minimizer, 0.05, cfg.potential, cfg.boundary);
    CHECK(cell.record.total_energy == e0.total);
    CHECK(cell.record.total_energy == e0.potential_term + e0.curvature_term);
  }
}

TEST_CASE("sweep bookkeeping") {
  ExperimentConfig cfg = base_config(0.05, 0.05, BoundarySpec::dirichlet(-1.0, 1.0));
  cfg.n = 801;
  cfg.k_values = {std::numeric_limits<double>::quiet_NaN(), 0.05};
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].converged);
  CHECK(std::isnan(rows[0].total_energy));
  CHECK(rows[1].converged);

  cfg.k_values = {0.05, 1.2};
  cfg.boundary = BoundarySpec::free();
  CHECK(records_to_csv(run_sweep(cfg)) == records_to_csv(run_sweep(cfg)));

  // Classification is a function of the stored field alone.
  const auto cell = run_sweep_cell(cfg, 1, 0);
  const Field back = field_from_json(field_to_json(cell.minimizer));
  CHECK(count_transitions(back, cfg.transition_threshold) == cell.record.transitions);
  CHECK(count_oscillations(back, cfg.oscillation_floor) == cell.record.oscillations);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = base_config(0.1, 0.01, BoundarySpec::free());
  cfg.n = 101;
  validate_config(cfg);
  CHECK(cfg.warnings.size() == 1);
  cfg.k_values.clear();
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = base_config(0.1, -0.01, BoundarySpec::free());
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("preconditions of the scaling tables") {
  CHECK_THROWS_AS(gamma_limit_table(0.5, {0.1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(gamma_limit_table(0.05, {0.05, 0.1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(gamma_limit_table(0.05, {0.1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(blowup_probe(0.5, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(blowup_probe(1.2, {}), std::invalid_argument);
}

TEST_CASE("constructive negativity") {
  const auto w = tuned_oscillatory_witness(1.2, 0.05, 6001);
  CHECK(w.energy < 0.0);
  CHECK(w.periods >= 1);
}
