#include <cmphase/lab.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <cmphase/energy.hpp>
#include <cmphase/inequalities.hpp>
#include <cmphase/profile.hpp>

namespace cmphase {

namespace {

const double kPi = std::acos(-1.0);
constexpr double kOscillationThreshold = 0.9481;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SolveReport best_of(const std::vector<Field>& starts, const EnergyModel& model, const SolveOptions& opts) {
  const Objective obj = model.objective();
  SolveReport best;
  bool have = false;
  for (const Field& s : starts) {
    SolveReport rep = minimize_energy(s, obj, model.boundary(), opts);
    if (!have || rep.energy < best.energy) {
      best = std::move(rep);
      have = true;
    }
  }
  return best;
}

} // namespace

void validate_config(ExperimentConfig& cfg) {
  if (cfg.k_values.empty()) throw std::invalid_argument("config: k_values must be nonempty");
  if (cfg.epsilon_values.empty()) throw std::invalid_argument("config: epsilon_values must be nonempty");
  for (double e : cfg.epsilon_values)
    if (!(e > 0.0)) throw std::invalid_argument("config: epsilon values must be positive");
  if (!(cfg.b > cfg.a)) throw std::invalid_argument("config: domain requires a < b");
  if (cfg.n < 5) throw std::invalid_argument("config: n must be at least 5");
  if (!(cfg.transition_threshold > 0.0 && cfg.transition_threshold < 1.0))
    throw std::invalid_argument("config: transition_threshold must lie in (0, 1)");
  validate(cfg.solver);
  const double h = (cfg.b - cfg.a) / (cfg.n - 1);
  const double eps_min = *std::min_element(cfg.epsilon_values.begin(), cfg.epsilon_values.end());
  if (h > eps_min / 8.0)
    cfg.warnings.push_back("grid spacing " + std::to_string(h) + " exceeds eps/8 for eps = " + std::to_string(eps_min));
}

int count_transitions(const Field& u, double threshold) {
  int state = 0;
  int count = 0;
  for (double v : u.values) {
    if (v > threshold) {
      if (state < 0) ++count;
      state = 1;
    } else if (v < -threshold) {
      if (state > 0) ++count;
      state = -1;
    }
  }
  return count;
}

int count_oscillations(const Field& u, double noise_floor) {
  if (u.values.empty()) return 0;
  int dir = 0;
  int count = 0;
  double hi = u.values.front(), lo = hi, ext = hi;
  for (double v : u.values) {
    if (dir == 0) {
      hi = std::max(hi, v);
      lo = std::min(lo, v);
      if (v - lo > noise_floor) {
        dir = 1;
        ext = v;
      } else if (hi - v > noise_floor) {
        dir = -1;
        ext = v;
      }
    } else if (dir > 0) {
      if (v > ext) {
        ext = v;
      } else if (ext - v > noise_floor) {
        ++count;
        dir = -1;
        ext = v;
      }
    } else {
      if (v < ext) {
        ext = v;
      } else if (v - ext > noise_floor) {
        ++count;
        dir = 1;
        ext = v;
      }
    }
  }
  return count;
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t k_index, std::size_t eps_index) {
  return splitmix(splitmix(splitmix(seed) ^ k_index) ^ eps_index);
}

CellResult run_sweep_cell(const ExperimentConfig& cfg, std::size_t k_index, std::size_t eps_index) {
  const double k = cfg.k_values.at(k_index);
  const double eps = cfg.epsilon_values.at(eps_index);
  const Grid g = make_grid(cfg.a, cfg.b, cfg.n);
  const EnergyParams params{eps, k, cfg.potential};
  const auto model = EnergyModel::second_order(g, cfg.boundary, params);

  const double mid = 0.5 * (cfg.a + cfg.b);
  Field tanh_start = sample_function(g, [&](double x) { return std::tanh((x - mid) / (std::sqrt(2.0) * eps)); });
  const std::uint64_t seed = cell_seed(cfg.seed, k_index, eps_index);
  const int modes = std::max(2, static_cast<int>(g.length() / (4.0 * eps)));
  const auto noise = smooth_noise(g, modes, seed);
  Field random_start{g, noise};
  apply_constraints(tanh_start, cfg.boundary);
  apply_constraints(random_start, cfg.boundary);

  SolveOptions opts = cfg.solver;
  opts.seed = seed;
  SolveReport rep = best_of({tanh_start, random_start}, model, opts);

  CellResult out;
  const auto b = energy_second_order(rep.minimizer, params, cfg.boundary);
  out.record = {k, eps, b.total, b.potential_term, b.gradient_term, b.curvature_term,
                count_transitions(rep.minimizer, cfg.transition_threshold),
                count_oscillations(rep.minimizer, cfg.oscillation_floor), rep.converged};
  out.minimizer = std::move(rep.minimizer);
  return out;
}

std::vector<SweepRecord> run_sweep(const ExperimentConfig& cfg) {
  std::vector<SweepRecord> out;
  out.reserve(cfg.k_values.size() * cfg.epsilon_values.size());
  for (std::size_t i = 0; i < cfg.k_values.size(); ++i)
    for (std::size_t j = 0; j < cfg.epsilon_values.size(); ++j) {
      try {
        out.push_back(run_sweep_cell(cfg, i, j).record);
      } catch (const std::exception&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.push_back({cfg.k_values[i], cfg.epsilon_values[j], nan, nan, nan, nan, 0, 0, false});
      }
    }
  return out;
}

GammaTable gamma_limit_table(double k, const std::vector<double>& epsilon_values, int jumps, const SolveOptions& opts) {
  if (jumps != 1 && jumps != 2) throw std::invalid_argument("gamma_limit_table: jumps must be 1 or 2");
  if (epsilon_values.empty()) throw std::invalid_argument("gamma_limit_table: no epsilon values");
  if (!(k >= 0.0 && k < lower_bound_k1()))
    throw std::invalid_argument("gamma_limit_table: k must lie below the stability threshold");
  for (std::size_t i = 0; i < epsilon_values.size(); ++i) {
    if (!(epsilon_values[i] > 0.0)) throw std::invalid_argument("gamma_limit_table: epsilon must be positive");
    if (i > 0 && !(epsilon_values[i] < epsilon_values[i - 1]))
      throw std::invalid_argument("gamma_limit_table: epsilon values must be strictly decreasing");
  }

  const ProfileResult profile = optimal_profile(k, 8.0, 401, opts);
  GammaTable table;
  table.k = k;
  table.jumps = jumps;
  table.m_k = profile.m_k;
  const double h_unscaled = profile.profile.grid.h();

  for (double eps : epsilon_values) {
    int cells = static_cast<int>(std::ceil(1.0 / (eps * h_unscaled) - 1e-9));
    cells += cells % 2; // even, so the midpoint is a node
    const Grid g = make_grid(0.0, 1.0, cells + 1);
    BoundarySpec bc = jumps == 1 ? BoundarySpec::dirichlet(-1.0, 1.0) : BoundarySpec::dirichlet(-1.0, -1.0);
    const double w = std::sqrt(2.0) * eps;
    Field start = jumps == 1 ? sample_function(g, [&](double x) { return std::tanh((x - 0.5) / w); })
                             : sample_function(g, [&](double x) {
                                 return std::tanh((x - 0.25) / w) - std::tanh((x - 0.75) / w) - 1.0;
                               });
    if (jumps == 2) bc.pinned.push_back({cells / 2, 1.0});
    apply_constraints(start, bc);
    const auto model = EnergyModel::second_order(g, bc, {eps, k, Potential::standard_quartic()});
    const SolveReport rep = minimize_energy(start, model.objective(), bc, opts);

    GammaRow row;
    row.epsilon = eps;
    row.n = g.n;
    row.energy = rep.energy;
    row.target = jumps * table.m_k;
    row.abs_error = std::abs(rep.energy - row.target);
    row.transitions = count_transitions(rep.minimizer);
    row.converged = rep.converged;
    table.rows.push_back(row);
  }
  return table;
}

OscillatoryWitness tuned_oscillatory_witness(double k, double epsilon, int n) {
  const Grid g = make_grid(0.0, 1.0, n);
  const EnergyParams params{epsilon, k, Potential::standard_quartic()};
  const auto model = EnergyModel::second_order(g, BoundarySpec::free(), params);
  // At least 20 nodes on every parabolic cap.
  const int max_periods = std::max(1, (n - 1) / 120);
  OscillatoryWitness best;
  best.energy = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= max_periods; ++m) {
    const double l = 1.0 / (6.0 * epsilon * m);
    for (int ia = 0; ia < 60; ++ia) {
      const double alpha = 0.02 * std::pow(150.0, ia / 59.0);
      for (bool plus : {false, true}) {
        const Field u = build_oscillatory_family(alpha, l, epsilon,
                                                 plus ? FamilyCenter::plus_well : FamilyCenter::zero_well, n);
        const double e = model.value(u.values);
        if (e < best.energy) best = {alpha, l, m, plus, e};
      }
    }
  }
  return best;
}

BlowupTable blowup_probe(double k, const std::vector<double>& epsilon_values, const SolveOptions& opts,
                         double oscillation_floor) {
  if (!(k > kOscillationThreshold)) throw std::invalid_argument("blowup_probe: k must exceed 0.9481");
  if (epsilon_values.empty()) throw std::invalid_argument("blowup_probe: no epsilon values");
  for (std::size_t i = 0; i < epsilon_values.size(); ++i) {
    if (!(epsilon_values[i] > 0.0)) throw std::invalid_argument("blowup_probe: epsilon must be positive");
    if (i > 0 && !(epsilon_values[i] < epsilon_values[i - 1]))
      throw std::invalid_argument("blowup_probe: epsilon values must be strictly decreasing");
  }
  BlowupTable table;
  table.k = k;
  for (double eps : epsilon_values) {
    const int n = static_cast<int>(std::ceil(32.0 / eps)) + 1;
    const Grid g = make_grid(0.0, 1.0, n);
    const BoundarySpec bc = BoundarySpec::free();
    std::vector<Field> starts;
    for (double lambda : {4.0, 5.0, 6.0, 7.0, 8.0, 10.0})
      starts.push_back(sample_function(g, [&](double x) { return 1.3 * std::sin(2.0 * kPi * x / (lambda * eps)); }));
    const auto model = EnergyModel::second_order(g, bc, {eps, k, Potential::standard_quartic()});
    const SolveReport rep = best_of(starts, model, opts);
    table.rows.push_back({eps, n, rep.energy, count_oscillations(rep.minimizer, oscillation_floor), rep.converged});
  }
  table.strictly_decreasing = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (!(table.rows[i].energy < table.rows[i - 1].energy)) table.strictly_decreasing = false;
  table.witness = tuned_oscillatory_witness(k, epsilon_values.back());
  return table;
}

} // namespace cmphase
