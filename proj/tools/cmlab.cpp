// cmlab: experiment driver for the second-order phase-transition energy.
//
//   cmlab <subcommand> [--config FILE] [--seed N] [--out PATH] [--format FMT]
//
// Exit status: 0 success, 2 a verification check failed, 1 any error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmphase/config.hpp>
#include <cmphase/energy.hpp>
#include <cmphase/inequalities.hpp>
#include <cmphase/lab.hpp>
#include <cmphase/profile.hpp>
#include <cmphase/report.hpp>

using namespace cmphase;
using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = "-";
  std::string format;
};

void write_output(const std::string& path, const std::string& body) {
  if (path == "-") {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << body;
}

LabConfig load(const Common& c) {
  LabConfig cfg = c.config_path.empty() ? parse_config("") : load_config(c.config_path);
  if (c.seed_given) {
    cfg.experiment.seed = c.seed;
    cfg.experiment.solver.seed = c.seed;
  }
  if (!c.format.empty()) cfg.experiment.format = c.format;
  return cfg;
}

double first_or(const std::vector<double>& v, double fallback) { return v.empty() ? fallback : v.front(); }

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", r[i]);
      out += (i ? "," : "") + std::string(buf);
    }
    out += '\n';
  }
  return out;
}

int cmd_minimize(const Common& c) {
  LabConfig cfg = load(c);
  ExperimentConfig& ex = cfg.experiment;
  if (ex.k_values.empty()) ex.k_values = {0.0};
  if (ex.epsilon_values.empty()) ex.epsilon_values = {0.05};
  validate_config(ex);
  for (const auto& w : ex.warnings) std::cerr << "warning: " << w << '\n';
  const CellResult cell = run_sweep_cell(ex, 0, 0);
  if (ex.format == "csv") {
    write_output(c.out, field_to_csv(cell.minimizer));
  } else {
    json j = json::parse(records_to_json({cell.record})).at(0);
    j["minimizer"] = json::parse(field_to_json(cell.minimizer));
    write_output(c.out, j.dump(2));
  }
  return cell.record.converged ? 0 : 2;
}

int cmd_profile(const Common& c) {
  const LabConfig cfg = load(c);
  const double k = first_or(cfg.experiment.k_values, 0.0);
  ProfileControl control;
  control.potential = cfg.experiment.potential;
  const ProfileResult r = optimal_profile(k, cfg.profile_T, cfg.profile_n, cfg.experiment.solver, control);
  write_output(c.out, cfg.experiment.format == "csv" ? field_to_csv(r.profile) : profile_to_json(r));
  return r.truncation_delta < control.tolerance && r.refinement_delta < control.tolerance ? 0 : 2;
}

int cmd_k0(const Common& c) {
  LabConfig cfg = load(c);
  if (cfg.experiment.solver.multistart_count < 8) cfg.experiment.solver.multistart_count = 8;
  const RayleighEstimate e = estimate_k0_detailed(cfg.k0_n, cfg.experiment.solver);
  write_output(c.out, estimate_to_json(e));
  return e.converged && e.quotient > 0.0 ? 0 : 2;
}

int cmd_k1(const Common& c) {
  LabConfig cfg = load(c);
  if (cfg.experiment.solver.multistart_count < 8) cfg.experiment.solver.multistart_count = 8;
  const RayleighEstimate e = k1_search(cfg.k1_lengths, cfg.k1_n, cfg.experiment.solver);
  write_output(c.out, estimate_to_json(e));
  const bool bracketed = e.quotient >= lower_bound_k1() - 0.01 && e.quotient <= 0.6846 + 0.01;
  return e.converged && bracketed ? 0 : 2;
}

int cmd_bounds(const Common& c) {
  const QuadraticFamilyMinimum q = minimize_quadratic_family();
  const double lb = lower_bound_k1();
  json j;
  j["upper_bound"] = {{"value", q.value},
                      {"h", q.h},
                      {"L", q.L},
                      {"expression", "min over h, L of (I1 + I2) / I3, I1 = L (128 h^8 - 336 h^4 + 315) / 1260, "
                                     "I2 = 4 h^4 / L^3, I3 = 4 h^4 / (3 L)"}};
  j["lower_bound"] = {{"value", lb},
                      {"expression", "inf over L of max{2 / L^2, 1 / max(8, 2 (1 + 12 / L^2)^2)}"}};
  j["oscillation_threshold"] = 0.9481;
  write_output(c.out, j.dump(2));
  return std::abs(q.value - 0.6846) <= 5e-4 && std::abs(lb - 0.125) <= 1e-6 ? 0 : 2;
}

int cmd_sweep(const Common& c) {
  LabConfig cfg = load(c);
  validate_config(cfg.experiment);
  for (const auto& w : cfg.experiment.warnings) std::cerr << "warning: " << w << '\n';
  const auto records = run_sweep(cfg.experiment);
  const ReportFormat fmt = parse_report_format(cfg.experiment.format);
  if (c.out == "-") {
    write_output("-", fmt == ReportFormat::csv    ? records_to_csv(records)
                      : fmt == ReportFormat::json ? records_to_json(records)
                                                  : records_to_svg(records));
  } else {
    emit_report(records, fmt, c.out);
  }
  for (const auto& r : records)
    if (!r.converged) return 2;
  return 0;
}

int cmd_gamma(const Common& c) {
  const LabConfig cfg = load(c);
  const double k = first_or(cfg.experiment.k_values, 0.05);
  std::vector<double> eps = cfg.experiment.epsilon_values;
  if (eps.empty()) eps = {0.1, 0.05, 0.025};
  const GammaTable t = gamma_limit_table(k, eps, cfg.jumps, cfg.experiment.solver);
  std::vector<std::vector<double>> rows;
  bool ok = true;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    rows.push_back({r.epsilon, static_cast<double>(r.n), r.energy, r.target, r.abs_error,
                    static_cast<double>(r.transitions), r.converged ? 1.0 : 0.0});
    if (i > 0 && cfg.jumps == 1 && !(r.abs_error < t.rows[i - 1].abs_error)) ok = false;
    ok = ok && r.converged;
  }
  ok = ok && t.rows.back().abs_error <= 0.05 * t.rows.back().target;
  if (cfg.experiment.format == "json") {
    json j;
    j["k"] = t.k;
    j["jumps"] = t.jumps;
    j["m_k"] = t.m_k;
    for (const auto& r : t.rows)
      j["rows"].push_back({{"epsilon", r.epsilon}, {"n", r.n}, {"energy", r.energy}, {"target", r.target},
                           {"abs_error", r.abs_error}, {"transitions", r.transitions}, {"converged", r.converged}});
    write_output(c.out, j.dump(2));
  } else {
    write_output(c.out, table_csv({"epsilon", "n", "energy", "target", "abs_error", "transitions", "converged"}, rows));
  }
  return ok ? 0 : 2;
}

int cmd_blowup(const Common& c) {
  const LabConfig cfg = load(c);
  const double k = first_or(cfg.experiment.k_values, 1.2);
  std::vector<double> eps = cfg.experiment.epsilon_values;
  if (eps.empty()) eps = {0.1, 0.05, 0.025};
  const BlowupTable t = blowup_probe(k, eps, cfg.experiment.solver, cfg.experiment.oscillation_floor);
  if (cfg.experiment.format == "json") {
    json j;
    j["k"] = t.k;
    j["strictly_decreasing"] = t.strictly_decreasing;
    j["witness"] = {{"alpha", t.witness.alpha}, {"l", t.witness.l}, {"periods", t.witness.periods},
                    {"plus_well", t.witness.plus_well}, {"energy", t.witness.energy}};
    for (const auto& r : t.rows)
      j["rows"].push_back({{"epsilon", r.epsilon}, {"n", r.n}, {"energy", r.energy},
                           {"oscillations", r.oscillations}, {"converged", r.converged}});
    write_output(c.out, j.dump(2));
  } else {
    std::vector<std::vector<double>> rows;
    for (const auto& r : t.rows)
      rows.push_back({r.epsilon, static_cast<double>(r.n), r.energy, static_cast<double>(r.oscillations),
                      r.converged ? 1.0 : 0.0});
    write_output(c.out, table_csv({"epsilon", "n", "energy", "oscillations", "converged"}, rows));
  }
  return t.strictly_decreasing && t.rows.back().energy < 0.0 && t.witness.energy < 0.0 ? 0 : 2;
}

// Randomized inequality suites on smooth fields; reports the worst slack of each.
int cmd_verify(const Common& c) {
  const LabConfig cfg = load(c);
  const int trials = 100;
  const Grid g = make_grid(0.0, 1.0, 2001);
  std::mt19937_64 rng(cfg.experiment.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const BoundarySpec jensen_bc{EndCondition::make_free(), EndCondition::make_slope(0.0), {}};
  double jensen = INFINITY, interp = INFINITY, boundary = INFINITY, residual = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto noise = smooth_noise(g, 2 + t % 12, rng());
    Field u{g, noise};
    for (double& v : u.values) v = 1.5 * v + 0.5 * unit(rng);
    Field f{g, noise};
    for (double& v : f.values) v *= 2.0;
    // Cosine modes about x = 1 give u'(1) = 0 for the Jensen suite.
    double amp[4];
    for (double& a : amp) a = unit(rng);
    const Field flat = sample_function(g, [&](double x) {
      double v = amp[0] * (1.0 - x) * (1.0 - x);
      for (int j = 1; j < 4; ++j) v += amp[j] * std::cos(std::acos(-1.0) * j * (1.0 - x));
      return v;
    });
    jensen = std::min(jensen, check_jensen(flat, jensen_bc));
    for (double cc : {0.1, 1.0, 10.0}) interp = std::min(interp, check_linear_interpolation(f, cc));
    const double eps = 0.01 + 0.1 * std::abs(unit(rng));
    for (int sign : {1, -1}) {
      const auto b = check_boundary_identity(f, std::sqrt(2.0) * eps, sign);
      boundary = std::min(boundary, b.integrated_slack);
      residual = std::max(residual, b.max_residual);
    }
  }
  json j;
  j["trials"] = trials;
  j["jensen_min_slack"] = jensen;
  j["linear_interpolation_min_slack"] = interp;
  j["boundary_inequality_min_slack"] = boundary;
  j["identity_max_residual"] = residual;
  const bool ok = jensen >= -1e-6 && interp >= -1e-6 && boundary >= -1e-6 && residual <= 1e-12;
  j["pass"] = ok;
  write_output(c.out, j.dump(2));
  return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmlab: minimizers, optimal profiles and interpolation constants for the second-order "
               "phase-transition energy"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "random seed (overrides the config)")
        ->each([&](const std::string&) { common.seed_given = true; });
    sub->add_option("--out", common.out, "output path, '-' for stdout");
    sub->add_option("--format", common.format, "csv, json or svg");
  };
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const Common&);
  };
  const Entry entries[] = {
      {"minimize", "minimize F_eps^k for the first (k, eps) of the config", cmd_minimize},
      {"profile", "optimal transition profile and m_k", cmd_profile},
      {"k0", "estimate the interpolation constant k0", cmd_k0},
      {"k1", "estimate k1 over a list of half-lengths", cmd_k1},
      {"bounds", "closed-form bounds on k1", cmd_bounds},
      {"sweep", "(k, eps) sweep with classification", cmd_sweep},
      {"gamma", "energy against jumps * m_k as eps decreases", cmd_gamma},
      {"blowup", "oscillating minimizers for large k", cmd_blowup},
      {"verify", "randomized interpolation-inequality suites", cmd_verify},
  };
  std::vector<std::pair<CLI::App*, int (*)(const Common&)>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    subs.emplace_back(sub, e.run);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    for (const auto& [sub, run] : subs)
      if (sub->parsed()) return run(common);
  } catch (const std::exception& e) {
    std::cerr << "cmlab: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
