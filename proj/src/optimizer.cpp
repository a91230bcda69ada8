#include <cmphase/optimizer.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace cmphase {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho = 0.0;
};

class Lbfgs {
public:
  Lbfgs(const Objective& obj, const std::vector<bool>& fixed, const SolveOptions& opts, const TraceSink& trace)
      : obj_(obj), fixed_(fixed), opts_(opts), trace_(trace) {}

  SolveReport run(const Field& initial) {
    SolveReport rep;
    const std::size_t n = initial.values.size();
    std::vector<double> x = initial.values;
    if (obj_.project) project(x);
    std::vector<double> g(n), d(n), xt(n), gt(n);
    double f = eval(x, g);
    if (!std::isfinite(f)) throw std::domain_error("minimize_energy: non-finite energy at the initial field");

    std::deque<Pair> mem;
    int it = 0;
    int flat_steps = 0;
    double gnorm = rel_norm(g, f);
    if (trace_) trace_(0, f, gnorm);
    rep.message = "max iterations reached";
    for (; it < opts_.max_iterations; ++it) {
      if (small(g, f, gnorm)) {
        rep.converged = true;
        rep.message = "gradient tolerance reached";
        break;
      }
      direction(g, mem, d);
      double slope = dot(g, d);
      if (!(slope < 0.0)) {
        mem.clear();
        direction(g, mem, d);
        slope = dot(g, d);
        if (!(slope < 0.0)) {
          rep.message = "no descent direction";
          break;
        }
      }

      bool accepted = false;
      double ft = f;
      for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
        double alpha = 1.0;
        if (mem.empty() && !obj_.precondition) alpha = std::min(1.0, 1.0 / std::max(norm2(d), 1e-300));
        for (int k = 0; k < 60; ++k) {
          for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + alpha * d[i];
          if (obj_.project) project(xt);
          ft = eval(xt, gt);
          double decrease = 0.0;
          for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (xt[i] - x[i]);
          if (std::isfinite(ft) && ft <= f + 1e-4 * decrease && ft <= f) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted && !mem.empty()) {
          // Stale curvature pairs: retry along the (preconditioned) gradient.
          mem.clear();
          direction(g, mem, d);
        } else {
          break;
        }
      }
      if (!accepted) {
        rep.message = "line search failure";
        break;
      }

      Pair p;
      p.s.resize(n);
      p.y.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        p.s[i] = xt[i] - x[i];
        p.y[i] = gt[i] - g[i];
      }
      const double sy = dot(p.s, p.y);
      if (sy > 1e-14 * norm2(p.s) * norm2(p.y)) {
        p.rho = 1.0 / sy;
        mem.push_back(std::move(p));
        if (static_cast<int>(mem.size()) > opts_.memory) mem.pop_front();
      }
      x.swap(xt);
      g.swap(gt);
      flat_steps = ft < f ? 0 : flat_steps + 1;
      f = ft;
      gnorm = rel_norm(g, f);
      if (trace_) trace_(it + 1, f, gnorm);
      if (flat_steps >= 5) {
        // Accepted steps no longer change the energy: roundoff floor. Accept
        // if the predicted remaining decrease is at the level of roundoff.
        ++it;
        rep.message = "stalled at roundoff floor";
        if (rel_decrement(g, f) <= std::sqrt(opts_.gradient_tolerance)) {
          rep.converged = true;
        }
        break;
      }
    }
    if (!rep.converged && small(g, f, gnorm)) {
      rep.converged = true;
      rep.message = "gradient tolerance reached";
    }
    rep.minimizer = Field{initial.grid, std::move(x)};
    rep.energy = f;
    rep.iterations = it;
    rep.final_gradient_norm = gnorm;
    return rep;
  }

private:
  double eval(std::span<const double> x, std::span<double> g) const {
    const double f = obj_.evaluate(x, g);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (fixed_[i]) g[i] = 0.0;
    return f;
  }

  void project(std::span<double> x) const {
    // Constrained values must survive the projection unchanged.
    std::vector<double> keep;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (fixed_[i]) keep.push_back(x[i]);
    obj_.project(x);
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (fixed_[i]) x[i] = keep[k++];
  }

  static double rel_norm(std::span<const double> g, double f) { return norm2(g) / std::max(1.0, std::abs(f)); }

  // sqrt(g' P^-1 g) / max(1, |f|): the gradient in the dual norm of the
  // preconditioner, which stays meaningful where roundoff pins the l2 norm.
  double rel_decrement(std::span<const double> g, double f) const {
    if (!obj_.precondition) return std::numeric_limits<double>::infinity();
    std::vector<double> v(g.begin(), g.end());
    apply_h0(v);
    return std::sqrt(std::max(dot(g, v), 0.0)) / std::max(1.0, std::abs(f));
  }

  bool small(std::span<const double> g, double f, double gnorm) const {
    return gnorm <= opts_.gradient_tolerance || rel_decrement(g, f) <= opts_.gradient_tolerance;
  }

  void apply_h0(std::span<double> v) const {
    if (obj_.precondition) {
      obj_.precondition(v);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (fixed_[i]) v[i] = 0.0;
    }
  }

  void direction(std::span<const double> g, const std::deque<Pair>& mem, std::span<double> d) const {
    std::copy(g.begin(), g.end(), d.begin());
    std::vector<double> alpha(mem.size());
    for (std::size_t j = mem.size(); j-- > 0;) {
      alpha[j] = mem[j].rho * dot(mem[j].s, d);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= alpha[j] * mem[j].y[i];
    }
    apply_h0(d);
    if (!mem.empty()) {
      // Scale H0 by s'y / y'H0 y from the newest pair.
      const Pair& last = mem.back();
      std::vector<double> hy = last.y;
      apply_h0(hy);
      const double yhy = dot(last.y, hy);
      if (yhy > 0.0) {
        const double gamma = 1.0 / (last.rho * yhy);
        for (double& v : d) v *= gamma;
      }
    }
    for (std::size_t j = 0; j < mem.size(); ++j) {
      const double beta = mem[j].rho * dot(mem[j].y, d);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += (alpha[j] - beta) * mem[j].s[i];
    }
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = fixed_[i] ? 0.0 : -d[i];
  }

  const Objective& obj_;
  const std::vector<bool>& fixed_;
  const SolveOptions& opts_;
  const TraceSink& trace_;
};

} // namespace

void validate(const SolveOptions& opts) {
  if (opts.max_iterations < 1) throw std::invalid_argument("SolveOptions: max_iterations must be >= 1");
  if (!(opts.gradient_tolerance > 0.0)) throw std::invalid_argument("SolveOptions: gradient_tolerance must be > 0");
  if (opts.memory < 1) throw std::invalid_argument("SolveOptions: memory must be >= 1");
  if (opts.multistart_count < 1) throw std::invalid_argument("SolveOptions: multistart_count must be >= 1");
}

std::vector<double> smooth_noise(const Grid& g, int modes, std::uint64_t seed) {
  modes = std::max(modes, 1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> amp(static_cast<std::size_t>(modes)), phase(static_cast<std::size_t>(modes));
  for (int j = 0; j < modes; ++j) {
    amp[static_cast<std::size_t>(j)] = dist(rng);
    phase[static_cast<std::size_t>(j)] = std::acos(-1.0) * dist(rng);
  }
  std::vector<double> out(static_cast<std::size_t>(g.n), 0.0);
  double peak = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double t = static_cast<double>(i) / (g.n - 1);
    double v = 0.0;
    for (int j = 0; j < modes; ++j)
      v += amp[static_cast<std::size_t>(j)] * std::sin(std::acos(-1.0) * (j + 1) * t + phase[static_cast<std::size_t>(j)]);
    out[static_cast<std::size_t>(i)] = v;
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 0.0)
    for (double& v : out) v /= peak;
  return out;
}

SolveReport minimize_energy(const Field& initial, const Objective& objective, const BoundarySpec& bc,
                            const SolveOptions& opts) {
  return minimize_energy(initial, objective, bc, opts, TraceSink{});
}

SolveReport minimize_energy(const Field& initial, const Objective& objective, const BoundarySpec& bc,
                            const SolveOptions& opts, const TraceSink& trace) {
  validate(opts);
  if (static_cast<int>(initial.values.size()) != initial.grid.n)
    throw std::invalid_argument("minimize_energy: field size does not match its grid");
  for (double v : initial.values)
    if (!std::isfinite(v)) throw std::domain_error("minimize_energy: non-finite initial value");
  const std::vector<bool> fixed = constrained_nodes(initial.grid, bc);

  Lbfgs solver(objective, fixed, opts, trace);
  SolveReport best = solver.run(initial);
  for (int start = 1; start < opts.multistart_count; ++start) {
    Field trial = initial;
    // The mode count varies across starts so that several length scales are tried.
    const int modes = 2 + 3 * start;
    const auto noise = smooth_noise(initial.grid, modes, opts.seed * 1000003ULL + static_cast<std::uint64_t>(start));
    for (std::size_t i = 0; i < noise.size(); ++i)
      if (!fixed[i]) trial.values[i] += opts.restart_amplitude * noise[i];
    SolveReport rep = solver.run(trial);
    if (rep.energy < best.energy) {
      rep.best_start = start;
      best = std::move(rep);
    }
  }
  best.restarts_used = opts.multistart_count - 1;
  return best;
}

double gradient_fd_check(const Objective& objective, const Field& u, const BoundarySpec& bc, double step) {
  const std::vector<bool> fixed = constrained_nodes(u.grid, bc);
  std::vector<double> x = u.values;
  std::vector<double> g(x.size()), scratch(x.size());
  objective.evaluate(x, g);
  std::vector<double> fd(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (fixed[i]) continue;
    const double xi = x[i];
    x[i] = xi + step;
    const double fp = objective.evaluate(x, scratch);
    x[i] = xi - step;
    const double fm = objective.evaluate(x, scratch);
    x[i] = xi;
    fd[i] = (fp - fm) / (2.0 * step);
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!fixed[i]) scale = std::max(scale, std::abs(fd[i]));
  scale = std::max(scale, 1e-300);
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!fixed[i]) err = std::max(err, std::abs(g[i] - fd[i]) / scale);
  return err;
}

std::string report_to_json(const SolveReport& r) {
  nlohmann::json j;
  j["energy"] = r.energy;
  j["iterations"] = r.iterations;
  j["final_gradient_norm"] = r.final_gradient_norm;
  j["converged"] = r.converged;
  j["restarts_used"] = r.restarts_used;
  j["message"] = r.message;
  j["minimizer"] = {{"a", r.minimizer.grid.a}, {"b", r.minimizer.grid.b}, {"n", r.minimizer.grid.n},
                    {"values", r.minimizer.values}};
  return j.dump();
}

} // namespace cmphase
