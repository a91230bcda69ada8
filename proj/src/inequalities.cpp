#include <cmphase/inequalities.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include <cmphase/energy.hpp>

namespace cmphase {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kPi = std::acos(-1.0);

double denominator_floor(double numerator) { return 1e-14 * std::max(1.0, numerator); }

// (a_W int W + a_C int (u'')^2) / int (u')^2 with the exact quotient gradient.
struct QuotientProblem {
  EnergyModel num;
  EnergyModel den;

  QuotientProblem(const Grid& g, const BoundarySpec& bc, const Potential& pot, double w_potential, double w_curvature)
      : num(g, bc, pot, {w_potential, 0.0, w_curvature}), den(g, bc, pot, {0.0, 1.0, 0.0}) {}

  double evaluate(std::span<const double> u, std::span<double> grad) const {
    std::vector<double> gd(u.size());
    const double n = num.value_and_gradient(u, grad);
    const double d = den.value_and_gradient(u, gd);
    if (!(d > denominator_floor(n))) {
      std::fill(grad.begin(), grad.end(), 0.0);
      return kInf;
    }
    const double r = n / d;
    for (std::size_t i = 0; i < u.size(); ++i) grad[i] = (grad[i] - r * gd[i]) / d;
    return r;
  }

  Objective objective(const Field& initial, bool nonnegative) const {
    auto self = std::make_shared<const QuotientProblem>(*this);
    const double d0 = std::max(den.value(initial.values), 1e-12);
    auto pre = std::make_shared<const BandedSpd>(
        convex_hessian(num.grid(), num.boundary(), 2.0 * std::max(num.integrand().potential, 1e-3), 0.0,
                       std::max(num.integrand().curvature, 1e-3)));
    Objective obj;
    obj.evaluate = [self](std::span<const double> u, std::span<double> g) { return self->evaluate(u, g); };
    obj.precondition = [pre, d0](std::span<double> v) {
      pre->solve_in_place(v);
      for (double& x : v) x *= d0;
    };
    if (nonnegative)
      obj.project = [](std::span<double> u) {
        for (double& x : u) x = std::max(x, 0.0);
      };
    return obj;
  }
};

RayleighEstimate best_of_starts(const QuotientProblem& prob, const std::vector<Field>& starts, const BoundarySpec& bc,
                                bool nonnegative, const SolveOptions& opts, double L) {
  SolveOptions single = opts;
  single.multistart_count = 1;
  RayleighEstimate best;
  best.L = L;
  best.quotient = kInf;
  best.n = starts.front().grid.n;
  for (const Field& s : starts) {
    const Objective obj = prob.objective(s, nonnegative);
    std::vector<double> scratch(s.values.size());
    if (!std::isfinite(prob.evaluate(s.values, scratch))) continue;
    SolveReport rep = minimize_energy(s, obj, bc, single);
    if (!(rep.energy < best.quotient)) continue;
    best.quotient = rep.energy;
    best.denominator = prob.den.value(rep.minimizer.values);
    best.converged = rep.converged;
    best.minimizer = std::move(rep.minimizer);
  }
  if (!std::isfinite(best.quotient)) throw std::runtime_error("degenerate");
  return best;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, int iterations, double* fmin) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double x = fc < fd ? c : d;
  if (fmin) *fmin = std::min(fc, fd);
  return x;
}

} // namespace

double rayleigh_quotient(const Field& u, const Potential& pot, const BoundarySpec& bc) {
  const auto in = EnergyModel(u.grid, bc, pot, {}).integrals(u.values);
  const double num = in.potential + in.curvature;
  if (!(in.gradient > denominator_floor(num))) return kInf;
  return num / in.gradient;
}

RayleighEstimate estimate_k1(double L, int n, const SolveOptions& opts) {
  if (!(L > 0.0)) throw std::invalid_argument("estimate_k1: L must be positive");
  if (n < 51) throw std::invalid_argument("estimate_k1: n must be at least 51");
  validate(opts);
  const Grid g = make_grid(0.0, L, n);
  const BoundarySpec bc{EndCondition::make_value(0.0), EndCondition::make_slope(0.0), {}};
  const QuotientProblem prob(g, bc, Potential::standard_quartic(), 1.0, 1.0);

  const double h2 = std::pow(1.1191, 2);
  auto quadratic = [&](double x) { return h2 * (1.0 - (x - L) * (x - L) / (L * L)); };
  std::vector<Field> starts;
  starts.push_back(sample_function(g, quadratic));
  starts.push_back(sample_function(g, [&](double x) { return h2 * std::sin(kPi * x / (2.0 * L)); }));
  starts.push_back(sample_function(g, [&](double x) { return 1.1 * std::tanh(1.5 * x); }));
  // The optimal quadratic member at its own length, held constant beyond it.
  const double Lq = std::min(L, 2.9606);
  starts.push_back(sample_function(g, [&](double x) {
    const double t = std::min(x, Lq);
    return h2 * (1.0 - (t - Lq) * (t - Lq) / (Lq * Lq));
  }));
  for (int s = static_cast<int>(starts.size()); s < opts.multistart_count; ++s) {
    Field f = starts.front();
    const auto noise = smooth_noise(g, 2 + s, opts.seed * 1000003ULL + static_cast<std::uint64_t>(s));
    for (int i = 0; i < n; ++i) f[i] = std::max(0.0, f[i] + 0.3 * h2 * noise[static_cast<std::size_t>(i)]);
    starts.push_back(std::move(f));
  }
  starts.resize(std::min<std::size_t>(starts.size(), static_cast<std::size_t>(std::max(opts.multistart_count, 1))));
  for (Field& f : starts) apply_constraints(f, bc);
  return best_of_starts(prob, starts, bc, true, opts, L);
}

const std::vector<double>& default_k1_lengths() {
  static const std::vector<double> lengths{0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  return lengths;
}

RayleighEstimate k1_search(const std::vector<double>& L_values, int n, const SolveOptions& opts, bool refine) {
  if (L_values.empty()) throw std::invalid_argument("k1_search: empty length list");
  std::vector<double> lengths = L_values;
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());

  RayleighEstimate best;
  bool have = false;
  auto consider = [&](RayleighEstimate e) {
    if (!have || e.quotient < best.quotient || (e.quotient == best.quotient && e.L < best.L)) {
      best = std::move(e);
      have = true;
    }
  };
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double before = have ? best.quotient : kInf;
    consider(estimate_k1(lengths[i], n, opts));
    if (best.quotient < before) best_index = i;
  }
  if (!refine || lengths.size() < 2) return best;

  // The per-length infimum is not monotone in L, so search between the
  // neighbours of the best grid point.
  const double lo = std::log(lengths[best_index == 0 ? 0 : best_index - 1]);
  const double hi = std::log(lengths[std::min(best_index + 1, lengths.size() - 1)]);
  const int iterations = static_cast<int>(std::ceil(std::log(0.005 / (hi - lo)) / std::log(0.618)));
  golden_section(
      [&](double x) {
        RayleighEstimate e = estimate_k1(std::exp(x), n, opts);
        const double q = e.quotient;
        consider(std::move(e));
        return q;
      },
      lo, hi, std::max(iterations, 1), nullptr);
  return best;
}

double quadratic_family_quotient(double h, double L) {
  if (!(h > 0.0) || !(L > 0.0)) throw std::invalid_argument("quadratic_family_quotient: h and L must be positive");
  const double h4 = std::pow(h, 4);
  const double i1 = L * (128.0 * h4 * h4 - 336.0 * h4 + 315.0) / 1260.0;
  const double i2 = 4.0 * h4 / (L * L * L);
  const double i3 = 4.0 * h4 / (3.0 * L);
  return (i1 + i2) / i3;
}

std::pair<double, double> quadratic_family_gradient(double h, double L) {
  const double h3 = h * h * h, h4 = h3 * h;
  const double L3 = L * L * L;
  const double num = L * (128.0 * h4 * h4 - 336.0 * h4 + 315.0) / 1260.0 + 4.0 * h4 / L3;
  const double den = 4.0 * h4 / (3.0 * L);
  const double num_h = L * (1024.0 * h4 * h3 - 1344.0 * h3) / 1260.0 + 16.0 * h3 / L3;
  const double num_L = (128.0 * h4 * h4 - 336.0 * h4 + 315.0) / 1260.0 - 12.0 * h4 / (L3 * L);
  const double den_h = 16.0 * h3 / (3.0 * L);
  const double den_L = -4.0 * h4 / (3.0 * L * L);
  return {(num_h * den - num * den_h) / (den * den), (num_L * den - num * den_L) / (den * den)};
}

QuadraticFamilyMinimum minimize_quadratic_family() {
  // Coarse scan on (log h, log L), then nested golden sections around the best cell.
  const double lh0 = std::log(0.2), lh1 = std::log(5.0);
  const double lL0 = std::log(0.05), lL1 = std::log(50.0);
  const int m = 61;
  double best = kInf, best_lh = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double lh = lh0 + (lh1 - lh0) * i / (m - 1);
      const double lL = lL0 + (lL1 - lL0) * j / (m - 1);
      const double q = quadratic_family_quotient(std::exp(lh), std::exp(lL));
      if (q < best) {
        best = q;
        best_lh = lh;
      }
    }
  const double step = (lh1 - lh0) / (m - 1);
  // For fixed h the quotient is a L^2 + 3 / L^2 shaped, hence unimodal in L.
  auto inner = [&](double lh, double* lL_out) {
    double f = 0.0;
    const double lL = golden_section([&](double x) { return quadratic_family_quotient(std::exp(lh), std::exp(x)); },
                                     lL0, lL1, 200, &f);
    if (lL_out) *lL_out = lL;
    return f;
  };
  double value = 0.0;
  const double lh = golden_section([&](double x) { return inner(x, nullptr); }, best_lh - step, best_lh + step, 200,
                                   &value);
  double lL = 0.0;
  value = inner(lh, &lL);
  QuadraticFamilyMinimum out;
  out.h = std::exp(lh);
  out.L = std::exp(lL);
  out.value = value;
  std::tie(out.d_dh, out.d_dL) = quadratic_family_gradient(out.h, out.L);
  return out;
}

double lower_bound_k1_at(double L) {
  if (!(L > 0.0)) throw std::invalid_argument("lower_bound_k1_at: L must be positive");
  const double first = 2.0 / (L * L);
  const double t = 1.0 + 12.0 / (L * L);
  const double second = 1.0 / std::max(8.0, 2.0 * t * t);
  return std::max(first, second);
}

double lower_bound_k1() {
  const double l0 = std::log(1e-2), l1 = std::log(1e3);
  const int m = 2001;
  double best = kInf;
  int best_i = 0;
  for (int i = 0; i < m; ++i) {
    const double v = lower_bound_k1_at(std::exp(l0 + (l1 - l0) * i / (m - 1)));
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double step = (l1 - l0) / (m - 1);
  const double lo = l0 + step * std::max(best_i - 1, 0), hi = l0 + step * std::min(best_i + 1, m - 1);
  double refined = kInf;
  golden_section([](double x) { return lower_bound_k1_at(std::exp(x)); }, lo, hi, 200, &refined);
  return std::min(best, refined);
}

Field build_oscillatory_family(double alpha, double l, double epsilon, FamilyCenter center, int n) {
  if (!(alpha > 0.0) || !(l > 0.0) || !(epsilon > 0.0))
    throw std::invalid_argument("build_oscillatory_family: alpha, l, epsilon must be positive");
  const double periods = 1.0 / (6.0 * l * epsilon);
  const double rounded = std::round(periods);
  if (rounded < 1.0 || std::abs(periods - rounded) > 1e-9 * periods)
    throw std::invalid_argument("build_oscillatory_family: 1/(6 l eps) must be a positive integer");
  const double seg = l * epsilon; // one sixth of a period
  const double slope = alpha / epsilon;
  const double curv = alpha / (l * epsilon * epsilon); // half of |u''| on the caps
  const double peak = alpha * l;
  const double shift = center == FamilyCenter::plus_well ? 1.0 : 0.0;
  const Grid g = make_grid(0.0, 1.0, n);
  return sample_function(g, [=](double x) {
    double t = std::fmod(x, 6.0 * seg);
    if (t < 0.0) t += 6.0 * seg;
    double u;
    if (t < seg) {
      u = slope * t;
    } else if (t < 2.0 * seg) {
      const double s = t - seg;
      u = peak + slope * s - curv * s * s;
    } else if (t < 4.0 * seg) {
      u = peak - slope * (t - 2.0 * seg);
    } else if (t < 5.0 * seg) {
      const double s = t - 4.0 * seg;
      u = -peak - slope * s + curv * s * s;
    } else {
      u = -peak + slope * (t - 5.0 * seg);
    }
    return shift + u;
  });
}

double counterexample_ratio(const Field& u, double epsilon, const Potential& pot) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("counterexample_ratio: epsilon must be positive");
  const auto in = EnergyModel(u.grid, BoundarySpec::free(), pot, {}).integrals(u.values);
  const double den = epsilon * in.gradient;
  if (!(den > 0.0)) throw std::domain_error("counterexample_ratio: zero denominator");
  return (epsilon * epsilon * epsilon * in.curvature + in.potential / epsilon) / den;
}

double check_jensen(const Field& u, const BoundarySpec& bc) {
  const auto in = EnergyModel(u.grid, bc, Potential::standard_quartic(), {}).integrals(u.values);
  const double L = u.grid.length();
  return 0.5 * L * L * in.curvature - in.gradient;
}

double check_linear_interpolation(const Field& u, double c, const BoundarySpec& bc) {
  if (!(c > 0.0)) throw std::invalid_argument("check_linear_interpolation: c must be positive");
  const auto in = EnergyModel(u.grid, bc, Potential::standard_quartic(), {}).integrals(u.values);
  std::vector<double> sq(u.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = u.values[i] * u.values[i];
  const double len = u.grid.length();
  const double kc = 1.0 / c + 12.0 / (len * len);
  return c * std::sqrt(in.curvature) + kc * std::sqrt(integrate(u.grid, sq)) - std::sqrt(in.gradient);
}

double boundary_identity_residual(double p, double q, double r, double c, int sign) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  const double a = c * c * r + c * q + p + s;
  const double lhs = c * c * q * q + a * a;
  const double b = c * q + p + s;
  const double rhs = c * c * c * c * r * r + (p + s) * (p + s) + 2.0 * c * b * (c * r + q);
  return std::abs(lhs - rhs);
}

BoundaryIdentityCheck check_boundary_identity(const Field& u, double c, int sign, const BoundarySpec& bc) {
  if (!(c > 0.0)) throw std::invalid_argument("check_boundary_identity: c must be positive");
  const Field d1 = derivative1(u, bc);
  const Field d2 = derivative2(u, bc);
  const double s = sign >= 0 ? 1.0 : -1.0;
  BoundaryIdentityCheck out;
  std::vector<double> shifted(u.values.size());
  for (int i = 0; i < u.size(); ++i) {
    out.max_residual = std::max(out.max_residual, boundary_identity_residual(u[i], d1[i], d2[i], c, sign));
    shifted[static_cast<std::size_t>(i)] = (u[i] + s) * (u[i] + s);
  }
  const auto in = EnergyModel(u.grid, bc, Potential::standard_quartic(), {}).integrals(u.values);
  const int last = u.size() - 1;
  const double right = c * d1[last] + u[last] + s;
  const double left = c * d1[0] + u[0] + s;
  out.integrated_slack = c * c * c * in.curvature + integrate(u.grid, shifted) / c - c * in.gradient +
                         right * right - left * left;
  return out;
}

double gn_quotient(const Field& u) {
  const Field d1 = derivative1(u, BoundarySpec::free());
  const Field d2 = derivative2(u, BoundarySpec::free());
  std::vector<double> a(u.values.size()), b(u.values.size()), c(u.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::pow(std::abs(d1.values[i]), 4.0 / 3.0);
    b[i] = std::abs(u.values[i]);
    c[i] = d2.values[i] * d2.values[i];
  }
  const double l1 = integrate(u.grid, b);
  if (!(l1 > 0.0)) throw std::domain_error("gn_quotient: zero L1 norm");
  const double top = std::pow(integrate(u.grid, a), 0.75);
  return top / (std::sqrt(l1) * std::pow(integrate(u.grid, c), 0.25) + l1);
}

double interpolation_slack(const Field& u, double k0, const Potential& pot) {
  const auto in = EnergyModel(u.grid, BoundarySpec::free(), pot, {}).integrals(u.values);
  const double len = u.grid.length();
  return in.potential / (len * len) + len * len * in.curvature - k0 * in.gradient;
}

RayleighEstimate estimate_k0_detailed(int n, const SolveOptions& opts) {
  if (n < 101) throw std::invalid_argument("estimate_k0: n must be at least 101");
  validate(opts);
  const Grid g = make_grid(0.0, 1.0, n);
  const BoundarySpec bc = BoundarySpec::free();
  const QuotientProblem prob(g, bc, Potential::standard_quartic(), 1.0, 1.0);
  std::vector<Field> starts;
  for (double m : {2.0, 3.0, 4.0}) starts.push_back(sample_function(g, [m](double x) { return m * (x - 0.5); }));
  starts.push_back(sample_function(g, [](double x) { return 1.2 * std::tanh(4.0 * (x - 0.5)); }));
  for (int s = 0; s < opts.multistart_count; ++s) {
    Field f = starts[1];
    const auto noise = smooth_noise(g, 2 + s, opts.seed * 1000003ULL + static_cast<std::uint64_t>(s));
    for (int i = 0; i < n; ++i) f[i] += 0.5 * noise[static_cast<std::size_t>(i)];
    starts.push_back(std::move(f));
  }
  return best_of_starts(prob, starts, bc, false, opts, 1.0);
}

double estimate_k0(int n, const SolveOptions& opts) { return estimate_k0_detailed(n, opts).quotient; }

std::string estimate_to_json(const RayleighEstimate& e) {
  nlohmann::json j;
  j["L"] = e.L;
  j["quotient"] = e.quotient;
  j["converged"] = e.converged;
  j["n"] = e.n;
  return j.dump();
}

} // namespace cmphase
