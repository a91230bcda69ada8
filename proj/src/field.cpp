#include <cmphase/field.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cmphase {

Grid make_grid(double a, double b, int n) {
  if (n < 3) throw std::invalid_argument("grid needs at least 3 nodes");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("grid needs finite endpoints with a < b");
  return Grid{a, b, n};
}

Field sample_function(const Grid& g, const std::function<double(double)>& f) {
  Field out{g, std::vector<double>(static_cast<std::size_t>(g.n))};
  for (int i = 0; i < g.n; ++i) {
    const double v = f(g.x(i));
    if (!std::isfinite(v)) throw std::domain_error("sample_function: non-finite sample");
    out[i] = v;
  }
  return out;
}

Field constant_field(const Grid& g, double value) {
  return Field{g, std::vector<double>(static_cast<std::size_t>(g.n), value)};
}

BoundarySpec BoundarySpec::dirichlet(double left, double right) {
  return {EndCondition::make_value(left), EndCondition::make_value(right), {}};
}

BoundarySpec BoundarySpec::clamped(double left, double left_slope, double right, double right_slope) {
  return {EndCondition::make_clamped(left, left_slope), EndCondition::make_clamped(right, right_slope), {}};
}

std::vector<bool> constrained_nodes(const Grid& g, const BoundarySpec& bc) {
  std::vector<bool> mask(static_cast<std::size_t>(g.n), false);
  if (bc.left.fixes_value()) mask.front() = true;
  if (bc.right.fixes_value()) mask.back() = true;
  for (const auto& p : bc.pinned) {
    if (p.index < 0 || p.index >= g.n) throw std::out_of_range("pinned node outside the grid");
    mask[static_cast<std::size_t>(p.index)] = true;
  }
  return mask;
}

void apply_constraints(Field& u, const BoundarySpec& bc) {
  if (bc.left.fixes_value()) u.values.front() = bc.left.value;
  if (bc.right.fixes_value()) u.values.back() = bc.right.value;
  for (const auto& p : bc.pinned) u[p.index] = p.value;
}

void DifferenceOperator::apply(std::span<const double> u, std::span<double> out) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& r = rows_[i];
    double acc = r.offset;
    for (int j = 0; j < r.count; ++j) acc += r.coef[j] * u[static_cast<std::size_t>(r.index[j])];
    out[i] = acc;
  }
}

void DifferenceOperator::add_transpose(std::span<const double> r, std::span<double> out) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& row = rows_[i];
    for (int j = 0; j < row.count; ++j) out[static_cast<std::size_t>(row.index[j])] += row.coef[j] * r[i];
  }
}

namespace {

using Row = DifferenceOperator::Row;

Row make_row(std::initializer_list<std::pair<int, double>> entries, double offset = 0.0) {
  Row r;
  for (const auto& [idx, c] : entries) {
    r.index[static_cast<std::size_t>(r.count)] = idx;
    r.coef[static_cast<std::size_t>(r.count)] = c;
    ++r.count;
  }
  r.offset = offset;
  return r;
}

} // namespace

DifferenceOperator first_derivative_operator(const Grid& g, const BoundarySpec& bc) {
  const int n = g.n;
  const double h = g.h();
  const double c = 1.0 / (2.0 * h);
  std::vector<Row> rows(static_cast<std::size_t>(n));
  for (int i = 1; i + 1 < n; ++i) rows[static_cast<std::size_t>(i)] = make_row({{i - 1, -c}, {i + 1, c}});

  rows.front() = bc.left.fixes_slope() ? make_row({}, bc.left.slope)
                                       : make_row({{0, -3.0 * c}, {1, 4.0 * c}, {2, -c}});
  rows.back() = bc.right.fixes_slope() ? make_row({}, bc.right.slope)
                                       : make_row({{n - 1, 3.0 * c}, {n - 2, -4.0 * c}, {n - 3, c}});
  return DifferenceOperator(std::move(rows));
}

DifferenceOperator second_derivative_operator(const Grid& g, const BoundarySpec& bc) {
  const int n = g.n;
  const double h = g.h();
  const double c = 1.0 / (h * h);
  std::vector<Row> rows(static_cast<std::size_t>(n));
  for (int i = 1; i + 1 < n; ++i)
    rows[static_cast<std::size_t>(i)] = make_row({{i - 1, c}, {i, -2.0 * c}, {i + 1, c}});

  // Ghost node u_{-1} = u_1 - 2 h s on the left, u_n = u_{n-2} + 2 h s on the right.
  if (bc.left.fixes_slope())
    rows.front() = make_row({{0, -2.0 * c}, {1, 2.0 * c}}, -2.0 * bc.left.slope / h);
  else if (n >= 4)
    rows.front() = make_row({{0, 2.0 * c}, {1, -5.0 * c}, {2, 4.0 * c}, {3, -c}});
  else
    rows.front() = make_row({{0, c}, {1, -2.0 * c}, {2, c}});

  if (bc.right.fixes_slope())
    rows.back() = make_row({{n - 1, -2.0 * c}, {n - 2, 2.0 * c}}, 2.0 * bc.right.slope / h);
  else if (n >= 4)
    rows.back() = make_row({{n - 1, 2.0 * c}, {n - 2, -5.0 * c}, {n - 3, 4.0 * c}, {n - 4, -c}});
  else
    rows.back() = make_row({{n - 1, c}, {n - 2, -2.0 * c}, {n - 3, c}});
  return DifferenceOperator(std::move(rows));
}

Field derivative1(const Field& u, const BoundarySpec& bc) {
  Field out{u.grid, std::vector<double>(u.values.size())};
  first_derivative_operator(u.grid, bc).apply(u.values, out.values);
  return out;
}

Field derivative2(const Field& u, const BoundarySpec& bc) {
  Field out{u.grid, std::vector<double>(u.values.size())};
  second_derivative_operator(u.grid, bc).apply(u.values, out.values);
  return out;
}

std::vector<double> trapezoid_weights(const Grid& g) {
  std::vector<double> w(static_cast<std::size_t>(g.n), g.h());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double integrate(const Grid& g, std::span<const double> v) {
  if (static_cast<int>(v.size()) != g.n) throw std::invalid_argument("integrate: size mismatch");
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) interior += v[i];
  return g.h() * (interior + 0.5 * (v.front() + v.back()));
}

double integrate(const Field& v) { return integrate(v.grid, v.values); }

double distance_l1(const Field& u, const Field& v) {
  if (!(u.grid == v.grid)) throw std::invalid_argument("distance_l1: grid mismatch");
  std::vector<double> d(u.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(u.values[i] - v.values[i]);
  return integrate(u.grid, d);
}

std::string field_to_csv(const Field& u) {
  std::ostringstream os;
  os << "x,u\n";
  char buf[64];
  for (int i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.grid.x(i), u[i]);
    os << buf;
  }
  return os.str();
}

std::string field_to_json(const Field& u) {
  nlohmann::json j;
  j["a"] = u.grid.a;
  j["b"] = u.grid.b;
  j["n"] = u.grid.n;
  j["values"] = u.values;
  return j.dump();
}

Field field_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Field out{make_grid(j.at("a").get<double>(), j.at("b").get<double>(), j.at("n").get<int>()),
            j.at("values").get<std::vector<double>>()};
  if (static_cast<int>(out.values.size()) != out.grid.n)
    throw std::invalid_argument("field JSON: values length does not match n");
  return out;
}

} // namespace cmphase
