#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace cmphase {

/// Uniform grid x_i = a + i h, i = 0..n-1.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int n = 3;

  double h() const { return (b - a) / (n - 1); }
  double x(int i) const { return i + 1 == n ? b : a + i * h(); }
  double length() const { return b - a; }
  bool operator==(const Grid&) const = default;
};

Grid make_grid(double a, double b, int n);

/// Nodal values of a W^{2,2} function on a grid.
struct Field {
  Grid grid;
  std::vector<double> values;

  int size() const { return grid.n; }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
};

Field sample_function(const Grid& g, const std::function<double(double)>& f);
Field constant_field(const Grid& g, double value);

// Boundary data for one endpoint. `value` pins the nodal value, `slope`
// prescribes u' through a ghost node, `clamped` does both.
struct EndCondition {
  enum class Kind { free, value, clamped, slope };
  Kind kind = Kind::free;
  double value = 0.0;
  double slope = 0.0;

  static EndCondition make_free() { return {}; }
  static EndCondition make_value(double v) { return {Kind::value, v, 0.0}; }
  static EndCondition make_clamped(double v, double s) { return {Kind::clamped, v, s}; }
  static EndCondition make_slope(double s) { return {Kind::slope, 0.0, s}; }

  bool fixes_value() const { return kind == Kind::value || kind == Kind::clamped; }
  bool fixes_slope() const { return kind == Kind::clamped || kind == Kind::slope; }
};

struct PinnedNode {
  int index = 0;
  double value = 0.0;
};

struct BoundarySpec {
  EndCondition left;
  EndCondition right;
  std::vector<PinnedNode> pinned; // interior nodes held fixed by the optimizer

  static BoundarySpec free() { return {}; }
  static BoundarySpec dirichlet(double left, double right);
  static BoundarySpec clamped(double left, double left_slope, double right, double right_slope);
};

/// Mask of nodes whose values the boundary data fixes.
std::vector<bool> constrained_nodes(const Grid& g, const BoundarySpec& bc);

/// Writes the values prescribed by `bc` into `u`.
void apply_constraints(Field& u, const BoundarySpec& bc);

/// Sparse affine finite-difference operator: (Du)_i = sum_j c_ij u_j + offset_i,
/// at most four entries per row.
class DifferenceOperator {
public:
  struct Row {
    std::array<int, 4> index{};
    std::array<double, 4> coef{};
    int count = 0;
    double offset = 0.0;
  };

  DifferenceOperator() = default;
  explicit DifferenceOperator(std::vector<Row> rows) : rows_(std::move(rows)) {}

  void apply(std::span<const double> u, std::span<double> out) const;
  /// out += D^T r (the affine offset does not enter the transpose).
  void add_transpose(std::span<const double> r, std::span<double> out) const;

  const std::vector<Row>& rows() const { return rows_; }
  int size() const { return static_cast<int>(rows_.size()); }

private:
  std::vector<Row> rows_;
};

/// Central differences inside; prescribed slope or second-order one-sided
/// differences at the ends.
DifferenceOperator first_derivative_operator(const Grid& g, const BoundarySpec& bc);
/// Three-point second difference inside; ghost-node reflection at ends with a
/// prescribed slope, second-order one-sided stencil otherwise.
DifferenceOperator second_derivative_operator(const Grid& g, const BoundarySpec& bc);

Field derivative1(const Field& u, const BoundarySpec& bc);
Field derivative2(const Field& u, const BoundarySpec& bc);

/// Composite trapezoid weights.
std::vector<double> trapezoid_weights(const Grid& g);
double integrate(const Field& v);
double integrate(const Grid& g, std::span<const double> v);

double distance_l1(const Field& u, const Field& v);

std::string field_to_csv(const Field& u);
std::string field_to_json(const Field& u);
Field field_from_json(const std::string& text);

} // namespace cmphase
