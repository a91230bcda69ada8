#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cmphase {

enum class PotentialKind { standard_quartic, bounded_tail, flat_wells, custom };

/// One polynomial piece of a custom potential, valid on [lo, hi].
/// coefficients[j] multiplies s^j.
struct PolynomialPiece {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> coefficients;
};

/// Double-well potential with wells fixed at -1 and +1.
///
/// Values are immutable after construction. Wells elsewhere must be handled
/// by the caller through an affine change of variable.
class Potential {
public:
  static Potential standard_quartic();
  static Potential bounded_tail();
  static Potential flat_wells();
  /// Pieces must be sorted, contiguous and cover a bounded interval; outside
  /// of it the first and last pieces are extrapolated.
  static Potential custom(std::vector<PolynomialPiece> pieces,
                          std::optional<double> growth_constant = std::nullopt);

  static Potential by_name(std::string_view name);

  PotentialKind kind() const { return kind_; }
  std::string name() const;
  std::optional<double> growth_constant() const { return growth_constant_; }
  static constexpr double left_well = -1.0;
  static constexpr double right_well = 1.0;

  double value(double s) const;
  /// Throws std::domain_error where the potential has a kink.
  double derivative(double s) const;

  const std::vector<PolynomialPiece>& pieces() const { return pieces_; }

private:
  Potential(PotentialKind kind, std::optional<double> growth)
      : kind_(kind), growth_constant_(growth) {}

  PotentialKind kind_;
  std::optional<double> growth_constant_;
  std::vector<PolynomialPiece> pieces_;
};

double eval_w(const Potential& p, double s);
double eval_dw(const Potential& p, double s);

struct GrowthCheck {
  bool holds = false;
  double witness = 0.0; // sample with the smallest slack
  double slack = 0.0;   // W(s) - c (s -/+ 1)^2 at the witness
};

/// Samples W(s) >= c (s - 1)^2 on s >= 0 and W(s) >= c (s + 1)^2 on s <= 0
/// uniformly over [-s_max, s_max].
GrowthCheck verify_growth(const Potential& p, double c, int sample_count = 10001,
                          double s_max = 50.0);

enum class Counterexample { bounded_tail, flat_wells };

Potential make_counterexample_potential(Counterexample which);

} // namespace cmphase
