#include <cmphase/potential.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cmphase {

namespace {

constexpr double kTailCut = 2.0;

double quartic(double s) {
  const double q = s * s - 1.0;
  return q * q / 4.0;
}

double quartic_prime(double s) { return s * (s * s - 1.0); }

double horner(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double horner_prime(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > 1;) acc = acc * s + static_cast<double>(j) * c[j];
  return acc;
}

} // namespace

Potential Potential::standard_quartic() {
  return Potential(PotentialKind::standard_quartic, 0.25);
}

// Agrees with the quartic on [-2, 2] and is frozen at W(2) beyond: violates
// quadratic growth at infinity only.
Potential Potential::bounded_tail() { return Potential(PotentialKind::bounded_tail, std::nullopt); }

// (s^2 - 1)^4 / 4: fourth-order contact at the wells, quartic-like elsewhere.
Potential Potential::flat_wells() { return Potential(PotentialKind::flat_wells, std::nullopt); }

Potential Potential::custom(std::vector<PolynomialPiece> pieces, std::optional<double> growth) {
  if (pieces.empty()) throw std::invalid_argument("custom potential needs at least one piece");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.lo < p.hi) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
      throw std::invalid_argument("custom potential piece has an invalid interval");
    if (p.coefficients.empty())
      throw std::invalid_argument("custom potential piece has no coefficients");
    if (i > 0 && pieces[i - 1].hi != p.lo)
      throw std::invalid_argument("custom potential pieces must be contiguous");
  }
  if (growth && !(*growth > 0.0)) throw std::invalid_argument("growth constant must be positive");
  Potential out(PotentialKind::custom, growth);
  out.pieces_ = std::move(pieces);
  return out;
}

Potential Potential::by_name(std::string_view name) {
  if (name == "standard_quartic") return standard_quartic();
  if (name == "bounded_tail") return bounded_tail();
  if (name == "flat_wells") return flat_wells();
  throw std::invalid_argument("unknown potential: " + std::string(name));
}

std::string Potential::name() const {
  switch (kind_) {
  case PotentialKind::standard_quartic: return "standard_quartic";
  case PotentialKind::bounded_tail: return "bounded_tail";
  case PotentialKind::flat_wells: return "flat_wells";
  case PotentialKind::custom: return "custom";
  }
  return "unknown";
}

double Potential::value(double s) const {
  switch (kind_) {
  case PotentialKind::standard_quartic: return quartic(s);
  case PotentialKind::bounded_tail: return quartic(std::clamp(s, -kTailCut, kTailCut));
  case PotentialKind::flat_wells: {
    const double q = s * s - 1.0;
    const double q2 = q * q;
    return q2 * q2 / 4.0;
  }
  case PotentialKind::custom: {
    for (const auto& p : pieces_)
      if (s <= p.hi) return horner(p.coefficients, s);
    return horner(pieces_.back().coefficients, s);
  }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Potential::derivative(double s) const {
  switch (kind_) {
  case PotentialKind::standard_quartic: return quartic_prime(s);
  case PotentialKind::bounded_tail:
    if (std::abs(s) == kTailCut) throw std::domain_error("bounded_tail potential has a kink at |s| = 2");
    return std::abs(s) < kTailCut ? quartic_prime(s) : 0.0;
  case PotentialKind::flat_wells: {
    const double q = s * s - 1.0;
    return 2.0 * s * q * q * q;
  }
  case PotentialKind::custom: {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (s < p.hi || i + 1 == pieces_.size()) return horner_prime(p.coefficients, s);
      if (s == p.hi) {
        const double left = horner_prime(p.coefficients, s);
        const double right = horner_prime(pieces_[i + 1].coefficients, s);
        if (std::abs(left - right) > 1e-12 * (1.0 + std::abs(left)))
          throw std::domain_error("custom potential is not differentiable at a breakpoint");
        return left;
      }
    }
    return horner_prime(pieces_.back().coefficients, s);
  }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double eval_w(const Potential& p, double s) { return p.value(s); }
double eval_dw(const Potential& p, double s) { return p.derivative(s); }

GrowthCheck verify_growth(const Potential& p, double c, int sample_count, double s_max) {
  if (sample_count < 2) throw std::invalid_argument("verify_growth needs at least two samples");
  if (!(c > 0.0) || !(s_max > 0.0)) throw std::invalid_argument("verify_growth needs c > 0 and s_max > 0");
  GrowthCheck out;
  out.slack = std::numeric_limits<double>::infinity();
  bool holds = true;
  const double step = 2.0 * s_max / (sample_count - 1);
  for (int i = 0; i < sample_count; ++i) {
    const double s = -s_max + i * step;
    const double w = p.value(s);
    const double d = s >= 0.0 ? s - 1.0 : s + 1.0;
    const double slack = w - c * d * d;
    // Roundoff floor so that exact contact (the quartic with c = 1/4 at s = 0)
    // still certifies.
    if (slack < -1e-12 * (1.0 + w)) holds = false;
    if (slack < out.slack) {
      out.slack = slack;
      out.witness = s;
    }
  }
  out.holds = holds;
  return out;
}

Potential make_counterexample_potential(Counterexample which) {
  return which == Counterexample::bounded_tail ? Potential::bounded_tail() : Potential::flat_wells();
}

} // namespace cmphase
