#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <cmphase/field.hpp>
#include <cmphase/optimizer.hpp>

namespace testsupport {

inline const double pi = std::acos(-1.0);

/// Smooth random field: a trig series of 1..16 modes with random offset and
/// an amplitude spread over four decades.
inline cmphase::Field random_smooth_field(const cmphase::Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto noise = cmphase::smooth_noise(g, 1 + static_cast<int>(seed % 16), rng());
  const double offset = 1.5 * unit(rng);
  const double amp = std::pow(10.0, 2.0 * unit(rng));
  cmphase::Field f{g, noise};
  for (double& v : f.values) v = amp * (v + offset);
  return f;
}

/// Random cosine series on (a, b) with u'(b) = 0: every mode is even about b.
inline cmphase::Field random_flat_right_field(const cmphase::Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int modes = 1 + static_cast<int>(seed % 8);
  std::vector<double> amp(static_cast<std::size_t>(modes));
  for (double& a : amp) a = unit(rng);
  const double c2 = unit(rng);
  const double len = g.length();
  return cmphase::sample_function(g, [&](double x) {
    const double t = (g.b - x) / len;
    double v = c2 * t * t;
    for (int j = 0; j < modes; ++j) v += amp[static_cast<std::size_t>(j)] * std::cos(pi * (j + 1) * t);
    return v;
  });
}

} // namespace testsupport
