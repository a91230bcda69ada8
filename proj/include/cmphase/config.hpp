#pragma once

#include <string>
#include <vector>

#include <cmphase/lab.hpp>

namespace cmphase {

/// Everything a `cmlab` run can read from a config file.
///
/// The file is line-oriented `key = value`; `#` starts a comment, lists are
/// comma separated and string values may be quoted. Boundary ends read
/// `free`, `value:V`, `clamped:V:S` or `slope:S`. A custom potential is given
/// by `potential = custom` and one `custom_piece = lo hi c0 c1 ...` line per
/// polynomial piece (coefficients in increasing degree), with an optional
/// `custom_growth`.
struct LabConfig {
  ExperimentConfig experiment;
  double profile_T = 8.0;
  int profile_n = 401;
  std::vector<double> k1_lengths;
  int k1_n = 2001;
  int k0_n = 1001;
  int jumps = 1;
};

LabConfig parse_config(const std::string& text);
LabConfig load_config(const std::string& path);

EndCondition parse_end_condition(const std::string& text);

} // namespace cmphase
