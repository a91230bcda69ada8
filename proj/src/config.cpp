#include <cmphase/config.hpp>

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <cmphase/inequalities.hpp>

namespace cmphase {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  std::string out = s.substr(b, e - b + 1);
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front())
    out = out.substr(1, out.size() - 2);
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + t + "'");
  return v;
}

long long to_integer(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + t + "'");
  return v;
}

std::vector<double> to_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!trim(item).empty()) out.push_back(to_double(item, key));
  return out;
}

} // namespace

EndCondition parse_end_condition(const std::string& text) {
  const std::string t = trim(text);
  std::vector<std::string> parts;
  std::stringstream in(t);
  std::string p;
  while (std::getline(in, p, ':')) parts.push_back(trim(p));
  if (parts.empty()) throw std::invalid_argument("config: empty boundary condition");
  const std::string& kind = parts[0];
  if (kind == "free" && parts.size() == 1) return EndCondition::make_free();
  if (kind == "value" && parts.size() == 2) return EndCondition::make_value(to_double(parts[1], "value"));
  if (kind == "slope" && parts.size() == 2) return EndCondition::make_slope(to_double(parts[1], "slope"));
  if (kind == "clamped" && parts.size() == 3)
    return EndCondition::make_clamped(to_double(parts[1], "clamped"), to_double(parts[2], "clamped"));
  throw std::invalid_argument("config: bad boundary condition '" + t + "'");
}

LabConfig parse_config(const std::string& text) {
  LabConfig cfg;
  cfg.k1_lengths = default_k1_lengths();
  ExperimentConfig& ex = cfg.experiment;
  std::string potential_name = "standard_quartic";
  std::vector<PolynomialPiece> pieces;
  std::optional<double> custom_growth;

  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "potential") potential_name = value;
      else if (key == "custom_piece") {
        std::stringstream ps(value);
        std::vector<double> nums;
        std::string tok;
        while (ps >> tok) nums.push_back(to_double(tok, key));
        if (nums.size() < 3) throw std::invalid_argument("config: custom_piece needs lo hi and coefficients");
        pieces.push_back({nums[0], nums[1], std::vector<double>(nums.begin() + 2, nums.end())});
      } else if (key == "custom_growth") custom_growth = to_double(value, key);
      else if (key == "a") ex.a = to_double(value, key);
      else if (key == "b") ex.b = to_double(value, key);
      else if (key == "n") ex.n = static_cast<int>(to_integer(value, key));
      else if (key == "left") ex.boundary.left = parse_end_condition(value);
      else if (key == "right") ex.boundary.right = parse_end_condition(value);
      else if (key == "k_values") ex.k_values = to_list(value, key);
      else if (key == "epsilon_values") ex.epsilon_values = to_list(value, key);
      else if (key == "seed") ex.seed = static_cast<std::uint64_t>(to_integer(value, key));
      else if (key == "max_iterations") ex.solver.max_iterations = static_cast<int>(to_integer(value, key));
      else if (key == "gradient_tolerance") ex.solver.gradient_tolerance = to_double(value, key);
      else if (key == "memory") ex.solver.memory = static_cast<int>(to_integer(value, key));
      else if (key == "multistart_count") ex.solver.multistart_count = static_cast<int>(to_integer(value, key));
      else if (key == "restart_amplitude") ex.solver.restart_amplitude = to_double(value, key);
      else if (key == "transition_threshold") ex.transition_threshold = to_double(value, key);
      else if (key == "oscillation_floor") ex.oscillation_floor = to_double(value, key);
      else if (key == "output") ex.output = value;
      else if (key == "format") ex.format = value;
      else if (key == "profile_T") cfg.profile_T = to_double(value, key);
      else if (key == "profile_n") cfg.profile_n = static_cast<int>(to_integer(value, key));
      else if (key == "k1_lengths") cfg.k1_lengths = to_list(value, key);
      else if (key == "k1_n") cfg.k1_n = static_cast<int>(to_integer(value, key));
      else if (key == "k0_n") cfg.k0_n = static_cast<int>(to_integer(value, key));
      else if (key == "jumps") cfg.jumps = static_cast<int>(to_integer(value, key));
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (potential_name == "custom") {
    if (pieces.empty()) throw std::invalid_argument("config: potential = custom needs custom_piece lines");
    ex.potential = Potential::custom(std::move(pieces), custom_growth);
  } else {
    ex.potential = Potential::by_name(potential_name);
  }
  ex.solver.seed = ex.seed;
  return cfg;
}

LabConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace cmphase
