#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ipdmem/io.hpp"

namespace ipdmem {

namespace {

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = s.find(',');
    parts.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return parts;
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key), "not a number: '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key), "not an unsigned integer: '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_positive(std::string_view key, std::string_view text) {
  const std::uint64_t value = parse_unsigned(key, text);
  if (value == 0) throw ConfigError(std::string(key), "must be positive");
  return value;
}

double parse_unit(std::string_view key, std::string_view text) {
  const double value = parse_double(key, text);
  if (!(value >= 0.0 && value <= 1.0))
    throw ConfigError(std::string(key), "value " + std::string(text) + " outside [0, 1]");
  return value;
}

}  // namespace

std::string_view to_string(RunMode mode) noexcept {
  switch (mode) {
    case RunMode::Single: return "single";
    case RunMode::Homogeneous: return "homogeneous";
    case RunMode::Heterogeneous: return "heterogeneous";
    case RunMode::Heatmap: return "heatmap";
  }
  return "unknown";
}

std::size_t RunConfigFile::population_size() const noexcept {
  switch (mode) {
    case RunMode::Homogeneous: return kGridSize * agents_per_rho;
    case RunMode::Heterogeneous:
    case RunMode::Heatmap: return kGridSize * kAllStrategies.size();
    case RunMode::Single:
      if (n_agents) return *n_agents;
      return strategy ? kGridSize * agents_per_rho : kGridSize * kAllStrategies.size();
  }
  return 0;
}

void apply_setting(RunConfigFile& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  const std::string k(key);
  if (key == "mode") {
    if (value == "single") config.mode = RunMode::Single;
    else if (value == "homogeneous") config.mode = RunMode::Homogeneous;
    else if (value == "heterogeneous") config.mode = RunMode::Heterogeneous;
    else if (value == "heatmap") config.mode = RunMode::Heatmap;
    else throw ConfigError(k, "unknown mode '" + std::string(value) + "'");
  } else if (key == "strategy") {
    const auto s = parse_strategy(value);
    if (!s) throw ConfigError(k, "unknown strategy '" + std::string(value) + "'");
    config.strategy = *s;
  } else if (key == "agents_per_rho") {
    config.agents_per_rho = parse_positive(key, value);
  } else if (key == "payoffs") {
    const auto parts = split_list(value);
    if (parts.size() != 4) throw ConfigError(k, "expected four values T,R,P,S");
    PayoffMatrix payoffs{parse_double(key, parts[0]), parse_double(key, parts[1]), parse_double(key, parts[2]),
                         parse_double(key, parts[3])};
    try {
      payoffs.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(k, e.what());
    }
    config.payoffs = payoffs;
  } else if (key == "tau") {
    const std::uint64_t tau = parse_positive(key, value);
    if (tau > UINT32_MAX) throw ConfigError(k, "too large");
    config.tau = static_cast<std::uint32_t>(tau);
  } else if (key == "realizations") {
    config.realizations = parse_positive(key, value);
  } else if (key == "master_seed" || key == "seed") {
    config.master_seed = parse_unsigned(key, value);
  } else if (key == "mu_list") {
    std::vector<double> mus;
    for (std::string_view part : split_list(value)) mus.push_back(parse_unit(key, part));
    config.mu_list = std::move(mus);
  } else if (key == "mu") {
    config.mu = parse_unit(key, value);
  } else if (key == "n") {
    const std::uint64_t n = parse_unsigned(key, value);
    if (n < 2) throw ConfigError(k, "at least 2 agents are needed");
    config.n_agents = n;
  } else if (key == "threads") {
    config.threads = static_cast<unsigned>(parse_unsigned(key, value));
  } else if (key == "output") {
    config.output = std::string(value);
  } else {
    throw ConfigError(k, "unknown key");
  }
}

void validate(const RunConfigFile& config) {
  try {
    config.payoffs.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("payoffs", e.what());
  }
  if (config.mode == RunMode::Homogeneous && config.n_agents)
    throw ConfigError("n", "only single runs take an explicit agent count");
  if (config.mu_list.empty()) throw ConfigError("mu_list", "empty");
}

RunConfigFile parse_config(std::string_view text) {
  RunConfigFile config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected key = value");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
  validate(config);
  return config;
}

RunConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<AgentSpec> single_run_roster(const RunConfigFile& config) {
  if (config.mode == RunMode::Homogeneous) {
    if (!config.strategy) throw ConfigError("strategy", "required for a homogeneous roster");
    return build_homogeneous(*config.strategy, config.agents_per_rho);
  }
  if (config.mode == RunMode::Heterogeneous) return build_heterogeneous();
  if (config.mode == RunMode::Heatmap) throw ConfigError("mode", "heatmap is a sweep, not a single run");

  if (config.n_agents) {
    const std::size_t n = *config.n_agents;
    std::vector<AgentSpec> roster;
    for (std::size_t i = 0; i < n; ++i) {
      const Strategy s = config.strategy.value_or(kAllStrategies[i % kAllStrategies.size()]);
      roster.push_back({static_cast<AgentId>(i), static_cast<double>(i) / static_cast<double>(n - 1), s});
    }
    return roster;
  }
  if (config.strategy) return build_homogeneous(*config.strategy, config.agents_per_rho);
  return build_heterogeneous();
}

SweepOptions sweep_options(const RunConfigFile& config) {
  SweepOptions options;
  options.realizations = config.realizations;
  options.master_seed = config.master_seed.value_or(0);
  options.mu_values = config.mu_list;
  options.payoffs = config.payoffs;
  options.tau = config.tau;
  options.agents_per_rho = config.agents_per_rho;
  if (config.strategy) options.strategies = {*config.strategy};
  options.threads = config.threads;
  return options;
}

}  // namespace ipdmem
