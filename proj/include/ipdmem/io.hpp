#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ipdmem/experiments.hpp"

namespace ipdmem {

// ---------------------------------------------------------------------------
// Run configuration
//
// Flat `key = value` lines; `#` starts a comment. Recognized keys:
//
//   mode            single | homogeneous | heterogeneous | heatmap
//   strategy        FR | FMC | FMD | FMU | FLP | FMP
//   agents_per_rho  positive integer (homogeneous rosters)
//   payoffs         T,R,P,S
//   tau             positive integer
//   realizations    positive integer
//   master_seed     unsigned 64-bit integer (alias: seed)
//   mu_list         comma-separated values in [0, 1]
//   mu              memory ratio of a single run
//   n               agent count of a single run with an evenly spaced roster
//   threads         worker threads, 0 = all cores
//   output          output CSV path
// ---------------------------------------------------------------------------

enum class RunMode { Single, Homogeneous, Heterogeneous, Heatmap };

std::string_view to_string(RunMode mode) noexcept;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct RunConfigFile {
  RunMode mode = RunMode::Heterogeneous;
  std::optional<Strategy> strategy;
  std::size_t agents_per_rho = 6;
  PayoffMatrix payoffs{};
  std::uint32_t tau = 30;
  std::size_t realizations = 50;
  std::optional<std::uint64_t> master_seed;
  std::vector<double> mu_list = SweepOptions{}.mu_values;
  double mu = 0.5;
  std::optional<std::size_t> n_agents;
  unsigned threads = 0;
  std::string output;

  /// Agent count of the environment this config describes.
  std::size_t population_size() const noexcept;
};

/// Applies one key/value pair. Throws ConfigError naming the key.
void apply_setting(RunConfigFile& config, std::string_view key, std::string_view value);

/// Cross-field checks. Throws ConfigError.
void validate(const RunConfigFile& config);

RunConfigFile parse_config(std::string_view text);
RunConfigFile load_config(const std::filesystem::path& path);

/// Roster of a single run: n evenly spaced rho values when n is set (cycling
/// strategies unless one is given), otherwise the homogeneous or mixed roster.
std::vector<AgentSpec> single_run_roster(const RunConfigFile& config);

SweepOptions sweep_options(const RunConfigFile& config);

// ---------------------------------------------------------------------------
// Results table
// ---------------------------------------------------------------------------

inline constexpr int kResultsSchemaVersion = 1;
inline constexpr std::string_view kResultsHeader = "mode,strategy,mu,group,phi_mean,phi_sd,realizations,seed";

struct ResultsRow {
  std::string mode;
  std::string strategy;
  double mu = 0;
  std::string group;  // "cooperators", or the rho value for heatmap rows
  double phi_mean = 0;
  double phi_sd = 0;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
};

struct ResultsTable {
  std::vector<ResultsRow> rows;
};

ResultsTable to_table(const SweepResult& sweep);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

std::string format_results(const ResultsTable& table);
void write_results(const ResultsTable& table, const std::filesystem::path& path);

/// Inverse of format_results. Throws std::runtime_error on malformed input.
ResultsTable parse_results(std::string_view csv);

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

/// Environment variable naming the default output directory for sweeps.
inline constexpr const char* kOutputDirVariable = "IPDMEM_OUTPUT_DIR";

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ipdmem
