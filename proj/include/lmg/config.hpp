#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lmg {

enum class Command { spectrum, eigvec, classical, wkb, scaling, localize, dos };

std::string_view to_string(Command command) noexcept;

/// Validated run description. Optional fields are filled from preset defaults
/// where a preset applies.
struct RunConfig {
  Command command = Command::spectrum;
  std::optional<double> lambda;
  std::optional<int> n;
  std::vector<double> lambda_list;
  std::vector<int> n_list;
  std::string sector = "both";         // even | odd | both
  std::optional<std::size_t> level;    // sector index
  std::size_t bins = 50;
  std::size_t n_components = 20;
  std::size_t count = 20;
  std::size_t action_samples = 0;
  std::size_t resolution = 256;        // 2048 when a preset is active, unless set
  std::string preset;                  // fig1 | fig2 | gap13 | doublet | scar | weyl
  bool density = false;
  std::string out;                     // empty: stdout (single-table commands)
  unsigned threads = 1;

  /// Everything needed to reproduce the run; excludes `out` and `threads`,
  /// which do not affect the numbers.
  nlohmann::json echo() const;
};

/// Parse a JSON object (config file or echoed header) into a RunConfig.
/// Throws ConfigError naming the offending key.
RunConfig config_from_json(const nlohmann::json& j);

/// Parse `lmg <command> [flags]`. `--config FILE` supplies a JSON base that the
/// flags override. Throws ConfigError; returns nullopt after printing --help.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args);

}  // namespace lmg
