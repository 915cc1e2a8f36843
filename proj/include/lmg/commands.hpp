#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lmg/config.hpp"
#include "lmg/table.hpp"

namespace lmg {

inline constexpr const char* kToolVersion = "lmg 1.0.0";

struct NamedTable {
  std::string name;  // file stem inside a multi-table output directory
  OutputTable table;
};

struct CommandResult {
  std::vector<NamedTable> tables;
  bool failed = false;        // a sweep point hit a numerical failure
  std::string failure;        // identifies the failing (lambda, N)
};

/// Runs one command. Sweep presets record numerical failures as FAILED rows and
/// keep going; single-point commands let NumericalError propagate.
CommandResult run_command(const RunConfig& config);

/// Writes the tables of `result` as `config.out` directs: stdout or a file for
/// one table, a directory of `<name>.csv` files otherwise. Throws IoError.
void write_result(const RunConfig& config, const CommandResult& result, std::ostream& stdout_stream);

/// Whole CLI: parse, run, write. Returns the process exit status
/// (0 ok, 2 bad configuration, 3 numerical failure, 4 I/O failure).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmg
