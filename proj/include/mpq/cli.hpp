#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mpq::cli {

enum class Command { Build, Verify, Sample, Mass };
enum class Format { Json, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;

struct RunConfig {
  Command command = Command::Build;
  /// Family name, path to a JSON spec, or inline JSON.
  std::string group_spec = "antipodal";
  std::optional<int> dim;
  std::vector<int> params;
  /// Empty means the default base point e_1.
  std::vector<double> base_point;
  std::uint64_t seed = 42;
  std::size_t samples = 1000;
  std::string output;
  std::optional<Format> format;
  std::vector<double> grid_min{-2.0};
  std::vector<double> grid_max{2.0};
  int grid_steps = 21;
  std::vector<std::string> checks;
};

/// Runs one command. Results go to `out` (or to config.output when set),
/// diagnostics to `err`. Returns 0 on success, 1 when a verification check
/// fails, 2 on invalid input.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and runs the command.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mpq::cli
