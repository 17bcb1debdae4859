#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noisymem/model.hpp"

namespace noisymem::cli {

enum class Command { Simulate, CompareExact, Convergence };

/// Everything one CLI invocation needs, after flags and config file are merged.
struct ExperimentConfig {
  Command command = Command::Simulate;
  ProblemKind problem = ProblemKind::PaperExample;
  double delta = 1.0;
  std::optional<double> horizon;  // defaults to delta
  std::size_t n_steps = 100;
  std::vector<std::size_t> step_counts;  // convergence only
  std::size_t paths = 1;
  std::uint64_t seed = 0;
  std::size_t reference_refinement = 4;
  std::size_t threads = 0;
  std::string output_path;  // empty: stdout
  std::string plot_path;    // optional gnuplot script
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Flat key=value file, one pair per line, '#' starts a comment.
/// Throws std::runtime_error if the file cannot be read or a line is malformed.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// NOISYMEM_THREADS, 0 (auto) when unset. Throws std::invalid_argument if malformed.
std::size_t threads_from_environment();

/// args excludes the program name. Writes diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noisymem::cli
