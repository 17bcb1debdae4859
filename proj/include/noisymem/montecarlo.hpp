#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "noisymem/grid.hpp"
#include "noisymem/model.hpp"
#include "noisymem/paths.hpp"

namespace noisymem {

struct ParallelOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

std::size_t resolve_threads(std::size_t requested) noexcept;

/// Per-component mean and sample variance of a vector-valued per-path
/// observable.
struct PathStatistics {
  std::size_t n_paths = 0;
  std::vector<double> mean;
  std::vector<double> variance;  // unbiased (n - 1 denominator)

  /// Standard error of the mean: sqrt(variance / n_paths).
  double std_error(std::size_t k) const;
};

/// Writes the observable for one path into `out` (already sized and zeroed).
using PathObserver = std::function<void(std::uint64_t seed, std::span<double> out)>;

/// Runs `observe` for seeds base_seed .. base_seed + n_paths - 1. Paths are
/// processed in fixed blocks whose partial moments are merged in block
/// order, so the result is bit-identical for any thread count.
PathStatistics accumulate_over_paths(std::size_t n_paths, std::uint64_t base_seed,
                                     std::size_t width, const PathObserver& observe,
                                     ParallelOptions options = {});

/// Reference values X(t_i) at every positive-side step of the path's grid.
using ReferenceSolver = std::function<std::vector<double>(const ProblemSpec&, const BrownianPath&)>;

/// Per-node Monte Carlo estimate of E[(X(t_i) - X_i)^2].
struct MseCurve {
  std::vector<double> times;
  std::vector<double> mse;
  std::vector<double> std_errors;
  std::size_t n_paths = 0;
};

/// Euler against a reference on the same grid and path, per node. With no
/// reference the problem must be the paper example and the closed-form
/// solution is used. Throws ParameterError for n_paths < 2.
MseCurve estimate_mse(const ProblemSpec& problem, const TimeGrid& grid, std::size_t n_paths,
                      std::uint64_t base_seed, const ReferenceSolver& reference = {},
                      ParallelOptions options = {});

/// Per-node second moments E[X_i^2] and E[Z_i^2] of the Euler solution.
struct MomentCurves {
  std::vector<double> times;
  std::vector<double> state_second_moment;
  std::vector<double> memory_second_moment;
  std::size_t n_paths = 0;

  double max_state_second_moment() const;
  double max_memory_second_moment() const;
};

MomentCurves estimate_moments(const ProblemSpec& problem, const TimeGrid& grid,
                              std::size_t n_paths, std::uint64_t base_seed,
                              ParallelOptions options = {});

/// Least-squares line through (log dt, log mse).
struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;  // 0 when only two points are given
};

OrderFit fit_convergence_order(std::span<const double> dts, std::span<const double> mse);

struct ConvergenceReport {
  std::vector<std::size_t> step_counts;  // ascending
  std::vector<double> dts;               // strictly decreasing
  std::vector<double> terminal_mse;
  std::vector<double> std_errors;
  double fitted_order_mse = 0.0;
  double fitted_order_rms = 0.0;
  double confidence = 0.0;  // standard error of the fitted slope
  std::size_t n_paths = 0;
  std::size_t reference_steps = 0;
};

struct ConvergenceOptions {
  /// The closed-form reference is evaluated on a grid this many times finer
  /// than the finest step count in the study.
  std::size_t reference_refinement = 4;
  ParallelOptions parallel;
};

/// Strong-error study for the paper example. Each path is sampled once on
/// the reference grid; every coarser Euler run uses the coarsened path, and
/// the squared error at t = T is taken against the reference-grid closed
/// form. step_counts must all divide the largest one.
ConvergenceReport convergence_study(const ProblemSpec& problem, std::vector<std::size_t> step_counts,
                                    std::size_t n_paths, std::uint64_t base_seed,
                                    ConvergenceOptions options = {});

}  // namespace noisymem
