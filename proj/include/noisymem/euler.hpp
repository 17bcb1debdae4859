#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "noisymem/grid.hpp"
#include "noisymem/model.hpp"
#include "noisymem/paths.hpp"

namespace noisymem {

/// Discrete solution on a grid. states has one entry per grid node (the
/// negative side holds the initial segment); memories holds Z_i for every
/// positive-side step i = 0..N. Volterra solves leave memories empty.
struct Trajectory {
  TimeGrid grid;
  std::vector<double> states;
  std::vector<double> memories;

  /// X_i at positive-side step i.
  double state_at_step(std::size_t i) const { return states[grid.step_node(i)]; }
  double terminal_state() const { return states.back(); }
};

enum class MemoryEvaluation {
  /// Running window sum when the kernel is separable, full re-summation otherwise.
  Auto,
  /// Always re-sum the whole window (O(N * delta / dt)).
  Naive,
};

/// Z_i = sum over the memory window of phi(t_i, u_j) X_j dB_j. `states`
/// must be filled for every node before t_i.
double discrete_memory(const ProblemSpec& problem, const TimeGrid& grid, const BrownianPath& path,
                       std::span<const double> states, std::size_t i);

/// Euler-Maruyama for the noisy-memory SDE:
///   X_{i+1} = X_i + b(t_i, X_i, Z_i) dt + sigma(t_i, X_i, Z_i) dB_i.
/// Throws ParameterError if grid/path/problem disagree and NumericalBlowup
/// as soon as a state or memory value becomes non-finite.
Trajectory euler_solve(const ProblemSpec& problem, const TimeGrid& grid, const BrownianPath& path,
                       MemoryEvaluation mode = MemoryEvaluation::Auto);

/// Convenience overload solving on the path's own grid.
Trajectory euler_solve(const ProblemSpec& problem, const BrownianPath& path,
                       MemoryEvaluation mode = MemoryEvaluation::Auto);

/// Throws ParameterError unless grid was built for the problem's delay and
/// horizon and the path lives on the same partition.
void check_compatible(const ProblemSpec& problem, const TimeGrid& grid, const BrownianPath& path);

}  // namespace noisymem
