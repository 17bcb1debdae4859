#include "noisymem/euler.hpp"

#include <cmath>
#include <string>

#include "noisymem/errors.hpp"

namespace noisymem {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// Running sum of inner(u_j) X_j dB_j over a window that only ever slides
// forward. It is re-summed from scratch every `refresh` steps so rounding
// drift stays bounded by one window's worth of updates.
class SlidingMemory {
 public:
  SlidingMemory(const MemoryKernel& kernel, const TimeGrid& grid, std::span<const double> inc,
                std::size_t refresh)
      : kernel_(kernel), grid_(grid), inc_(inc), terms_(grid.node_count(), 0.0),
        refresh_(refresh == 0 ? 1 : refresh) {}

  double at(std::size_t i, std::span<const double> states) {
    const MemoryWindow w = memory_window(grid_, i);
    for (; hi_ < w.last; ++hi_) {
      terms_[hi_] = kernel_.inner(grid_.node(hi_)) * states[hi_] * inc_[hi_];
      sum_ += terms_[hi_];
    }
    for (; lo_ < w.first; ++lo_) sum_ -= terms_[lo_];
    if (i % refresh_ == 0) {
      sum_ = 0.0;
      for (std::size_t j = lo_; j < hi_; ++j) sum_ += terms_[j];
    }
    return kernel_.outer(grid_.step_time(i)) * sum_;
  }

 private:
  const MemoryKernel& kernel_;
  const TimeGrid& grid_;
  std::span<const double> inc_;
  std::vector<double> terms_;
  std::size_t refresh_;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
  double sum_ = 0.0;
};

}  // namespace

void check_compatible(const ProblemSpec& problem, const TimeGrid& grid, const BrownianPath& path) {
  if (!close(grid.delay(), problem.delay()) || !close(grid.horizon(), problem.horizon())) {
    throw ParameterError("grid (delta=" + std::to_string(grid.delay()) +
                         ", T=" + std::to_string(grid.horizon()) +
                         ") was not built for this problem (delta=" +
                         std::to_string(problem.delay()) + ", T=" +
                         std::to_string(problem.horizon()) + ")");
  }
  if (!path.grid().same_partition(grid)) {
    throw ParameterError("Brownian path lives on a different grid (" +
                         std::to_string(path.grid().n_steps()) + " vs " +
                         std::to_string(grid.n_steps()) + " steps)");
  }
}

double discrete_memory(const ProblemSpec& problem, const TimeGrid& grid, const BrownianPath& path,
                       std::span<const double> states, std::size_t i) {
  const MemoryWindow w = memory_window(grid, i);
  if (states.size() < w.last) throw ParameterError("states do not cover the memory window");
  const double t = grid.step_time(i);
  const auto inc = path.increments();
  double z = 0.0;
  for (std::size_t j : w.member_indices()) z += problem.kernel(t, grid.node(j)) * states[j] * inc[j];
  return z;
}

Trajectory euler_solve(const ProblemSpec& problem, const TimeGrid& grid, const BrownianPath& path,
                       MemoryEvaluation mode) {
  check_compatible(problem, grid, path);

  const std::size_t origin = grid.origin_index();
  const std::size_t n = grid.n_steps();
  const double dt = grid.dt();
  const auto inc = path.increments();

  Trajectory traj{grid, std::vector<double>(grid.node_count(), 0.0), std::vector<double>(n + 1, 0.0)};
  auto& x = traj.states;
  for (std::size_t j = 0; j <= origin; ++j) {
    x[j] = problem.initial_segment(grid.node(j));
    if (!std::isfinite(x[j]))
      throw ModelError("initial segment is not finite at t = " + std::to_string(grid.node(j)));
  }

  const bool sliding = mode == MemoryEvaluation::Auto && problem.memory_kernel().is_separable();
  SlidingMemory window(problem.memory_kernel(), grid, inc, grid.delay_steps());

  for (std::size_t i = 0; i <= n; ++i) {
    const double z = sliding ? window.at(i, x) : discrete_memory(problem, grid, path, x, i);
    if (!std::isfinite(z)) throw NumericalBlowup(i, "memory Z_i is not finite");
    traj.memories[i] = z;
    if (i == n) break;

    const double t = grid.step_time(i);
    const double xi = x[origin + i];
    const double next = xi + problem.drift(t, xi, z) * dt + problem.diffusion(t, xi, z) * inc[origin + i];
    if (!std::isfinite(next)) throw NumericalBlowup(i, "state X_{i+1} is not finite");
    x[origin + i + 1] = next;
  }
  return traj;
}

Trajectory euler_solve(const ProblemSpec& problem, const BrownianPath& path, MemoryEvaluation mode) {
  return euler_solve(problem, path.grid(), path, mode);
}

}  // namespace noisymem
