#include "noisymem/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "noisymem/errors.hpp"

namespace noisymem {

namespace {

// Relative tolerance (in units of dt) for node membership and alignment.
constexpr double kNodeTolerance = 1e-9;

}  // namespace

bool TimeGrid::same_partition(const TimeGrid& other) const noexcept {
  return n_steps_ == other.n_steps_ && delay_steps_ == other.delay_steps_ &&
         delay_ == other.delay_ && horizon_ == other.horizon_;
}

TimeGrid build_grid(double delta, double horizon, std::size_t n_steps) {
  if (n_steps < 1) throw ParameterError("grid needs at least one step");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ParameterError("horizon must be positive and finite");
  if (!std::isfinite(delta)) throw ParameterError("delay must be finite");

  const double dt = horizon / static_cast<double>(n_steps);
  if (!(delta > dt)) {
    throw ParameterError("delay " + std::to_string(delta) + " must exceed the step " +
                         std::to_string(dt) + " (the scheme assumes delta > dt)");
  }

  const double tol = dt * kNodeTolerance;
  // Largest k with -delta + k dt <= 0.
  const auto k_max = static_cast<std::size_t>(std::floor((delta + tol) / dt));
  const bool aligned = std::abs(static_cast<double>(k_max) * dt - delta) <= tol;

  TimeGrid grid;
  grid.dt_ = dt;
  grid.n_steps_ = n_steps;
  grid.delay_ = delta;
  grid.horizon_ = horizon;
  grid.aligned_ = aligned;
  grid.delay_steps_ = aligned ? k_max : k_max + 1;

  std::vector<double> nodes;
  nodes.reserve(grid.delay_steps_ + n_steps + 1);
  if (aligned) {
    const auto d = static_cast<double>(k_max);
    for (std::size_t k = 0; k < k_max; ++k) nodes.push_back((static_cast<double>(k) - d) * dt);
  } else {
    for (std::size_t k = 0; k <= k_max; ++k) nodes.push_back(-delta + static_cast<double>(k) * dt);
  }
  for (std::size_t n = 0; n <= n_steps; ++n) nodes.push_back(static_cast<double>(n) * dt);
  nodes.front() = -delta;
  nodes.back() = horizon;

  grid.nodes_ = std::make_shared<const std::vector<double>>(std::move(nodes));
  return grid;
}

MemoryWindow memory_window(const TimeGrid& grid, std::size_t i) {
  if (i > grid.n_steps()) {
    throw ParameterError("step index " + std::to_string(i) + " out of range [0, " +
                         std::to_string(grid.n_steps()) + "]");
  }
  const auto nodes = grid.nodes();
  const std::size_t last = grid.step_node(i);
  const double lower = grid.step_time(i) - grid.delay() - grid.dt() * kNodeTolerance;
  const auto it = std::lower_bound(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(last), lower);
  return MemoryWindow{i, static_cast<std::size_t>(it - nodes.begin()), last};
}

}  // namespace noisymem
