#pragma once

#include <cstddef>
#include <memory>
#include <ranges>
#include <span>
#include <vector>

namespace noisymem {

/// Uniform partition of [0, T] with step dt = T / N joined to the partition
/// {-delta, -delta + dt, ...} of [-delta, 0]. When delta is not a multiple
/// of dt the interval just left of 0 is shorter than dt.
///
/// Node j is referred to as u_j; positive-side step i lives at node
/// origin_index() + i and has time t_i = i * dt. Copies share node storage.
class TimeGrid {
 public:
  double dt() const noexcept { return dt_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  /// Number of node intervals covering [-delta, 0]; also the index of t = 0.
  std::size_t delay_steps() const noexcept { return delay_steps_; }
  std::size_t origin_index() const noexcept { return delay_steps_; }
  double delay() const noexcept { return delay_; }
  double horizon() const noexcept { return horizon_; }
  /// True when delta is an integer multiple of dt.
  bool aligned() const noexcept { return aligned_; }

  std::span<const double> nodes() const noexcept { return *nodes_; }
  std::size_t node_count() const noexcept { return nodes_->size(); }
  std::size_t interval_count() const noexcept { return nodes_->size() - 1; }
  double node(std::size_t j) const { return (*nodes_)[j]; }
  double interval_length(std::size_t j) const { return (*nodes_)[j + 1] - (*nodes_)[j]; }

  /// Time t_i of positive-side step i.
  double step_time(std::size_t i) const { return (*nodes_)[delay_steps_ + i]; }
  std::size_t step_node(std::size_t i) const noexcept { return delay_steps_ + i; }

  /// Same delta, horizon and step count.
  bool same_partition(const TimeGrid& other) const noexcept;

 private:
  friend TimeGrid build_grid(double delta, double horizon, std::size_t n_steps);

  double dt_ = 0.0;
  std::size_t n_steps_ = 0;
  std::size_t delay_steps_ = 0;
  double delay_ = 0.0;
  double horizon_ = 0.0;
  bool aligned_ = false;
  std::shared_ptr<const std::vector<double>> nodes_;
};

/// Requires n_steps >= 1 and delta > dt; throws ParameterError otherwise.
TimeGrid build_grid(double delta, double horizon, std::size_t n_steps);

/// Nodes u_j with t_i - delta <= u_j < t_i, as the half-open index range
/// [first, last). The right endpoint t_i is excluded so the memory sum at
/// step i only touches increments that are already known at t_i.
struct MemoryWindow {
  std::size_t step_index = 0;
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const noexcept { return last - first; }
  auto member_indices() const { return std::views::iota(first, last); }
};

MemoryWindow memory_window(const TimeGrid& grid, std::size_t i);

}  // namespace noisymem
