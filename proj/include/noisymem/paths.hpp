#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "noisymem/grid.hpp"

namespace noisymem {

/// One realisation of Brownian motion on the nodes of a TimeGrid, started
/// at B(-delta) = 0. B(0) is therefore a realised value, not pinned to zero.
///
/// Increments and node values are both stored: increments feed the Euler
/// step, node values feed the closed-form solution. Coarsening keeps node
/// values bit-identical at shared nodes.
class BrownianPath {
 public:
  /// Builds a path from explicit increments, one per grid interval. Node
  /// values are the running sums from -delta.
  static BrownianPath from_increments(const TimeGrid& grid, std::vector<double> increments,
                                      std::uint64_t seed = 0);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> increments() const noexcept { return increments_; }
  std::span<const double> values() const noexcept { return values_; }
  double increment(std::size_t j) const { return increments_[j]; }

  /// B(u_j) - B(-delta). Throws ParameterError for an out-of-range index.
  double value_at(std::size_t node_index) const;

 private:
  friend BrownianPath sample_path(const TimeGrid&, std::uint64_t);
  friend BrownianPath coarsen(const BrownianPath&, std::size_t);

  BrownianPath(TimeGrid grid, std::vector<double> increments, std::vector<double> values,
               std::uint64_t seed);

  TimeGrid grid_;
  std::vector<double> increments_;
  std::vector<double> values_;
  std::uint64_t seed_;
};

/// Deterministic in (grid, seed). Each seed gets its own std::mt19937_64
/// stream, initialised through std::seed_seq from two splitmix64 outputs of
/// the seed; increments are std::normal_distribution draws (libstdc++ uses
/// the Marsaglia polar method) scaled by sqrt(interval length), consumed in
/// time order from -delta to T.
BrownianPath sample_path(const TimeGrid& grid, std::uint64_t seed);

/// Path on the grid with step factor * dt. Each coarse increment is the sum
/// of `factor` consecutive fine increments; node values are subsampled.
/// Requires an aligned grid and factor dividing both n_steps and delay_steps.
BrownianPath coarsen(const BrownianPath& fine, std::size_t factor);

/// splitmix64 finaliser, used to decorrelate consecutive seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace noisymem
