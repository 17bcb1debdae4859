#include "noisymem/paths.hpp"

#include <cmath>
#include <random>
#include <string>

#include "noisymem/errors.hpp"

namespace noisymem {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

BrownianPath::BrownianPath(TimeGrid grid, std::vector<double> increments,
                           std::vector<double> values, std::uint64_t seed)
    : grid_(std::move(grid)),
      increments_(std::move(increments)),
      values_(std::move(values)),
      seed_(seed) {}

BrownianPath BrownianPath::from_increments(const TimeGrid& grid, std::vector<double> increments,
                                           std::uint64_t seed) {
  if (increments.size() != grid.interval_count()) {
    throw ParameterError("expected " + std::to_string(grid.interval_count()) +
                         " increments, got " + std::to_string(increments.size()));
  }
  std::vector<double> values(grid.node_count(), 0.0);
  for (std::size_t j = 0; j < increments.size(); ++j) values[j + 1] = values[j] + increments[j];
  return BrownianPath(grid, std::move(increments), std::move(values), seed);
}

double BrownianPath::value_at(std::size_t node_index) const {
  if (node_index >= values_.size()) {
    throw ParameterError("node index " + std::to_string(node_index) + " out of range");
  }
  return values_[node_index];
}

BrownianPath sample_path(const TimeGrid& grid, std::uint64_t seed) {
  const std::uint64_t a = mix_seed(seed);
  const std::uint64_t b = mix_seed(a);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t n = grid.interval_count();
  std::vector<double> increments(n);
  std::vector<double> values(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    increments[j] = std::sqrt(grid.interval_length(j)) * normal(engine);
    values[j + 1] = values[j] + increments[j];
  }
  return BrownianPath(grid, std::move(increments), std::move(values), seed);
}

BrownianPath coarsen(const BrownianPath& fine, std::size_t factor) {
  const TimeGrid& g = fine.grid();
  if (factor == 0) throw ParameterError("coarsening factor must be positive");
  if (factor == 1) return fine;
  if (!g.aligned()) throw ParameterError("coarsening requires an aligned grid");
  if (g.n_steps() % factor != 0 || g.delay_steps() % factor != 0) {
    throw ParameterError("factor " + std::to_string(factor) + " does not divide n_steps " +
                         std::to_string(g.n_steps()) + " and delay_steps " +
                         std::to_string(g.delay_steps()));
  }
  TimeGrid coarse = build_grid(g.delay(), g.horizon(), g.n_steps() / factor);
  if (coarse.delay_steps() * factor != g.delay_steps()) {
    throw ParameterError("coarse grid is not nested in the fine grid");
  }

  const auto fine_inc = fine.increments();
  const auto fine_val = fine.values();
  std::vector<double> increments(coarse.interval_count());
  std::vector<double> values(coarse.node_count());
  for (std::size_t j = 0; j < increments.size(); ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < factor; ++k) sum += fine_inc[j * factor + k];
    increments[j] = sum;
  }
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = fine_val[j * factor];
  return BrownianPath(std::move(coarse), std::move(increments), std::move(values), fine.seed());
}

}  // namespace noisymem
