#include "noisymem/exact.hpp"

#include <cmath>

#include "noisymem/errors.hpp"

namespace noisymem {

Mat2 mat_F(double t, double b) {
  const double scale = std::exp(0.5 * t);
  const double c = scale * std::cosh(b);
  const double s = scale * std::sinh(b);
  return {c, -s, -s, c};
}

Mat2 mat_exp_forward(double t, double b) {
  const double scale = std::exp(-0.5 * t);
  const double c = scale * std::cosh(b);
  const double s = scale * std::sinh(b);
  return {c, s, s, c};
}

ExactSolution exact_solve(double delta, const TimeGrid& grid, const BrownianPath& path) {
  if (std::abs(grid.horizon() - delta) > 1e-12 * delta || std::abs(grid.delay() - delta) > 1e-12 * delta)
    throw ParameterError("closed form needs delay = horizon = delta");
  if (!grid.aligned()) throw ParameterError("closed form needs an aligned grid");
  if (!path.grid().same_partition(grid)) throw ParameterError("Brownian path lives on a different grid");

  const std::size_t origin = grid.origin_index();
  const std::size_t n = grid.n_steps();
  const double dt = grid.dt();
  const auto values = path.values();
  const auto inc = path.increments();
  const double b0 = values[origin];

  ExactSolution sol{grid, std::vector<Vec2>(n + 1)};
  const Vec2 y0{1.0, b0};
  Vec2 integral{0.0, 0.0};
  sol.y_values[0] = y0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.step_time(i);
    // With delta = T, node i is t_i - delta.
    const Vec2 g{-values[i], 0.0};
    const Vec2 fg = mat_F(t, values[origin + i] - b0) * g;
    const Vec2 afg = kStateCoupling * fg;
    integral[0] += fg[0] * inc[origin + i] - afg[0] * dt;
    integral[1] += fg[1] * inc[origin + i] - afg[1] * dt;

    const double t_next = grid.step_time(i + 1);
    const Mat2 forward = mat_exp_forward(t_next, values[origin + i + 1] - b0);
    sol.y_values[i + 1] = forward * Vec2{y0[0] + integral[0], y0[1] + integral[1]};
  }
  return sol;
}

}  // namespace noisymem
