#include "noisymem/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "noisymem/errors.hpp"

namespace noisymem {

double VolterraKernel::operator()(double t, double s) const {
  if (s > t) return 0.0;
  const double lo = std::max(s, 0.0);
  const double hi = std::min(s + delay_, t);
  if (!(hi > lo)) return 0.0;
  if (phi_.is_unit()) return a_ * (hi - lo);

  const int panels = kQuadraturePanels;
  const double h = (hi - lo) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) sum += phi_(lo + (k + 0.5) * h, s);
  return a_ * h * sum;
}

VolterraKernel build_volterra_kernel(const ProblemSpec& problem, double a, DriftPart drift_part,
                                     DriftPart diffusion_part) {
  if (!drift_part || !diffusion_part) throw ParameterError("Volterra parts must be callable");
  if (!std::isfinite(a)) throw ParameterError("memory coefficient must be finite");

  std::mt19937_64 engine(0x5eed);
  std::uniform_real_distribution<double> time(0.0, problem.horizon());
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  for (int k = 0; k < 100; ++k) {
    const double t = time(engine);
    const double x = value(engine);
    const double z = value(engine);
    const double drift_residual = problem.drift(t, x, z) - drift_part(t, x) - a * z;
    const double diffusion_residual = problem.diffusion(t, x, z) - diffusion_part(t, x);
    if (!(std::abs(drift_residual) <= 1e-9) || !(std::abs(diffusion_residual) <= 1e-9)) {
      throw ModelError("coefficients do not split as b = b~(t,x) + a z, sigma = sigma(t,x) at (t=" +
                       std::to_string(t) + ", x=" + std::to_string(x) + ", z=" +
                       std::to_string(z) + ")");
    }
  }

  VolterraKernel kernel;
  kernel.phi_ = problem.memory_kernel();
  kernel.drift_part_ = std::move(drift_part);
  kernel.diffusion_part_ = std::move(diffusion_part);
  kernel.initial_segment_ = [problem](double t) { return problem.initial_segment(t); };
  kernel.a_ = a;
  kernel.delay_ = problem.delay();
  kernel.horizon_ = problem.horizon();
  return kernel;
}

Trajectory volterra_euler_solve(const VolterraKernel& kernel, const TimeGrid& grid,
                                const BrownianPath& path, double x0) {
  if (!grid.aligned()) throw ParameterError("Volterra solve requires delta to be a multiple of dt");
  if (!path.grid().same_partition(grid)) throw ParameterError("Brownian path lives on a different grid");
  if (std::abs(grid.delay() - kernel.delay()) > 1e-12 * kernel.delay())
    throw ParameterError("grid delay does not match the kernel's delay");

  const std::size_t origin = grid.origin_index();
  const std::size_t n_steps = grid.n_steps();
  const double dt = grid.dt();
  const auto inc = path.increments();

  Trajectory traj{grid, std::vector<double>(grid.node_count(), 0.0), {}};
  auto& x = traj.states;
  for (std::size_t j = 0; j < origin; ++j) x[j] = kernel.initial_segment(grid.node(j));
  x[origin] = x0;

  // drift_part(t_i, X_i) and diffusion_part(t_i, X_i) only depend on X_i, so
  // they are evaluated once when X_i becomes available.
  std::vector<double> drift(n_steps, 0.0);
  std::vector<double> diffusion(n_steps, 0.0);

  for (std::size_t n = 1; n <= n_steps; ++n) {
    const std::size_t prev = n - 1;
    const double t_prev = grid.step_time(prev);
    drift[prev] = kernel.drift_part(t_prev, x[origin + prev]);
    diffusion[prev] = kernel.diffusion_part(t_prev, x[origin + prev]);

    const double t_n = grid.step_time(n);
    double drift_sum = 0.0;
    double noise_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) drift_sum += drift[i];
    for (std::size_t j = 0; j < origin + n; ++j) {
      double integrand = kernel(t_n, grid.node(j + 1)) * x[j];
      if (j >= origin) integrand += diffusion[j - origin];
      noise_sum += integrand * inc[j];
    }
    const double value = x0 + drift_sum * dt + noise_sum;
    if (!std::isfinite(value)) throw NumericalBlowup(prev, "Volterra state is not finite");
    x[origin + n] = value;
  }
  return traj;
}

}  // namespace noisymem
