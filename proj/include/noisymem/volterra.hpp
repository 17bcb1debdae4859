#pragma once

#include <functional>

#include "noisymem/euler.hpp"
#include "noisymem/model.hpp"

namespace noisymem {

using DriftPart = std::function<double(double t, double x)>;

/// Volterra form of a noisy-memory SDE whose coefficients split as
///   b(t, x, z) = drift_part(t, x) + a z,   sigma(t, x, z) = diffusion_part(t, x).
/// Exchanging the order of integration in int_0^t a Z(s) ds gives
///   X(t) = X(0) + int_0^t drift_part(s, X(s)) ds
///        + int_{-delta}^t { K(t, s) X(s) + 1[s >= 0] diffusion_part(s, X(s)) } dB(s)
/// with K(t, s) = a int_{max(s, 0)}^{min(s + delta, t)} phi(u, s) du and K = 0 for s > t.
/// For s < 0 the integrand X(s) is the initial segment.
class VolterraKernel {
 public:
  double operator()(double t, double s) const;

  double drift_part(double t, double x) const { return drift_part_(t, x); }
  double diffusion_part(double t, double x) const { return diffusion_part_(t, x); }
  double memory_coefficient() const noexcept { return a_; }
  double delay() const noexcept { return delay_; }
  double horizon() const noexcept { return horizon_; }
  double initial_segment(double t) const { return initial_segment_(t); }

  /// Panels of the composite midpoint rule used for non-unit kernels.
  static constexpr int kQuadraturePanels = 64;

 private:
  friend VolterraKernel build_volterra_kernel(const ProblemSpec&, double, DriftPart, DriftPart);

  MemoryKernel phi_ = MemoryKernel::unit();
  DriftPart drift_part_;
  DriftPart diffusion_part_;
  ScalarFunction initial_segment_;
  double a_ = 0.0;
  double delay_ = 0.0;
  double horizon_ = 0.0;
};

/// Checks the decomposition at 100 pseudo-random points (t in [0, T],
/// x and z in [-10, 10]); a residual above 1e-9 in either drift or
/// diffusion throws ModelError.
VolterraKernel build_volterra_kernel(const ProblemSpec& problem, double a, DriftPart drift_part,
                                     DriftPart diffusion_part);

/// Left-point discretisation of the Volterra form, re-summed for every
/// output node (O(N^2)); meant as a cross-check of euler_solve.
///
///   X_n = x0 + sum_{i<n} drift_part(t_i, X_i) dt
///            + sum_{j : u_j < t_n} { K(t_n, u_{j+1}) X_j + 1[j >= origin] diffusion_part(u_j, X_j) } dB_j
///
/// The kernel's inner time is the right end u_{j+1} of the increment
/// interval, i.e. the first time dB_j is known. This mirrors the memory
/// window excluding t_i, and makes the result agree with euler_solve to
/// rounding for phi = 1 on aligned grids.
/// Requires an aligned grid; negative-side states are the initial segment.
Trajectory volterra_euler_solve(const VolterraKernel& kernel, const TimeGrid& grid,
                                const BrownianPath& path, double x0);

}  // namespace noisymem
