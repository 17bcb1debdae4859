#pragma once

#include <functional>
#include <optional>
#include <string_view>

namespace noisymem {

/// Coefficient b(t, x, z) or sigma(t, x, z) of the noisy-memory SDE
///
///   dX(t) = b(t, X(t), Z(t)) dt + sigma(t, X(t), Z(t)) dB(t),  t in (0, T]
///   X(t)  = xi(t),                                              t in [-delta, 0]
///   Z(t)  = int_{t-delta}^{t} phi(t, s) X(s) dB(s).
///
/// Coefficients are expected to be Lipschitz with linear growth in (x, z);
/// this is not checked. They must be re-entrant: solves run concurrently.
using Coefficient = std::function<double(double t, double x, double z)>;
using KernelFunction = std::function<double(double t, double s)>;
using ScalarFunction = std::function<double(double)>;

/// Memory kernel phi(t, s). Either an arbitrary function of two times, or a
/// separable product outer(t) * inner(s), which lets the solver keep a
/// running window sum instead of re-summing the whole window every step.
/// phi is assumed square integrable over the simulation domain.
class MemoryKernel {
 public:
  MemoryKernel(KernelFunction general);

  static MemoryKernel separable(ScalarFunction outer, ScalarFunction inner);
  /// phi(t, s) = 1, the non-generalized noisy memory.
  static MemoryKernel unit();
  static MemoryKernel zero();

  double operator()(double t, double s) const;

  bool is_separable() const noexcept { return separable_; }
  bool is_unit() const noexcept { return unit_; }

  /// Only meaningful when is_separable(). A unit kernel reports outer = inner = 1.
  double outer(double t) const;
  double inner(double s) const;

 private:
  MemoryKernel() = default;

  KernelFunction general_;
  ScalarFunction outer_;
  ScalarFunction inner_;
  bool separable_ = false;
  bool unit_ = false;
};

enum class ProblemKind { PaperExample, PureMemoryDrift, Custom };

std::string_view to_string(ProblemKind kind);
std::optional<ProblemKind> parse_problem_kind(std::string_view name);

/// Immutable description of one noisy-memory SDE. Build with make_problem or
/// one of the built-in factories.
class ProblemSpec {
 public:
  double drift(double t, double x, double z) const { return drift_(t, x, z); }
  double diffusion(double t, double x, double z) const { return diffusion_(t, x, z); }
  double kernel(double t, double s) const { return kernel_(t, s); }
  double initial_segment(double t) const { return initial_segment_(t); }

  const MemoryKernel& memory_kernel() const noexcept { return kernel_; }
  double delay() const noexcept { return delay_; }
  double horizon() const noexcept { return horizon_; }
  ProblemKind kind() const noexcept { return kind_; }

 private:
  friend ProblemSpec make_problem(Coefficient, Coefficient, MemoryKernel, double, double,
                                  ScalarFunction, ProblemKind);

  ProblemSpec(Coefficient drift, Coefficient diffusion, MemoryKernel kernel, double delay,
              double horizon, ScalarFunction initial_segment, ProblemKind kind);

  Coefficient drift_;
  Coefficient diffusion_;
  MemoryKernel kernel_;
  double delay_;
  double horizon_;
  ScalarFunction initial_segment_;
  ProblemKind kind_;
};

/// Throws ParameterError for non-positive delay or horizon and ModelError if
/// the initial segment is not finite at -delta, -delta/2 or 0.
ProblemSpec make_problem(Coefficient drift, Coefficient diffusion, MemoryKernel kernel,
                         double delay, double horizon, ScalarFunction initial_segment,
                         ProblemKind kind = ProblemKind::Custom);

/// dX = Z dB with phi = 1, xi = 1 and T = delta. The only built-in problem
/// with a closed-form solution (see exact.hpp).
ProblemSpec paper_example(double delta);

/// dX = Z dt with phi = 1, sigma = 0, xi = 1.
ProblemSpec pure_memory_drift(double delta, double horizon);

}  // namespace noisymem
