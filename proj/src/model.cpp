#include "noisymem/model.hpp"

#include <cmath>
#include <string>

#include "noisymem/errors.hpp"

namespace noisymem {

MemoryKernel::MemoryKernel(KernelFunction general) : general_(std::move(general)) {
  if (!general_) throw ParameterError("memory kernel must be callable");
}

MemoryKernel MemoryKernel::separable(ScalarFunction outer, ScalarFunction inner) {
  if (!outer || !inner) throw ParameterError("separable kernel factors must be callable");
  MemoryKernel k;
  k.outer_ = std::move(outer);
  k.inner_ = std::move(inner);
  k.separable_ = true;
  return k;
}

MemoryKernel MemoryKernel::unit() {
  MemoryKernel k;
  k.separable_ = true;
  k.unit_ = true;
  return k;
}

MemoryKernel MemoryKernel::zero() {
  return MemoryKernel([](double, double) { return 0.0; });
}

double MemoryKernel::operator()(double t, double s) const {
  if (unit_) return 1.0;
  if (separable_) return outer_(t) * inner_(s);
  return general_(t, s);
}

double MemoryKernel::outer(double t) const { return unit_ ? 1.0 : outer_(t); }

double MemoryKernel::inner(double s) const { return unit_ ? 1.0 : inner_(s); }

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::PaperExample:
      return "paper-example";
    case ProblemKind::PureMemoryDrift:
      return "pure-memory-drift";
    case ProblemKind::Custom:
      return "custom";
  }
  return "custom";
}

std::optional<ProblemKind> parse_problem_kind(std::string_view name) {
  if (name == "paper-example") return ProblemKind::PaperExample;
  if (name == "pure-memory-drift") return ProblemKind::PureMemoryDrift;
  return std::nullopt;
}

ProblemSpec::ProblemSpec(Coefficient drift, Coefficient diffusion, MemoryKernel kernel,
                         double delay, double horizon, ScalarFunction initial_segment,
                         ProblemKind kind)
    : drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      kernel_(std::move(kernel)),
      delay_(delay),
      horizon_(horizon),
      initial_segment_(std::move(initial_segment)),
      kind_(kind) {}

ProblemSpec make_problem(Coefficient drift, Coefficient diffusion, MemoryKernel kernel,
                         double delay, double horizon, ScalarFunction initial_segment,
                         ProblemKind kind) {
  if (!(delay > 0.0) || !std::isfinite(delay))
    throw ParameterError("delay must be positive and finite, got " + std::to_string(delay));
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ParameterError("horizon must be positive and finite, got " + std::to_string(horizon));
  if (!drift || !diffusion || !initial_segment)
    throw ParameterError("drift, diffusion and initial segment must be callable");

  for (double t : {-delay, -0.5 * delay, 0.0}) {
    if (!std::isfinite(initial_segment(t)))
      throw ModelError("initial segment is not finite at t = " + std::to_string(t));
  }
  return ProblemSpec(std::move(drift), std::move(diffusion), std::move(kernel), delay, horizon,
                     std::move(initial_segment), kind);
}

ProblemSpec paper_example(double delta) {
  return make_problem([](double, double, double) { return 0.0; },
                      [](double, double, double z) { return z; }, MemoryKernel::unit(), delta,
                      delta, [](double) { return 1.0; }, ProblemKind::PaperExample);
}

ProblemSpec pure_memory_drift(double delta, double horizon) {
  return make_problem([](double, double, double z) { return z; },
                      [](double, double, double) { return 0.0; }, MemoryKernel::unit(), delta,
                      horizon, [](double) { return 1.0; }, ProblemKind::PureMemoryDrift);
}

}  // namespace noisymem
