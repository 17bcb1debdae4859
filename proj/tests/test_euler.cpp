#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "noisymem/errors.hpp"
#include "noisymem/euler.hpp"
#include "oracles.hpp"

using namespace noisymem;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1.0); }

ProblemSpec exp_kernel_problem() {
  // phi(t, s) = e^{-(t - s)} = e^{-t} e^{s}, with a mild drift and state diffusion.
  return make_problem([](double, double x, double z) { return -0.5 * x + z; },
                      [](double, double x, double z) { return 0.3 * x + 0.5 * z; },
                      MemoryKernel::separable([](double t) { return std::exp(-t); },
                                              [](double s) { return std::exp(s); }),
                      1.0, 2.0, [](double t) { return 1.0 + 0.5 * t; });
}

}  // namespace

TEST_CASE("zero dynamics keep the initial value") {
  const auto p = make_problem([](double, double, double) { return 0.0; },
                              [](double, double, double) { return 0.0; }, MemoryKernel::unit(),
                              1.0, 1.0, [](double) { return 1.0; });
  const auto g = build_grid(1.0, 1.0, 10);
  const auto traj = euler_solve(p, g, sample_path(g, 3));
  for (std::size_t i = 0; i <= 10; ++i) CHECK(traj.state_at_step(i) == 1.0);
}

TEST_CASE("zero kernel reduces to classical Euler on x' = x") {
  const auto p = make_problem([](double, double x, double) { return x; },
                              [](double, double, double) { return 0.0; }, MemoryKernel::zero(), 1.0,
                              1.0, [](double) { return 1.0; });
  const auto g = build_grid(1.0, 1.0, 20);
  const auto traj = euler_solve(p, g, sample_path(g, 3));
  for (std::size_t i = 0; i <= 20; ++i) {
    CHECK(traj.memories[i] == 0.0);
    CHECK(traj.state_at_step(i) == doctest::Approx(std::pow(1.05, static_cast<double>(i))).epsilon(1e-13));
  }
}

TEST_CASE("paper example matches full re-summation at N = 8") {
  const auto p = paper_example(1.0);
  const auto g = build_grid(1.0, 1.0, 8);
  const auto path = sample_path(g, 2024);
  const auto traj = euler_solve(p, g, path);
  const auto ref = oracle::naive_euler(p, path);
  for (std::size_t j = 0; j < g.node_count(); ++j) CHECK(rel_err(traj.states[j], ref.states[j]) <= 1e-12);
  for (std::size_t i = 0; i <= 8; ++i) CHECK(rel_err(traj.memories[i], ref.memories[i]) <= 1e-12);
  // Negative side is the initial segment, exactly.
  for (std::size_t j = 0; j < g.origin_index(); ++j) CHECK(traj.states[j] == 1.0);
}

TEST_CASE("pure memory drift steps by Z_i dt") {
  const auto p = pure_memory_drift(1.0, 1.0);
  const auto g = build_grid(1.0, 1.0, 32);
  const auto traj = euler_solve(p, g, sample_path(g, 17));
  for (std::size_t i = 0; i < 32; ++i)
    CHECK(traj.state_at_step(i + 1) - traj.state_at_step(i) ==
          doctest::Approx(traj.memories[i] * g.dt()).epsilon(1e-12));
}

TEST_CASE("discrete_memory") {
  const auto g = build_grid(1.0, 1.0, 8);
  const auto path = sample_path(g, 8);
  std::vector<double> ones(g.node_count(), 1.0);

  const auto unit = paper_example(1.0);
  for (std::size_t i = 0; i <= 8; ++i) {
    // Telescoping: B(t_i) - B(t_i - delta).
    const double expected = path.value_at(g.step_node(i)) - path.value_at(i);
    CHECK(discrete_memory(unit, g, path, ones, i) == doctest::Approx(expected).epsilon(1e-12));
  }

  const auto zero = make_problem([](double, double, double) { return 0.0; },
                                 [](double, double, double) { return 0.0; }, MemoryKernel::zero(),
                                 1.0, 1.0, [](double) { return 1.0; });
  CHECK(discrete_memory(zero, g, path, ones, 5) == 0.0);

  const auto affine = make_problem([](double, double, double) { return 0.0; },
                                   [](double, double, double) { return 0.0; },
                                   MemoryKernel([](double, double s) { return s + 2.0; }), 1.0, 1.0,
                                   [](double) { return 1.0; });
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::vector<double> states(g.node_count());
  for (auto& s : states) s = nd(rng);
  for (std::size_t i = 0; i <= 8; ++i) {
    double naive = 0;
    for (std::size_t j = i; j < g.step_node(i); ++j) naive += (g.node(j) + 2.0) * states[j] * path.increment(j);
    CHECK(std::abs(discrete_memory(affine, g, path, states, i) - naive) <= 1e-12 * std::max(1.0, std::abs(naive)));
  }
}

TEST_CASE("sliding and naive memory agree for separable kernels") {
  const auto p = exp_kernel_problem();
  const auto g = build_grid(1.0, 2.0, 128);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto path = sample_path(g, seed);
    const auto fast = euler_solve(p, g, path);
    const auto slow = euler_solve(p, g, path, MemoryEvaluation::Naive);
    const auto ref = oracle::naive_euler(p, path);
    for (std::size_t j = 0; j < g.node_count(); ++j) {
      CHECK(rel_err(fast.states[j], slow.states[j]) <= 1e-10);
      CHECK(rel_err(slow.states[j], ref.states[j]) <= 1e-12);
    }
    for (std::size_t i = 0; i <= g.n_steps(); ++i) CHECK(rel_err(fast.memories[i], ref.memories[i]) <= 1e-10);
  }
}

TEST_CASE("misaligned grid solves through the general window") {
  const auto p = make_problem([](double, double x, double z) { return z - x; },
                              [](double, double, double z) { return z; },
                              MemoryKernel([](double t, double s) { return std::cos(t - s); }), 0.57,
                              1.0, [](double t) { return 1.0 + t; });
  const auto g = build_grid(0.57, 1.0, 20);
  REQUIRE_FALSE(g.aligned());
  const auto path = sample_path(g, 4);
  const auto traj = euler_solve(p, g, path);
  const auto ref = oracle::naive_euler(p, path);
  for (std::size_t j = 0; j < g.node_count(); ++j) CHECK(rel_err(traj.states[j], ref.states[j]) <= 1e-12);
}

TEST_CASE("memory never reads the current or future increments") {
  const auto p = exp_kernel_problem();
  const auto g = build_grid(1.0, 2.0, 16);
  const auto path = sample_path(g, 99);
  const auto traj = euler_solve(p, g, path);
  for (std::size_t i = 0; i <= g.n_steps(); ++i) {
    std::vector<double> poisoned(path.increments().begin(), path.increments().end());
    for (std::size_t j = g.step_node(i); j < poisoned.size(); ++j) poisoned[j] = std::numeric_limits<double>::quiet_NaN();
    const auto bad = BrownianPath::from_increments(g, poisoned);
    const double z = discrete_memory(p, g, bad, traj.states, i);
    CHECK(std::abs(z - traj.memories[i]) <= 1e-12 * std::max(1.0, std::abs(z)));
  }
}

TEST_CASE("non-finite coefficients fail fast with the step index") {
  const auto p = make_problem([](double t, double, double) { return t > 0.35 ? std::numeric_limits<double>::infinity() : 0.0; },
                              [](double, double, double) { return 0.0; }, MemoryKernel::unit(), 1.0,
                              1.0, [](double) { return 1.0; });
  const auto g = build_grid(1.0, 1.0, 10);
  try {
    euler_solve(p, g, sample_path(g, 1));
    FAIL("expected NumericalBlowup");
  } catch (const NumericalBlowup& e) {
    CHECK(e.step() == 4);
  }

  const auto bad_kernel = make_problem([](double, double, double) { return 0.0; },
                                       [](double, double, double) { return 0.0; },
                                       MemoryKernel([](double, double) { return std::nan(""); }), 1.0,
                                       1.0, [](double) { return 1.0; });
  CHECK_THROWS_AS(euler_solve(bad_kernel, g, sample_path(g, 1)), NumericalBlowup);
}

TEST_CASE("mismatched inputs are rejected") {
  const auto p = paper_example(1.0);
  const auto g = build_grid(1.0, 1.0, 10);
  CHECK_THROWS_AS(euler_solve(p, g, sample_path(build_grid(1.0, 1.0, 20), 1)), ParameterError);
  const auto other = build_grid(2.0, 1.0, 10);
  CHECK_THROWS_AS(euler_solve(p, other, sample_path(other, 1)), ParameterError);
}
