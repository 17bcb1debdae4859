#include <doctest.h>

#include <cmath>

#include "noisymem/errors.hpp"
#include "noisymem/euler.hpp"
#include "noisymem/montecarlo.hpp"

using namespace noisymem;

TEST_CASE("order fit on manufactured data") {
  const std::vector<double> dts{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  std::vector<double> linear, constant, quadratic;
  for (double dt : dts) {
    linear.push_back(0.7 * dt);
    constant.push_back(0.3);
    quadratic.push_back(2.0 * dt * dt);
  }
  const auto fit = fit_convergence_order(dts, linear);
  CHECK(std::abs(fit.slope - 1.0) <= 1e-12);
  CHECK(fit.slope_std_error <= 1e-12);
  CHECK(std::abs(fit_convergence_order(dts, constant).slope) <= 1e-12);
  CHECK(fit_convergence_order(dts, quadratic).slope == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_convergence_order(dts, std::vector<double>{1, 2, 0, 1}), ParameterError);
  CHECK_THROWS_AS(fit_convergence_order(std::vector<double>{0.1}, std::vector<double>{1}), ParameterError);
}

TEST_CASE("self-reference gives zero error") {
  const auto p = paper_example(1.0);
  const auto g = build_grid(1.0, 1.0, 50);
  const auto curve = estimate_mse(p, g, 40, 3, [](const ProblemSpec& prob, const BrownianPath& path) {
    const auto traj = euler_solve(prob, path);
    std::vector<double> x(path.grid().n_steps() + 1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = traj.state_at_step(i);
    return x;
  });
  for (double m : curve.mse) CHECK(m == 0.0);
}

TEST_CASE("mse curve basics and reproducibility") {
  const auto p = paper_example(1.0);
  const auto g = build_grid(1.0, 1.0, 100);
  const auto a = estimate_mse(p, g, 200, 7, {}, {1});
  const auto b = estimate_mse(p, g, 200, 7, {}, {4});
  CHECK(a.mse.size() == 101);
  CHECK(a.times.front() == 0.0);
  CHECK(a.times.back() == 1.0);
  CHECK(a.mse.front() == 0.0);
  CHECK(a.mse == b.mse);
  CHECK(a.std_errors == b.std_errors);
  for (std::size_t i = 0; i < a.mse.size(); ++i) {
    CHECK(std::isfinite(a.mse[i]));
    CHECK(a.mse[i] >= 0.0);
  }
  CHECK_THROWS_AS(estimate_mse(p, g, 1, 7), ParameterError);
  CHECK_THROWS_AS(estimate_mse(pure_memory_drift(1.0, 1.0), g, 10, 7), ParameterError);
}

TEST_CASE("doubling the sample with disjoint seeds stays within 4 pooled standard errors") {
  const auto p = paper_example(1.0);
  const auto g = build_grid(1.0, 1.0, 100);
  const std::size_t n = 1000;
  const auto a = estimate_mse(p, g, n, 10);
  const auto b = estimate_mse(p, g, 2 * n, 10 + n);
  for (std::size_t i = 1; i < a.mse.size(); ++i) {
    const double pooled = std::sqrt(a.std_errors[i] * a.std_errors[i] + b.std_errors[i] * b.std_errors[i]);
    CHECK(std::abs(a.mse[i] - b.mse[i]) < 4 * pooled);
  }
}

TEST_CASE("reduction is independent of the thread count") {
  auto observe = [](std::uint64_t seed, std::span<double> out) {
    const double u = static_cast<double>(mix_seed(seed) >> 11) * 0x1.0p-53;
    out[0] = u;
    out[1] = u * u * 1e8;
  };
  const auto one = accumulate_over_paths(1003, 5, 2, observe, {1});
  const auto many = accumulate_over_paths(1003, 5, 2, observe, {8});
  CHECK(one.n_paths == 1003);
  CHECK(one.mean == many.mean);
  CHECK(one.variance == many.variance);
  CHECK(one.mean[0] == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("worker exceptions propagate") {
  auto observe = [](std::uint64_t seed, std::span<double>) {
    if (seed == 40) throw ModelError("boom");
  };
  CHECK_THROWS_AS(accumulate_over_paths(100, 0, 1, observe, {3}), ModelError);
}

TEST_CASE("moments are finite") {
  const auto p = paper_example(1.0);
  const auto g = build_grid(1.0, 1.0, 100);
  const auto m = estimate_moments(p, g, 500, 1);
  CHECK(m.state_second_moment.front() == 1.0);
  CHECK(std::isfinite(m.max_state_second_moment()));
  CHECK(std::isfinite(m.max_memory_second_moment()));
  CHECK(m.max_state_second_moment() >= 1.0);
}

TEST_CASE("convergence study argument checks") {
  const auto p = paper_example(1.0);
  CHECK_THROWS_AS(convergence_study(p, {32, 48}, 10, 1), ParameterError);
  CHECK_THROWS_AS(convergence_study(p, {32}, 10, 1), ParameterError);
  CHECK_THROWS_AS(convergence_study(p, {32, 64}, 1, 1), ParameterError);
  CHECK_THROWS_AS(convergence_study(p, {32, 32}, 10, 1), ParameterError);
  CHECK_THROWS_AS(convergence_study(pure_memory_drift(1.0, 1.0), {32, 64}, 10, 1), ParameterError);
}

TEST_CASE("convergence study: ordering, determinism, monotone refinement") {
  const auto p = paper_example(1.0);
  const auto a = convergence_study(p, {512, 16, 64, 32, 256, 128}, 2000, 3, {4, {2}});
  const auto b = convergence_study(p, {16, 32, 64, 128, 256, 512}, 2000, 3, {4, {1}});
  CHECK(a.step_counts == std::vector<std::size_t>{16, 32, 64, 128, 256, 512});
  CHECK(a.reference_steps == 2048);
  for (std::size_t k = 1; k < a.dts.size(); ++k) CHECK(a.dts[k] < a.dts[k - 1]);
  CHECK(a.terminal_mse == b.terminal_mse);
  CHECK(a.fitted_order_mse == b.fitted_order_mse);
  CHECK(a.fitted_order_rms == a.fitted_order_mse / 2);

  int decreasing = 0;
  for (std::size_t k = 1; k < a.terminal_mse.size(); ++k)
    if (a.terminal_mse[k] < a.terminal_mse[k - 1]) ++decreasing;
  CHECK(decreasing >= 4);
}
