#include "noisymem/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "noisymem/errors.hpp"
#include "noisymem/euler.hpp"
#include "noisymem/exact.hpp"

namespace noisymem {

namespace {

constexpr std::size_t kBlockPaths = 16;

// Welford accumulators for a vector of observables.
struct Moments {
  std::size_t count = 0;
  std::vector<double> mean;
  std::vector<double> m2;

  explicit Moments(std::size_t width) : mean(width, 0.0), m2(width, 0.0) {}

  void add(std::span<const double> x) {
    ++count;
    const double n = static_cast<double>(count);
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double d = x[k] - mean[k];
      mean[k] += d / n;
      m2[k] += d * (x[k] - mean[k]);
    }
  }

  // Chan et al. pairwise combination.
  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double n = na + nb;
    for (std::size_t k = 0; k < mean.size(); ++k) {
      const double d = other.mean[k] - mean[k];
      mean[k] += d * nb / n;
      m2[k] += other.m2[k] + d * d * na * nb / n;
    }
    count += other.count;
  }
};

std::vector<double> positive_times(const TimeGrid& grid) {
  std::vector<double> t(grid.n_steps() + 1);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = grid.step_time(i);
  return t;
}

std::vector<double> closed_form_reference(const ProblemSpec& problem, const BrownianPath& path) {
  const ExactSolution sol = exact_solve(problem.delay(), path.grid(), path);
  std::vector<double> x(sol.y_values.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = sol.first_component(i);
  return x;
}

void require_paper_example(const ProblemSpec& problem) {
  if (problem.kind() != ProblemKind::PaperExample) {
    throw ParameterError("only the paper example has a closed-form reference; supply a reference solver");
  }
}

}  // namespace

std::size_t resolve_threads(std::size_t requested) noexcept {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

double PathStatistics::std_error(std::size_t k) const {
  return std::sqrt(variance[k] / static_cast<double>(n_paths));
}

PathStatistics accumulate_over_paths(std::size_t n_paths, std::uint64_t base_seed,
                                     std::size_t width, const PathObserver& observe,
                                     ParallelOptions options) {
  const std::size_t n_blocks = (n_paths + kBlockPaths - 1) / kBlockPaths;
  std::vector<Moments> blocks(n_blocks, Moments(width));
  std::vector<std::exception_ptr> errors(n_blocks);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    std::vector<double> out(width);
    for (std::size_t b = next++; b < n_blocks; b = next++) {
      try {
        const std::size_t end = std::min(n_paths, (b + 1) * kBlockPaths);
        for (std::size_t p = b * kBlockPaths; p < end; ++p) {
          std::fill(out.begin(), out.end(), 0.0);
          observe(base_seed + p, out);
          blocks[b].add(out);
        }
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::min(resolve_threads(options.threads), std::max<std::size_t>(1, n_blocks));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(work);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Moments total(width);
  for (const auto& b : blocks) total.merge(b);

  PathStatistics stats;
  stats.n_paths = total.count;
  stats.mean = std::move(total.mean);
  stats.variance.resize(width);
  const double denom = total.count > 1 ? static_cast<double>(total.count - 1) : 1.0;
  for (std::size_t k = 0; k < width; ++k) stats.variance[k] = total.m2[k] / denom;
  return stats;
}

MseCurve estimate_mse(const ProblemSpec& problem, const TimeGrid& grid, std::size_t n_paths,
                      std::uint64_t base_seed, const ReferenceSolver& reference,
                      ParallelOptions options) {
  if (n_paths < 2) throw ParameterError("need at least two paths for a Monte Carlo estimate");
  if (!reference) require_paper_example(problem);
  const ReferenceSolver solve_reference = reference ? reference : ReferenceSolver(closed_form_reference);

  const std::size_t width = grid.n_steps() + 1;
  const auto stats = accumulate_over_paths(
      n_paths, base_seed, width,
      [&](std::uint64_t seed, std::span<double> out) {
        const BrownianPath path = sample_path(grid, seed);
        const Trajectory euler = euler_solve(problem, grid, path);
        const std::vector<double> ref = solve_reference(problem, path);
        if (ref.size() != width) throw ParameterError("reference solver returned the wrong number of nodes");
        for (std::size_t i = 0; i < width; ++i) {
          const double e = ref[i] - euler.state_at_step(i);
          out[i] = e * e;
        }
      },
      options);

  MseCurve curve;
  curve.times = positive_times(grid);
  curve.mse = stats.mean;
  curve.std_errors.resize(width);
  for (std::size_t i = 0; i < width; ++i) curve.std_errors[i] = stats.std_error(i);
  curve.n_paths = n_paths;
  return curve;
}

double MomentCurves::max_state_second_moment() const {
  return *std::max_element(state_second_moment.begin(), state_second_moment.end());
}

double MomentCurves::max_memory_second_moment() const {
  return *std::max_element(memory_second_moment.begin(), memory_second_moment.end());
}

MomentCurves estimate_moments(const ProblemSpec& problem, const TimeGrid& grid,
                              std::size_t n_paths, std::uint64_t base_seed,
                              ParallelOptions options) {
  if (n_paths < 2) throw ParameterError("need at least two paths for a Monte Carlo estimate");
  const std::size_t nodes = grid.n_steps() + 1;
  const auto stats = accumulate_over_paths(
      n_paths, base_seed, 2 * nodes,
      [&](std::uint64_t seed, std::span<double> out) {
        const Trajectory traj = euler_solve(problem, grid, sample_path(grid, seed));
        for (std::size_t i = 0; i < nodes; ++i) {
          const double x = traj.state_at_step(i);
          const double z = traj.memories[i];
          out[i] = x * x;
          out[nodes + i] = z * z;
        }
      },
      options);

  MomentCurves curves;
  curves.times = positive_times(grid);
  curves.state_second_moment.assign(stats.mean.begin(), stats.mean.begin() + static_cast<std::ptrdiff_t>(nodes));
  curves.memory_second_moment.assign(stats.mean.begin() + static_cast<std::ptrdiff_t>(nodes), stats.mean.end());
  curves.n_paths = n_paths;
  return curves;
}

OrderFit fit_convergence_order(std::span<const double> dts, std::span<const double> mse) {
  if (dts.size() != mse.size()) throw ParameterError("dts and mse differ in length");
  if (dts.size() < 2) throw ParameterError("need at least two points to fit an order");

  const std::size_t n = dts.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(dts[k] > 0.0) || !(mse[k] > 0.0))
      throw ParameterError("log-log fit needs positive dt and mse values");
    lx[k] = std::log(dts[k]);
    ly[k] = std::log(mse[k]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 0.0)) throw ParameterError("dts must not all be equal");

  OrderFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ssr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = ly[k] - (fit.intercept + fit.slope * lx[k]);
      ssr += r * r;
    }
    fit.slope_std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

ConvergenceReport convergence_study(const ProblemSpec& problem, std::vector<std::size_t> step_counts,
                                    std::size_t n_paths, std::uint64_t base_seed,
                                    ConvergenceOptions options) {
  require_paper_example(problem);
  if (n_paths < 2) throw ParameterError("need at least two paths for a Monte Carlo estimate");
  if (step_counts.size() < 2) throw ParameterError("a convergence study needs at least two step sizes");
  if (options.reference_refinement == 0) throw ParameterError("reference refinement must be positive");

  std::sort(step_counts.begin(), step_counts.end());
  if (std::adjacent_find(step_counts.begin(), step_counts.end()) != step_counts.end())
    throw ParameterError("step sizes must be distinct");
  const std::size_t finest = step_counts.back();
  for (std::size_t n : step_counts) {
    if (n == 0 || finest % n != 0) {
      throw ParameterError("step count " + std::to_string(n) + " does not divide the finest step count " +
                           std::to_string(finest));
    }
  }

  const std::size_t reference_steps = finest * options.reference_refinement;
  const TimeGrid reference_grid = build_grid(problem.delay(), problem.horizon(), reference_steps);
  for (std::size_t n : step_counts) build_grid(problem.delay(), problem.horizon(), n);

  const std::size_t levels = step_counts.size();
  const auto stats = accumulate_over_paths(
      n_paths, base_seed, levels,
      [&](std::uint64_t seed, std::span<double> out) {
        const BrownianPath fine = sample_path(reference_grid, seed);
        const double exact = exact_solve(problem.delay(), reference_grid, fine).terminal_value();
        for (std::size_t k = 0; k < levels; ++k) {
          const BrownianPath coarse = coarsen(fine, reference_steps / step_counts[k]);
          const double e = exact - euler_solve(problem, coarse).terminal_state();
          out[k] = e * e;
        }
      },
      options.parallel);

  ConvergenceReport report;
  report.step_counts = step_counts;
  report.n_paths = n_paths;
  report.reference_steps = reference_steps;
  for (std::size_t k = 0; k < levels; ++k) {
    report.dts.push_back(problem.horizon() / static_cast<double>(step_counts[k]));
    report.terminal_mse.push_back(stats.mean[k]);
    report.std_errors.push_back(stats.std_error(k));
  }
  const OrderFit fit = fit_convergence_order(report.dts, report.terminal_mse);
  report.fitted_order_mse = fit.slope;
  report.fitted_order_rms = fit.slope / 2.0;
  report.confidence = fit.slope_std_error;
  return report;
}

}  // namespace noisymem
