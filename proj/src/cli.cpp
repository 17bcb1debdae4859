#include "noisymem/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "noisymem/errors.hpp"
#include "noisymem/euler.hpp"
#include "noisymem/grid.hpp"
#include "noisymem/montecarlo.hpp"
#include "noisymem/paths.hpp"

namespace noisymem::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Simulate:
      return "simulate";
    case Command::CompareExact:
      return "compare-exact";
    case Command::Convergence:
      return "convergence";
  }
  return "simulate";
}

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Pulls --config out of the argument list and splices the file's values in
// wherever the command line does not already set them.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> config;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config") {
      if (std::next(it) == args.end()) throw UsageError("--config needs a file name");
      config = *std::next(it);
      it = args.erase(it, std::next(it, 2));
    } else if (it->rfind("--config=", 0) == 0) {
      config = it->substr(9);
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  if (!config) return args;

  std::map<std::string, std::string> values;
  try {
    values = read_config_file(*config);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }

  if (auto c = values.find("command"); c != values.end()) {
    const bool has_command = std::any_of(args.begin(), args.end(), [](const std::string& a) {
      return a == "simulate" || a == "compare-exact" || a == "convergence";
    });
    if (!has_command) args.insert(args.begin(), c->second);
    values.erase(c);
  }
  for (const auto& [key, value] : values) {
    if (has_flag(args, key)) continue;
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

std::string provenance(const ExperimentConfig& cfg, double horizon) {
  std::ostringstream os;
  os << "# noisymem " << command_name(cfg.command) << " problem=" << to_string(cfg.problem)
     << " delta=" << format_double(cfg.delta) << " horizon=" << format_double(horizon);
  if (cfg.command == Command::Convergence) {
    os << " dts=";
    for (std::size_t k = 0; k < cfg.step_counts.size(); ++k) os << (k ? "," : "") << cfg.step_counts[k];
    os << " reference_refinement=" << cfg.reference_refinement;
  } else {
    os << " n_steps=" << cfg.n_steps;
  }
  os << " paths=" << cfg.paths << " seed=" << cfg.seed << '\n';
  return os.str();
}

ProblemSpec make_builtin(const ExperimentConfig& cfg, double horizon) {
  switch (cfg.problem) {
    case ProblemKind::PaperExample:
      if (horizon != cfg.delta) throw ParameterError("paper-example requires horizon = delta");
      return paper_example(cfg.delta);
    case ProblemKind::PureMemoryDrift:
      return pure_memory_drift(cfg.delta, horizon);
    case ProblemKind::Custom:
      break;
  }
  throw ParameterError("custom problems are not available from the command line");
}

std::string simulate_csv(const ExperimentConfig& cfg, const ProblemSpec& problem) {
  if (cfg.paths < 1) throw ParameterError("simulate needs at least one path");
  const TimeGrid grid = build_grid(problem.delay(), problem.horizon(), cfg.n_steps);
  std::string csv = provenance(cfg, problem.horizon());
  csv += "time,path_id,euler_x,euler_z\n";
  for (std::size_t p = 0; p < cfg.paths; ++p) {
    const Trajectory traj = euler_solve(problem, grid, sample_path(grid, cfg.seed + p));
    for (std::size_t i = 0; i <= grid.n_steps(); ++i) {
      csv += format_double(grid.step_time(i)) + ',' + std::to_string(p) + ',' +
             format_double(traj.state_at_step(i)) + ',' + format_double(traj.memories[i]) + '\n';
    }
  }
  return csv;
}

std::string compare_exact_csv(const ExperimentConfig& cfg, const ProblemSpec& problem) {
  const TimeGrid grid = build_grid(problem.delay(), problem.horizon(), cfg.n_steps);
  const MseCurve curve = estimate_mse(problem, grid, cfg.paths, cfg.seed, {}, {cfg.threads});
  std::string csv = provenance(cfg, problem.horizon());
  csv += "time,mse,std_err\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    csv += format_double(curve.times[i]) + ',' + format_double(curve.mse[i]) + ',' +
           format_double(curve.std_errors[i]) + '\n';
  }
  return csv;
}

std::string convergence_csv(const ExperimentConfig& cfg, const ProblemSpec& problem,
                            ConvergenceReport& report) {
  report = convergence_study(problem, cfg.step_counts, cfg.paths, cfg.seed,
                             {cfg.reference_refinement, {cfg.threads}});
  std::string csv = provenance(cfg, problem.horizon());
  csv += "dt,mse,std_err\n";
  for (std::size_t k = 0; k < report.dts.size(); ++k) {
    csv += format_double(report.dts[k]) + ',' + format_double(report.terminal_mse[k]) + ',' +
           format_double(report.std_errors[k]) + '\n';
  }
  csv += "# fitted_order_mse=" + format_double(report.fitted_order_mse) +
         " fitted_order_rms=" + format_double(report.fitted_order_rms) +
         " slope_std_err=" + format_double(report.confidence) + '\n';
  return csv;
}

std::string gnuplot_script(const ExperimentConfig& cfg) {
  const std::string data = cfg.output_path;
  std::ostringstream os;
  os << "# gnuplot script written by noisymem " << command_name(cfg.command) << "\n"
     << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << data << ".png'\n"
     << "set grid\n";
  switch (cfg.command) {
    case Command::Simulate:
      os << "set xlabel 't'\nset ylabel 'X'\n"
         << "plot for [p=0:" << (cfg.paths - 1) << "] '" << data
         << "' skip 2 using ($2==p ? $1 : 1/0):3 with lines notitle\n";
      break;
    case Command::CompareExact:
      os << "set xlabel 't'\nset ylabel 'mean square error'\n"
         << "plot '" << data << "' skip 2 using 1:2 with lines dashtype 2 title 'MSE'\n";
      break;
    case Command::Convergence:
      os << "set logscale xy\nset xlabel 'dt'\nset ylabel 'terminal MSE'\n"
         << "plot '" << data << "' skip 2 using 1:2:3 with yerrorlines title 'Euler', \\\n"
         << "     '" << data << "' skip 2 using 1:($1) with lines dashtype 2 title 'slope 1'\n";
      break;
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << contents;
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file " + path.string());
  std::map<std::string, std::string> values;
  std::string line;
  for (int lineno = 1; std::getline(f, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    if (key.empty()) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": empty key");
    values[key] = trim(std::string_view(content).substr(eq + 1));
  }
  return values;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::size_t threads_from_environment() {
  const char* raw = std::getenv("NOISYMEM_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  std::size_t n = 0;
  const std::string_view s(raw);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("NOISYMEM_THREADS must be a non-negative integer, got '" + std::string(s) + "'");
  return n;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  std::string problem_name = "paper-example";
  double horizon = 0.0;

  CLI::App app{"Euler-Maruyama simulation of SDEs with noisy memory"};
  app.require_subcommand(1);
  app.add_option("--config", "Flat key=value file; command-line flags take precedence");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--delta", cfg.delta, "Memory span delta")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed of the first path")->capture_default_str();
    sub->add_option("--out", cfg.output_path, "Output CSV (stdout if omitted)");
    sub->add_option("--plot", cfg.plot_path, "Also write a gnuplot script (needs --out)");
  };

  auto* simulate = app.add_subcommand("simulate", "Euler trajectories of a built-in problem");
  add_common(simulate);
  simulate->add_option("--problem", problem_name, "paper-example | pure-memory-drift")->capture_default_str();
  simulate->add_option("--horizon", horizon, "Terminal time T (defaults to delta)");
  simulate->add_option("--n-steps", cfg.n_steps, "Number of steps N on [0, T]")->capture_default_str();
  simulate->add_option("--paths", cfg.paths, "Number of paths")->capture_default_str();

  auto* compare = app.add_subcommand("compare-exact", "Per-node MSE of Euler against the closed form");
  add_common(compare);
  compare->add_option("--n-steps", cfg.n_steps, "Number of steps N on [0, delta]")->capture_default_str();
  compare->add_option("--paths", cfg.paths, "Monte Carlo paths")->default_val(1000);

  auto* convergence = app.add_subcommand("convergence", "Terminal MSE over refinements and fitted order");
  add_common(convergence);
  convergence->add_option("--dts", cfg.step_counts, "Step counts N (dt = T/N), comma separated")
      ->required()
      ->delimiter(',');
  convergence->add_option("--paths", cfg.paths, "Monte Carlo paths")->default_val(2000);
  convergence->add_option("--ref-refine", cfg.reference_refinement,
                          "Reference grid is this many times finer than the finest N")
      ->capture_default_str();

  try {
    const std::vector<std::string> args = merge_config(raw_args);
    std::vector<const char*> argv{"noisymem"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    cfg.threads = threads_from_environment();
    if (simulate->parsed()) {
      cfg.command = Command::Simulate;
      const auto kind = parse_problem_kind(problem_name);
      if (!kind) throw ParameterError("unknown problem '" + problem_name + "'");
      cfg.problem = *kind;
      if (simulate->count("--horizon") > 0) cfg.horizon = horizon;
    } else if (compare->parsed()) {
      cfg.command = Command::CompareExact;
    } else {
      cfg.command = Command::Convergence;
    }
    if (!cfg.plot_path.empty() && cfg.output_path.empty())
      throw ParameterError("--plot needs --out so the script has a data file to read");

    const double h = cfg.horizon.value_or(cfg.delta);
    const ProblemSpec problem = make_builtin(cfg, h);

    std::string csv;
    ConvergenceReport report;
    switch (cfg.command) {
      case Command::Simulate:
        csv = simulate_csv(cfg, problem);
        break;
      case Command::CompareExact:
        csv = compare_exact_csv(cfg, problem);
        break;
      case Command::Convergence:
        csv = convergence_csv(cfg, problem, report);
        break;
    }

    if (cfg.output_path.empty()) {
      out << csv;
    } else {
      write_file(cfg.output_path, csv);
      if (cfg.command == Command::Convergence) {
        out << "fitted MSE order " << format_double(report.fitted_order_mse) << " (RMS "
            << format_double(report.fitted_order_rms) << ", slope std err "
            << format_double(report.confidence) << ")\n";
      }
      out << "wrote " << cfg.output_path << "\n";
    }
    if (!cfg.plot_path.empty()) {
      write_file(cfg.plot_path, gnuplot_script(cfg));
      out << "wrote " << cfg.plot_path << "\n";
    }
    return kExitOk;
  } catch (const NumericalBlowup& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace noisymem::cli
