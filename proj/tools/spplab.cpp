#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "spp/adversarial.hpp"
#include "spp/distributions.hpp"
#include "spp/errors.hpp"
#include "spp/experiment.hpp"
#include "spp/revenue.hpp"

namespace fs = std::filesystem;
using namespace spp;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_fit_outputs(const std::vector<ResultRow>& rows, const fs::path& dir, bool plot, const std::string& title) {
  if (rows.empty()) return;
  ScalingFit fit;
  try {
    fit = fit_scaling(rows, rows.front().learner, rows.front().n);
  } catch (const ContractError& e) {
    std::cerr << "fit skipped: " << e.what() << '\n';
    return;
  }
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';
  auto out = open_out(dir / "fit.json");
  out << fit_to_json(fit).dump(2) << '\n';
  std::cout << "exponent " << fit.exponent << "  r^2 " << fit.r_squared << '\n';
  if (plot) {
    auto svg = open_out(dir / "regret.svg");
    write_regret_svg(svg, fit, title);
  }
}

int cmd_run(const std::string& config_path, std::string out_dir, int seeds, bool plot) {
  auto cfg = load_experiment_config(config_path);
  if (seeds >= 0) {
    cfg.seeds.clear();
    for (int k = 1; k <= seeds; ++k) cfg.seeds.push_back(static_cast<std::uint64_t>(k));
  }
  if (out_dir.empty()) out_dir = cfg.output;
  const fs::path dir(out_dir);

  const auto replicas = run_experiment_detailed(cfg);
  std::vector<ResultRow> rows;
  bool replay_failed = false;
  for (const auto& r : replicas) {
    rows.push_back(r.row);
    const auto stem = "T" + std::to_string(r.row.horizon) + "_seed" + std::to_string(r.row.seed) + ".csv";
    if (cfg.phase_logs) open_out(dir / "phases" / stem) << r.phase_csv;
    if (!r.round_log_csv.empty()) open_out(dir / "rounds" / stem) << r.round_log_csv;
    if (r.replay_ok && !*r.replay_ok) {
      std::cerr << "replay check failed for T=" << r.row.horizon << " seed=" << r.row.seed << '\n';
      replay_failed = true;
    }
  }
  {
    auto out = open_out(dir / "results.csv");
    write_results_csv(out, rows);
  }
  std::cout << rows.size() << " rows written to " << (dir / "results.csv").string() << '\n';
  write_fit_outputs(rows, dir, plot, cfg.name);
  return replay_failed ? 3 : 0;
}

int cmd_fit(const std::string& results, std::string learner, std::size_t n, const std::string& out_dir, bool plot) {
  std::ifstream in(results);
  if (!in) throw ConfigError("results", "cannot open " + results);
  const auto rows = read_results_csv(in);
  if (rows.empty()) throw ConfigError("results", "no rows");
  if (learner.empty()) learner = rows.front().learner;
  if (n == 0) n = rows.front().n;
  const auto fit = fit_scaling(rows, learner, n);
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << fit_to_json(fit).dump(2) << '\n';
  if (!out_dir.empty()) {
    open_out(fs::path(out_dir) / "fit.json") << fit_to_json(fit).dump(2) << '\n';
    if (plot) {
      auto svg = open_out(fs::path(out_dir) / "regret.svg");
      write_regret_svg(svg, fit, learner + ", n = " + std::to_string(n));
    }
  }
  return 0;
}

int cmd_verify(double grid) {
  bool ok = true;
  std::cout << std::left << std::setw(40) << "distribution" << std::setw(10) << "regular" << std::setw(14)
            << "half-concave" << "peak\n";
  for (const auto& [name, dist] : distribution_suite()) {
    const auto reg = check_regularity(dist, grid);
    const auto half = check_half_concavity(dist, grid);
    const std::string r = reg.applicable ? (reg.regular ? "yes" : "no") : "n/a";
    std::cout << std::setw(40) << name << std::setw(10) << r << std::setw(14) << (half.passed() ? "yes" : "no")
              << half.peak << '\n';
    if (reg.regular && !half.passed()) ok = false;
  }
  if (!ok) std::cerr << "a regular distribution failed the half-concavity check\n";
  return ok ? 0 : 4;
}

int cmd_optimal(const std::string& config_path, double step) {
  const auto cfg = load_experiment_config(config_path);
  const auto opt = optimal_prices_dp(RevenueModel(cfg.model), step);
  std::cout << std::setprecision(10) << "value " << opt.value << "\nprices";
  for (double p : opt.prices) std::cout << ' ' << p;
  std::cout << '\n';
  return 0;
}

int cmd_lowerbound(std::int64_t horizon, int seeds, double eps_lb, const std::string& out_dir) {
  if (horizon < 1 || horizon > kMaxAdversarialHorizon) throw ConfigError("horizon", "out of range");
  if (!(eps_lb > 0.0 && eps_lb < 0.5)) throw ConfigError("eps_lb", "must lie in (0, 0.5)");
  std::vector<std::uint64_t> seed_list;
  for (int k = 1; k <= seeds; ++k) seed_list.push_back(static_cast<std::uint64_t>(k));
  const auto rows = run_lowerbound(horizon, seed_list, eps_lb);
  if (out_dir.empty()) {
    write_adversarial_csv(std::cout, rows);
  } else {
    auto out = open_out(fs::path(out_dir) / "lowerbound.csv");
    write_adversarial_csv(out, rows);
  }
  std::map<std::string, std::pair<double, int>> means;
  for (const auto& r : rows) {
    auto& m = means[r.strategy];
    m.first += r.total_revenue / static_cast<double>(r.horizon);
    ++m.second;
  }
  for (const auto& [name, m] : means) std::cerr << name << ": mean revenue per round " << m.first / m.second << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit sequential posted pricing lab"};
  app.require_subcommand(1);

  std::string config, out, results, learner;
  int seeds = -1;
  bool plot = false;
  std::size_t n = 0;
  double grid = 1e-3, step = 1e-4, eps_lb = 1e-6;
  std::int64_t horizon = 10000;
  int lb_seeds = 50;

  auto* run = app.add_subcommand("run", "Run seeded replicas of an experiment config");
  run->add_option("--config", config, "Experiment config (JSON)")->required();
  run->add_option("--out", out, "Output directory (defaults to the config's output)");
  run->add_option("--seeds", seeds, "Use seeds 1..N instead of the config's seeds")->check(CLI::NonNegativeNumber);
  run->add_flag("--plot", plot, "Write regret.svg");

  auto* fit = app.add_subcommand("fit", "Fit the regret-scaling exponent of a results CSV");
  fit->add_option("--results", results, "results.csv")->required();
  fit->add_option("--learner", learner, "Learner to fit (defaults to the first row's)");
  fit->add_option("--n", n, "Buyer count to fit (defaults to the first row's)");
  fit->add_option("--out", out, "Directory for fit.json and the plot");
  fit->add_flag("--plot", plot, "Write regret.svg (needs --out)");

  auto* verify = app.add_subcommand("verify-distributions", "Regularity and half-concavity of the suite");
  verify->add_option("--grid", grid, "Grid step")->check(CLI::Range(1e-5, 0.1));

  auto* optimal = app.add_subcommand("optimal", "Print the optimal prices of a config's model");
  optimal->add_option("--config", config, "Experiment config (JSON)")->required();
  optimal->add_option("--grid-step", step, "Oracle grid step");

  auto* lower = app.add_subcommand("lowerbound", "Adversarial instance: fixed threshold against online learners");
  lower->add_option("--horizon", horizon, "Rounds per instance");
  lower->add_option("--seeds", lb_seeds, "Seeds 1..N")->check(CLI::NonNegativeNumber);
  lower->add_option("--eps-lb", eps_lb, "Width of the first buyer's value band");
  lower->add_option("--out", out, "Directory for lowerbound.csv (stdout otherwise)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out, seeds, plot);
    if (*fit) return cmd_fit(results, learner, n, out, plot);
    if (*verify) return cmd_verify(grid);
    if (*optimal) return cmd_optimal(config, step);
    if (*lower) return cmd_lowerbound(horizon, lb_seeds, eps_lb, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
