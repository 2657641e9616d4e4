#include "spp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "spp/environment.hpp"
#include "spp/errors.hpp"
#include "spp/general_discrete.hpp"
#include "spp/multi_regular.hpp"
#include "spp/single_regular.hpp"

namespace spp {

using nlohmann::json;

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::SingleRegular:
      return "single_regular";
    case LearnerKind::MultiRegular:
      return "multi_regular";
    case LearnerKind::General:
      return "general";
    case LearnerKind::FixedOracle:
      return "fixed_oracle";
  }
  return "unknown";
}

LearnerKind learner_from_string(const std::string& name, const std::string& path) {
  if (name == "single_regular") return LearnerKind::SingleRegular;
  if (name == "multi_regular") return LearnerKind::MultiRegular;
  if (name == "general") return LearnerKind::General;
  if (name == "fixed_oracle") return LearnerKind::FixedOracle;
  throw ConfigError(path, "unknown learner '" + name + "'");
}

namespace {

bool is_nonnegative_integer(const nlohmann::json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

double number_at(const json& j, const char* key, const std::string& path) {
  const std::string where = path.empty() ? key : path + "." + key;
  if (!j.contains(key)) throw ConfigError(where, "missing field");
  if (!j.at(key).is_number()) throw ConfigError(where, "expected a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, const std::string& path, double fallback) {
  return j.contains(key) ? number_at(j, key, path) : fallback;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

template <class F>
auto rethrow_as_config(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ContractError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

ValueDistribution parse_distribution(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw ConfigError(path + ".family", "missing or not a string");
  }
  const auto family = j.at("family").get<std::string>();
  return rethrow_as_config(path, [&] {
    if (family == "uniform") {
      check_keys(j, path, {"family", "lo", "hi"});
      return ValueDistribution::uniform(number_or(j, "lo", path, 0.0), number_or(j, "hi", path, 1.0));
    }
    if (family == "truncated_exponential") {
      check_keys(j, path, {"family", "rate"});
      return ValueDistribution::truncated_exponential(number_at(j, "rate", path));
    }
    if (family == "piecewise_linear") {
      check_keys(j, path, {"family", "knots"});
      if (!j.contains("knots") || !j.at("knots").is_array()) throw ConfigError(path + ".knots", "expected an array");
      std::vector<std::pair<double, double>> knots;
      const auto& arr = j.at("knots");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto where = path + ".knots[" + std::to_string(i) + "]";
        const auto xy = numbers(arr[i], where);
        if (xy.size() != 2) throw ConfigError(where, "expected [x, F]");
        knots.emplace_back(xy[0], xy[1]);
      }
      return ValueDistribution::piecewise_linear(knots);
    }
    if (family == "discrete") {
      check_keys(j, path, {"family", "values", "probs"});
      if (!j.contains("values") || !j.contains("probs")) throw ConfigError(path, "needs values and probs");
      return ValueDistribution::discrete(numbers(j.at("values"), path + ".values"),
                                         numbers(j.at("probs"), path + ".probs"));
    }
    throw ConfigError(path + ".family", "unknown family '" + family + "'");
  });
}

json distribution_to_json(const ValueDistribution& dist) {
  struct Visitor {
    json operator()(const Uniform& u) const { return {{"family", "uniform"}, {"lo", u.lo}, {"hi", u.hi}}; }
    json operator()(const TruncatedExponential& e) const {
      return {{"family", "truncated_exponential"}, {"rate", e.rate}};
    }
    json operator()(const PiecewiseLinearCdf& p) const {
      json knots = json::array();
      for (const auto& [x, f] : p.knots) knots.push_back({x, f});
      return {{"family", "piecewise_linear"}, {"knots", knots}};
    }
    json operator()(const DiscretePmf& d) const {
      return {{"family", "discrete"}, {"values", d.values}, {"probs", d.probs}};
    }
  };
  return std::visit(Visitor{}, dist.family());
}

ExperimentConfig parse_experiment_config(const json& j) {
  check_keys(j, "", {"schema_version", "name", "model", "learner", "horizons", "seeds", "learner_config",
                     "oracle_grid_step", "eps_lb", "log_rounds", "phase_logs", "threads", "output"});
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer()) {
    throw ConfigError("schema_version", "missing or not an integer");
  }
  if (j.at("schema_version").get<int>() != kSchemaVersion) throw ConfigError("schema_version", "unsupported version");

  ExperimentConfig cfg;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ConfigError("name", "expected a string");
    cfg.name = j.at("name").get<std::string>();
  }

  if (!j.contains("model") || !j.at("model").is_array() || j.at("model").empty()) {
    throw ConfigError("model", "expected a nonempty array of distributions");
  }
  for (std::size_t i = 0; i < j.at("model").size(); ++i) {
    cfg.model.push_back(parse_distribution(j.at("model")[i], "model[" + std::to_string(i) + "]"));
  }

  if (!j.contains("learner") || !j.at("learner").is_string()) throw ConfigError("learner", "missing or not a string");
  cfg.learner = learner_from_string(j.at("learner").get<std::string>());
  if (cfg.learner == LearnerKind::SingleRegular && cfg.model.size() != 1) {
    throw ConfigError("model", "single_regular needs exactly one buyer");
  }

  if (!j.contains("horizons") || !j.at("horizons").is_array()) throw ConfigError("horizons", "expected an array");
  for (std::size_t i = 0; i < j.at("horizons").size(); ++i) {
    const auto& h = j.at("horizons")[i];
    const auto where = "horizons[" + std::to_string(i) + "]";
    if (!h.is_number_integer() || h.get<std::int64_t>() < 1) throw ConfigError(where, "expected a positive integer");
    const auto t = h.get<std::int64_t>();
    if (!cfg.horizons.empty() && t <= cfg.horizons.back()) throw ConfigError(where, "horizons must increase strictly");
    cfg.horizons.push_back(t);
  }

  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_number_integer()) {
      const auto count = s.get<std::int64_t>();
      if (count < 0) throw ConfigError("seeds", "count must be nonnegative");
      for (std::int64_t k = 1; k <= count; ++k) cfg.seeds.push_back(static_cast<std::uint64_t>(k));
    } else if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!is_nonnegative_integer(s[i])) throw ConfigError("seeds[" + std::to_string(i) + "]", "expected a seed");
        cfg.seeds.push_back(s[i].get<std::uint64_t>());
      }
    } else {
      throw ConfigError("seeds", "expected a count or a list");
    }
  }

  if (j.contains("learner_config")) {
    const auto& lc = j.at("learner_config");
    check_keys(lc, "learner_config",
               {"concentration", "sample_scale", "tail_margin", "phase_floor_coefficient", "lambda", "k"});
    auto& L = cfg.learner_config;
    if (cfg.learner == LearnerKind::MultiRegular) L = LearnerConfig::for_multi();
    L.concentration = number_or(lc, "concentration", "learner_config", L.concentration);
    L.sample_scale = number_or(lc, "sample_scale", "learner_config", L.sample_scale);
    L.tail_margin = number_or(lc, "tail_margin", "learner_config", L.tail_margin);
    L.phase_floor_coefficient = number_or(lc, "phase_floor_coefficient", "learner_config", L.phase_floor_coefficient);
    L.lambda = number_or(lc, "lambda", "learner_config", L.lambda);
    if (lc.contains("k")) {
      if (!lc.at("k").is_number_integer()) throw ConfigError("learner_config.k", "expected an integer");
      L.discretization_k = lc.at("k").get<int>();
    }
  } else if (cfg.learner == LearnerKind::MultiRegular) {
    cfg.learner_config = LearnerConfig::for_multi();
  }
  try {
    cfg.learner_config.validate();
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    if (!e.path().empty()) msg = msg.substr(e.path().size() + 2);
    throw ConfigError("learner_config." + e.path(), msg);
  }

  cfg.oracle_grid_step = number_or(j, "oracle_grid_step", "", cfg.oracle_grid_step);
  if (!(cfg.oracle_grid_step > 0.0 && cfg.oracle_grid_step <= 0.01)) {
    throw ConfigError("oracle_grid_step", "must lie in (0, 0.01]");
  }
  cfg.eps_lb = number_or(j, "eps_lb", "", cfg.eps_lb);
  if (!(cfg.eps_lb > 0.0 && cfg.eps_lb < 0.5)) throw ConfigError("eps_lb", "must lie in (0, 0.5)");
  for (const char* flag : {"log_rounds", "phase_logs"}) {
    if (j.contains(flag) && !j.at(flag).is_boolean()) throw ConfigError(flag, "expected a boolean");
  }
  cfg.log_rounds = j.value("log_rounds", false);
  cfg.phase_logs = j.value("phase_logs", false);
  if (j.contains("threads")) {
    if (!is_nonnegative_integer(j.at("threads"))) throw ConfigError("threads", "expected a nonnegative integer");
    cfg.threads = j.at("threads").get<unsigned>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output", "expected a string");
    cfg.output = j.at("output").get<std::string>();
  }

  if (cfg.learner == LearnerKind::General) {
    const std::size_t n = cfg.model.size();
    for (auto t : cfg.horizons) {
      const bool all_discrete =
          std::none_of(cfg.model.begin(), cfg.model.end(), [](const auto& d) { return d.is_continuous(); });
      std::size_t k = 0;
      if (all_discrete) {
        std::set<double> v;
        for (const auto& d : cfg.model) {
          for (double a : d.atoms()) v.insert(a);
        }
        k = v.size();
      } else {
        k = static_cast<std::size_t>(cfg.learner_config.discretization_k > 0 ? cfg.learner_config.discretization_k
                                                                             : default_discretization_k(n, t));
      }
      if (static_cast<double>(n * k) > static_cast<double>(t)) {
        throw ConfigError("learner_config.k", "n * k must not exceed the horizon " + std::to_string(t));
      }
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open config file " + file.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_experiment_config(j);
}

std::uint64_t replica_seed(std::int64_t horizon, std::uint64_t seed) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(horizon);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::optional<std::vector<double>> native_values(const std::vector<ValueDistribution>& model) {
  if (std::any_of(model.begin(), model.end(), [](const auto& d) { return d.is_continuous(); })) return std::nullopt;
  std::set<double> v;
  for (const auto& d : model) {
    for (double a : d.atoms()) v.insert(a);
  }
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

ReplicaOutput run_replica(const ExperimentConfig& cfg, std::int64_t horizon, std::uint64_t seed) {
  EnvironmentOptions opts;
  opts.log_rounds = cfg.log_rounds;
  opts.record_values = cfg.log_rounds;
  opts.oracle_grid_step = cfg.oracle_grid_step;
  BanditEnvironment env(RevenueModel(cfg.model), horizon, replica_seed(horizon, seed), opts);

  ReplicaOutput out;
  std::ostringstream phases;
  phases << std::setprecision(10);
  switch (cfg.learner) {
    case LearnerKind::SingleRegular: {
      const auto report = run_single_regular(env, cfg.learner_config);
      out.row.phases = report.phases.size();
      phases << "phase,epsilon,l,r,phat,rounds\n";
      for (std::size_t k = 0; k < report.phases.size(); ++k) {
        const auto& p = report.phases[k];
        phases << (k + 1) << ',' << p.epsilon << ',' << p.interval_out.lo << ',' << p.interval_out.hi << ','
               << p.phat << ',' << p.rounds_spent << '\n';
      }
      break;
    }
    case LearnerKind::MultiRegular: {
      const auto report = run_multi_regular(env, cfg.learner_config);
      out.row.phases = report.phases.size();
      write_multi_phase_csv(phases, report);
      break;
    }
    case LearnerKind::General: {
      const auto report = run_general(env, cfg.learner_config, native_values(cfg.model));
      out.row.phases = report.phases.size();
      write_candidate_sets_csv(phases, report);
      break;
    }
    case LearnerKind::FixedOracle: {
      env.post_batch(env.optimum().prices, horizon);
      break;
    }
  }

  const auto& ledger = env.ledger();
  out.row.learner = to_string(cfg.learner);
  out.row.n = cfg.model.size();
  out.row.horizon = horizon;
  out.row.seed = seed;
  out.row.pseudo_regret = ledger.cumulative_pseudo_regret;
  out.row.realized_regret =
      static_cast<double>(ledger.rounds_used) * env.optimum().value - ledger.cumulative_realized_revenue;
  out.row.rounds_used = ledger.rounds_used;
  if (cfg.phase_logs) out.phase_csv = phases.str();
  if (ledger.per_round_log) {
    out.replay_ok = trace_replay_check(*ledger.per_round_log, env.model());
    std::ostringstream log;
    log << std::setprecision(10);
    write_round_log_csv(log, *ledger.per_round_log, cfg.model.size());
    out.round_log_csv = log.str();
  }
  return out;
}

std::vector<ReplicaOutput> run_experiment_detailed(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::int64_t, std::uint64_t>> jobs;
  for (auto t : cfg.horizons) {
    for (auto s : cfg.seeds) jobs.emplace_back(t, s);
  }
  std::vector<ReplicaOutput> results(jobs.size());
  unsigned workers = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        results[k] = run_replica(cfg, jobs[k].first, jobs[k].second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return std::tie(a.row.horizon, a.row.seed) < std::tie(b.row.horizon, b.row.seed);
  });
  return results;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  for (auto& r : run_experiment_detailed(cfg)) rows.push_back(std::move(r.row));
  return rows;
}

ScalingFit fit_scaling(const std::vector<ResultRow>& rows, const std::string& learner, std::size_t n) {
  std::map<std::int64_t, std::vector<double>> by_horizon;
  for (const auto& r : rows) {
    if (r.learner == learner && r.n == n) by_horizon[r.horizon].push_back(r.pseudo_regret);
  }
  ScalingFit fit;
  std::vector<double> xs, ys;
  for (const auto& [t, values] : by_horizon) {
    HorizonSummary h;
    h.horizon = t;
    h.count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    h.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - h.mean) * (v - h.mean);
    h.standard_error =
        values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()))
                          : 0.0;
    fit.per_horizon.push_back(h);
    if (h.count < 5) throw ContractError("fit_scaling: every horizon needs at least 5 seeds");
    if (h.mean <= 0.0) {
      fit.warnings.push_back("horizon " + std::to_string(t) + " excluded: mean pseudo-regret is not positive");
      continue;
    }
    xs.push_back(std::log(static_cast<double>(t)));
    ys.push_back(std::log(h.mean));
  }
  if (xs.size() < 3) throw ContractError("fit_scaling: need at least 3 horizons with positive mean regret");

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    sse += e * e;
  }
  fit.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "learner,n,T,seed,pseudo_regret,realized_regret,rounds_used\n";
  out << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.learner << ',' << r.n << ',' << r.horizon << ',' << r.seed << ',' << r.pseudo_regret << ','
        << r.realized_regret << ',' << r.rounds_used << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "learner,n,T,seed,pseudo_regret,realized_regret,rounds_used") {
    throw ConfigError("results", "unexpected CSV header");
  }
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw ConfigError("results:" + std::to_string(lineno), "expected 7 columns");
    try {
      ResultRow r;
      r.learner = cells[0];
      r.n = std::stoul(cells[1]);
      r.horizon = std::stoll(cells[2]);
      r.seed = std::stoull(cells[3]);
      r.pseudo_regret = std::stod(cells[4]);
      r.realized_regret = std::stod(cells[5]);
      r.rounds_used = std::stoll(cells[6]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw ConfigError("results:" + std::to_string(lineno), "malformed number");
    }
  }
  return rows;
}

json fit_to_json(const ScalingFit& fit) {
  json per = json::array();
  for (const auto& h : fit.per_horizon) {
    per.push_back({{"T", h.horizon}, {"count", h.count}, {"mean", h.mean}, {"standard_error", h.standard_error}});
  }
  return {{"exponent", fit.exponent},
          {"intercept", fit.intercept},
          {"r_squared", fit.r_squared},
          {"per_horizon", per},
          {"warnings", fit.warnings}};
}

void write_regret_svg(std::ostream& out, const ScalingFit& fit, const std::string& title) {
  const double w = 640, h = 420, left = 70, right = 20, top = 40, bottom = 60;
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : fit.per_horizon) {
    if (p.mean > 0) pts.emplace_back(std::log10(static_cast<double>(p.horizon)), std::log10(p.mean));
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  const double padx = std::max(0.1, 0.05 * (x1 - x0)), pady = std::max(0.1, 0.1 * (y1 - y0));
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto sy = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };

  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">log10 T</text>\n";
  out << "<text x=\"18\" y=\"" << h / 2 << "\" transform=\"rotate(-90 18 " << h / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">log10 mean pseudo-regret</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    out << "<text x=\"" << sx(xv) << "\" y=\"" << h - bottom + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << std::setprecision(3) << xv
        << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 3
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << yv << "</text>\n";
  }
  out << std::setprecision(6);
  if (pts.size() >= 2) {
    // Fitted line in base-10 coordinates: log10 R = slope * log10 T + intercept / ln 10.
    const double b = fit.intercept / std::log(10.0);
    out << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(fit.exponent * x0 + b) << "\" x2=\"" << sx(x1) << "\" y2=\""
        << sy(fit.exponent * x1 + b) << "\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n";
  }
  for (const auto& [x, y] : pts) {
    out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"4\" fill=\"#2c3e50\"/>\n";
  }
  out << "<text x=\"" << w - right << "\" y=\"" << top + 12
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">slope " << fit.exponent << ", R^2 "
      << fit.r_squared << "</text>\n";
  out << "</svg>\n";
}

std::vector<std::pair<std::string, OnlineLearner>> adversarial_learner_suite(const LearnerConfig& cfg) {
  std::vector<std::pair<std::string, OnlineLearner>> suite;
  suite.emplace_back("single_regular", [cfg](PricingEnvironment& env) {
    FirstBuyerView view(env, {1.0});
    run_single_regular(view, cfg);
  });
  suite.emplace_back("multi_regular", [cfg](PricingEnvironment& env) {
    LearnerConfig multi = cfg;
    multi.concentration = std::max(cfg.concentration, LearnerConfig::for_multi().concentration);
    run_multi_regular(env, multi);
  });
  suite.emplace_back("general", [cfg](PricingEnvironment& env) {
    run_general(env, cfg, std::vector<double>{0.5, 1.0});
  });
  return suite;
}

std::vector<AdversarialRow> run_lowerbound(std::int64_t horizon, const std::vector<std::uint64_t>& seeds,
                                           double eps_lb, const LearnerConfig& cfg) {
  const auto suite = adversarial_learner_suite(cfg);
  std::vector<AdversarialRow> rows;
  for (auto seed : seeds) {
    const auto inst = build_instance(horizon, seed, eps_lb);
    rows.push_back({seed, "fixed_bin_threshold", bin_threshold_revenue(inst, 1.0), horizon});
    for (const auto& [name, learner] : suite) {
      rows.push_back({seed, name, evaluate_online_learner(inst, learner), horizon});
    }
  }
  return rows;
}

}  // namespace spp
