#include "spp/general_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spp/errors.hpp"

namespace spp {

DiscretizationSpec discretize(int k) {
  if (k < 1) throw ContractError("discretize: k must be positive");
  DiscretizationSpec spec;
  spec.k = k;
  for (int j = 1; j <= k; ++j) spec.grid.push_back(static_cast<double>(j) / static_cast<double>(k));
  return spec;
}

int default_discretization_k(std::size_t n, std::int64_t horizon) {
  const double k = std::pow(static_cast<double>(n), -5.0 / 3.0) * std::cbrt(static_cast<double>(horizon));
  return std::max(1, static_cast<int>(std::lround(k)));
}

namespace {

std::vector<double> base_vector(const std::vector<CandidatePriceSet>& sets, const std::vector<double>& phats,
                                std::size_t i) {
  std::vector<double> v(sets.size());
  for (std::size_t j = 0; j < sets.size(); ++j) v[j] = j < i ? sets[j].back() : (j > i ? phats[j] : sets[j].front());
  return v;
}

void check_sets(const PricingEnvironment& env, const std::vector<CandidatePriceSet>& sets) {
  if (sets.size() != env.buyers()) throw ContractError("one candidate set per buyer is required");
  for (const auto& s : sets) {
    if (s.empty()) throw ContractError("candidate sets must be nonempty");
  }
}

}  // namespace

Step1Result discrete_step1_find_phats(PricingEnvironment& env, const std::vector<CandidatePriceSet>& sets,
                                      double delta, const LearnerConfig& cfg) {
  check_sets(env, sets);
  const std::size_t n = sets.size();
  const auto batch = batch_size(cfg, delta, env.horizon());
  Step1Result out;
  out.phats.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.phats[j] = sets[j].front();

  for (std::size_t i = n; i-- > 0;) {
    CoordinateProbe probe(env, base_vector(sets, out.phats, i), i);
    std::optional<Estimate> best;
    for (double p : sets[i]) {
      const auto e = probe.test(p, batch);
      if (e.rounds == 0) break;
      if (!best || e.mean > best->mean) best = e;
      if (probe.exhausted()) break;
    }
    if (best) out.phats[i] = best->price;
    out.rounds += probe.rounds_spent();
    if (probe.exhausted()) {
      out.budget_exhausted = true;
      break;
    }
  }
  return out;
}

Step2Result discrete_step2_shrink(PricingEnvironment& env, const std::vector<CandidatePriceSet>& sets,
                                  const std::vector<double>& phats, double delta, const LearnerConfig& cfg) {
  check_sets(env, sets);
  const std::size_t n = sets.size();
  const auto batch = batch_size(cfg, delta, env.horizon());
  Step2Result out;
  out.sets = sets;

  for (std::size_t i = n; i-- > 0;) {
    CoordinateProbe probe(env, base_vector(sets, phats, i), i);
    const auto bench = probe.test(phats[i], batch);
    if (bench.rounds == 0 || probe.exhausted()) {
      out.budget_exhausted = true;
      out.rounds += probe.rounds_spent();
      break;
    }
    const double threshold = bench.mean - 2.0 * static_cast<double>(n - i) * delta - 2.0 * delta;
    CandidatePriceSet kept;
    bool stopped = false;
    for (double p : sets[i]) {
      if (p == phats[i] || stopped) {
        kept.push_back(p);
        continue;
      }
      const auto e = probe.test(p, batch);
      if (e.rounds == 0) {
        stopped = true;
        kept.push_back(p);
        continue;
      }
      if (e.mean >= threshold) kept.push_back(p);
      if (probe.exhausted()) stopped = true;
    }
    out.sets[i] = std::move(kept);
    out.rounds += probe.rounds_spent();
    if (stopped) {
      out.budget_exhausted = true;
      break;
    }
  }
  return out;
}

double general_phase_floor(const LearnerConfig& cfg, std::size_t n, std::size_t k, std::int64_t horizon) {
  const double t = static_cast<double>(horizon);
  return cfg.phase_floor_coefficient * std::pow(static_cast<double>(n), 2.5) * std::sqrt(static_cast<double>(k)) *
         log_horizon(horizon) / std::sqrt(cfg.sample_scale * t);
}

GeneralRunReport run_general(PricingEnvironment& env, const LearnerConfig& cfg,
                             std::optional<std::vector<double>> values) {
  cfg.validate();
  const std::size_t n = env.buyers();
  GeneralRunReport report;
  if (values) {
    auto v = *values;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.empty()) throw ConfigError("values", "value set must be nonempty");
    for (double x : v) {
      if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("values", "values must lie in [0,1]");
    }
    report.values = v;
    report.k = static_cast<int>(v.size());
  } else {
    report.k = cfg.discretization_k > 0 ? cfg.discretization_k : default_discretization_k(n, env.horizon());
    report.values = discretize(report.k).grid;
  }
  if (static_cast<double>(n) * static_cast<double>(report.values.size()) > static_cast<double>(env.horizon())) {
    throw ConfigError("discretization_k", "n * k must not exceed the horizon");
  }

  const double floor = general_phase_floor(cfg, n, report.values.size(), env.horizon());
  std::vector<CandidatePriceSet> sets(n, report.values);
  double epsilon = 1.0;
  while (epsilon > floor && env.remaining_budget() > 0) {
    GeneralPhaseReport phase;
    phase.epsilon = epsilon;
    phase.delta = epsilon / (100.0 * static_cast<double>(n * n));
    phase.sets_in = sets;
    const auto step1 = discrete_step1_find_phats(env, sets, phase.delta, cfg);
    phase.phats = step1.phats;
    phase.rounds_spent = step1.rounds;
    phase.sets_out = sets;
    phase.budget_exhausted = step1.budget_exhausted;
    if (!step1.budget_exhausted) {
      const auto step2 = discrete_step2_shrink(env, sets, step1.phats, phase.delta, cfg);
      phase.sets_out = step2.sets;
      phase.rounds_spent += step2.rounds;
      phase.budget_exhausted = step2.budget_exhausted;
    }
    sets = phase.sets_out;
    report.phases.push_back(phase);
    if (phase.budget_exhausted) {
      report.budget_exhausted = true;
      break;
    }
    epsilon *= 0.5;
  }

  for (const auto& s : sets) report.exploit_prices.push_back(s.front());
  report.exploit_rounds = env.post_batch(report.exploit_prices, env.remaining_budget()).rounds;
  return report;
}

void write_candidate_sets_csv(std::ostream& out, const GeneralRunReport& report) {
  out << "phase,buyer,price\n";
  for (std::size_t k = 0; k < report.phases.size(); ++k) {
    const auto& sets = report.phases[k].sets_out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (double p : sets[i]) out << (k + 1) << ',' << (i + 1) << ',' << p << '\n';
    }
  }
}

}  // namespace spp
