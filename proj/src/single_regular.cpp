#include "spp/single_regular.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "spp/errors.hpp"

namespace spp {
namespace {

void require_single(const PricingEnvironment& env) {
  if (env.buyers() != 1) throw ContractError("single-buyer learner needs an environment with one buyer");
}

}  // namespace

FindPhatResult find_phat(PricingEnvironment& env, ConfidenceInterval interval, double epsilon,
                         const LearnerConfig& cfg) {
  require_single(env);
  const double delta = epsilon / 100.0;
  const auto batch = batch_size(cfg, delta, env.horizon());
  CoordinateProbe probe(env, {interval.lo}, 0);
  const auto tri = trisection_search(probe, interval, delta, batch);
  return {tri.best.price, tri.best.mean, probe.rounds_spent(), tri.truncated};
}

RefineResult refine_interval(PricingEnvironment& env, ConfidenceInterval interval, double epsilon, double phat,
                             const LearnerConfig& cfg) {
  require_single(env);
  const double delta = epsilon / 100.0;
  const double tau = cfg.tail_margin;
  const auto batch = batch_size(cfg, delta, env.horizon());
  CoordinateProbe probe(env, {phat}, 0);

  RefineResult out;
  out.interval = interval;
  const auto bench = probe.test(phat, batch);
  if (bench.rounds == 0) {
    out.budget_exhausted = true;
    return out;
  }
  out.benchmark = bench.mean;

  const auto left = left_binary_search(probe, interval.lo, phat, bench.mean, 2.0 * delta, tau, batch);
  out.interval.lo = left.lo;
  if (!left.truncated && !probe.exhausted()) {
    const auto right = right_binary_search(probe, phat, interval.hi, bench.mean, 2.0 * delta, 2.0 * delta, tau, batch);
    out.interval.hi = right.hi;
    out.special_case = right.special_case;
  }
  out.rounds = probe.rounds_spent();
  out.budget_exhausted = probe.exhausted();
  return out;
}

double single_phase_floor(const LearnerConfig& cfg, std::int64_t horizon) {
  const double t = static_cast<double>(horizon);
  return cfg.phase_floor_coefficient * log_horizon(horizon) / std::sqrt(cfg.sample_scale * t);
}

SingleRunReport run_single_regular(PricingEnvironment& env, const LearnerConfig& cfg) {
  require_single(env);
  cfg.validate();
  SingleRunReport report;
  const double floor = single_phase_floor(cfg, env.horizon());
  ConfidenceInterval interval{0.0, 1.0};
  double epsilon = 1.0;
  std::optional<double> last_phat;

  while (epsilon > floor && env.remaining_budget() > 0) {
    PhaseReport phase;
    phase.epsilon = epsilon;
    phase.interval_in = interval;
    const auto found = find_phat(env, interval, epsilon, cfg);
    phase.phat = found.phat;
    phase.rounds_spent = found.rounds;
    phase.interval_out = interval;
    if (found.budget_exhausted) {
      phase.budget_exhausted = true;
    } else {
      const auto refined = refine_interval(env, interval, epsilon, found.phat, cfg);
      phase.rounds_spent += refined.rounds;
      phase.interval_out = refined.interval;
      phase.budget_exhausted = refined.budget_exhausted;
    }
    last_phat = found.phat;
    interval = phase.interval_out;
    report.phases.push_back(phase);
    if (phase.budget_exhausted) {
      report.budget_exhausted = true;
      break;
    }
    epsilon *= 0.5;
  }

  report.exploit_price = last_phat ? *last_phat : 0.5 * (interval.lo + interval.hi - cfg.tail_margin);
  const std::vector<double> prices{report.exploit_price};
  report.exploit_rounds = env.post_batch(prices, env.remaining_budget()).rounds;
  return report;
}

}  // namespace spp
