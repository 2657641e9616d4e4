#include "spp/multi_regular.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spp/errors.hpp"

namespace spp {

std::string to_string(SubAlgCase c) {
  switch (c) {
    case SubAlgCase::SmallReach:
      return "small_reach";
    case SubAlgCase::EstimableSuffix:
      return "estimable_suffix";
    case SubAlgCase::SmallTailMass:
      return "small_tail_mass";
  }
  return "unknown";
}

MultiLearnerState MultiLearnerState::initial(std::size_t n, double epsilon, double tau) {
  MultiLearnerState s;
  s.intervals.assign(n, ConfidenceInterval{0.0, 1.0});
  s.epsilon = epsilon;
  s.delta = epsilon / (100.0 * static_cast<double>(n * n));
  s.tau = tau;
  s.phats.assign(n, 0.0);
  return s;
}

std::vector<double> MultiLearnerState::probe_vector(std::size_t i, double price) const {
  std::vector<double> v(buyers());
  for (std::size_t j = 0; j < buyers(); ++j) {
    if (j < i) {
      v[j] = safe_price(j);
    } else if (j == i) {
      v[j] = price;
    } else {
      v[j] = phats[j];
    }
  }
  return v;
}

namespace {

struct Conditional {
  std::int64_t events = 0;
  double numerator = 0.0;
  std::int64_t rounds = 0;
  bool truncated = false;
};

// Posts the same vector until `target` conditioning events are seen or `cap` rounds are spent.
template <class Events, class Numerator>
Conditional sample_conditional(CoordinateProbe& probe, double price, std::int64_t target, std::int64_t cap,
                               double rate_guess, Events events, Numerator numerator) {
  Conditional out;
  double rate = std::clamp(rate_guess, 1e-6, 1.0);
  while (out.events < target && out.rounds < cap) {
    const double want = std::ceil(static_cast<double>(target - out.events) / rate);
    const auto m = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::min(want, 9e15)), 1, cap - out.rounds);
    const auto fb = probe.test_raw(price, m);
    out.rounds += fb.rounds;
    out.events += events(fb);
    out.numerator += numerator(fb);
    if (fb.rounds < m) {
      out.truncated = true;
      break;
    }
    rate = std::max(1e-6, static_cast<double>(out.events) / static_cast<double>(out.rounds));
  }
  return out;
}

std::int64_t cap_rounds(std::int64_t batch, double rate) {
  const double c = std::ceil(2.0 * static_cast<double>(batch) / std::max(rate, 1e-12));
  return static_cast<std::int64_t>(std::min(c, 9e15));
}

}  // namespace

ReachEstimate estimate_reach_probability(PricingEnvironment& env, const MultiLearnerState& state, std::size_t i,
                                         const LearnerConfig& cfg) {
  if (i >= state.buyers()) throw ContractError("buyer index out of range");
  if (i == 0) return {1.0, 0, false};
  const auto batch = batch_size(cfg, state.delta, env.horizon());
  CoordinateProbe probe(env, state.probe_vector(i, state.safe_price(i)), i);
  const auto fb = probe.test_raw(state.safe_price(i), batch);
  ReachEstimate out;
  out.rounds = fb.rounds;
  out.truncated = fb.rounds < batch;
  out.value = fb.rounds > 0 ? static_cast<double>(fb.reached(i)) / static_cast<double>(fb.rounds) : 0.0;
  return out;
}

TrisectionResult general_halfconcave_search(PricingEnvironment& env, const MultiLearnerState& state, std::size_t i,
                                            double lambda, ConfidenceInterval interval, double epsilon,
                                            const LearnerConfig& cfg) {
  if (!(lambda >= 1.0)) throw ContractError("lambda must be at least 1");
  const double delta = epsilon / (100.0 * lambda);
  const auto batch = batch_size(cfg, delta, env.horizon());
  CoordinateProbe probe(env, state.probe_vector(i, interval.lo), i);
  return trisection_search(probe, interval, delta, batch);
}

SubAlgOutcome subalg_find_phat_i(PricingEnvironment& env, const MultiLearnerState& state, std::size_t i,
                                 const LearnerConfig& cfg) {
  const std::size_t n = state.buyers();
  const double delta = state.delta;
  const double rs = state.safe_price(i);
  const double l = state.intervals[i].lo;
  const auto batch = batch_size(cfg, delta, env.horizon());
  const std::int64_t start = env.remaining_budget();
  SubAlgOutcome out;
  out.phat_i = l;
  auto finish = [&](bool truncated) {
    out.rounds = start - env.remaining_budget();
    out.budget_exhausted = truncated;
    return out;
  };

  const auto reach = estimate_reach_probability(env, state, i, cfg);
  out.reach = reach.value;
  if (reach.truncated) return finish(true);
  if (out.reach < 0.75 * delta) {
    out.case_taken = SubAlgCase::SmallReach;
    return finish(false);
  }

  CoordinateProbe probe(env, state.probe_vector(i, rs), i);
  const auto tail = sample_conditional(
      probe, rs, batch, cap_rounds(batch, out.reach), out.reach,
      [i](const BatchFeedback& fb) { return fb.reached(i); },
      [i](const BatchFeedback& fb) { return static_cast<double>(fb.reached(i + 1)); });
  if (tail.truncated) return finish(true);
  out.tail_cdf = tail.events > 0 ? tail.numerator / static_cast<double>(tail.events) : 0.0;

  auto better = [](const Estimate& a, const Estimate& b) { return b.mean > a.mean ? b : a; };

  if (out.tail_cdf >= 0.4) {
    out.case_taken = SubAlgCase::EstimableSuffix;
    double rev = 0.0;
    if (i + 1 < n) {
      const auto& base = probe.base();
      const auto suffix = sample_conditional(
          probe, rs, batch, cap_rounds(batch, out.reach * out.tail_cdf), out.reach * out.tail_cdf,
          [i](const BatchFeedback& fb) { return fb.reached(i + 1); },
          [i, &base](const BatchFeedback& fb) {
            double r = 0.0;
            for (std::size_t j = i + 1; j < fb.wins.size(); ++j) r += static_cast<double>(fb.wins[j]) * base[j];
            return r;
          });
      if (suffix.truncated) return finish(true);
      rev = suffix.events > 0 ? suffix.numerator / static_cast<double>(suffix.events) : 0.0;
    }
    out.suffix_revenue = rev;

    const double lo1 = std::max(l, rev + delta / out.reach);
    std::optional<Estimate> first;
    if (lo1 < rs) {
      const auto tri = trisection_search(probe, {lo1, state.intervals[i].hi}, delta, batch);
      if (tri.truncated) {
        out.phat_i = tri.best.price;
        return finish(true);
      }
      first = probe.test(tri.best.price, batch);
      if (probe.exhausted()) {
        out.phat_i = tri.best.price;
        return finish(true);
      }
    }
    const double p2 = std::min(std::max(l, rev - delta / out.reach), rs);
    const auto second = probe.test(p2, batch);
    out.phat_i = (first ? better(*first, second) : second).price;
    return finish(probe.exhausted());
  }

  out.case_taken = SubAlgCase::SmallTailMass;
  const double lambda = cfg.lambda;
  const auto tri = general_halfconcave_search(env, state, i, lambda, state.intervals[i], 100.0 * lambda * delta, cfg);
  if (tri.truncated) {
    out.phat_i = tri.best.price;
    return finish(true);
  }
  const auto third = probe.test(tri.best.price, batch);
  const auto fourth = probe.test(rs, batch);
  out.phat_i = better(third, fourth).price;
  return finish(probe.exhausted());
}

std::vector<SubAlgOutcome> find_all_phats(PricingEnvironment& env, MultiLearnerState& state, const LearnerConfig& cfg) {
  std::vector<SubAlgOutcome> outcomes(state.buyers());
  for (std::size_t i = state.buyers(); i-- > 0;) {
    outcomes[i] = subalg_find_phat_i(env, state, i, cfg);
    state.phats[i] = outcomes[i].phat_i;
    if (outcomes[i].budget_exhausted) {
      // Buyers not reached keep the left ends of their intervals.
      for (std::size_t j = 0; j < i; ++j) {
        state.phats[j] = state.intervals[j].lo;
        outcomes[j].phat_i = state.intervals[j].lo;
        outcomes[j].budget_exhausted = true;
      }
      break;
    }
  }
  return outcomes;
}

IntervalSearchOutcome binary_search_interval_i(PricingEnvironment& env, const MultiLearnerState& state, std::size_t i,
                                               const LearnerConfig& cfg) {
  const std::size_t n = state.buyers();
  const double delta = state.delta;
  const double tau = state.tau;
  const double phat = state.phats[i];
  const auto batch = batch_size(cfg, delta, env.horizon());
  const double slack = 2.0 * delta + 5.0 * static_cast<double>(n - 1 - i) * delta;
  CoordinateProbe probe(env, state.probe_vector(i, phat), i);

  IntervalSearchOutcome out;
  out.interval = state.intervals[i];
  auto finish = [&]() {
    out.rounds = probe.rounds_spent();
    out.budget_exhausted = probe.exhausted();
    return out;
  };

  const auto bench = probe.test(phat, batch);
  if (bench.rounds == 0 || probe.exhausted()) return finish();

  const auto left = left_binary_search(probe, out.interval.lo, phat, bench.mean, slack, tau, batch);
  out.interval.lo = left.lo;
  if (left.truncated) return finish();
  const auto at_lo = probe.test(left.lo, batch);
  const auto at_hi = probe.test(left.hi, batch);
  if (probe.exhausted()) return finish();
  if (at_lo.mean < at_hi.mean - 3.0 * delta) {
    out.interval.lo = left.hi;
    out.left_corrected = true;
  }

  const auto right =
      right_binary_search(probe, phat, state.intervals[i].hi, bench.mean, slack, 2.0 * delta, tau, batch);
  out.interval.hi = right.hi;
  out.special_case = right.special_case;
  return finish();
}

MainSubroutineResult main_subroutine(PricingEnvironment& env, MultiLearnerState& state, const LearnerConfig& cfg) {
  MainSubroutineResult out;
  const std::int64_t start = env.remaining_budget();
  out.intervals = state.intervals;
  out.subalg = find_all_phats(env, state, cfg);
  out.budget_exhausted = std::any_of(out.subalg.begin(), out.subalg.end(), [](const auto& o) { return o.budget_exhausted; });
  if (!out.budget_exhausted) {
    for (std::size_t i = 0; i < state.buyers(); ++i) {
      out.searches.push_back(binary_search_interval_i(env, state, i, cfg));
      out.intervals[i] = out.searches.back().interval;
      if (out.searches.back().budget_exhausted) {
        out.budget_exhausted = true;
        break;
      }
    }
  }
  out.rounds = start - env.remaining_budget();
  return out;
}

double multi_phase_floor(const LearnerConfig& cfg, std::size_t n, std::int64_t horizon) {
  const double t = static_cast<double>(horizon);
  return cfg.phase_floor_coefficient * std::pow(static_cast<double>(n), 2.5) * log_horizon(horizon) /
         std::sqrt(cfg.sample_scale * t);
}

MultiRunReport run_multi_regular(PricingEnvironment& env, const LearnerConfig& cfg) {
  cfg.validate();
  const std::size_t n = env.buyers();
  MultiRunReport report;
  const double floor = multi_phase_floor(cfg, n, env.horizon());
  auto state = MultiLearnerState::initial(n, 1.0, cfg.tail_margin);
  bool have_phats = false;

  while (state.epsilon > floor && env.remaining_budget() > 0) {
    MultiPhaseReport phase;
    phase.epsilon = state.epsilon;
    phase.delta = state.delta;
    phase.intervals_in = state.intervals;
    auto result = main_subroutine(env, state, cfg);
    have_phats = true;
    phase.intervals_out = result.intervals;
    phase.phats = state.phats;
    phase.subalg = result.subalg;
    phase.rounds_spent = result.rounds;
    phase.budget_exhausted = result.budget_exhausted;
    report.phases.push_back(phase);
    if (result.budget_exhausted) {
      report.budget_exhausted = true;
      break;
    }
    state.intervals = result.intervals;
    state.epsilon *= 0.5;
    state.delta = state.epsilon / (100.0 * static_cast<double>(n * n));
  }

  if (have_phats) {
    report.exploit_prices = state.phats;
  } else {
    for (const auto& iv : state.intervals) report.exploit_prices.push_back(0.5 * (iv.lo + iv.hi - state.tau));
  }
  report.exploit_rounds = env.post_batch(report.exploit_prices, env.remaining_budget()).rounds;
  return report;
}

void write_multi_phase_csv(std::ostream& out, const MultiRunReport& report) {
  out << "buyer,phase,case_taken,l,r,phat,reach\n";
  for (std::size_t k = 0; k < report.phases.size(); ++k) {
    const auto& ph = report.phases[k];
    for (std::size_t i = 0; i < ph.intervals_in.size(); ++i) {
      out << (i + 1) << ',' << (k + 1) << ',' << (i < ph.subalg.size() ? to_string(ph.subalg[i].case_taken) : "")
          << ',' << ph.intervals_in[i].lo << ',' << ph.intervals_in[i].hi << ',' << ph.phats[i] << ','
          << (i < ph.subalg.size() ? ph.subalg[i].reach : 0.0) << '\n';
    }
  }
}

}  // namespace spp
