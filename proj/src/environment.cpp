#include "spp/environment.hpp"

#include <ostream>

#include "spp/errors.hpp"

namespace spp {

std::int64_t BatchFeedback::reached(std::size_t i) const {
  std::int64_t before = 0;
  for (std::size_t j = 0; j < i && j < wins.size(); ++j) before += wins[j];
  return rounds - before;
}

BanditEnvironment::BanditEnvironment(RevenueModel model, std::int64_t horizon, std::uint64_t seed,
                                     EnvironmentOptions options)
    : model_(std::move(model)), horizon_(horizon), rng_(seed), options_(options) {
  if (horizon_ < 1) throw ContractError("BanditEnvironment: horizon must be positive");
  optimum_ = optimal_prices_dp(model_, options_.oracle_grid_step);
  optimum_.value = expected_revenue(model_, optimum_.prices);
  if (options_.log_rounds) ledger_.per_round_log.emplace();
  values_.resize(model_.size());
}

void BanditEnvironment::charge(std::span<const double> prices, std::int64_t rounds, double revenue) {
  const double r = rounds > 0 ? static_cast<double>(rounds) : 0.0;
  ledger_.cumulative_pseudo_regret += r * (optimum_.value - expected_revenue(model_, prices));
  ledger_.cumulative_realized_revenue += revenue;
  ledger_.rounds_used += rounds;
}

RoundFeedback BanditEnvironment::post_prices(std::span<const double> prices) {
  validate_prices(model_, prices);
  if (remaining_budget() <= 0) throw HorizonError("round budget exhausted");

  RoundFeedback fb;
  for (std::size_t i = 0; i < model_.size(); ++i) values_[i] = model_.buyer(i).sample(rng_);
  for (std::size_t i = 0; i < model_.size(); ++i) {
    if (values_[i] >= prices[i]) {
      fb.winner = i;
      fb.revenue = prices[i];
      break;
    }
  }
  charge(prices, 1, fb.revenue);
  if (ledger_.per_round_log) {
    LoggedRound entry{{prices.begin(), prices.end()}, fb, {}};
    if (options_.record_values) entry.values = values_;
    ledger_.per_round_log->push_back(std::move(entry));
  }
  return fb;
}

BatchFeedback BanditEnvironment::post_batch(std::span<const double> prices, std::int64_t rounds) {
  validate_prices(model_, prices);
  BatchFeedback out;
  out.wins.assign(model_.size(), 0);
  const std::int64_t m = std::min(rounds, remaining_budget());
  if (m <= 0) return out;

  if (ledger_.per_round_log) {
    for (std::int64_t t = 0; t < m; ++t) {
      const auto fb = post_prices(prices);
      ++out.rounds;
      if (fb.winner) {
        ++out.wins[*fb.winner];
      } else {
        ++out.no_sale;
      }
      out.revenue += fb.revenue;
    }
    return out;
  }

  // A batch of identical rounds is multinomial over (buyer 1 wins, ..., buyer n wins, no sale).
  std::int64_t left = m;
  for (std::size_t i = 0; i < model_.size() && left > 0; ++i) {
    out.wins[i] = rng_.binomial(left, model_.buyer(i).prob_accept(prices[i]));
    left -= out.wins[i];
    out.revenue += static_cast<double>(out.wins[i]) * prices[i];
  }
  out.no_sale = left;
  out.rounds = m;
  charge(prices, m, out.revenue);
  return out;
}

bool trace_replay_check(const std::vector<LoggedRound>& log, const RevenueModel& model) {
  for (const auto& round : log) {
    const std::size_t n = model.size();
    if (round.values.size() != n) throw NotApplicableError("trace_replay_check: log has no recorded draws");
    if (round.prices.size() != n) return false;
    std::optional<std::size_t> expected;
    for (std::size_t i = 0; i < n; ++i) {
      if (round.values[i] >= round.prices[i]) {
        expected = i;
        break;
      }
    }
    if (expected != round.feedback.winner) return false;
    const double paid = expected ? round.prices[*expected] : 0.0;
    if (paid != round.feedback.revenue) return false;
  }
  return true;
}

void write_round_log_csv(std::ostream& out, const std::vector<LoggedRound>& log, std::size_t buyers) {
  out << "round";
  for (std::size_t i = 0; i < buyers; ++i) out << ",p" << (i + 1);
  out << ",winner,revenue\n";
  std::int64_t t = 0;
  for (const auto& round : log) {
    out << ++t;
    for (double p : round.prices) out << ',' << p;
    out << ',' << (round.feedback.winner ? *round.feedback.winner + 1 : 0) << ',' << round.feedback.revenue << '\n';
  }
}

}  // namespace spp
