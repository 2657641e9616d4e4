#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "spp/random.hpp"
#include "spp/revenue.hpp"

namespace spp {

// What a learner sees after one round. Buyer indices are 0-based.
struct RoundFeedback {
  std::optional<std::size_t> winner;
  double revenue = 0.0;
};

// Aggregate of a batch of identical rounds: how often each buyer took the item.
struct BatchFeedback {
  std::int64_t rounds = 0;
  std::vector<std::int64_t> wins;
  std::int64_t no_sale = 0;
  double revenue = 0.0;

  double mean_revenue() const { return rounds > 0 ? revenue / static_cast<double>(rounds) : 0.0; }
  // Rounds in which the item was still unsold when buyer i was reached.
  std::int64_t reached(std::size_t i) const;
};

// The learner-facing protocol. Implementations never reveal valuations.
class PricingEnvironment {
 public:
  virtual ~PricingEnvironment() = default;

  virtual std::size_t buyers() const = 0;
  virtual std::int64_t horizon() const = 0;
  virtual std::int64_t remaining_budget() const = 0;

  // Throws HorizonError when the budget is spent.
  virtual RoundFeedback post_prices(std::span<const double> prices) = 0;
  // Posts the same vector for min(rounds, remaining_budget()) rounds.
  virtual BatchFeedback post_batch(std::span<const double> prices, std::int64_t rounds) = 0;
};

struct LoggedRound {
  std::vector<double> prices;
  RoundFeedback feedback;
  // Hidden draws; present only when the environment records them.
  std::vector<double> values;
};

struct RegretLedger {
  double cumulative_pseudo_regret = 0.0;
  double cumulative_realized_revenue = 0.0;
  std::int64_t rounds_used = 0;
  std::optional<std::vector<LoggedRound>> per_round_log;
};

struct EnvironmentOptions {
  bool log_rounds = false;
  bool record_values = false;
  double oracle_grid_step = 1e-4;
};

class BanditEnvironment final : public PricingEnvironment {
 public:
  BanditEnvironment(RevenueModel model, std::int64_t horizon, std::uint64_t seed, EnvironmentOptions options = {});

  std::size_t buyers() const override { return model_.size(); }
  std::int64_t horizon() const override { return horizon_; }
  std::int64_t remaining_budget() const override { return horizon_ - ledger_.rounds_used; }

  RoundFeedback post_prices(std::span<const double> prices) override;
  BatchFeedback post_batch(std::span<const double> prices, std::int64_t rounds) override;

  RegretLedger ledger_snapshot() const { return ledger_; }
  const RegretLedger& ledger() const noexcept { return ledger_; }

  // Harness access. Learners only receive a PricingEnvironment reference.
  const RevenueModel& model() const noexcept { return model_; }
  const OptimalPricing& optimum() const noexcept { return optimum_; }

 private:
  void charge(std::span<const double> prices, std::int64_t rounds, double revenue);

  RevenueModel model_;
  std::int64_t horizon_;
  RandomStream rng_;
  EnvironmentOptions options_;
  OptimalPricing optimum_;
  RegretLedger ledger_;
  std::vector<double> values_;
};

// True iff every logged feedback agrees with the recorded draws. Throws NotApplicableError when the
// log lacks draws.
bool trace_replay_check(const std::vector<LoggedRound>& log, const RevenueModel& model);

// Columns: round, p1..pn, winner (1-based, 0 for no sale), revenue.
void write_round_log_csv(std::ostream& out, const std::vector<LoggedRound>& log, std::size_t buyers);

}  // namespace spp
