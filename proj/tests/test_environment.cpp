#include "doctest.h"

#include <sstream>
#include <type_traits>
#include <vector>

#include "spp/environment.hpp"
#include "spp/errors.hpp"

using namespace spp;

namespace {

RevenueModel two_uniform() { return RevenueModel({ValueDistribution::uniform(), ValueDistribution::uniform()}); }

}  // namespace

TEST_CASE("single rounds") {
  BanditEnvironment env(two_uniform(), 100, 1);
  auto fb = env.post_prices(std::vector{1.0, 1.0});
  CHECK_FALSE(fb.winner.has_value());
  CHECK(fb.revenue == 0.0);

  BanditEnvironment one(RevenueModel({ValueDistribution::uniform()}), 10, 1);
  auto sold = one.post_prices(std::vector{0.0});
  REQUIRE(sold.winner.has_value());
  CHECK(*sold.winner == 0);
  CHECK(sold.revenue == 0.0);
  CHECK_THROWS_AS(one.post_prices(std::vector{0.5, 0.5}), ContractError);
}

TEST_CASE("monte carlo revenue matches the formula") {
  BanditEnvironment env(two_uniform(), 1000000, 3);
  const std::vector<double> p{0.625, 0.5};
  double total = 0.0;
  for (int t = 0; t < 1000000; ++t) total += env.post_prices(p).revenue;
  CHECK(std::abs(total / 1e6 - 0.390625) <= 0.002);

  BanditEnvironment batch(two_uniform(), 1000000, 4);
  auto b = batch.post_batch(p, 1000000);
  CHECK(b.rounds == 1000000);
  CHECK(std::abs(b.mean_revenue() - 0.390625) <= 0.002);
  CHECK(b.wins[0] + b.wins[1] + b.no_sale == b.rounds);
}

TEST_CASE("budget accounting") {
  BanditEnvironment env(two_uniform(), 100, 1);
  CHECK(env.remaining_budget() == 100);
  env.post_prices(std::vector{0.5, 0.5});
  CHECK(env.remaining_budget() == 99);
  auto b = env.post_batch(std::vector{0.5, 0.5}, 1000);
  CHECK(b.rounds == 99);
  CHECK(env.remaining_budget() == 0);
  CHECK_THROWS_AS(env.post_prices(std::vector{0.5, 0.5}), HorizonError);
  CHECK(env.post_batch(std::vector{0.5, 0.5}, 10).rounds == 0);
}

TEST_CASE("ledger") {
  BanditEnvironment env(two_uniform(), 1000, 1);
  auto fresh = env.ledger_snapshot();
  CHECK(fresh.cumulative_pseudo_regret == 0.0);
  CHECK(fresh.cumulative_realized_revenue == 0.0);
  CHECK(fresh.rounds_used == 0);

  const auto opt = env.optimum().prices;
  for (int t = 0; t < 50; ++t) env.post_prices(opt);
  CHECK(std::abs(env.ledger().cumulative_pseudo_regret) <= 50 * 1e-8);

  BanditEnvironment worst(two_uniform(), 1000, 1);
  for (int t = 0; t < 40; ++t) worst.post_prices(std::vector{1.0, 1.0});
  worst.post_batch(std::vector{1.0, 1.0}, 60);
  CHECK(worst.ledger().cumulative_pseudo_regret == doctest::Approx(100 * 0.390625).epsilon(1e-8));
  CHECK(worst.ledger().cumulative_realized_revenue <= worst.ledger().rounds_used);
}

TEST_CASE("pseudo regret is additive") {
  BanditEnvironment env(two_uniform(), 500, 11, {.log_rounds = true});
  RandomStream rng(99);
  for (int t = 0; t < 200; ++t) env.post_prices(std::vector{rng.uniform(), rng.uniform()});
  double recomputed = 0.0;
  for (const auto& r : *env.ledger().per_round_log) recomputed += env.optimum().value - expected_revenue(env.model(), r.prices);
  CHECK(env.ledger().cumulative_pseudo_regret == doctest::Approx(recomputed).epsilon(1e-12));
}

TEST_CASE("determinism") {
  auto run = [](std::uint64_t seed) {
    BanditEnvironment env(two_uniform(), 300, seed);
    std::vector<std::pair<int, double>> out;
    for (int t = 0; t < 200; ++t) {
      auto fb = env.post_prices(std::vector{0.4 + t * 0.001, 0.5});
      out.emplace_back(fb.winner ? int(*fb.winner) : -1, fb.revenue);
    }
    auto b = env.post_batch(std::vector{0.5, 0.5}, 100);
    out.emplace_back(int(b.wins[0]), b.revenue);
    return out;
  };
  CHECK(run(5) == run(5));
  CHECK(run(5) != run(6));
}

TEST_CASE("trace replay") {
  BanditEnvironment env(two_uniform(), 1000, 8, {.log_rounds = true, .record_values = true});
  RandomStream rng(1);
  for (int t = 0; t < 300; ++t) env.post_prices(std::vector{rng.uniform(), rng.uniform()});
  env.post_batch(std::vector{0.6, 0.5}, 300);
  auto log = *env.ledger().per_round_log;
  CHECK(log.size() == 600);
  CHECK(trace_replay_check(log, env.model()));

  auto corrupted = log;
  for (auto& r : corrupted) {
    if (r.feedback.winner) {
      r.feedback.winner = *r.feedback.winner == 0 ? 1 : 0;
      break;
    }
  }
  CHECK_FALSE(trace_replay_check(corrupted, env.model()));
  CHECK(trace_replay_check({}, env.model()));

  BanditEnvironment blind(two_uniform(), 10, 8, {.log_rounds = true});
  blind.post_prices(std::vector{0.5, 0.5});
  CHECK_THROWS_AS(trace_replay_check(*blind.ledger().per_round_log, blind.model()), NotApplicableError);
}

TEST_CASE("learner-visible feedback has exactly two fields") {
  RoundFeedback fb{};
  auto [winner, revenue] = fb;
  CHECK_FALSE(winner.has_value());
  CHECK(revenue == 0.0);
  static_assert(sizeof(RoundFeedback) == sizeof(std::optional<std::size_t>) + sizeof(double));
  static_assert(std::is_abstract_v<PricingEnvironment>);
}

TEST_CASE("round log csv") {
  BanditEnvironment env(two_uniform(), 10, 8, {.log_rounds = true});
  env.post_prices(std::vector{1.0, 0.0});
  std::ostringstream os;
  write_round_log_csv(os, *env.ledger().per_round_log, 2);
  CHECK(os.str() == "round,p1,p2,winner,revenue\n1,1,0,2,0\n");
}
