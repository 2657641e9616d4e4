#include "doctest.h"

#include <functional>
#include <sstream>
#include <vector>

#include "spp/errors.hpp"
#include "spp/general_discrete.hpp"
#include "test_support.hpp"

using namespace spp;
using test_support::CurveEnvironment;

namespace {

constexpr std::int64_t kHuge = std::int64_t{1} << 50;

double grid_optimum(const RevenueModel& model, const std::vector<double>& grid) {
  std::vector<double> p(model.size());
  double best = 0.0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == p.size()) {
      best = std::max(best, expected_revenue(model, p));
      return;
    }
    for (double x : grid) {
      p[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

ValueDistribution two_point() { return ValueDistribution::discrete({0.3, 0.9}, {0.5, 0.5}); }

}  // namespace

TEST_CASE("discretization grid") {
  CHECK(discretize(2).grid == std::vector<double>{0.5, 1.0});
  CHECK(discretize(1).grid == std::vector<double>{1.0});
  CHECK(discretize(10).grid.size() == 10);
  CHECK_THROWS_AS(discretize(0), ContractError);
  CHECK(default_discretization_k(2, 1000000) == 31);
  CHECK(default_discretization_k(50, 8) == 1);
}

TEST_CASE("grid optima") {
  const RevenueModel one({ValueDistribution::uniform()});
  CHECK(grid_optimum(one, discretize(10).grid) == 0.25);
  const RevenueModel two({ValueDistribution::uniform(), ValueDistribution::uniform()});
  CHECK(grid_optimum(two, discretize(8).grid) >= 0.390625 - 0.125);
  CHECK(grid_optimum(two, discretize(8).grid) == doctest::Approx(0.390625));
}

TEST_CASE("step 1 with a singleton set spends one batch") {
  BanditEnvironment env(RevenueModel({two_point()}), kHuge, 1);
  const LearnerConfig cfg;
  const auto res = discrete_step1_find_phats(env, {{0.9}}, 0.01, cfg);
  CHECK(res.phats == std::vector<double>{0.9});
  CHECK(res.rounds == batch_size(cfg, 0.01, kHuge));
}

TEST_CASE("step 1 on a two-point buyer") {
  int right = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    BanditEnvironment env(RevenueModel({two_point()}), kHuge, seed);
    const auto res = discrete_step1_find_phats(env, {{0.3, 0.9}}, 0.01, LearnerConfig{});
    if (res.phats[0] == 0.9) ++right;
  }
  CHECK(right >= 95);
}

TEST_CASE("step 1 is within two delta on a close three-point buyer") {
  // R(0.3) = 0.3, R(0.6) = 0.6 * 0.52 = 0.312, R(0.9) = 0.9 * 0.34 = 0.306.
  const auto dist = ValueDistribution::discrete({0.3, 0.6, 0.9}, {0.48, 0.18, 0.34});
  const double delta = 0.005;
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    BanditEnvironment env(RevenueModel({dist}), kHuge, seed);
    const auto res = discrete_step1_find_phats(env, {{0.3, 0.6, 0.9}}, delta, LearnerConfig{});
    if (0.312 - revenue_curve_value(dist, res.phats[0]) <= 2.0 * delta) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("step 1 breaks ties toward the smaller price") {
  CurveEnvironment env(2, kHuge, [](std::span<const double>) { return 0.2; });
  const auto res = discrete_step1_find_phats(env, {{0.2, 0.5}, {0.1, 0.4, 0.7}}, 0.01, LearnerConfig{});
  CHECK(res.phats == std::vector<double>{0.2, 0.1});
  // Predecessors sit at their largest candidate while a later buyer is probed.
  CHECK(env.posted.front() == std::vector<double>{0.5, 0.1});
}

TEST_CASE("step 2 keeps everything on a flat curve") {
  CurveEnvironment env(2, kHuge, [](std::span<const double>) { return 0.2; });
  const std::vector<CandidatePriceSet> sets{{0.2, 0.5}, {0.1, 0.4, 0.7}};
  const auto res = discrete_step2_shrink(env, sets, {0.2, 0.1}, 0.01, LearnerConfig{});
  CHECK(res.sets == sets);
}

TEST_CASE("step 2 drops the poor price of a two-point buyer") {
  BanditEnvironment env(RevenueModel({two_point()}), kHuge, 4);
  const auto res = discrete_step2_shrink(env, {{0.3, 0.9}}, {0.9}, 0.001, LearnerConfig{});
  CHECK(res.sets[0] == CandidatePriceSet{0.9});
}

TEST_CASE("one phase on two discrete buyers leaves only near-optimal vectors") {
  const RevenueModel model({two_point(), ValueDistribution::discrete({0.2, 0.6}, {0.4, 0.6})});
  const std::vector<double> v{0.2, 0.3, 0.6, 0.9};
  const double opt = grid_optimum(model, v);
  const double epsilon = 0.1;
  const double delta = epsilon / 400.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    BanditEnvironment env(model, kHuge, seed);
    const std::vector<CandidatePriceSet> sets(2, v);
    const auto s1 = discrete_step1_find_phats(env, sets, delta, LearnerConfig{});
    const auto s2 = discrete_step2_shrink(env, sets, s1.phats, delta, LearnerConfig{});
    for (double a : s2.sets[0]) {
      for (double b : s2.sets[1]) CHECK(opt - expected_revenue(model, std::vector{a, b}) <= epsilon);
    }
  }
}

TEST_CASE("run_general on discrete buyers uses their value set") {
  const RevenueModel model({two_point(), ValueDistribution::discrete({0.2, 0.6}, {0.4, 0.6})});
  LearnerConfig cfg;
  cfg.sample_scale = 1e-4;
  BanditEnvironment env(model, 1 << 16, 3);
  const auto report = run_general(env, cfg, std::vector<double>{0.9, 0.3, 0.6, 0.2, 0.3});
  CHECK(report.values == std::vector<double>{0.2, 0.3, 0.6, 0.9});
  CHECK(report.k == 4);
  CHECK(env.remaining_budget() == 0);
  for (const auto& ph : report.phases) {
    for (std::size_t i = 0; i < 2; ++i) CHECK(ph.sets_out[i].size() <= ph.sets_in[i].size());
  }
  std::ostringstream csv;
  write_candidate_sets_csv(csv, report);
  CHECK(csv.str().rfind("phase,buyer,price\n", 0) == 0);
}

TEST_CASE("run_general on continuous buyers uses the grid") {
  LearnerConfig cfg;
  cfg.sample_scale = 1e-4;
  BanditEnvironment env(RevenueModel({ValueDistribution::uniform()}), 1 << 15, 3);
  const auto report = run_general(env, cfg);
  CHECK(report.k == default_discretization_k(1, 1 << 15));
  CHECK(report.values == discretize(report.k).grid);

  cfg.discretization_k = 7;
  BanditEnvironment env2(RevenueModel({ValueDistribution::uniform()}), 1 << 15, 3);
  CHECK(run_general(env2, cfg).k == 7);
}

TEST_CASE("run_general rejects more candidates than rounds") {
  LearnerConfig cfg;
  cfg.discretization_k = 60;
  BanditEnvironment env(RevenueModel({ValueDistribution::uniform(), ValueDistribution::uniform()}), 100, 1);
  CHECK_THROWS_AS(run_general(env, cfg), ConfigError);
  BanditEnvironment env2(RevenueModel({ValueDistribution::uniform()}), 100, 1);
  CHECK_THROWS_AS(run_general(env2, LearnerConfig{}, std::vector<double>{}), ConfigError);
}
