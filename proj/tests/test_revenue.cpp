#include "doctest.h"

#include <cmath>
#include <vector>

#include "spp/errors.hpp"
#include "spp/revenue.hpp"
#include "test_support.hpp"

using namespace spp;

TEST_CASE("expected revenue") {
  RevenueModel one({ValueDistribution::uniform()});
  CHECK(expected_revenue(one, std::vector{0.5}) == doctest::Approx(0.25));
  RevenueModel two({ValueDistribution::uniform(), ValueDistribution::uniform()});
  CHECK(expected_revenue(two, std::vector{0.625, 0.5}) == doctest::Approx(0.625 * 0.375 + 0.625 * 0.25));
  CHECK(expected_revenue(two, std::vector{1.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(expected_revenue(two, std::vector{0.5}), ContractError);
  CHECK_THROWS_AS(expected_revenue(two, std::vector{0.5, 1.5}), DomainError);
}

TEST_CASE("suffix values") {
  RevenueModel two({ValueDistribution::uniform(), ValueDistribution::uniform()});
  auto s = suffix_values_at(two, std::vector{0.625, 0.5});
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(0.390625));
  CHECK(s[1] == doctest::Approx(0.25));
  CHECK(s[2] == 0.0);
  auto opt = optimal_prices_dp(two);
  auto again = suffix_values_at(two, opt.prices);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i] == doctest::Approx(opt.suffix_values[i]).epsilon(1e-14));
}

TEST_CASE("dp on uniform buyers") {
  RevenueModel one({ValueDistribution::uniform()});
  auto o1 = optimal_prices_dp(one);
  CHECK(o1.prices[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(o1.value == doctest::Approx(0.25).epsilon(1e-9));
  auto b1 = brute_force_optimal(one, 1e-3);
  CHECK(std::abs(b1.value - 0.25) <= 1e-4);

  RevenueModel two({ValueDistribution::uniform(), ValueDistribution::uniform()});
  auto o2 = optimal_prices_dp(two);
  CHECK(o2.prices[0] == doctest::Approx(0.625).epsilon(1e-6));
  CHECK(o2.prices[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(o2.value == doctest::Approx(0.390625).epsilon(1e-9));
  // Stage calculus: d/dp [p(1-p) + 0.25 p] = 1.25 - 2p.
  CHECK(1.25 - 2 * o2.prices[0] == doctest::Approx(0.0).epsilon(1e-6));

  RevenueModel three({ValueDistribution::uniform(), ValueDistribution::uniform(), ValueDistribution::uniform()});
  auto o3 = optimal_prices_dp(three);
  CHECK(o3.prices[0] == doctest::Approx(0.6953125).epsilon(1e-6));
  CHECK(o3.value == doctest::Approx(0.6953125 * 0.6953125).epsilon(1e-8));
  auto b3 = brute_force_optimal(three, 2e-3);
  CHECK(o3.value >= b3.value - 3 * 2e-3);
  CHECK(std::abs(o3.value - b3.value) <= 3 * 2e-3);
}

TEST_CASE("dp agrees with brute force on random 2-buyer models") {
  RandomStream rng(2024);
  for (int m = 0; m < 20; ++m) {
    RevenueModel model({test_support::random_distribution(rng), test_support::random_distribution(rng)});
    CAPTURE(m);
    auto dp = optimal_prices_dp(model, 1e-3);
    auto bf = brute_force_optimal(model, 5e-3);
    CHECK(std::abs(dp.value - bf.value) <= 2 * 5e-3);
    CHECK(dp.value >= bf.value - 1e-12);
  }
}

TEST_CASE("discrete buyers match support enumeration") {
  RevenueModel model({ValueDistribution::discrete({0.3, 0.9}, {0.5, 0.5}),
                      ValueDistribution::discrete({0.2, 0.5, 0.7}, {0.3, 0.3, 0.4})});
  double best = 0.0;
  for (double a : {0.3, 0.9}) {
    for (double b : {0.2, 0.5, 0.7}) best = std::max(best, expected_revenue(model, std::vector{a, b}));
  }
  CHECK(brute_force_optimal(model, 1e-2).value == doctest::Approx(best).epsilon(1e-12));
  CHECK(optimal_prices_dp(model, 1e-2).value == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("dp structure") {
  RandomStream rng(5);
  for (int m = 0; m < 10; ++m) {
    std::vector<ValueDistribution> buyers;
    for (int i = 0; i < 3; ++i) buyers.push_back(test_support::random_distribution(rng));
    RevenueModel model(buyers);
    auto opt = optimal_prices_dp(model, 1e-3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(opt.suffix_values[i] ==
            doctest::Approx(stage_objective(model.buyer(i), opt.prices[i], opt.suffix_values[i + 1])).epsilon(1e-14));
      // Atomless buyers: each optimal price is at least the continuation value, unless the buyer
      // never beats it and the smallest no-sale price wins the tie.
      const double floor = std::min(opt.suffix_values[i + 1], model.buyer(i).support_max());
      CHECK(opt.prices[i] >= floor - 1e-3);
    }
    // Replacing a suffix by the optimal one never lowers revenue.
    std::vector<double> p{rng.uniform(), rng.uniform(), rng.uniform()};
    const double before = expected_revenue(model, p);
    p[1] = opt.prices[1];
    p[2] = opt.prices[2];
    CHECK(expected_revenue(model, p) >= before - 1e-12);
  }
}

TEST_CASE("brute force refusals") {
  std::vector<ValueDistribution> five(5, ValueDistribution::uniform());
  CHECK_THROWS_AS(brute_force_optimal(RevenueModel(five), 0.1), ContractError);
  std::vector<ValueDistribution> four(4, ValueDistribution::uniform());
  CHECK_THROWS_AS(brute_force_optimal(RevenueModel(four), 1e-3), ContractError);
  CHECK_THROWS_AS(RevenueModel({}), ContractError);
}
