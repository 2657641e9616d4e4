#include "doctest.h"

#include <cmath>
#include <vector>

#include "spp/errors.hpp"
#include "spp/probe.hpp"
#include "spp/single_regular.hpp"
#include "test_support.hpp"

using namespace spp;
using test_support::CurveEnvironment;

namespace {

constexpr std::int64_t kHuge = std::int64_t{1} << 40;

double uniform_revenue(double p) { return p * (1.0 - p); }

BanditEnvironment uniform_env(std::uint64_t seed, std::int64_t horizon = kHuge) {
  return BanditEnvironment(RevenueModel({ValueDistribution::uniform()}), horizon, seed);
}

// CDF 1 - c/x on [c, 1), so the revenue curve is flat at c there; linear interpolation on a fine grid.
ValueDistribution equal_revenue(double c) {
  std::vector<std::pair<double, double>> knots{{0.0, 0.0}, {c, 0.0}};
  for (double x = c + 0.01; x < 0.995; x += 0.01) knots.emplace_back(x, 1.0 - c / x);
  knots.emplace_back(1.0, 1.0);
  return ValueDistribution::piecewise_linear(knots);
}

}  // namespace

TEST_CASE("batch size") {
  LearnerConfig cfg;
  CHECK(log_horizon(2) == 1.0);
  CHECK(log_horizon(1000) == doctest::Approx(std::log(1000.0)));
  CHECK(batch_size(cfg, 0.1, 1000) == static_cast<std::int64_t>(std::ceil(8.0 * std::log(1000.0) / 0.01)));
  CHECK(batch_size(cfg, 0.5, 2) == 32);
  cfg.sample_scale = 1e-9;
  CHECK(batch_size(cfg, 0.5, 2) == 1);
}

TEST_CASE("config validation names the field") {
  LearnerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.sample_scale = 0.0;
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "sample_scale");
  }
  cfg = {};
  cfg.lambda = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.tail_margin = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("trisection on a noise-free concave curve") {
  CurveEnvironment env(1, kHuge, [](std::span<const double> p) { return uniform_revenue(p[0]); });
  CoordinateProbe probe(env, {0.0}, 0);
  const auto res = trisection_search(probe, {0.0, 1.0}, 1e-3, 10);
  CHECK_FALSE(res.truncated);
  CHECK(std::abs(res.best.price - 0.5) < 0.05);
  CHECK(res.final_interval.width() <= 1e-3);
  CHECK(uniform_revenue(res.best.price) >= 0.25 - 0.01);
  CHECK(probe.rounds_spent() == 10 * static_cast<std::int64_t>(res.tested.size()));
}

TEST_CASE("trisection ties keep the left part and the first tested price") {
  CurveEnvironment env(1, kHuge, [](std::span<const double>) { return 0.3; });
  CoordinateProbe probe(env, {0.0}, 0);
  const auto res = trisection_search(probe, {0.0, 1.0}, 0.01, 1);
  CHECK(res.final_interval.lo == 0.0);
  CHECK(res.best.price == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("binary searches find the band edges") {
  CurveEnvironment env(1, kHuge, [](std::span<const double> p) { return uniform_revenue(p[0]); });
  CoordinateProbe probe(env, {0.5}, 0);
  // {p : p(1-p) >= 0.25 - 0.01} = [0.4, 0.6].
  const auto left = left_binary_search(probe, 0.0, 0.5, 0.25, 0.01, 1e-9, 1);
  CHECK(left.lo <= 0.4);
  CHECK(left.hi >= 0.4);
  CHECK(left.hi - left.lo < 1e-8);
  const auto right = right_binary_search(probe, 0.5, 1.0, 0.25, 0.01, 0.01, 1e-9, 1);
  CHECK_FALSE(right.special_case);
  CHECK(right.hi >= 0.6);
  CHECK(right.hi - 0.6 < 1e-8);

  const auto flat = right_binary_search(probe, 0.5, 0.55, 0.25, 0.01, 0.01, 1e-9, 1);
  CHECK(flat.special_case);
  CHECK(flat.hi == 0.55);
}

TEST_CASE("probe stops at the budget") {
  CurveEnvironment env(1, 25, [](std::span<const double>) { return 0.1; });
  CoordinateProbe probe(env, {0.0}, 0);
  const auto res = trisection_search(probe, {0.0, 1.0}, 1e-3, 10);
  CHECK(res.truncated);
  CHECK(probe.exhausted());
  CHECK(probe.rounds_spent() == 25);
  CHECK(env.remaining_budget() == 0);
}

TEST_CASE("find_phat meets the half-epsilon guarantee") {
  const LearnerConfig cfg;
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto env = uniform_env(seed);
    const auto res = find_phat(env, {0.0, 1.0}, 0.1, cfg);
    REQUIRE_FALSE(res.budget_exhausted);
    if (uniform_revenue(res.phat) >= 0.25 - 0.05) ++good;
  }
  CHECK(good >= 190);
}

TEST_CASE("find_phat on an interval narrower than delta") {
  auto env = uniform_env(3);
  const LearnerConfig cfg;
  const auto res = find_phat(env, {0.3, 0.3005}, 0.1, cfg);
  CHECK(res.phat == 0.3);
  CHECK(res.rounds == batch_size(cfg, 0.001, kHuge));
}

TEST_CASE("refine_interval keeps the optimum and bounds the loss") {
  const LearnerConfig cfg;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto env = uniform_env(seed);
    const auto found = find_phat(env, {0.0, 1.0}, 0.1, cfg);
    const auto res = refine_interval(env, {0.0, 1.0}, 0.1, found.phat, cfg);
    REQUIRE_FALSE(res.budget_exhausted);
    CHECK(res.interval.contains(0.5));
    for (double p = res.interval.lo; p <= res.interval.hi - cfg.tail_margin; p += 1e-3) {
      CHECK(0.25 - uniform_revenue(p) <= 0.1);
    }
  }
}

TEST_CASE("refine_interval with phat at the left end") {
  auto env = uniform_env(5);
  const auto res = refine_interval(env, {0.5, 1.0}, 0.1, 0.5, LearnerConfig{});
  CHECK(res.interval.lo == 0.5);
}

TEST_CASE("refine_interval special case keeps the right end") {
  const auto dist = equal_revenue(0.3);
  CHECK(revenue_curve_value(dist, 0.5) == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(revenue_curve_value(dist, 0.9) == doctest::Approx(0.3).epsilon(1e-3));
  BanditEnvironment env(RevenueModel({dist}), kHuge, 11);
  const auto res = refine_interval(env, {0.0, 0.9}, 0.1, 0.5, LearnerConfig{});
  CHECK(res.special_case);
  CHECK(res.interval.hi == 0.9);
}

TEST_CASE("tiny horizons skip every phase") {
  LearnerConfig cfg;
  cfg.phase_floor_coefficient = 10.0;
  auto env = uniform_env(1, 100);
  const auto report = run_single_regular(env, cfg);
  CHECK(report.phases.empty());
  CHECK(report.exploit_rounds == 100);
  CHECK(report.exploit_price >= 0.0);
  CHECK(report.exploit_price <= 1.0 - cfg.tail_margin);
  CHECK(env.remaining_budget() == 0);
}

TEST_CASE("phases nest and keep the optimum") {
  LearnerConfig cfg;
  // Floor at epsilon = 0.1: phases at 1, 1/2, 1/4, 1/8.
  cfg.phase_floor_coefficient = 0.1 * std::sqrt(static_cast<double>(kHuge)) / log_horizon(kHuge);
  int contained = 0;
  const int runs = 40;
  for (std::uint64_t seed = 1; seed <= runs; ++seed) {
    auto env = uniform_env(seed);
    const auto report = run_single_regular(env, cfg);
    REQUIRE(report.phases.size() == 4);
    bool ok = true;
    for (std::size_t k = 0; k < report.phases.size(); ++k) {
      const auto& ph = report.phases[k];
      CHECK(ph.interval_out.lo >= ph.interval_in.lo);
      CHECK(ph.interval_out.hi <= ph.interval_in.hi);
      if (k + 1 < report.phases.size()) {
        CHECK(report.phases[k + 1].interval_in.lo == ph.interval_out.lo);
        CHECK(report.phases[k + 1].interval_in.hi == ph.interval_out.hi);
      }
      ok = ok && ph.interval_out.contains(0.5);
    }
    if (ok) ++contained;
    CHECK(report.exploit_rounds + [&] {
      std::int64_t s = 0;
      for (const auto& ph : report.phases) s += ph.rounds_spent;
      return s;
    }() == kHuge);
  }
  CHECK(contained >= 38);
}

TEST_CASE("single-buyer learner rejects multi-buyer environments") {
  BanditEnvironment env(RevenueModel({ValueDistribution::uniform(), ValueDistribution::uniform()}), 100, 1);
  CHECK_THROWS_AS(run_single_regular(env, LearnerConfig{}), ContractError);
}
