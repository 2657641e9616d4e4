#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "spp/distributions.hpp"
#include "spp/environment.hpp"
#include "spp/errors.hpp"
#include "spp/random.hpp"

namespace test_support {

// Random continuous law: uniform subinterval, truncated exponential, or a monotone piecewise-linear CDF.
inline spp::ValueDistribution random_distribution(spp::RandomStream& rng) {
  const double kind = rng.uniform();
  if (kind < 1.0 / 3.0) {
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    if (b - a < 0.05) b = std::min(1.0, a + 0.05), a = b - 0.05;
    return spp::ValueDistribution::uniform(a, b);
  }
  if (kind < 2.0 / 3.0) {
    double rate = 0.5 + 5.0 * rng.uniform();
    if (rng.coin()) rate = -rate;
    return spp::ValueDistribution::truncated_exponential(rate);
  }
  std::vector<double> xs{0.0, 1.0}, fs{0.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    xs.push_back(0.05 + 0.9 * rng.uniform());
    fs.push_back(rng.uniform());
  }
  std::sort(xs.begin(), xs.end());
  std::sort(fs.begin(), fs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<double, double>> knots;
  for (std::size_t i = 0; i < xs.size(); ++i) knots.emplace_back(xs[i], fs[std::min(i, fs.size() - 1)]);
  knots.back().second = 1.0;
  return spp::ValueDistribution::piecewise_linear(knots);
}

// Noise-free environment whose mean revenue is a fixed function of the posted vector.
class CurveEnvironment final : public spp::PricingEnvironment {
 public:
  CurveEnvironment(std::size_t n, std::int64_t horizon, std::function<double(std::span<const double>)> curve)
      : n_(n), horizon_(horizon), curve_(std::move(curve)) {}

  std::size_t buyers() const override { return n_; }
  std::int64_t horizon() const override { return horizon_; }
  std::int64_t remaining_budget() const override { return horizon_ - used_; }

  spp::RoundFeedback post_prices(std::span<const double> prices) override {
    if (remaining_budget() <= 0) throw spp::HorizonError("spent");
    ++used_;
    return {std::nullopt, curve_(prices)};
  }
  spp::BatchFeedback post_batch(std::span<const double> prices, std::int64_t rounds) override {
    spp::BatchFeedback fb;
    fb.rounds = std::min(rounds, remaining_budget());
    fb.wins.assign(n_, 0);
    fb.no_sale = fb.rounds;
    fb.revenue = curve_(prices) * static_cast<double>(fb.rounds);
    used_ += fb.rounds;
    posted.emplace_back(prices.begin(), prices.end());
    return fb;
  }

  std::vector<std::vector<double>> posted;

 private:
  std::size_t n_;
  std::int64_t horizon_;
  std::int64_t used_ = 0;
  std::function<double(std::span<const double>)> curve_;
};

}  // namespace test_support
