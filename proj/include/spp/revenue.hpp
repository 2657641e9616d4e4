#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spp/distributions.hpp"

namespace spp {

// Ordered buyers; buyer 0 is offered the item first.
class RevenueModel {
 public:
  explicit RevenueModel(std::vector<ValueDistribution> buyers);

  std::size_t size() const noexcept { return buyers_.size(); }
  const ValueDistribution& buyer(std::size_t i) const { return buyers_.at(i); }
  const std::vector<ValueDistribution>& buyers() const noexcept { return buyers_; }

  bool all_continuous() const;

 private:
  std::vector<ValueDistribution> buyers_;
};

struct OptimalPricing {
  std::vector<double> prices;
  double value = 0.0;
  // suffix_values[i]: expected revenue of buyers i.. once the item reaches i. Length n+1, last entry 0.
  std::vector<double> suffix_values;
};

// Throws ContractError on length mismatch and DomainError on a price outside [0,1].
void validate_prices(const RevenueModel& model, std::span<const double> prices);

double expected_revenue(const RevenueModel& model, std::span<const double> prices);

// Same layout as OptimalPricing::suffix_values.
std::vector<double> suffix_values_at(const RevenueModel& model, std::span<const double> prices);

// p * P(v >= p) + P(v < p) * continuation.
double stage_objective(const ValueDistribution& dist, double p, double continuation);

// Maximizer of stage_objective over the grid j/K (plus atoms), refined once around the grid argmax.
// Ties go to the smaller price.
double best_stage_price(const ValueDistribution& dist, double continuation, double grid_step);

OptimalPricing optimal_prices_dp(const RevenueModel& model, double grid_step = 1e-4);

// Exhaustive search over the product grid; meant as a test oracle. Refuses n > 4 or grids
// with more than kBruteForceLimit vectors.
inline constexpr double kBruteForceLimit = 2e9;
OptimalPricing brute_force_optimal(const RevenueModel& model, double grid_step);

}  // namespace spp
