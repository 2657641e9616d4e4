#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spp/environment.hpp"

namespace spp {

// Sum of b_i 2^{-i} over the bit string (characters '0'/'1').
double bin_of(std::string_view bits);

inline constexpr std::int64_t kMaxAdversarialHorizon = std::int64_t{1} << 31;

// Two-buyer oblivious instance. Rounds are 1-based. In round i the first buyer's value is
// 1/2 + eps_lb * alpha_i with alpha_i = Bin(s_1 .. s_{i-1} 0 1^{T-i+1}) (T+1 bits), and the second
// buyer's value is 1 when s_i = 1 and 0 otherwise.
class AdversarialInstance {
 public:
  AdversarialInstance(std::int64_t horizon, std::uint64_t seed, double eps_lb);

  std::int64_t horizon() const noexcept { return horizon_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double eps_lb() const noexcept { return eps_lb_; }

  int bit(std::int64_t i) const;
  const std::vector<std::uint64_t>& packed_bits() const noexcept { return words_; }
  std::string bits_string() const;

  // Double approximations (the leading 60 bits carry all the precision a double can hold).
  double alpha(std::int64_t i) const;
  double bin_s() const;
  double value1(std::int64_t i) const { return 0.5 + eps_lb_ * alpha(i); }
  double value2(std::int64_t i) const { return bit(i) == 1 ? 1.0 : 0.0; }

  // Exact sign of Bin(s) - alpha_i from the bit strings: +1, 0 or -1.
  int compare_bin_s_with_alpha(std::int64_t i) const;

 private:
  std::int64_t horizon_;
  std::uint64_t seed_;
  double eps_lb_;
  std::vector<std::uint64_t> words_;  // bit i (1-based) lives in word (i-1)/64, position 63 - (i-1)%64
};

AdversarialInstance build_instance(std::int64_t horizon, std::uint64_t seed, double eps_lb = 1e-6);

// Lexicographic comparison of alpha_i against s built word by word from the packed bits; an
// independent route to compare_bin_s_with_alpha.
int packed_compare_bin_s_with_alpha(const std::vector<std::uint64_t>& s_words, std::int64_t horizon, std::int64_t i);

// Total revenue of posting (p1, p2) in every round. Sale iff value >= price.
double fixed_threshold_revenue(const AdversarialInstance& inst, double p1, double p2);

// Total revenue of p1 = 1/2 + eps_lb * Bin(s), compared exactly through the bit strings.
double bin_threshold_revenue(const AdversarialInstance& inst, double p2);

// Plays the instance round by round behind the learner-facing interface.
class AdversarialEnvironment final : public PricingEnvironment {
 public:
  explicit AdversarialEnvironment(const AdversarialInstance& inst) : inst_(inst) {}

  std::size_t buyers() const override { return 2; }
  std::int64_t horizon() const override { return inst_.horizon(); }
  std::int64_t remaining_budget() const override { return inst_.horizon() - rounds_used_; }

  RoundFeedback post_prices(std::span<const double> prices) override;
  BatchFeedback post_batch(std::span<const double> prices, std::int64_t rounds) override;

  double total_revenue() const noexcept { return revenue_; }

 private:
  const AdversarialInstance& inst_;
  std::int64_t rounds_used_ = 0;
  double revenue_ = 0.0;
};

// One-buyer view of a multi-buyer environment: the other coordinates stay at fixed prices.
class FirstBuyerView final : public PricingEnvironment {
 public:
  FirstBuyerView(PricingEnvironment& inner, std::vector<double> rest);

  std::size_t buyers() const override { return 1; }
  std::int64_t horizon() const override { return inner_.horizon(); }
  std::int64_t remaining_budget() const override { return inner_.remaining_budget(); }
  RoundFeedback post_prices(std::span<const double> prices) override;
  BatchFeedback post_batch(std::span<const double> prices, std::int64_t rounds) override;

 private:
  std::vector<double> full(std::span<const double> prices);

  PricingEnvironment& inner_;
  std::vector<double> rest_;
};

using OnlineLearner = std::function<void(PricingEnvironment&)>;

// Runs the learner on a fresh environment and returns its realized total revenue.
double evaluate_online_learner(const AdversarialInstance& inst, const OnlineLearner& learner);

struct AdversarialRow {
  std::uint64_t seed = 0;
  std::string strategy;
  double total_revenue = 0.0;
  std::int64_t horizon = 0;
};

void write_adversarial_csv(std::ostream& out, const std::vector<AdversarialRow>& rows);

}  // namespace spp
