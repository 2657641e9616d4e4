#include "spp/adversarial.hpp"

#include <cmath>
#include <ostream>

#include "spp/errors.hpp"
#include "spp/random.hpp"

namespace spp {

double bin_of(std::string_view bits) {
  if (bits.empty()) throw ContractError("bin_of: empty bit string");
  double value = 0.0;
  double weight = 0.5;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ContractError("bin_of: bits must be '0' or '1'");
    if (c == '1') value += weight;
    weight *= 0.5;
  }
  return value;
}

AdversarialInstance::AdversarialInstance(std::int64_t horizon, std::uint64_t seed, double eps_lb)
    : horizon_(horizon), seed_(seed), eps_lb_(eps_lb) {
  if (horizon < 1) throw ContractError("adversarial instance: horizon must be positive");
  if (horizon > kMaxAdversarialHorizon) throw ContractError("adversarial instance: horizon exceeds the memory cap");
  if (!(eps_lb > 0.0 && eps_lb < 0.5)) throw ContractError("adversarial instance: eps_lb must lie in (0, 0.5)");
  RandomStream rng(seed);
  const auto n_words = static_cast<std::size_t>((horizon + 63) / 64);
  words_.resize(n_words);
  for (auto& w : words_) w = rng.next_u64();
  const int used = static_cast<int>(horizon % 64);
  if (used != 0) words_.back() &= ~std::uint64_t{0} << (64 - used);
}

AdversarialInstance build_instance(std::int64_t horizon, std::uint64_t seed, double eps_lb) {
  return AdversarialInstance(horizon, seed, eps_lb);
}

int AdversarialInstance::bit(std::int64_t i) const {
  if (i < 1 || i > horizon_) throw ContractError("bit index out of range");
  const auto p = static_cast<std::uint64_t>(i - 1);
  return static_cast<int>((words_[p / 64] >> (63 - p % 64)) & 1U);
}

std::string AdversarialInstance::bits_string() const {
  std::string s;
  s.reserve(static_cast<std::size_t>(horizon_));
  for (std::int64_t i = 1; i <= horizon_; ++i) s.push_back(bit(i) ? '1' : '0');
  return s;
}

double AdversarialInstance::alpha(std::int64_t i) const {
  if (i < 1 || i > horizon_) throw ContractError("round index out of range");
  double prefix = 0.0;
  for (std::int64_t j = 1; j < i && j <= 60; ++j) {
    if (bit(j)) prefix += std::ldexp(1.0, -static_cast<int>(j));
  }
  const double ones = std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(i, 1100))) -
                      std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(horizon_ + 1, 1100)));
  return prefix + ones;
}

double AdversarialInstance::bin_s() const {
  double v = 0.0;
  for (std::int64_t j = 1; j <= horizon_ && j <= 60; ++j) {
    if (bit(j)) v += std::ldexp(1.0, -static_cast<int>(j));
  }
  return v;
}

int AdversarialInstance::compare_bin_s_with_alpha(std::int64_t i) const {
  if (i < 1 || i > horizon_) throw ContractError("round index out of range");
  // Walk positions 1..T+1; s has an implicit 0 at position T+1.
  for (std::int64_t p = 1; p <= horizon_ + 1; ++p) {
    const int s_bit = p <= horizon_ ? bit(p) : 0;
    const int a_bit = p < i ? s_bit : (p == i ? 0 : 1);
    if (s_bit != a_bit) return s_bit > a_bit ? 1 : -1;
  }
  return 0;
}

int packed_compare_bin_s_with_alpha(const std::vector<std::uint64_t>& s_words, std::int64_t horizon, std::int64_t i) {
  if (i < 1 || i > horizon) throw ContractError("round index out of range");
  auto mask = [](std::int64_t a, std::int64_t b) -> std::uint64_t {
    // Offsets a..b (0 = most significant), clamped to the word.
    a = std::max<std::int64_t>(a, 0);
    b = std::min<std::int64_t>(b, 63);
    if (a > b) return 0;
    return (~std::uint64_t{0} >> a) & (~std::uint64_t{0} << (63 - b));
  };
  const std::int64_t words = (horizon + 1 + 63) / 64;
  for (std::int64_t w = 0; w < words; ++w) {
    const std::int64_t first = 64 * w + 1;  // position of offset 0
    const std::uint64_t s = static_cast<std::size_t>(w) < s_words.size() ? s_words[static_cast<std::size_t>(w)] : 0;
    const std::uint64_t prefix = mask(0, i - 1 - first);
    const std::uint64_t ones = mask(i + 1 - first, horizon + 1 - first);
    const std::uint64_t a = (s & prefix) | ones;
    if (s != a) return s > a ? 1 : -1;
  }
  return 0;
}

double fixed_threshold_revenue(const AdversarialInstance& inst, double p1, double p2) {
  double total = 0.0;
  for (std::int64_t i = 1; i <= inst.horizon(); ++i) {
    if (inst.value1(i) >= p1) {
      total += p1;
    } else if (inst.value2(i) >= p2) {
      total += p2;
    }
  }
  return total;
}

double bin_threshold_revenue(const AdversarialInstance& inst, double p2) {
  const double p1 = 0.5 + inst.eps_lb() * inst.bin_s();
  double total = 0.0;
  for (std::int64_t i = 1; i <= inst.horizon(); ++i) {
    // v1 >= p1 exactly when alpha_i >= Bin(s).
    if (packed_compare_bin_s_with_alpha(inst.packed_bits(), inst.horizon(), i) <= 0) {
      total += p1;
    } else if (inst.value2(i) >= p2) {
      total += p2;
    }
  }
  return total;
}

RoundFeedback AdversarialEnvironment::post_prices(std::span<const double> prices) {
  if (prices.size() != 2) throw ContractError("adversarial environment has two buyers");
  for (double p : prices) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("price outside [0,1]");
  }
  if (remaining_budget() <= 0) throw HorizonError("round budget exhausted");
  const std::int64_t i = ++rounds_used_;
  RoundFeedback fb;
  if (inst_.value1(i) >= prices[0]) {
    fb = {0, prices[0]};
  } else if (inst_.value2(i) >= prices[1]) {
    fb = {1, prices[1]};
  }
  revenue_ += fb.revenue;
  return fb;
}

BatchFeedback AdversarialEnvironment::post_batch(std::span<const double> prices, std::int64_t rounds) {
  BatchFeedback out;
  out.wins.assign(2, 0);
  const std::int64_t m = std::min(rounds, remaining_budget());
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

FirstBuyerView::FirstBuyerView(PricingEnvironment& inner, std::vector<double> rest)
    : inner_(inner), rest_(std::move(rest)) {
  if (rest_.size() + 1 != inner_.buyers()) throw ContractError("FirstBuyerView: wrong number of fixed prices");
}

std::vector<double> FirstBuyerView::full(std::span<const double> prices) {
  if (prices.size() != 1) throw ContractError("FirstBuyerView exposes one buyer");
  std::vector<double> v{prices[0]};
  v.insert(v.end(), rest_.begin(), rest_.end());
  return v;
}

RoundFeedback FirstBuyerView::post_prices(std::span<const double> prices) { return inner_.post_prices(full(prices)); }

BatchFeedback FirstBuyerView::post_batch(std::span<const double> prices, std::int64_t rounds) {
  return inner_.post_batch(full(prices), rounds);
}

double evaluate_online_learner(const AdversarialInstance& inst, const OnlineLearner& learner) {
  AdversarialEnvironment env(inst);
  learner(env);
  return env.total_revenue();
}

void write_adversarial_csv(std::ostream& out, const std::vector<AdversarialRow>& rows) {
  out << "seed,strategy,total_revenue,revenue_per_round\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.strategy << ',' << r.total_revenue << ','
        << r.total_revenue / static_cast<double>(r.horizon) << '\n';
  }
}

}  // namespace spp
