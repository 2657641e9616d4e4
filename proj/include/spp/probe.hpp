#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spp/environment.hpp"

namespace spp {

struct LearnerConfig {
  // C in the batch-size rule N = ceil(C * sample_scale * ln T / delta^2).
  double concentration = 8.0;
  double sample_scale = 1.0;
  // tau: safety gap below interval upper ends, and the width at which binary searches stop.
  double tail_margin = 1e-9;
  // Phases run while epsilon > coefficient * (guard numerator) * ln T / sqrt(sample_scale * T).
  double phase_floor_coefficient = 1.0;
  // Concavity parameter of the generalized trisection (multi-buyer Case 3).
  double lambda = 2.0;
  // Discretization level for continuous buyers of the general learner; 0 picks it from n and T.
  int discretization_k = 0;

  static LearnerConfig for_multi() {
    LearnerConfig cfg;
    cfg.concentration = 16.0;
    return cfg;
  }

  void validate() const;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

std::int64_t batch_size(const LearnerConfig& cfg, double delta, std::int64_t horizon);

// Natural log of the horizon, floored at 1 so tiny horizons still give positive batches.
double log_horizon(std::int64_t horizon);

struct Estimate {
  double price = 0.0;
  double mean = 0.0;
  std::int64_t rounds = 0;
};

// Tests price vectors in which one coordinate varies and the others stay fixed.
class CoordinateProbe {
 public:
  CoordinateProbe(PricingEnvironment& env, std::vector<double> base, std::size_t coordinate);

  // Mean total revenue over up to `rounds` rounds at the given coordinate price. Returns nullopt-like
  // Estimate with rounds == 0 once the budget is gone.
  Estimate test(double price, std::int64_t rounds);
  BatchFeedback test_raw(double price, std::int64_t rounds);

  std::int64_t rounds_spent() const noexcept { return rounds_spent_; }
  // True once a batch came back shorter than requested.
  bool exhausted() const noexcept { return exhausted_; }
  std::size_t coordinate() const noexcept { return coordinate_; }
  const std::vector<double>& base() const noexcept { return base_; }
  PricingEnvironment& env() noexcept { return env_; }

 private:
  PricingEnvironment& env_;
  std::vector<double> base_;
  std::size_t coordinate_;
  std::int64_t rounds_spent_ = 0;
  bool exhausted_ = false;
};

struct TrisectionResult {
  Estimate best;
  std::vector<Estimate> tested;
  ConfidenceInterval final_interval;
  bool truncated = false;
};

// Keep-two-thirds search: tests a = (2l+r)/3 and b = (l+2r)/3, keeps [a, r] when
// mean(a) < mean(b) - 2 delta and [l, b] otherwise, stops at width <= delta, tests the left end,
// and returns the tested price with the highest mean (first one on ties).
TrisectionResult trisection_search(CoordinateProbe& probe, ConfidenceInterval interval, double delta,
                                   std::int64_t batch);

struct LeftSearchResult {
  double lo = 0.0;  // last price judged below the benchmark band (or the start)
  double hi = 0.0;  // last price judged inside it (or phat)
  bool truncated = false;
};

// Binary search on [lo, phat] for the left end of {p : mean(p) >= benchmark - slack}.
LeftSearchResult left_binary_search(CoordinateProbe& probe, double lo, double phat, double benchmark, double slack,
                                    double tau, std::int64_t batch);

struct RightSearchResult {
  double hi = 0.0;
  bool special_case = false;
  bool truncated = false;
};

// Probes r - tau against benchmark - special_slack; if good keeps r, else binary-searches [phat, r - tau]
// with `slack`.
RightSearchResult right_binary_search(CoordinateProbe& probe, double phat, double r, double benchmark, double slack,
                                      double special_slack, double tau, std::int64_t batch);

}  // namespace spp
