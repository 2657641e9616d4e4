#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spp/probe.hpp"

namespace spp {

// Sorted candidate prices of one buyer.
using CandidatePriceSet = std::vector<double>;

struct DiscretizationSpec {
  int k = 1;
  std::vector<double> grid;  // {1/k, 2/k, ..., 1}
};

DiscretizationSpec discretize(int k);

// max(1, round(n^{-5/3} T^{1/3})).
int default_discretization_k(std::size_t n, std::int64_t horizon);

struct Step1Result {
  std::vector<double> phats;
  std::int64_t rounds = 0;
  bool budget_exhausted = false;
};

// Enumerates every candidate of buyer i (from the last buyer to the first) with predecessors at
// max CP_j and successors at their chosen prices; keeps the empirical argmax (smaller price on ties).
Step1Result discrete_step1_find_phats(PricingEnvironment& env, const std::vector<CandidatePriceSet>& sets,
                                      double delta, const LearnerConfig& cfg);

struct Step2Result {
  std::vector<CandidatePriceSet> sets;
  std::int64_t rounds = 0;
  bool budget_exhausted = false;
};

// Drops p from CP_i when mean(p) < mean(phat_i) - 2(n-i+1) delta - 2 delta (1-based i).
Step2Result discrete_step2_shrink(PricingEnvironment& env, const std::vector<CandidatePriceSet>& sets,
                                  const std::vector<double>& phats, double delta, const LearnerConfig& cfg);

struct GeneralPhaseReport {
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<CandidatePriceSet> sets_in;
  std::vector<CandidatePriceSet> sets_out;
  std::vector<double> phats;
  std::int64_t rounds_spent = 0;
  bool budget_exhausted = false;
};

struct GeneralRunReport {
  int k = 0;
  std::vector<double> values;
  std::vector<GeneralPhaseReport> phases;
  std::vector<double> exploit_prices;
  std::int64_t exploit_rounds = 0;
  bool budget_exhausted = false;
};

// Phases run while epsilon > coefficient * n^2.5 * sqrt(k) * ln T / sqrt(sample_scale * T).
double general_phase_floor(const LearnerConfig& cfg, std::size_t n, std::size_t k, std::int64_t horizon);

// `values` is the common value set V; when absent the grid {j/k} is used. Throws ConfigError when n * |V| > T.
GeneralRunReport run_general(PricingEnvironment& env, const LearnerConfig& cfg,
                             std::optional<std::vector<double>> values = std::nullopt);

// Columns: phase, buyer, price (surviving candidates after each phase).
void write_candidate_sets_csv(std::ostream& out, const GeneralRunReport& report);

}  // namespace spp
