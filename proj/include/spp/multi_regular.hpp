#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spp/probe.hpp"

namespace spp {

enum class SubAlgCase { SmallReach, EstimableSuffix, SmallTailMass };

std::string to_string(SubAlgCase c);

struct MultiLearnerState {
  std::vector<ConfidenceInterval> intervals;
  double epsilon = 1.0;
  double delta = 0.0;  // epsilon / (100 n^2)
  double tau = 1e-9;
  std::vector<double> phats;

  static MultiLearnerState initial(std::size_t n, double epsilon, double tau);
  std::size_t buyers() const { return intervals.size(); }
  double safe_price(std::size_t i) const { return intervals.at(i).hi - tau; }
  // (r^s_1, ..., r^s_{i-1}, p, phat_{i+1}, ..., phat_n) with p = `price`.
  std::vector<double> probe_vector(std::size_t i, double price) const;
};

struct ReachEstimate {
  double value = 0.0;
  std::int64_t rounds = 0;
  bool truncated = false;
};

struct SubAlgOutcome {
  double phat_i = 0.0;
  SubAlgCase case_taken = SubAlgCase::SmallReach;
  double reach = 0.0;                  // P-hat_i
  double tail_cdf = -1.0;              // F-hat_i(r^s_i), -1 when not estimated
  double suffix_revenue = -1.0;        // Rev-hat(S_{i+1}), -1 when not estimated
  std::int64_t rounds = 0;
  bool budget_exhausted = false;
};

struct IntervalSearchOutcome {
  ConfidenceInterval interval;
  bool left_corrected = false;  // the endpoint test moved the left end to r_b1
  bool special_case = false;
  std::int64_t rounds = 0;
  bool budget_exhausted = false;
};

// Buyer indices are 0-based throughout.
ReachEstimate estimate_reach_probability(PricingEnvironment& env, const MultiLearnerState& state, std::size_t i,
                                         const LearnerConfig& cfg);

SubAlgOutcome subalg_find_phat_i(PricingEnvironment& env, const MultiLearnerState& state, std::size_t i,
                                 const LearnerConfig& cfg);

// Trisection with delta = epsilon / (100 lambda) on buyer i's coordinate; returns the best tested price.
TrisectionResult general_halfconcave_search(PricingEnvironment& env, const MultiLearnerState& state, std::size_t i,
                                            double lambda, ConfidenceInterval interval, double epsilon,
                                            const LearnerConfig& cfg);

// Sets state.phats from the last buyer to the first.
std::vector<SubAlgOutcome> find_all_phats(PricingEnvironment& env, MultiLearnerState& state, const LearnerConfig& cfg);

IntervalSearchOutcome binary_search_interval_i(PricingEnvironment& env, const MultiLearnerState& state, std::size_t i,
                                               const LearnerConfig& cfg);

struct MainSubroutineResult {
  std::vector<ConfidenceInterval> intervals;
  std::vector<SubAlgOutcome> subalg;
  std::vector<IntervalSearchOutcome> searches;
  std::int64_t rounds = 0;
  bool budget_exhausted = false;
};

MainSubroutineResult main_subroutine(PricingEnvironment& env, MultiLearnerState& state, const LearnerConfig& cfg);

struct MultiPhaseReport {
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<ConfidenceInterval> intervals_in;
  std::vector<ConfidenceInterval> intervals_out;
  std::vector<double> phats;
  std::vector<SubAlgOutcome> subalg;
  std::int64_t rounds_spent = 0;
  bool budget_exhausted = false;
};

struct MultiRunReport {
  std::vector<MultiPhaseReport> phases;
  std::vector<double> exploit_prices;
  std::int64_t exploit_rounds = 0;
  bool budget_exhausted = false;
};

// Phases run while epsilon > coefficient * n^2.5 * ln T / sqrt(sample_scale * T).
double multi_phase_floor(const LearnerConfig& cfg, std::size_t n, std::int64_t horizon);

MultiRunReport run_multi_regular(PricingEnvironment& env, const LearnerConfig& cfg);

// Columns: buyer, phase, case_taken, l, r, phat, reach.
void write_multi_phase_csv(std::ostream& out, const MultiRunReport& report);

}  // namespace spp
