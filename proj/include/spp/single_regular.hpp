#pragma once

#include <cstdint>
#include <vector>

#include "spp/probe.hpp"

namespace spp {

struct FindPhatResult {
  double phat = 0.0;
  double mean = 0.0;
  std::int64_t rounds = 0;
  bool budget_exhausted = false;
};

struct RefineResult {
  ConfidenceInterval interval;
  double benchmark = 0.0;
  bool special_case = false;
  std::int64_t rounds = 0;
  bool budget_exhausted = false;
};

struct PhaseReport {
  double epsilon = 0.0;
  ConfidenceInterval interval_in;
  ConfidenceInterval interval_out;
  double phat = 0.0;
  std::int64_t rounds_spent = 0;
  bool budget_exhausted = false;
};

struct SingleRunReport {
  std::vector<PhaseReport> phases;
  double exploit_price = 0.0;
  std::int64_t exploit_rounds = 0;
  bool budget_exhausted = false;
};

// Single-buyer routines act on coordinate 0 of a one-buyer environment.
FindPhatResult find_phat(PricingEnvironment& env, ConfidenceInterval interval, double epsilon,
                         const LearnerConfig& cfg);

RefineResult refine_interval(PricingEnvironment& env, ConfidenceInterval interval, double epsilon, double phat,
                             const LearnerConfig& cfg);

// Phases run while epsilon > coefficient * ln T / sqrt(sample_scale * T).
double single_phase_floor(const LearnerConfig& cfg, std::int64_t horizon);

SingleRunReport run_single_regular(PricingEnvironment& env, const LearnerConfig& cfg);

}  // namespace spp
