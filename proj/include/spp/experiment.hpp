#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spp/adversarial.hpp"
#include "spp/distributions.hpp"
#include "spp/probe.hpp"

namespace spp {

enum class LearnerKind { SingleRegular, MultiRegular, General, FixedOracle };

std::string to_string(LearnerKind kind);
LearnerKind learner_from_string(const std::string& name, const std::string& path = "learner");

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<ValueDistribution> model;
  LearnerKind learner = LearnerKind::SingleRegular;
  std::vector<std::int64_t> horizons;
  std::vector<std::uint64_t> seeds;
  LearnerConfig learner_config;
  double oracle_grid_step = 1e-4;
  double eps_lb = 1e-6;
  // Per-round logs with hidden draws; every logged run is replay-checked.
  bool log_rounds = false;
  bool phase_logs = false;
  unsigned threads = 0;
  std::string output = "out";
};

// Throws ConfigError naming the offending field.
ValueDistribution parse_distribution(const nlohmann::json& j, const std::string& path);
nlohmann::json distribution_to_json(const ValueDistribution& dist);
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

struct ResultRow {
  std::string learner;
  std::size_t n = 0;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  double pseudo_regret = 0.0;
  double realized_regret = 0.0;
  std::int64_t rounds_used = 0;
  std::size_t phases = 0;
};

struct ReplicaOutput {
  ResultRow row;
  std::string phase_csv;
  std::string round_log_csv;
  std::optional<bool> replay_ok;
};

// Seed of the environment for one (horizon, seed) replica.
std::uint64_t replica_seed(std::int64_t horizon, std::uint64_t seed);

ReplicaOutput run_replica(const ExperimentConfig& cfg, std::int64_t horizon, std::uint64_t seed);

// All (horizon, seed) replicas, run in parallel and sorted by (horizon, seed).
std::vector<ReplicaOutput> run_experiment_detailed(const ExperimentConfig& cfg);
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

struct HorizonSummary {
  std::int64_t horizon = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double standard_error = 0.0;
};

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<HorizonSummary> per_horizon;
  std::vector<std::string> warnings;
};

// Least squares of log(mean pseudo-regret) on log T over rows of one learner and buyer count.
// Needs at least 3 horizons with positive means and at least 5 seeds each; throws ContractError otherwise.
ScalingFit fit_scaling(const std::vector<ResultRow>& rows, const std::string& learner, std::size_t n);

// Columns: learner,n,T,seed,pseudo_regret,realized_regret,rounds_used.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& in);
nlohmann::json fit_to_json(const ScalingFit& fit);
void write_regret_svg(std::ostream& out, const ScalingFit& fit, const std::string& title);

// Learners run against the adversarial instance: the single-buyer learner on the first buyer with
// the second price at 1, the multi-buyer learner and the general learner on the native values {1/2, 1}.
std::vector<std::pair<std::string, OnlineLearner>> adversarial_learner_suite(const LearnerConfig& cfg = {});

// One row per seed for the fixed pair (1/2 + eps_lb Bin(s), 1) and one per learner of the suite.
std::vector<AdversarialRow> run_lowerbound(std::int64_t horizon, const std::vector<std::uint64_t>& seeds,
                                           double eps_lb, const LearnerConfig& cfg = {});

}  // namespace spp
