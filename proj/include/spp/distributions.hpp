#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spp/random.hpp"

namespace spp {

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

// Exponential law with the given rate, truncated to [0,1].
struct TruncatedExponential {
  double rate = 1.0;
};

// CDF given by linear interpolation between (x, F) knots. The first knot has
// F = 0, the last F = 1; F is 0 left of the first knot.
struct PiecewiseLinearCdf {
  std::vector<std::pair<double, double>> knots;
};

struct DiscretePmf {
  std::vector<double> values;
  std::vector<double> probs;
};

using DistributionFamily = std::variant<Uniform, TruncatedExponential, PiecewiseLinearCdf, DiscretePmf>;

// A value law supported in [0,1]. Immutable after construction.
class ValueDistribution {
 public:
  explicit ValueDistribution(DistributionFamily family);

  static ValueDistribution uniform(double lo = 0.0, double hi = 1.0);
  static ValueDistribution truncated_exponential(double rate);
  static ValueDistribution piecewise_linear(std::vector<std::pair<double, double>> knots);
  static ValueDistribution discrete(std::vector<double> values, std::vector<double> probs);

  const DistributionFamily& family() const noexcept { return family_; }
  bool is_continuous() const noexcept { return !std::holds_alternative<DiscretePmf>(family_); }
  std::string describe() const;

  // F(x) = P(v <= x).
  double cdf(double x) const;
  // P(v < x), the left limit F(x-). Equal to cdf for atomless laws.
  double prob_below(double x) const;
  // P(v >= x): the probability a posted price x is accepted.
  double prob_accept(double x) const { return 1.0 - prob_below(x); }
  // Generalized inverse inf{x : F(x) >= q}.
  double quantile(double q) const;
  // Density where defined; nullopt for discrete laws. Knots use the right segment
  // (left segment at the top of the support).
  std::optional<double> density(double x) const;

  double sample(RandomStream& rng) const { return quantile(rng.uniform()); }

  // Support atoms of a discrete law; empty for continuous families.
  std::vector<double> atoms() const;
  double support_min() const;
  double support_max() const;

 private:
  DistributionFamily family_;
  // Cumulative probabilities of DiscretePmf atoms.
  std::vector<double> cumulative_;
};

struct HalfConcavityReport {
  bool single_peaked = false;
  double peak = 0.0;
  bool lipschitz_ok = false;
  bool concave_before_peak_ok = false;
  double max_chord_violation = 0.0;

  bool passed() const { return single_peaked && lipschitz_ok && concave_before_peak_ok; }
};

struct RegularityReport {
  bool regular = false;
  // False for laws without a density; `regular` is then false as well.
  bool applicable = true;
  double worst_quantile_chord_violation = 0.0;
  // Largest drop of the virtual value between consecutive grid points (0 if monotone).
  double worst_virtual_value_drop = 0.0;
};

inline constexpr double kCheckTolerance = 1e-9;

double cdf_at(const ValueDistribution& dist, double x);
double quantile_at(const ValueDistribution& dist, double q);
double sample(const ValueDistribution& dist, RandomStream& rng);
double virtual_value(const ValueDistribution& dist, double v);
double revenue_curve_value(const ValueDistribution& dist, double p);

RegularityReport check_regularity(const ValueDistribution& dist, double grid_step = 1e-3);
HalfConcavityReport check_half_concavity(const ValueDistribution& dist, double grid_step = 1e-3,
                                         double tol = kCheckTolerance);

// Worst midpoint-chord violation of the value-space revenue curve on [lo, hi].
double revenue_chord_violation(const ValueDistribution& dist, double lo, double hi, double grid_step);

// Distributions used by `verify-distributions` and the half-concavity tests.
std::vector<std::pair<std::string, ValueDistribution>> distribution_suite();

}  // namespace spp
