#include "spp/revenue.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spp/errors.hpp"

namespace spp {

RevenueModel::RevenueModel(std::vector<ValueDistribution> buyers) : buyers_(std::move(buyers)) {
  if (buyers_.empty()) throw ContractError("RevenueModel: need at least one buyer");
}

bool RevenueModel::all_continuous() const {
  return std::all_of(buyers_.begin(), buyers_.end(), [](const auto& b) { return b.is_continuous(); });
}

void validate_prices(const RevenueModel& model, std::span<const double> prices) {
  if (prices.size() != model.size()) throw ContractError("price vector length does not match the model");
  for (double p : prices) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("price outside [0,1]");
  }
}

double expected_revenue(const RevenueModel& model, std::span<const double> prices) {
  validate_prices(model, prices);
  double total = 0.0;
  double reach = 1.0;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    const auto& b = model.buyer(i);
    total += reach * prices[i] * b.prob_accept(prices[i]);
    reach *= b.prob_below(prices[i]);
  }
  return total;
}

std::vector<double> suffix_values_at(const RevenueModel& model, std::span<const double> prices) {
  validate_prices(model, prices);
  std::vector<double> out(prices.size() + 1, 0.0);
  for (std::size_t i = prices.size(); i-- > 0;) {
    out[i] = stage_objective(model.buyer(i), prices[i], out[i + 1]);
  }
  return out;
}

double stage_objective(const ValueDistribution& dist, double p, double continuation) {
  return p * dist.prob_accept(p) + dist.prob_below(p) * continuation;
}

namespace {

std::size_t grid_count(double grid_step) { return static_cast<std::size_t>(std::llround(1.0 / grid_step)); }

// Grid points j/K merged with the support atoms, sorted and unique.
std::vector<double> candidate_grid(const ValueDistribution& dist, std::size_t k) {
  std::vector<double> grid(k + 1);
  for (std::size_t j = 0; j <= k; ++j) grid[j] = static_cast<double>(j) / static_cast<double>(k);
  const auto atoms = dist.atoms();
  grid.insert(grid.end(), atoms.begin(), atoms.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

double best_stage_price(const ValueDistribution& dist, double continuation, double grid_step) {
  const std::size_t k = grid_count(grid_step);
  const auto grid = candidate_grid(dist, k);
  double best_p = grid.front();
  double best_v = stage_objective(dist, best_p, continuation);
  for (double p : grid) {
    const double v = stage_objective(dist, p, continuation);
    if (v > best_v) {
      best_v = v;
      best_p = p;
    }
  }

  constexpr int kRefine = 100;
  const double h = 1.0 / static_cast<double>(k);
  const double lo = std::max(0.0, best_p - h);
  const double hi = std::min(1.0, best_p + h);
  for (int j = 0; j <= 2 * kRefine; ++j) {
    const double p = std::min(hi, lo + (hi - lo) * j / (2.0 * kRefine));
    const double v = stage_objective(dist, p, continuation);
    if (v > best_v || (v == best_v && p < best_p)) {
      best_v = v;
      best_p = p;
    }
  }
  return best_p;
}

OptimalPricing optimal_prices_dp(const RevenueModel& model, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.01)) throw ContractError("optimal_prices_dp: grid_step must lie in (0, 0.01]");
  const std::size_t n = model.size();
  OptimalPricing out;
  out.prices.assign(n, 0.0);
  out.suffix_values.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    const double c = out.suffix_values[i + 1];
    out.prices[i] = best_stage_price(model.buyer(i), c, grid_step);
    out.suffix_values[i] = stage_objective(model.buyer(i), out.prices[i], c);
  }
  out.value = out.suffix_values[0];
  return out;
}

OptimalPricing brute_force_optimal(const RevenueModel& model, double grid_step) {
  const std::size_t n = model.size();
  if (n > 4) throw ContractError("brute_force_optimal: refuses more than 4 buyers");
  if (!(grid_step >= 1e-3 && grid_step <= 0.1)) throw ContractError("brute_force_optimal: grid_step must lie in [1e-3, 0.1]");
  const std::size_t k = grid_count(grid_step);

  struct Table {
    std::vector<double> price, gain, pass;
  };
  std::vector<Table> tables(n);
  double vectors = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = model.buyer(i);
    for (double p : candidate_grid(b, k)) {
      tables[i].price.push_back(p);
      tables[i].gain.push_back(p * b.prob_accept(p));
      tables[i].pass.push_back(b.prob_below(p));
    }
    vectors *= static_cast<double>(tables[i].price.size());
  }
  if (vectors > kBruteForceLimit) throw ContractError("brute_force_optimal: grid too large");

  std::vector<std::size_t> current(n, 0), best(n, 0);
  double best_value = -1.0;
  std::function<void(std::size_t, double, double)> recurse = [&](std::size_t i, double acc, double reach) {
    const auto& t = tables[i];
    if (i + 1 == n) {
      for (std::size_t j = 0; j < t.price.size(); ++j) {
        const double v = acc + reach * t.gain[j];
        if (v > best_value) {
          best_value = v;
          current[i] = j;
          best = current;
        }
      }
      return;
    }
    for (std::size_t j = 0; j < t.price.size(); ++j) {
      current[i] = j;
      recurse(i + 1, acc + reach * t.gain[j], reach * t.pass[j]);
    }
  };
  recurse(0, 0.0, 1.0);

  OptimalPricing out;
  for (std::size_t i = 0; i < n; ++i) out.prices.push_back(tables[i].price[best[i]]);
  out.suffix_values = suffix_values_at(model, out.prices);
  out.value = out.suffix_values[0];
  return out;
}

}  // namespace spp
