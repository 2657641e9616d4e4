#include "spp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "spp/errors.hpp"

namespace spp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void validate(const Uniform& u) {
  if (!(in_unit(u.lo) && in_unit(u.hi) && u.lo < u.hi)) {
    throw ContractError("Uniform: need 0 <= lo < hi <= 1");
  }
}

void validate(const TruncatedExponential& e) {
  if (!std::isfinite(e.rate) || e.rate == 0.0) {
    throw ContractError("TruncatedExponential: rate must be finite and nonzero");
  }
}

void validate(const PiecewiseLinearCdf& p) {
  const auto& k = p.knots;
  if (k.size() < 2) throw ContractError("PiecewiseLinearCdf: need at least two knots");
  if (k.front().second != 0.0 || k.back().second != 1.0) {
    throw ContractError("PiecewiseLinearCdf: first knot must have F=0 and last F=1");
  }
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!in_unit(k[i].first) || !in_unit(k[i].second)) {
      throw ContractError("PiecewiseLinearCdf: knots must lie in [0,1]^2");
    }
    if (i > 0 && (k[i].first <= k[i - 1].first || k[i].second < k[i - 1].second)) {
      throw ContractError("PiecewiseLinearCdf: x must increase strictly and F must not decrease");
    }
  }
}

void validate(const DiscretePmf& d) {
  if (d.values.empty() || d.values.size() != d.probs.size()) {
    throw ContractError("DiscretePmf: values and probs must be nonempty and of equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (!in_unit(d.values[i])) throw ContractError("DiscretePmf: values must lie in [0,1]");
    if (i > 0 && d.values[i] <= d.values[i - 1]) {
      throw ContractError("DiscretePmf: values must be strictly increasing");
    }
    if (!(d.probs[i] >= 0.0)) throw ContractError("DiscretePmf: probabilities must be nonnegative");
    total += d.probs[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ContractError("DiscretePmf: probabilities must sum to 1");
}

// Index of the first knot with F >= q (q > 0).
std::size_t first_knot_reaching(const PiecewiseLinearCdf& p, double q) {
  auto it = std::lower_bound(p.knots.begin(), p.knots.end(), q,
                             [](const auto& knot, double value) { return knot.second < value; });
  return static_cast<std::size_t>(it - p.knots.begin());
}

double plc_cdf(const PiecewiseLinearCdf& p, double x) {
  const auto& k = p.knots;
  if (x < k.front().first) return 0.0;
  if (x >= k.back().first) return 1.0;
  auto it = std::upper_bound(k.begin(), k.end(), x, [](double value, const auto& knot) { return value < knot.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (x - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

ValueDistribution::ValueDistribution(DistributionFamily family) : family_(std::move(family)) {
  std::visit([](const auto& f) { validate(f); }, family_);
  if (const auto* d = std::get_if<DiscretePmf>(&family_)) {
    cumulative_.resize(d->probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d->probs.size(); ++i) {
      acc += d->probs[i];
      cumulative_[i] = acc;
    }
    cumulative_.back() = 1.0;
  }
}

ValueDistribution ValueDistribution::uniform(double lo, double hi) { return ValueDistribution(Uniform{lo, hi}); }

ValueDistribution ValueDistribution::truncated_exponential(double rate) {
  return ValueDistribution(TruncatedExponential{rate});
}

ValueDistribution ValueDistribution::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  return ValueDistribution(PiecewiseLinearCdf{std::move(knots)});
}

ValueDistribution ValueDistribution::discrete(std::vector<double> values, std::vector<double> probs) {
  return ValueDistribution(DiscretePmf{std::move(values), std::move(probs)});
}

std::string ValueDistribution::describe() const {
  return std::visit(
      Overloaded{
          [](const Uniform& u) { return "uniform(" + format_number(u.lo) + "," + format_number(u.hi) + ")"; },
          [](const TruncatedExponential& e) { return "truncated_exponential(" + format_number(e.rate) + ")"; },
          [](const PiecewiseLinearCdf& p) {
            std::ostringstream os;
            os << "piecewise_linear(";
            for (std::size_t i = 0; i < p.knots.size(); ++i) {
              os << (i ? ";" : "") << format_number(p.knots[i].first) << ":" << format_number(p.knots[i].second);
            }
            os << ")";
            return os.str();
          },
          [](const DiscretePmf& d) {
            std::ostringstream os;
            os << "discrete(";
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              os << (i ? ";" : "") << format_number(d.values[i]) << ":" << format_number(d.probs[i]);
            }
            os << ")";
            return os.str();
          },
      },
      family_);
}

double ValueDistribution::cdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const Uniform& u) { return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
          [x](const TruncatedExponential& e) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return std::clamp(std::expm1(-e.rate * x) / std::expm1(-e.rate), 0.0, 1.0);
          },
          [x](const PiecewiseLinearCdf& p) { return plc_cdf(p, x); },
          [this, x](const DiscretePmf& d) {
            auto it = std::upper_bound(d.values.begin(), d.values.end(), x);
            if (it == d.values.begin()) return 0.0;
            return cumulative_[static_cast<std::size_t>(it - d.values.begin()) - 1];
          },
      },
      family_);
}

double ValueDistribution::prob_below(double x) const {
  if (const auto* d = std::get_if<DiscretePmf>(&family_)) {
    auto it = std::lower_bound(d->values.begin(), d->values.end(), x);
    if (it == d->values.begin()) return 0.0;
    return cumulative_[static_cast<std::size_t>(it - d->values.begin()) - 1];
  }
  return cdf(x);
}

double ValueDistribution::quantile(double q) const {
  return std::visit(
      Overloaded{
          [q](const Uniform& u) { return u.lo + q * (u.hi - u.lo); },
          [q](const TruncatedExponential& e) {
            if (q >= 1.0) return 1.0;
            const double x = -std::log1p(q * std::expm1(-e.rate)) / e.rate;
            return std::clamp(x, 0.0, 1.0);
          },
          [q](const PiecewiseLinearCdf& p) {
            if (q <= 0.0) return p.knots.front().first;
            const std::size_t k = first_knot_reaching(p, q);
            const auto& hi = p.knots[k];
            const auto& lo = p.knots[k - 1];
            const double t = (q - lo.second) / (hi.second - lo.second);
            return lo.first + t * (hi.first - lo.first);
          },
          [this, q](const DiscretePmf& d) {
            auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), q);
            if (it == cumulative_.end()) return d.values.back();
            return d.values[static_cast<std::size_t>(it - cumulative_.begin())];
          },
      },
      family_);
}

std::optional<double> ValueDistribution::density(double x) const {
  return std::visit(
      Overloaded{
          [x](const Uniform& u) -> std::optional<double> {
            return (x >= u.lo && x <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0;
          },
          [x](const TruncatedExponential& e) -> std::optional<double> {
            if (x < 0.0 || x > 1.0) return 0.0;
            return -e.rate * std::exp(-e.rate * x) / std::expm1(-e.rate);
          },
          [x](const PiecewiseLinearCdf& p) -> std::optional<double> {
            const auto& k = p.knots;
            if (x < k.front().first || x > k.back().first) return 0.0;
            auto it = std::upper_bound(k.begin(), k.end(), x,
                                       [](double value, const auto& knot) { return value < knot.first; });
            if (it == k.end()) --it;  // top of the support: left segment
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            return (hi.second - lo.second) / (hi.first - lo.first);
          },
          [](const DiscretePmf&) -> std::optional<double> { return std::nullopt; },
      },
      family_);
}

std::vector<double> ValueDistribution::atoms() const {
  if (const auto* d = std::get_if<DiscretePmf>(&family_)) return d->values;
  return {};
}

double ValueDistribution::support_min() const {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return u.lo; },
                        [](const TruncatedExponential&) { return 0.0; },
                        [](const PiecewiseLinearCdf& p) { return p.knots.front().first; },
                        [](const DiscretePmf& d) { return d.values.front(); },
                    },
                    family_);
}

double ValueDistribution::support_max() const {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return u.hi; },
                        [](const TruncatedExponential&) { return 1.0; },
                        [](const PiecewiseLinearCdf& p) { return p.knots.back().first; },
                        [](const DiscretePmf& d) { return d.values.back(); },
                    },
                    family_);
}

double cdf_at(const ValueDistribution& dist, double x) {
  if (!in_unit(x)) throw DomainError("cdf_at: x outside [0,1]");
  return dist.cdf(x);
}

double quantile_at(const ValueDistribution& dist, double q) {
  if (!in_unit(q)) throw DomainError("quantile_at: q outside [0,1]");
  return dist.quantile(q);
}

double sample(const ValueDistribution& dist, RandomStream& rng) { return dist.sample(rng); }

double virtual_value(const ValueDistribution& dist, double v) {
  if (!in_unit(v)) throw DomainError("virtual_value: v outside [0,1]");
  const auto f = dist.density(v);
  if (!f) throw NotApplicableError("virtual_value: distribution has no density");
  if (*f <= 0.0) throw NotApplicableError("virtual_value: zero density at v");
  return v - (1.0 - dist.cdf(v)) / *f;
}

double revenue_curve_value(const ValueDistribution& dist, double p) {
  if (!in_unit(p)) throw DomainError("revenue_curve_value: p outside [0,1]");
  return p * dist.prob_accept(p);
}

namespace {

std::size_t grid_points(double step) {
  if (!(step > 0.0 && step <= 0.1)) throw ContractError("grid_step must lie in (0, 0.1]");
  return static_cast<std::size_t>(std::llround(1.0 / step));
}

}  // namespace

RegularityReport check_regularity(const ValueDistribution& dist, double grid_step) {
  const std::size_t k = grid_points(grid_step);
  RegularityReport report;
  if (!dist.is_continuous()) {
    report.applicable = false;
    report.regular = false;
    return report;
  }

  // Quantile space: R_q(q) = q * F^{-1}(1 - q) must be concave.
  std::vector<double> rq(k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    const double q = static_cast<double>(j) / static_cast<double>(k);
    rq[j] = q * dist.quantile(1.0 - q);
  }
  for (std::size_t j = 1; j < k; ++j) {
    const double violation = 0.5 * (rq[j - 1] + rq[j + 1]) - rq[j];
    report.worst_quantile_chord_violation = std::max(report.worst_quantile_chord_violation, violation);
  }

  // Value space: phi must not decrease where the density is positive.
  std::optional<double> previous;
  for (std::size_t j = 0; j <= k; ++j) {
    const double v = static_cast<double>(j) / static_cast<double>(k);
    const auto f = dist.density(v);
    if (!f || *f <= 0.0) continue;
    const double phi = v - (1.0 - dist.cdf(v)) / *f;
    if (previous) report.worst_virtual_value_drop = std::max(report.worst_virtual_value_drop, *previous - phi);
    previous = phi;
  }

  report.regular = report.worst_quantile_chord_violation <= kCheckTolerance &&
                   report.worst_virtual_value_drop <= kCheckTolerance;
  return report;
}

HalfConcavityReport check_half_concavity(const ValueDistribution& dist, double grid_step, double tol) {
  if (!(tol > 0.0)) throw ContractError("check_half_concavity: tol must be positive");
  const std::size_t k = grid_points(grid_step);
  const double step = 1.0 / static_cast<double>(k);
  std::vector<double> r(k + 1);
  for (std::size_t j = 0; j <= k; ++j) r[j] = revenue_curve_value(dist, static_cast<double>(j) / static_cast<double>(k));

  const std::size_t peak = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  HalfConcavityReport report;
  report.peak = static_cast<double>(peak) / static_cast<double>(k);

  report.single_peaked = true;
  for (std::size_t j = 0; j < k; ++j) {
    const bool ok = j < peak ? r[j + 1] >= r[j] - tol : r[j + 1] <= r[j] + tol;
    if (!ok) {
      report.single_peaked = false;
      break;
    }
  }

  report.lipschitz_ok = true;
  for (std::size_t j = 0; j < peak; ++j) {
    if (std::abs(r[j + 1] - r[j]) > step + tol) {
      report.lipschitz_ok = false;
      break;
    }
  }

  for (std::size_t j = 1; j < peak; ++j) {
    report.max_chord_violation = std::max(report.max_chord_violation, 0.5 * (r[j - 1] + r[j + 1]) - r[j]);
  }
  report.concave_before_peak_ok = report.max_chord_violation <= tol;
  return report;
}

double revenue_chord_violation(const ValueDistribution& dist, double lo, double hi, double grid_step) {
  if (!(in_unit(lo) && in_unit(hi) && lo <= hi)) throw DomainError("revenue_chord_violation: bad range");
  if (!(grid_step > 0.0)) throw ContractError("revenue_chord_violation: grid_step must be positive");
  const auto m = static_cast<std::size_t>(std::floor((hi - lo) / grid_step));
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 <= m; ++j) {
    const double x = lo + static_cast<double>(j) * grid_step;
    const double left = revenue_curve_value(dist, x - grid_step);
    const double right = revenue_curve_value(dist, std::min(1.0, x + grid_step));
    worst = std::max(worst, 0.5 * (left + right) - revenue_curve_value(dist, x));
  }
  return worst;
}

std::vector<std::pair<std::string, ValueDistribution>> distribution_suite() {
  std::vector<double> er_x{0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::pair<double, double>> equal_revenue{{0.0, 0.0}};
  for (double x : er_x) equal_revenue.emplace_back(x, 1.0 - 0.5 / x);
  equal_revenue.emplace_back(1.0, 1.0);

  return {
      {"uniform(0,1)", ValueDistribution::uniform(0.0, 1.0)},
      {"uniform(0.2,0.8)", ValueDistribution::uniform(0.2, 0.8)},
      {"uniform(0.8,1)", ValueDistribution::uniform(0.8, 1.0)},
      {"truncated_exponential(2)", ValueDistribution::truncated_exponential(2.0)},
      {"truncated_exponential(5)", ValueDistribution::truncated_exponential(5.0)},
      {"truncated_exponential(-2)", ValueDistribution::truncated_exponential(-2.0)},
      {"piecewise_linear(increasing density)", ValueDistribution::piecewise_linear({{0.0, 0.0}, {0.5, 0.2}, {1.0, 1.0}})},
      {"piecewise_linear(bimodal)",
       ValueDistribution::piecewise_linear({{0.0, 0.0}, {0.2, 0.45}, {0.7, 0.55}, {1.0, 1.0}})},
      {"piecewise_linear(near equal revenue)", ValueDistribution::piecewise_linear(equal_revenue)},
      {"discrete(0.3:0.5;0.9:0.5)", ValueDistribution::discrete({0.3, 0.9}, {0.5, 0.5})},
  };
}

}  // namespace spp
