#include "spp/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spp/errors.hpp"

namespace spp {

void LearnerConfig::validate() const {
  if (!(concentration > 0.0)) throw ConfigError("concentration", "must be positive");
  if (!(sample_scale > 0.0 && sample_scale <= 1.0)) throw ConfigError("sample_scale", "must lie in (0, 1]");
  if (!(tail_margin > 0.0 && tail_margin < 1e-3)) throw ConfigError("tail_margin", "must lie in (0, 1e-3)");
  if (!(phase_floor_coefficient >= 0.0)) throw ConfigError("phase_floor_coefficient", "must be nonnegative");
  if (!(lambda >= 1.0)) throw ConfigError("lambda", "must be at least 1");
  if (discretization_k < 0) throw ConfigError("discretization_k", "must be nonnegative");
}

double log_horizon(std::int64_t horizon) { return std::max(1.0, std::log(static_cast<double>(horizon))); }

std::int64_t batch_size(const LearnerConfig& cfg, double delta, std::int64_t horizon) {
  const double n = std::ceil(cfg.concentration * cfg.sample_scale * log_horizon(horizon) / (delta * delta));
  if (!(n < 9e18)) return std::numeric_limits<std::int64_t>::max() / 4;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

CoordinateProbe::CoordinateProbe(PricingEnvironment& env, std::vector<double> base, std::size_t coordinate)
    : env_(env), base_(std::move(base)), coordinate_(coordinate) {
  if (base_.size() != env_.buyers() || coordinate_ >= base_.size()) {
    throw ContractError("CoordinateProbe: base vector does not match the environment");
  }
}

BatchFeedback CoordinateProbe::test_raw(double price, std::int64_t rounds) {
  base_[coordinate_] = price;
  auto fb = env_.post_batch(base_, rounds);
  rounds_spent_ += fb.rounds;
  if (fb.rounds < rounds) exhausted_ = true;
  return fb;
}

Estimate CoordinateProbe::test(double price, std::int64_t rounds) {
  const auto fb = test_raw(price, rounds);
  return {price, fb.mean_revenue(), fb.rounds};
}

TrisectionResult trisection_search(CoordinateProbe& probe, ConfidenceInterval interval, double delta,
                                   std::int64_t batch) {
  TrisectionResult out;
  double l = interval.lo, r = interval.hi;
  auto record = [&](const Estimate& e) {
    if (e.rounds == 0) {
      out.truncated = true;
      return false;
    }
    out.tested.push_back(e);
    if (probe.exhausted()) out.truncated = true;
    return !out.truncated;
  };

  while (r - l > delta) {
    const double a = (2.0 * l + r) / 3.0;
    const double b = (l + 2.0 * r) / 3.0;
    const auto ea = probe.test(a, batch);
    if (!record(ea)) break;
    const auto eb = probe.test(b, batch);
    if (!record(eb)) break;
    if (ea.mean < eb.mean - 2.0 * delta) {
      l = a;
    } else {
      r = b;
    }
  }
  if (!out.truncated) record(probe.test(l, batch));

  out.final_interval = {l, r};
  if (out.tested.empty()) {
    out.best = {l, 0.0, 0};
  } else {
    out.best = *std::max_element(out.tested.begin(), out.tested.end(),
                                 [](const Estimate& x, const Estimate& y) { return x.mean < y.mean; });
  }
  return out;
}

LeftSearchResult left_binary_search(CoordinateProbe& probe, double lo, double phat, double benchmark, double slack,
                                    double tau, std::int64_t batch) {
  LeftSearchResult out{lo, phat, false};
  while (out.hi - out.lo >= tau) {
    const double m = 0.5 * (out.lo + out.hi);
    if (m <= out.lo || m >= out.hi) break;
    const auto e = probe.test(m, batch);
    if (e.rounds == 0) {
      out.truncated = true;
      break;
    }
    if (e.mean < benchmark - slack) {
      out.lo = m;
    } else {
      out.hi = m;
    }
    if (probe.exhausted()) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

RightSearchResult right_binary_search(CoordinateProbe& probe, double phat, double r, double benchmark, double slack,
                                      double special_slack, double tau, std::int64_t batch) {
  RightSearchResult out{r, false, false};
  const double top = r - tau;
  const auto edge = probe.test(top, batch);
  if (edge.rounds == 0) {
    out.truncated = true;
    return out;
  }
  if (edge.mean >= benchmark - special_slack) {
    out.special_case = true;
    out.truncated = probe.exhausted();
    return out;
  }
  if (probe.exhausted()) {
    out.truncated = true;
    return out;
  }
  double lb = phat, rb = top;
  while (rb - lb >= tau) {
    const double m = 0.5 * (lb + rb);
    if (m <= lb || m >= rb) break;
    const auto e = probe.test(m, batch);
    if (e.rounds == 0) {
      out.truncated = true;
      break;
    }
    if (e.mean < benchmark - slack) {
      rb = m;
    } else {
      lb = m;
    }
    if (probe.exhausted()) {
      out.truncated = true;
      break;
    }
  }
  out.hi = rb;
  return out;
}

}  // namespace spp
