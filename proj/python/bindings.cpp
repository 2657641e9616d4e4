#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spp/adversarial.hpp"
#include "spp/distributions.hpp"
#include "spp/environment.hpp"
#include "spp/errors.hpp"
#include "spp/experiment.hpp"
#include "spp/general_discrete.hpp"
#include "spp/multi_regular.hpp"
#include "spp/revenue.hpp"
#include "spp/single_regular.hpp"

namespace py = pybind11;
using namespace spp;

namespace {

ExperimentConfig config_from_json(const std::string& text) { return parse_experiment_config(nlohmann::json::parse(text)); }

py::dict row_dict(const ResultRow& r) {
  py::dict d;
  d["learner"] = r.learner;
  d["n"] = r.n;
  d["T"] = r.horizon;
  d["seed"] = r.seed;
  d["pseudo_regret"] = r.pseudo_regret;
  d["realized_regret"] = r.realized_regret;
  d["rounds_used"] = r.rounds_used;
  d["phases"] = r.phases;
  return d;
}

ResultRow row_from_dict(const py::dict& d) {
  ResultRow r;
  r.learner = d["learner"].cast<std::string>();
  r.n = d["n"].cast<std::size_t>();
  r.horizon = d["T"].cast<std::int64_t>();
  r.seed = d["seed"].cast<std::uint64_t>();
  r.pseudo_regret = d["pseudo_regret"].cast<double>();
  if (d.contains("realized_regret")) r.realized_regret = d["realized_regret"].cast<double>();
  if (d.contains("rounds_used")) r.rounds_used = d["rounds_used"].cast<std::int64_t>();
  return r;
}

py::dict run_summary(const BanditEnvironment& env) {
  py::dict d;
  d["pseudo_regret"] = env.ledger().cumulative_pseudo_regret;
  d["revenue"] = env.ledger().cumulative_realized_revenue;
  d["rounds_used"] = env.ledger().rounds_used;
  d["optimal_prices"] = env.optimum().prices;
  d["optimal_value"] = env.optimum().value;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bandit sequential posted pricing";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<HorizonError>(m, "HorizonError", PyExc_RuntimeError);
  py::register_exception<NotApplicableError>(m, "NotApplicableError", PyExc_RuntimeError);

  py::class_<ValueDistribution>(m, "ValueDistribution")
      .def_static("uniform", &ValueDistribution::uniform, py::arg("lo") = 0.0, py::arg("hi") = 1.0)
      .def_static("truncated_exponential", &ValueDistribution::truncated_exponential, py::arg("rate"))
      .def_static("piecewise_linear", &ValueDistribution::piecewise_linear, py::arg("knots"))
      .def_static("discrete", &ValueDistribution::discrete, py::arg("values"), py::arg("probs"))
      .def("cdf", &ValueDistribution::cdf)
      .def("prob_accept", &ValueDistribution::prob_accept)
      .def("quantile", &ValueDistribution::quantile)
      .def("density", &ValueDistribution::density)
      .def("atoms", &ValueDistribution::atoms)
      .def_property_readonly("is_continuous", &ValueDistribution::is_continuous)
      .def("revenue", [](const ValueDistribution& d, double p) { return revenue_curve_value(d, p); })
      .def("virtual_value", [](const ValueDistribution& d, double v) { return virtual_value(d, v); })
      .def("is_regular", [](const ValueDistribution& d) { return check_regularity(d).regular; })
      .def("is_half_concave", [](const ValueDistribution& d) { return check_half_concavity(d).passed(); })
      .def("to_json", [](const ValueDistribution& d) { return distribution_to_json(d).dump(); })
      .def("__repr__", &ValueDistribution::describe);

  m.def(
      "distribution_from_json",
      [](const std::string& text) { return parse_distribution(nlohmann::json::parse(text), "distribution"); },
      py::arg("text"));

  m.def(
      "expected_revenue",
      [](const std::vector<ValueDistribution>& buyers, const std::vector<double>& prices) {
        return expected_revenue(RevenueModel(buyers), prices);
      },
      py::arg("buyers"), py::arg("prices"));

  m.def(
      "optimal_prices",
      [](const std::vector<ValueDistribution>& buyers, double grid_step) {
        const auto opt = optimal_prices_dp(RevenueModel(buyers), grid_step);
        return py::make_tuple(opt.prices, opt.value);
      },
      py::arg("buyers"), py::arg("grid_step") = 1e-4);

  py::class_<LearnerConfig>(m, "LearnerConfig")
      .def(py::init<>())
      .def_static("for_multi", &LearnerConfig::for_multi)
      .def_readwrite("concentration", &LearnerConfig::concentration)
      .def_readwrite("sample_scale", &LearnerConfig::sample_scale)
      .def_readwrite("tail_margin", &LearnerConfig::tail_margin)
      .def_readwrite("phase_floor_coefficient", &LearnerConfig::phase_floor_coefficient)
      .def_readwrite("lambda_", &LearnerConfig::lambda)
      .def_readwrite("discretization_k", &LearnerConfig::discretization_k)
      .def("validate", &LearnerConfig::validate);

  m.def(
      "run_learner",
      [](const std::string& learner, const std::vector<ValueDistribution>& buyers, std::int64_t horizon,
         std::uint64_t seed, std::optional<LearnerConfig> cfg) {
        const auto kind = learner_from_string(learner);
        BanditEnvironment env(RevenueModel(buyers), horizon, seed);
        py::dict out;
        switch (kind) {
          case LearnerKind::SingleRegular: {
            const auto report = run_single_regular(env, cfg.value_or(LearnerConfig{}));
            out = run_summary(env);
            out["phases"] = report.phases.size();
            out["exploit_prices"] = std::vector<double>{report.exploit_price};
            break;
          }
          case LearnerKind::MultiRegular: {
            const auto report = run_multi_regular(env, cfg.value_or(LearnerConfig::for_multi()));
            out = run_summary(env);
            out["phases"] = report.phases.size();
            out["exploit_prices"] = report.exploit_prices;
            break;
          }
          case LearnerKind::General: {
            const auto report = run_general(env, cfg.value_or(LearnerConfig{}));
            out = run_summary(env);
            out["phases"] = report.phases.size();
            out["exploit_prices"] = report.exploit_prices;
            break;
          }
          case LearnerKind::FixedOracle: {
            env.post_batch(env.optimum().prices, horizon);
            out = run_summary(env);
            out["phases"] = 0;
            out["exploit_prices"] = env.optimum().prices;
            break;
          }
        }
        return out;
      },
      py::arg("learner"), py::arg("buyers"), py::arg("horizon"), py::arg("seed"), py::arg("config") = py::none());

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto cfg = config_from_json(config_json);
        std::vector<ResultRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(cfg);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("config_json"));

  m.def(
      "fit_scaling",
      [](const std::vector<py::dict>& rows, const std::string& learner, std::size_t n) {
        std::vector<ResultRow> parsed;
        for (const auto& d : rows) parsed.push_back(row_from_dict(d));
        return fit_to_json(fit_scaling(parsed, learner, n)).dump();
      },
      py::arg("rows"), py::arg("learner"), py::arg("n"));

  m.def(
      "results_csv",
      [](const std::vector<py::dict>& rows) {
        std::vector<ResultRow> parsed;
        for (const auto& d : rows) parsed.push_back(row_from_dict(d));
        std::ostringstream out;
        write_results_csv(out, parsed);
        return out.str();
      },
      py::arg("rows"));

  m.def(
      "lowerbound",
      [](std::int64_t horizon, const std::vector<std::uint64_t>& seeds, double eps_lb) {
        std::vector<AdversarialRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_lowerbound(horizon, seeds, eps_lb);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["seed"] = r.seed;
          d["strategy"] = r.strategy;
          d["total_revenue"] = r.total_revenue;
          d["horizon"] = r.horizon;
          out.append(d);
        }
        return out;
      },
      py::arg("horizon"), py::arg("seeds"), py::arg("eps_lb") = 1e-6);

  m.def(
      "adversarial_bits",
      [](std::int64_t horizon, std::uint64_t seed) { return build_instance(horizon, seed).bits_string(); },
      py::arg("horizon"), py::arg("seed"));
}
