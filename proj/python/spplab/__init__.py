"""Bandit learning of sequential posted prices."""

import json

from ._core import (
    ConfigError,
    ContractError,
    DomainError,
    HorizonError,
    LearnerConfig,
    NotApplicableError,
    ValueDistribution,
    adversarial_bits,
    distribution_from_json,
    expected_revenue,
    lowerbound,
    optimal_prices,
    results_csv,
    run_learner,
)
from . import _core


def run_experiment(config):
    """Run every (horizon, seed) replica of a config given as a dict or a JSON string."""
    text = config if isinstance(config, str) else json.dumps(config)
    return _core.run_experiment(text)


def fit_scaling(rows, learner, n):
    return json.loads(_core.fit_scaling(rows, learner, n))


__all__ = [
    "ConfigError",
    "ContractError",
    "DomainError",
    "HorizonError",
    "LearnerConfig",
    "NotApplicableError",
    "ValueDistribution",
    "adversarial_bits",
    "distribution_from_json",
    "expected_revenue",
    "fit_scaling",
    "lowerbound",
    "optimal_prices",
    "results_csv",
    "run_experiment",
    "run_learner",
]
