"""Laboratory for scoring-rule prediction markets with costly information.

Exact rational arithmetic throughout the analysis code; see the README for
a tour of the modules and the command-line interface.
"""

__version__ = "0.1.0"

from .acquisition import (KappaVerdict, ScanGrid, instant_opportunity, kappa_separability_scan,
                          kappa_threshold, net_gain, no_information_acquisition)
from .classifier import SecurityClass, adversarial_structure, classify
from .market import MarketTrace, detect_convergence, infer_public_belief, run_market
from .model import (InformationStructure, Security, StateSpace, condition,
                    conditional_expectation, validate_structure)
from .poll import (AccuracyRecord, accuracy_market, cost_sweep, market_value, poll_accuracy,
                   run_poll)
from .scenario import Scenario, load
from .scoring import ScoringRule, expected_score, msr_round_payoff, myopic_best, score
from .separability import (LambdaCertificate, NonSepWitness, check_witness,
                           closed_form_four_state_witness, find_lambda_certificate,
                           find_nonseparable_witness)
from .signals import (CostStructure, Signal, bayes_posterior, is_garbling, random_posterior,
                      signal_cost, validate_cost)

__all__ = [
    "AccuracyRecord", "CostStructure", "InformationStructure", "KappaVerdict",
    "LambdaCertificate", "MarketTrace", "NonSepWitness", "ScanGrid", "Scenario", "ScoringRule",
    "Security", "SecurityClass", "Signal", "StateSpace", "accuracy_market",
    "adversarial_structure", "bayes_posterior", "check_witness", "classify",
    "closed_form_four_state_witness", "condition", "conditional_expectation", "cost_sweep",
    "detect_convergence", "expected_score", "find_lambda_certificate",
    "find_nonseparable_witness", "infer_public_belief", "instant_opportunity", "is_garbling",
    "kappa_separability_scan", "kappa_threshold", "load", "market_value", "msr_round_payoff",
    "myopic_best", "net_gain", "no_information_acquisition", "poll_accuracy",
    "random_posterior", "run_market", "run_poll", "score", "signal_cost",
    "validate_cost", "validate_structure",
]
