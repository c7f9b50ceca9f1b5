"""Polls versus markets: accuracy measures, the cost sweep and market value.

Accuracy of a prediction p at state w is 1 - |p - X(w)|, left unclamped.
Expectations over states and signal realizations are enumerated exactly;
market trees too large for that fall back to Monte Carlo.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Sequence

from .market import _Engine, enumerate_outcomes, initial_public, run_market
from .model import ModelError, is_value_degenerate
from .parallel import pmap
from .scenario import Scenario


@dataclass(frozen=True)
class PollResult:
    true_state: int
    announcements: tuple
    signals: tuple  # signal name or None, per trader
    prediction: object
    accuracy: object


def _poll_plans(scenario: Scenario, engine: _Engine | None = None):
    engine = engine or _Engine(scenario)
    pub = initial_public(scenario.prior, scenario.structure.n_traders)
    blank = next(iter(pub.atoms))[1][0]
    return [
        {s: engine.plan(pub, i, scenario.structure.cell(i, s), blank)
         for s in range(scenario.n_states) if scenario.prior[s]}
        for i in range(scenario.structure.n_traders)]


def run_poll(scenario: Scenario, true_state: int, seed: int = 0) -> PollResult:
    """One simultaneous round of myopic announcements, averaged."""
    rng = random.Random(seed)
    anns, sigs = [], []
    for plans in _poll_plans(scenario):
        plan = plans[true_state]
        r = None
        if plan.signal is not None:
            options = [k for k in plan.announce if plan.signal.table[k][true_state]]
            r = rng.choices(options, [float(plan.signal.table[k][true_state])
                                      for k in options])[0]
        anns.append(plan.announce[r])
        sigs.append(plan.signal.name if plan.signal else None)
    pred = sum(anns) / len(anns)
    return PollResult(true_state, tuple(anns), tuple(sigs), pred,
                      1 - abs(pred - scenario.security[true_state]))


def _poll_state_accuracy(scenario: Scenario, plans, s: int):
    branches = []
    for per_trader in plans:
        plan = per_trader[s]
        if plan.signal is None:
            branches.append([(1, plan.announce[None])])
        else:
            branches.append([(plan.signal.table[r][s], y) for r, y in plan.announce.items()
                             if plan.signal.table[r][s]])
    total = 0
    n = len(plans)
    for combo in itertools.product(*branches):
        prob = 1
        for p, _ in combo:
            prob *= p
        pred = sum(y for _, y in combo) / n
        total += prob * (1 - abs(pred - scenario.security[s]))
    return total


def poll_accuracy(scenario: Scenario, engine: _Engine | None = None) -> tuple[object, dict]:
    """Expected poll accuracy under the prior, with per-state values."""
    plans = _poll_plans(scenario, engine)
    per = {s: _poll_state_accuracy(scenario, plans, s)
           for s in range(scenario.n_states) if scenario.prior[s]}
    return sum(scenario.prior[s] * a for s, a in per.items()), per


def poll_acquires(scenario: Scenario, engine: _Engine | None = None) -> bool:
    return any(p.signal is not None for plans in _poll_plans(scenario, engine)
               for p in plans.values())


@dataclass(frozen=True)
class MarketAccuracy:
    value: object
    per_state: dict
    method: str = "exact"  # or "monte-carlo"
    stderr: float = 0.0
    acquired: bool = False
    profile: str = "myopic"  # accuracy under the simulated myopic profile


def market_accuracy(scenario: Scenario, max_rounds: int = 200, samples: int = 2000,
                    seed: int = 0, engine: _Engine | None = None) -> MarketAccuracy:
    engine = engine or _Engine(scenario)
    per, acquired, method, var = {}, False, "exact", 0.0
    for s in range(scenario.n_states):
        if not scenario.prior[s]:
            continue
        x = scenario.security[s]
        try:
            leaves = enumerate_outcomes(scenario, s, max_rounds, engine=engine)
            per[s] = sum(p * (1 - abs(t.final - x)) for p, t in leaves)
            acquired |= any(r.signal for _, t in leaves for r in t.records)
        except OverflowError:
            method = "monte-carlo"
            vals = []
            for k in range(samples):
                t = run_market(scenario, s, seed + k, max_rounds)
                vals.append(float(1 - abs(t.final - x)))
                acquired |= any(r.signal for r in t.records)
            mean = sum(vals) / samples
            per[s] = mean
            var += float(scenario.prior[s]) ** 2 * \
                sum((v - mean) ** 2 for v in vals) / (samples - 1) / samples
    value = sum(scenario.prior[s] * a for s, a in per.items())
    return MarketAccuracy(value, per, method, var ** 0.5, acquired)


def accuracy_market(scenario: Scenario, c=None, max_rounds: int = 200):
    if c is not None:
        scenario = scenario.with_cost(c)
    return market_accuracy(scenario, max_rounds).value


@dataclass(frozen=True)
class AccuracyRecord:
    c: object
    A_market: object
    A_poll: object
    per_state: dict = field(default_factory=dict)  # state -> (market, poll)
    market_acquires: bool = False
    poll_acquires: bool = False
    method: str = "exact"


@dataclass
class SweepResult:
    records: list[AccuracyRecord]
    threshold: object | None  # largest grid c with A_market = 1

    def jumped(self, rec: AccuracyRecord) -> bool:
        return self.threshold is not None and rec.c == self.threshold


def _sweep_point(scenario: Scenario, c, max_rounds: int = 200) -> AccuracyRecord:
    sc = scenario.with_cost(c)
    engine = _Engine(sc)
    m = market_accuracy(sc, max_rounds, engine=engine)
    p, per_p = poll_accuracy(sc, engine)
    per = {s: (m.per_state[s], per_p[s]) for s in per_p}
    return AccuracyRecord(c, m.value, p, per, m.acquired, poll_acquires(sc, engine), m.method)


def _is_one(v) -> bool:
    return v == 1 if isinstance(v, Fraction) else abs(v - 1) <= 1e-9


def cost_sweep(scenario: Scenario, c_grid: Sequence, max_rounds: int = 200) -> SweepResult:
    grid = list(c_grid)
    if any(c <= 0 for c in grid):
        raise ModelError("marginal costs in a sweep must be positive")
    if any(a <= b for a, b in zip(grid, grid[1:])):
        raise ModelError("cost grid must be strictly decreasing")
    records = pmap(partial(_sweep_point, scenario, max_rounds=max_rounds), grid)
    threshold = next((r.c for r in records if _is_one(r.A_market)), None)
    return SweepResult(records, threshold)


def parse_grid(text: str) -> list[Fraction]:
    """"start:stop:step" (inclusive, decreasing when start > stop) or "c1,c2,..."."""
    if ":" in text:
        start, stop, step = (Fraction(t) for t in text.split(":"))
        if step <= 0:
            raise ModelError("grid step must be positive")
        sign = -1 if start > stop else 1
        out, c = [], start
        while (c >= stop) if sign < 0 else (c <= stop):
            out.append(c)
            c += sign * step
        return out
    return [Fraction(t) for t in text.split(",") if t.strip()]


def prior_grid(n: int, step: Fraction = Fraction(1, 16), full_support: bool = True):
    """Priors on the simplex with coordinates in multiples of ``step``."""
    m = int(1 / step)
    lo = 1 if full_support else 0
    free = m - n * lo  # units left after the minimum per coordinate
    for bars in itertools.combinations(range(free + n - 1), n - 1):
        edges = (-1,) + bars + (free + n - 1,)
        yield tuple(Fraction(edges[k + 1] - edges[k] - 1 + lo, m) for k in range(n))


def _value_point(scenario: Scenario, prior, max_rounds: int = 200):
    sc = scenario.with_prior(prior)
    engine = _Engine(sc)
    return market_accuracy(sc, max_rounds, engine=engine).value - poll_accuracy(sc, engine)[0]


def market_value(scenario: Scenario, priors, max_rounds: int = 200):
    """min over ``priors`` of A_market - A_poll, with the minimizing prior."""
    priors = [tuple(p) for p in priors]
    for p in priors:
        if is_value_degenerate(p, scenario.security):
            raise ModelError("market value needs priors that leave the payoff uncertain")
    gaps = pmap(partial(_value_point, scenario, max_rounds=max_rounds), priors)
    k = min(range(len(gaps)), key=lambda j: gaps[j])
    return gaps[k], priors[k], gaps
