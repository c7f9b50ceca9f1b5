"""Round-robin market-scoring-rule simulation with myopic Bayesian traders.

The public belief is a joint distribution over the true state and each
trader's realization-history class.  A class is the normalized likelihood
vector of everything the trader has observed privately; histories sharing a
class induce the same private posterior forever, so merging them is exact.
Observers invert the commonly known myopic strategy after each announcement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from .acquisition import best_signal
from .model import Belief, ZeroProbabilityError, is_close, is_value_degenerate
from .scenario import Scenario
from .scoring import msr_round_payoff, myopic_best
from .signals import Signal, signal_cost

CONVERGED = "converged-to"
STALLED = "stalled-at"
ROUND_LIMIT = "round-limit"

Key = tuple  # (state, (class_0, ..., class_{n-1}))


class InferenceError(RuntimeError):
    """An announcement had zero probability under the common strategy."""


@dataclass(frozen=True)
class PublicBelief:
    atoms: dict  # Key -> mass

    def marginal(self, n_states: int) -> Belief:
        zero = 0 * next(iter(self.atoms.values()))
        out = [zero] * n_states
        for (s, _), w in self.atoms.items():
            out[s] += w
        return tuple(out)

    def total(self):
        return sum(self.atoms.values())


def initial_public(prior: Belief, n_traders: int) -> PublicBelief:
    one = 1 if isinstance(prior[0], Fraction) else 1.0
    blank = tuple(one / len(prior) + 0 * p for p in prior)
    classes = (blank,) * n_traders
    return PublicBelief({(s, classes): p for s, p in enumerate(prior) if p})


def _normalize(v: tuple) -> tuple:
    total = sum(v)
    return tuple(p / total for p in v)


@dataclass(frozen=True)
class TraderState:
    id: int
    cell: frozenset
    history: tuple  # realization names observed so far
    klass: tuple  # normalized likelihood vector of that history
    belief: Belief


@dataclass(frozen=True)
class RoundRecord:
    round: int
    announcer: int
    signal: str | None
    realization: str | None
    announcement: object
    public: Belief  # state marginal after inference
    payoff: object
    cost: object


@dataclass
class MarketTrace:
    scenario: str
    true_state: int
    value: object
    start: object
    records: list[RoundRecord] = field(default_factory=list)
    stop: str = ROUND_LIMIT  # "repeat", "degenerate" or "round-limit"
    martingale_ok: bool = True

    @property
    def announcements(self) -> list:
        return [r.announcement for r in self.records]

    @property
    def final(self):
        return self.records[-1].announcement if self.records else self.start

    @property
    def verdict(self) -> tuple[str, object]:
        return detect_convergence(self)

    def payoffs_by_trader(self) -> dict[int, object]:
        out: dict[int, object] = {}
        for r in self.records:
            out[r.announcer] = out.get(r.announcer, 0) + r.payoff
        return out


def detect_convergence(trace: MarketTrace, eps=1e-9) -> tuple[str, object]:
    """Verdict from the trace's stopping reason; a publicly value-degenerate
    belief counts as settled because every later announcement repeats it."""
    if not trace.records or trace.stop == ROUND_LIMIT:
        return ROUND_LIMIT, trace.final
    v = trace.final
    exact = isinstance(v, Fraction) and isinstance(trace.value, Fraction)
    if abs(v - trace.value) <= (0 if exact and eps == 0 else eps):
        return CONVERGED, v
    return STALLED, v


@dataclass(frozen=True)
class _Plan:
    """Strategy of the announcer for one private type (cell, class)."""
    signal: Signal | None
    belief: Belief
    announce: dict  # realization index (or None) -> announcement


class _Engine:
    def __init__(self, scenario: Scenario):
        self.sc = scenario
        self.x = scenario.security
        self.rule = scenario.rule.bind(scenario.security)
        self._plans: dict = {}

    def announcement(self, belief: Belief):
        return myopic_best(belief, self.x, self.sc.announcement_grid)

    def private_belief(self, public: PublicBelief, i: int, cell, klass) -> Belief:
        n = self.sc.n_states
        zero = 0 * next(iter(public.atoms.values()))
        out = [zero] * n
        for (s, classes), w in public.atoms.items():
            if s in cell and classes[i] == klass:
                out[s] += w
        total = sum(out)
        if not total:
            raise ZeroProbabilityError("private type has zero public probability")
        return tuple(p / total for p in out)

    def plan(self, public: PublicBelief, i: int, cell, klass) -> _Plan:
        belief = self.private_belief(public, i, cell, klass)
        key = (i, belief)
        if key in self._plans:
            return self._plans[key]
        choice = best_signal(belief, self.rule, self.x, self.sc.cost, self.sc.menu)
        sig = choice.signal
        if sig is None:
            plan = _Plan(None, belief, {None: self.announcement(belief)})
        else:
            ann = {}
            for r in range(len(sig.realizations)):
                post = [p * sig.table[r][s] for s, p in enumerate(belief)]
                total = sum(post)
                if total:
                    ann[r] = self.announcement(tuple(p / total for p in post))
            plan = _Plan(sig, belief, ann)
        self._plans[key] = plan
        return plan

    def split(self, public: PublicBelief, i: int):
        """Joint over (key, announcement) before observers see the announcement."""
        out: dict = {}
        for (s, classes), w in public.atoms.items():
            plan = self.plan(public, i, self.sc.structure.cell(i, s), classes[i])
            if plan.signal is None:
                k = ((s, classes), plan.announce[None])
                out[k] = out.get(k, 0 * w) + w
                continue
            for r, y in plan.announce.items():
                lik = plan.signal.table[r][s]
                if not lik:
                    continue
                new = _normalize(tuple(c * plan.signal.table[r][t]
                                       for t, c in enumerate(classes[i])))
                key = (s, classes[:i] + (new,) + classes[i + 1:])
                out[(key, y)] = out.get((key, y), 0 * w) + w * lik
        return out


def infer_public_belief(joint: dict, announcement, exact: bool = True) -> PublicBelief:
    """Condition the split joint on the observed announcement."""
    match = (lambda y: y == announcement) if exact else (lambda y: is_close(y, announcement))
    kept = {k: w for (k, y), w in joint.items() if match(y)}
    total = sum(kept.values())
    if not kept or not total:
        raise InferenceError(f"announcement {announcement} has zero probability")
    return PublicBelief({k: w / total for k, w in kept.items()})


def martingale_holds(prev: PublicBelief, joint: dict, n_states: int, exact: bool = True) -> bool:
    """Expected next state-marginal over announcements equals the current one."""
    by_y: dict = {}
    for (k, y), w in joint.items():
        by_y.setdefault(y, {})[k] = w
    expected = [0 * v for v in prev.marginal(n_states)]
    for y, atoms in by_y.items():
        py = sum(atoms.values())
        post = infer_public_belief(joint, y, exact).marginal(n_states)
        expected = [e + py * p for e, p in zip(expected, post)]
    target = prev.marginal(n_states)
    if exact:
        return tuple(expected) == target
    return all(is_close(a, b) for a, b in zip(expected, target))


@dataclass
class _RunState:
    public: PublicBelief
    classes: tuple  # the true classes of every trader
    histories: tuple
    last: object
    unchanged: int
    round: int
    trace: MarketTrace


def _start(scenario: Scenario, true_state: int) -> _RunState:
    if not 0 <= true_state < scenario.n_states:
        raise ValueError(f"no state with index {true_state}")
    if scenario.prior[true_state] == 0:
        raise ValueError("true state lies outside the prior's support")
    pub = initial_public(scenario.prior, scenario.structure.n_traders)
    classes = next(iter(pub.atoms))[1]
    trace = MarketTrace(scenario.name, true_state, scenario.security[true_state], scenario.start)
    return _RunState(pub, classes, ((),) * len(classes), scenario.start, 0, 0, trace)


def _pending(engine: _Engine, st: _RunState) -> _Plan:
    i = st.round % engine.sc.structure.n_traders
    cell = engine.sc.structure.cell(i, st.trace.true_state)
    return engine.plan(st.public, i, cell, st.classes[i])


def _advance(engine: _Engine, st: _RunState, r: int | None, check: bool = True) -> _RunState:
    sc = engine.sc
    n_traders = sc.structure.n_traders
    i = st.round % n_traders
    s_true = st.trace.true_state
    plan = _pending(engine, st)
    joint = engine.split(st.public, i)
    y = plan.announce[r]
    classes, histories = st.classes, st.histories
    cost = 0 * y
    if plan.signal is not None:
        new = _normalize(tuple(c * plan.signal.table[r][t] for t, c in enumerate(classes[i])))
        classes = classes[:i] + (new,) + classes[i + 1:]
        histories = histories[:i] + (histories[i] + (plan.signal.realizations[r],),) + \
            histories[i + 1:]
        cost = signal_cost(sc.cost, plan.signal, plan.belief)
    public = infer_public_belief(joint, y, sc.exact)
    trace = st.trace
    if check and not martingale_holds(st.public, joint, sc.n_states, sc.exact):
        trace.martingale_ok = False
    payoff = msr_round_payoff(engine.rule, y, st.last, sc.security[s_true])
    trace.records.append(RoundRecord(st.round + 1, i, plan.signal.name if plan.signal else None,
                                     plan.signal.realizations[r] if plan.signal else None, y,
                                     public.marginal(sc.n_states), payoff, cost))
    same = y == st.last if sc.exact else is_close(y, st.last)
    # a repeat only counts when it taught observers nothing either
    quiet = same and plan.signal is None and public.atoms == st.public.atoms
    unchanged = st.unchanged + 1 if quiet else 0
    nxt = _RunState(public, classes, histories, y, unchanged, st.round + 1, trace)
    if unchanged >= n_traders:
        trace.stop = "repeat"
    elif is_value_degenerate(public.marginal(sc.n_states), sc.security):
        trace.stop = "degenerate"
    return nxt


def _done(st: _RunState, max_rounds: int) -> bool:
    return st.trace.stop != ROUND_LIMIT or st.round >= max_rounds


def run_market(scenario: Scenario, true_state: int, seed: int = 0, max_rounds: int = 200,
               path: Callable[[Signal, list], int] | None = None) -> MarketTrace:
    """Simulate the market at ``true_state``.  Realizations of bought signals
    are drawn from a generator seeded with ``seed`` unless ``path`` picks them."""
    rng = random.Random(seed)
    engine = _Engine(scenario)
    st = _start(scenario, true_state)
    while not _done(st, max_rounds):
        plan = _pending(engine, st)
        r = None
        if plan.signal is not None:
            options = [k for k in plan.announce if plan.signal.table[k][true_state]]
            if path is not None:
                r = path(plan.signal, options)
            else:
                weights = [float(plan.signal.table[k][true_state]) for k in options]
                r = rng.choices(options, weights)[0]
        st = _advance(engine, st, r)
    return st.trace


def enumerate_outcomes(scenario: Scenario, true_state: int, max_rounds: int = 200,
                       max_leaves: int = 10**5, check: bool = False, engine: _Engine | None = None):
    """All realization paths at ``true_state`` as (probability, trace) pairs.
    An ``engine`` built for the same scenario may be passed to share plans."""
    engine = engine or _Engine(scenario)
    leaves = []

    def walk(st: _RunState, prob):
        if _done(st, max_rounds):
            leaves.append((prob, st.trace))
            if len(leaves) > max_leaves:
                raise OverflowError("realization tree exceeds the leaf budget")
            return
        plan = _pending(engine, st)
        if plan.signal is None:
            walk(_advance(engine, st, None, check), prob)
            return
        for r in plan.announce:
            lik = plan.signal.table[r][true_state]
            if lik:
                branch = replace(st, trace=_copy_trace(st.trace))
                walk(_advance(engine, branch, r, check), prob * lik)

    walk(_start(scenario, true_state), 1)
    return leaves


def _copy_trace(t: MarketTrace) -> MarketTrace:
    return MarketTrace(t.scenario, t.true_state, t.value, t.start, list(t.records), t.stop,
                       t.martingale_ok)
