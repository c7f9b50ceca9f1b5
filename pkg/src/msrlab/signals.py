"""Finite statistical experiments, random posteriors, garbling and signal costs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from . import lp
from .model import Belief, ModelError, ZeroProbabilityError, format_number, to_number

ENTROPY = "entropy"
PRECISION = "precision"
TABLE = "table"
COST_KINDS = (ENTROPY, PRECISION, TABLE)


@dataclass(frozen=True)
class Signal:
    """Likelihood table ``table[r][s]`` = probability of realization r in state s."""

    name: str
    realizations: tuple[str, ...]
    table: tuple[tuple, ...]

    def __post_init__(self):
        table = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "realizations", tuple(self.realizations))
        if len(table) != len(self.realizations) or not table:
            raise ModelError(f"signal {self.name!r}: one likelihood row per realization")
        n = len(table[0])
        if any(len(row) != n for row in table):
            raise ModelError(f"signal {self.name!r}: ragged likelihood table")
        for s in range(n):
            col = [row[s] for row in table]
            if any(v < 0 or v > 1 for v in col):
                raise ModelError(f"signal {self.name!r}: likelihood outside [0, 1]")
            total = sum(col)
            exact = all(isinstance(v, Rational) for v in col)
            if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
                raise ModelError(f"signal {self.name!r}: likelihoods in state {s} sum to {total}")

    @property
    def n_states(self) -> int:
        return len(self.table[0])

    def likelihood(self, r: int | str, state: int):
        return self.table[self._index(r)][state]

    def column(self, state: int) -> tuple:
        return tuple(row[state] for row in self.table)

    def _index(self, r: int | str) -> int:
        if isinstance(r, str):
            return self.realizations.index(r)
        return r

    @property
    def is_uninformative(self) -> bool:
        return all(len(set(row)) == 1 for row in self.table)

    @property
    def equal_supports(self) -> bool:
        supports = {tuple(v > 0 for v in self.column(s)) for s in range(self.n_states)}
        return len(supports) == 1

    @classmethod
    def of(cls, name: str, likelihood: dict[str, Sequence], exact: bool = True) -> "Signal":
        reals = tuple(likelihood)
        return cls(name, reals, tuple(tuple(to_number(v, exact) for v in likelihood[r])
                                      for r in reals))

    @classmethod
    def uninformative(cls, n: int, name: str = "none") -> "Signal":
        return cls(name, ("-",), ((Fraction(1),) * n,))

    @classmethod
    def revealing(cls, n: int, name: str = "reveal") -> "Signal":
        return cls(name, tuple(f"s{k}" for k in range(n)),
                   tuple(tuple(Fraction(int(j == k)) for j in range(n)) for k in range(n)))


@dataclass(frozen=True)
class BinaryFamily:
    """Binary signals of precision q aimed at ``event``: realization "z" has
    probability q inside the event and 1 - q outside."""

    event: frozenset[int]
    n_states: int
    grid: tuple = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "event", frozenset(self.event))
        if not self.grid:
            object.__setattr__(self, "grid", tuple(Fraction(k, 20) for k in range(10, 21)))
        if not self.label:
            object.__setattr__(self, "label", "e" + "".join(str(k) for k in sorted(self.event)))

    def signal(self, q) -> Signal:
        if not 0 <= q <= 1:
            raise ValueError("precision must lie in [0, 1]")
        z = tuple(q if s in self.event else 1 - q for s in range(self.n_states))
        return Signal(f"{self.label}@{format_number(q)}", ("z", "n"),
                      (z, tuple(1 - v for v in z)))


@dataclass(frozen=True)
class Menu:
    signals: tuple[Signal, ...] = ()
    families: tuple[BinaryFamily, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.signals or self.families)

    def grid_signals(self) -> list[Signal]:
        out = list(self.signals)
        for fam in self.families:
            out.extend(fam.signal(q) for q in fam.grid)
        return out


def default_menu(n_states: int, grid: Sequence | None = None) -> Menu:
    """Binary precision families aimed at each single state, q on 1/2, 11/20, ..., 1."""
    grid = tuple(grid) if grid is not None else ()
    return Menu(families=tuple(BinaryFamily(frozenset({s}), n_states, grid)
                               for s in range(n_states)))


@dataclass(frozen=True)
class CostStructure:
    """Marginal cost ``c`` times a signal cost function of the given kind.

    ``reference`` selects the belief against which entropy reduction is
    measured: "belief" uses the purchaser's current belief, "uniform" the
    uniform distribution over all states.
    """

    c: Fraction | float
    kind: str = ENTROPY
    table: dict = field(default_factory=dict)
    reference: str = "belief"
    assumption2: bool = True

    def __post_init__(self):
        if not self.c > 0:
            raise ModelError("marginal cost must be strictly positive")
        if self.kind not in COST_KINDS:
            raise ModelError(f"unknown cost kind {self.kind!r}")
        if self.reference not in ("belief", "uniform"):
            raise ModelError(f"unknown entropy reference {self.reference!r}")
        if any(v < 0 for v in self.table.values()):
            raise ModelError("explicit signal costs must be nonnegative")

    def with_c(self, c) -> "CostStructure":
        return CostStructure(c, self.kind, dict(self.table), self.reference, self.assumption2)

    def __hash__(self):
        return hash((self.c, self.kind, tuple(sorted(self.table.items())), self.reference,
                     self.assumption2))


# -- posteriors ---------------------------------------------------------------

def realization_probability(prior: Sequence, sig: Signal, r: int | str):
    row = sig.table[sig._index(r)]
    return sum((p * l for p, l in zip(prior, row) if p), 0 * prior[0])


def bayes_posterior(prior: Sequence, sig: Signal, r: int | str) -> Belief:
    row = sig.table[sig._index(r)]
    total = realization_probability(prior, sig, r)
    if total <= 0:
        raise ZeroProbabilityError(f"realization {r!r} of {sig.name} has zero probability")
    return tuple(p * l / total for p, l in zip(prior, row))


@dataclass(frozen=True)
class RandomPosterior:
    atoms: tuple[tuple[Belief, object], ...]

    def mean(self) -> Belief:
        n = len(self.atoms[0][0])
        return tuple(sum(w * g[k] for g, w in self.atoms) for k in range(n))


def _same_belief(a, b) -> bool:
    if all(isinstance(v, Rational) for v in a + b):
        return a == b
    return max(abs(x - y) for x, y in zip(a, b)) < 1e-12


def random_posterior(prior: Sequence, sig: Signal) -> RandomPosterior:
    atoms: list[list] = []
    for r in range(len(sig.realizations)):
        w = realization_probability(prior, sig, r)
        if w <= 0:
            continue
        g = bayes_posterior(prior, sig, r)
        for atom in atoms:
            if _same_belief(atom[0], g):
                atom[1] += w
                break
        else:
            atoms.append([g, w])
    return RandomPosterior(tuple((g, w) for g, w in atoms))


# -- garbling -------------------------------------------------------------------

def is_garbling(candidate: Signal, source: Signal) -> tuple[tuple[Fraction, ...], ...] | None:
    """Kernel g[r'][r] with candidate(r'|w) = sum_r g[r'][r] source(r|w), or None."""
    if candidate.n_states != source.n_states:
        raise ModelError("signals live on different state spaces")
    nt, nc, ns = len(source.realizations), len(candidate.realizations), source.n_states
    var = lambda rc, rs: rc * nt + rs  # noqa: E731
    A, b = [], []
    for rs in range(nt):
        row = [0] * (nc * nt)
        for rc in range(nc):
            row[var(rc, rs)] = 1
        A.append(row)
        b.append(1)
    for rc in range(nc):
        for s in range(ns):
            row = [0] * (nc * nt)
            for rs in range(nt):
                row[var(rc, rs)] = Fraction(source.table[rs][s])
            A.append(row)
            b.append(Fraction(candidate.table[rc][s]))
    x = lp.find_feasible(A, b)
    if x is None:
        return None
    return tuple(tuple(x[var(rc, rs)] for rs in range(nt)) for rc in range(nc))


# -- costs ----------------------------------------------------------------------

# (1+t)ln(1+t) - t = t^2 * sum_j (-t)^j / ((j+1)(j+2)), truncated for |t| < 0.05
_SERIES = tuple(1.0 / ((j + 1) * (j + 2)) for j in range(16))[::-1]


def _relative_entropy_term(r) -> float:
    """r ln r - r + 1 evaluated stably for r = likelihood / marginal."""
    tf = float(r - 1)
    if abs(tf) < 0.05:
        acc = 0.0
        for coef in _SERIES:
            acc = coef - tf * acc
        return tf * tf * acc
    rf = float(r)
    return (rf * math.log(rf) if rf > 0 else 0.0) - rf + 1.0


def mutual_information(prior: Sequence, sig: Signal) -> float:
    """I(state; realization) in nats, as sum_w prior(w) KL(R(.|w) || marginal).

    Each summand of the inner sum is nonnegative, which keeps tiny amounts of
    information accurate when beliefs are nearly degenerate.
    """
    marg = [realization_probability(prior, sig, r) for r in range(len(sig.realizations))]
    total = 0.0
    for s, p in enumerate(prior):
        if not p:
            continue
        kl = 0.0
        for r, m in enumerate(marg):
            if not m:
                continue
            kl += float(m) * _relative_entropy_term(sig.table[r][s] / m)
        total += float(p) * kl
    return total


def entropy(b: Iterable) -> float:
    return -sum(float(p) * math.log(float(p)) for p in b if p > 0)


def total_variation(a: Sequence, b: Sequence):
    return sum(abs(x - y) for x, y in zip(a, b)) / 2


def distance_to_uninformative(sig: Signal):
    """Max over states of the TV distance to the state-averaged (uninformative) signal."""
    n = sig.n_states
    avg = tuple(sum(row) / n for row in sig.table)
    return max(total_variation(sig.column(s), avg) for s in range(n))


def cost_function(kappa: CostStructure, sig: Signal, belief: Sequence | None = None):
    """K(sig): nonnegative number or math.inf."""
    if sig.is_uninformative:
        return 0
    if kappa.assumption2 and not sig.equal_supports:
        return math.inf
    if kappa.kind == ENTROPY:
        if kappa.reference == "uniform" or belief is None:
            n = sig.n_states
            ref = tuple(Fraction(1, n) for _ in range(n))
        else:
            ref = belief
        return mutual_information(ref, sig)
    if kappa.kind == PRECISION:
        cols = [sig.column(s) for s in range(sig.n_states)]
        tv = max(total_variation(a, b) for a in cols for b in cols)
        return tv * tv
    if sig.name in kappa.table:
        return kappa.table[sig.name]
    return math.inf


def signal_cost(kappa: CostStructure, sig: Signal, belief: Sequence | None = None):
    k = cost_function(kappa, sig, belief)
    if k == math.inf:
        return math.inf
    if not k:
        return 0 * kappa.c
    return kappa.c * k


@dataclass
class CostReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_cost(kappa: CostStructure, menu: Sequence[Signal],
                  belief: Sequence | None = None) -> CostReport:
    """Check the cost axioms on a finite menu: free uninformative signal,
    quadratic smoothness near it, and monotonicity under garbling."""
    report = CostReport()
    if not kappa.c > 0:
        report.violations.append("(i) marginal cost must be positive")
    menu = list(menu)
    if not menu:
        report.warnings.append("empty menu: axioms hold vacuously")
        return report
    n = menu[0].n_states
    if cost_function(kappa, Signal.uninformative(n), belief) != 0:
        report.violations.append("(ii) uninformative signal has nonzero cost")

    for sig in menu:
        if sig.is_uninformative:
            if cost_function(kappa, sig, belief) != 0:
                report.violations.append(f"(ii) uninformative {sig.name} has nonzero cost")
            continue
        if kappa.kind == TABLE:
            continue
        if kappa.assumption2 and not sig.equal_supports:
            report.warnings.append(f"{sig.name}: infinite cost, smoothness not sampled")
            continue
        avg = tuple(sum(row) / n for row in sig.table)
        ratios = []
        for k in range(3, 21):
            t = Fraction(1, 2**k)
            mixed = Signal(f"{sig.name}~{k}", sig.realizations,
                           tuple(tuple((1 - t) * a + t * v for v in row)
                                 for a, row in zip(avg, sig.table)))
            d = float(distance_to_uninformative(mixed))
            ratios.append(float(cost_function(kappa, mixed, belief)) / (d * d))
        if not all(math.isfinite(r) for r in ratios) or ratios[-1] > 4 * max(ratios[:3]) + 1e-12:
            report.violations.append(f"(ii) K/D^2 grows near the uninformative signal "
                                     f"along {sig.name}")
    if kappa.kind == TABLE:
        report.warnings.append("explicit table: smoothness near the free signal not sampled")

    for a in menu:
        for b in menu:
            if a is b or is_garbling(a, b) is None:
                continue
            ka, kb = cost_function(kappa, a, belief), cost_function(kappa, b, belief)
            if ka > kb + (0 if isinstance(ka, Rational) and isinstance(kb, Rational) else 1e-12):
                report.violations.append(
                    f"(iii) {a.name} is a garbling of {b.name} but costs more")
    return report
