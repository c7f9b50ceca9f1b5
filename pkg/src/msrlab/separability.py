"""Non-separability witnesses and lambda-certificates of separability.

For a fixed value v both questions depend only on the sign pattern of
X(w) - v, so the real line splits into finitely many regions: each payoff
value, each open gap between consecutive payoffs, and the two unbounded
rays.  On every region exactly one of the two objects exists (Gordan's
alternative), and both are found with the exact simplex in ``lp``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterator, Sequence

from . import lp
from .model import (Belief, InformationStructure, Security, conditional_expectation, support)


@dataclass(frozen=True)
class Region:
    """A maximal set of values v sharing one sign pattern of X - v."""

    kind: str  # "below" | "point" | "open" | "above"
    lo: Fraction | None = None
    hi: Fraction | None = None

    def representative(self) -> Fraction:
        if self.kind == "point":
            return self.lo
        if self.kind == "open":
            return (self.lo + self.hi) / 2
        if self.kind == "below":
            return self.hi - 1
        return self.lo + 1

    def contains(self, v) -> bool:
        if self.kind == "point":
            return v == self.lo
        if self.kind == "open":
            return self.lo < v < self.hi
        if self.kind == "below":
            return v < self.hi
        return v > self.lo

    def samples(self, k: int = 10) -> list[Fraction]:
        if self.kind == "point":
            return [self.lo]
        if self.kind == "open":
            return [self.lo + (self.hi - self.lo) * Fraction(j, k + 1) for j in range(1, k + 1)]
        if self.kind == "below":
            return [self.hi - Fraction(2) ** j / 1024 for j in range(k)]
        return [self.lo + Fraction(2) ** j / 1024 for j in range(k)]

    def describe(self) -> str:
        if self.kind == "point":
            return f"v = {self.lo}"
        if self.kind == "open":
            return f"{self.lo} < v < {self.hi}"
        if self.kind == "below":
            return f"v < {self.hi}"
        return f"v > {self.lo}"


def value_regions(x: Security) -> list[Region]:
    values = sorted(set(Fraction(v) for v in x.payoffs))
    regions = [Region("below", hi=values[0])]
    for k, v in enumerate(values):
        regions.append(Region("point", v, v))
        if k + 1 < len(values):
            regions.append(Region("open", v, values[k + 1]))
    regions.append(Region("above", lo=values[-1]))
    return regions


def _sign(t) -> int:
    return (t > 0) - (t < 0)


@dataclass(frozen=True)
class NonSepWitness:
    prior: Belief
    value: Fraction
    support: frozenset[int]


@dataclass(frozen=True)
class RegionCertificate:
    region: Region
    weights: tuple[dict, ...]  # per trader: cell (frozenset) -> lambda


@dataclass(frozen=True)
class LambdaCertificate:
    regions: tuple[RegionCertificate, ...]

    def weights_at(self, v) -> tuple[dict, ...]:
        for rc in self.regions:
            if rc.region.contains(v):
                return rc.weights
        raise ValueError(f"value {v} not covered by the certificate")


# -- witnesses -----------------------------------------------------------------

def check_witness(x: Security, structure: InformationStructure, w: NonSepWitness,
                  tol: float = 1e-9) -> bool:
    """Both conditions of non-separability, exactly for rational witnesses."""
    mu, v = w.prior, w.value
    if any(p < 0 for p in mu):
        return False
    exact = isinstance(v, Rational) and all(isinstance(p, Rational) for p in mu)
    total = sum(mu)
    if (exact and total != 1) or (not exact and abs(total - 1) > tol):
        return False
    supp = support(mu)
    if not any(x[k] != v for k in supp):
        return False
    for i in range(structure.n_traders):
        for cell in structure.cells(i):
            if not cell & supp:
                continue
            e = conditional_expectation(mu, x, cell)
            if (exact and e != v) or (not exact and abs(e - v) > tol):
                return False
    return True


def _witness_system(x: Security, structure: InformationStructure, v, states: Sequence[int]):
    """Rows sum_{w in cell} sign(X(w)-v) y_w = 0 over the given states, plus sum y = 1."""
    A, b = [], []
    pos = {s: j for j, s in enumerate(states)}
    for i in range(structure.n_traders):
        for cell in structure.cells(i):
            row = [0] * len(states)
            hit = False
            for s in cell:
                if s in pos:
                    row[pos[s]] = _sign(x[s] - v)
                    hit = True
            if hit and any(row):
                A.append(row)
                b.append(0)
    A.append([1] * len(states))
    b.append(1)
    return A, b


def _to_prior(x: Security, v, states: Sequence[int], y: Sequence, n: int) -> Belief:
    raw = [Fraction(0)] * n
    for s, ys in zip(states, y):
        raw[s] = Fraction(ys) / abs(Fraction(x[s]) - v)
    total = sum(raw)
    return tuple(p / total for p in raw)


def witness_at_value(x: Security, structure: InformationStructure, v,
                     interior: bool = True) -> NonSepWitness | None:
    """A non-separability witness with the given common value, if one exists.

    With ``interior`` the returned prior is the average of the optima that
    maximize each coordinate, which has the largest attainable support.
    """
    v = Fraction(v)
    n = len(x)
    states = [s for s in range(n) if x[s] != v]
    if not states:
        return None
    A, b = _witness_system(x, structure, v, states)
    y = lp.find_feasible(A, b)
    if y is None:
        return None
    if interior:
        optima = []
        for j in range(len(states)):
            res = lp.solve_lp([int(k == j) for k in range(len(states))], A_eq=A, b_eq=b,
                              maximize=True)
            optima.append(res.x)
        y = tuple(sum(col) / len(optima) for col in zip(*optima))
    prior = _to_prior(x, v, states, y, n)
    return NonSepWitness(prior, v, support(prior))


def find_nonseparable_witness(x: Security, structure: InformationStructure,
                              interior: bool = True) -> NonSepWitness | None:
    for region in value_regions(x):
        if region.kind in ("below", "above"):
            continue
        w = witness_at_value(x, structure, region.representative(), interior)
        if w is not None:
            return w
    return None


def nonseparable_regions(x: Security, structure: InformationStructure) -> list[Region]:
    """Regions of v at which some witness with value v exists."""
    return [r for r in value_regions(x) if r.kind in ("point", "open")
            and witness_at_value(x, structure, r.representative(), interior=False) is not None]


# -- certificates -----------------------------------------------------------------

def _cell_index(structure: InformationStructure):
    index = {}
    for i in range(structure.n_traders):
        for cell in structure.cells(i):
            index[(i, cell)] = len(index)
    return index


def region_certificate(x: Security, structure: InformationStructure,
                       region: Region) -> RegionCertificate | None:
    """Maximize a slack t with sign(X(w)-v) * sum_i lambda_i(cell_i(w)) >= t,
    lambda in [-1, 1]; a certificate exists iff the optimum is positive."""
    v = region.representative()
    n, k = len(x), structure.n_traders
    index = _cell_index(structure)
    nv = len(index) + 1
    t_col = len(index)
    A_ub, b_ub = [], []
    live = [s for s in range(n) if x[s] != v]
    for s in live:
        sg = _sign(x[s] - v)
        row = [0] * nv
        for i in range(k):
            row[index[(i, structure.cell(i, s))]] -= sg
        row[t_col] = 1
        A_ub.append(row)
        b_ub.append(-sg * k)  # lambda = lambda' - 1
    for j in range(nv):
        row = [0] * nv
        row[j] = 1
        A_ub.append(row)
        b_ub.append(2 if j != t_col else 1)
    c = [0] * nv
    c[t_col] = 1
    res = lp.solve_lp(c, A_ub, b_ub, maximize=True)
    if res.status != lp.OPTIMAL or (live and res.objective <= 0):
        return None
    weights = tuple({cell: res.x[index[(i, cell)]] - 1 for cell in structure.cells(i)}
                    for i in range(k))
    return RegionCertificate(region, weights)


def find_lambda_certificate(x: Security, structure: InformationStructure) -> LambdaCertificate | None:
    out = []
    for region in value_regions(x):
        rc = region_certificate(x, structure, region)
        if rc is None:
            return None
        out.append(rc)
    return LambdaCertificate(tuple(out))


def certificate_holds_at(x: Security, structure: InformationStructure, weights, v) -> bool:
    for s in range(len(x)):
        d = x[s] - v
        if d == 0:
            continue
        total = sum(weights[i][structure.cell(i, s)] for i in range(structure.n_traders))
        if not d * total > 0:
            return False
    return True


def verify_certificate(x: Security, structure: InformationStructure,
                       cert: LambdaCertificate, samples: int = 10) -> bool:
    """Check the sign condition at sampled values in every region and at every payoff."""
    regions = value_regions(x)
    if len(cert.regions) != len(regions):
        return False
    for rc, region in zip(cert.regions, regions):
        if rc.region != region:
            return False
        for v in region.samples(samples):
            if not certificate_holds_at(x, structure, rc.weights, v):
                return False
    for v in set(Fraction(p) for p in x.payoffs):
        if not certificate_holds_at(x, structure, cert.weights_at(v), v):
            return False
    return True


def explicit_certificate(x: Security, structure: InformationStructure) -> LambdaCertificate:
    """Hand-built certificate for Arrow-Debreu and three-value securities:
    constant weights outside the payoff range, and inside it weight -1 (or 1)
    on the cells of the lone lowest (highest) state and +k (-k) elsewhere."""
    values = sorted(set(Fraction(p) for p in x.payoffs))
    if not 2 <= len(values) <= 3:
        raise ValueError("explicit certificate needs an A-D or three-value security")
    lo_states = [s for s in range(len(x)) if x[s] == values[0]]
    hi_states = [s for s in range(len(x)) if x[s] == values[-1]]
    k = structure.n_traders
    if len(values) == 3 and (len(lo_states) != 1 or len(hi_states) != 1):
        raise ValueError("three-value construction needs unique lowest and highest states")
    if len(values) == 2 and len(lo_states) != 1 and len(hi_states) != 1:
        raise ValueError("not an Arrow-Debreu security")
    w_a = lo_states[0] if len(lo_states) == 1 else None
    w_d = hi_states[0] if len(hi_states) == 1 else None
    middle = values[1] if len(values) == 3 else (values[1] if w_a is not None else values[0])

    def const(c):
        return tuple({cell: Fraction(c) for cell in structure.cells(i)} for i in range(k))

    def around(state, inner, outer):
        return tuple({cell: Fraction(inner if state in cell else outer)
                      for cell in structure.cells(i)} for i in range(k))

    out = []
    for region in value_regions(x):
        v = region.representative()
        if v <= values[0]:
            w = const(1)
        elif v >= values[-1]:
            w = const(-1)
        elif v <= middle and w_a is not None:
            w = around(w_a, -1, k)
        else:
            w = around(w_d, 1, -k)
        out.append(RegionCertificate(region, w))
    return LambdaCertificate(tuple(out))


# -- closed form for four states -------------------------------------------------

@dataclass(frozen=True)
class ClosedFormWitness:
    """Posteriors of two traders with partitions {{a,d},{b,c}} and {{a,c},{b,d}}
    agreeing on ``value``, and the common prior (state order a, b, c, d)."""

    q1: Fraction
    p1: Fraction
    p2: Fraction
    q2: Fraction
    x: Fraction
    y: Fraction
    prior: Belief
    value: Fraction

    @property
    def witness(self) -> NonSepWitness:
        return NonSepWitness(self.prior, self.value, support(self.prior))


ADVERSARIAL_PARTITIONS = InformationStructure((
    (frozenset({0, 3}), frozenset({1, 2})),
    (frozenset({0, 2}), frozenset({1, 3})),
))


def closed_form_four_state_witness(a, b, c, d) -> ClosedFormWitness:
    a, b, c, d = (Fraction(t) for t in (a, b, c, d))
    if not (a <= b < c <= d):
        raise ValueError("need a <= b < c <= d")
    den = a + b - c - d
    q1 = (a - c) / den
    p1 = (b - d) / den
    p2 = (b - c) / den
    q2 = (a - d) / den
    x_, y_ = p2, p1
    prior = (x_ * p1, (1 - x_) * q1, (1 - x_) * (1 - q1), x_ * (1 - p1))
    value = a * p1 + d * (1 - p1)
    return ClosedFormWitness(q1, p1, p2, q2, x_, y_, prior, value)


# -- witness polytopes (used by the kappa scan) -------------------------------------

def _solve_unique(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Unique exact solution of A z = b (rows may be redundant), else None."""
    m, n = len(A), len(A[0])
    M = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(A, b)]
    r = 0
    pivots = []
    for col in range(n):
        piv = next((i for i in range(r, m) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][col]
        M[r] = [v / p for v in M[r]]
        for i in range(m):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [u - f * w for u, w in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in M):
        return None
    if len(pivots) < n:
        return None
    z = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        z[col] = M[i][-1]
    return z


def witness_polytope_vertices(x: Security, structure: InformationStructure, v) -> list[Belief]:
    """Vertices of {mu in simplex : E_mu-weighted cell sums of (X - v) vanish}."""
    v = Fraction(v)
    n = len(x)
    vertices = []
    for size in range(1, n + 1):
        for S in combinations(range(n), size):
            rows, rhs = [], []
            for i in range(structure.n_traders):
                for cell in structure.cells(i):
                    row = [Fraction(x[s]) - v if s in cell else Fraction(0) for s in S]
                    if any(row):
                        rows.append(row)
                        rhs.append(Fraction(0))
            rows.append([Fraction(1)] * size)
            rhs.append(Fraction(1))
            z = _solve_unique(rows, rhs)
            if z is None or any(t <= 0 for t in z):
                continue
            mu = [Fraction(0)] * n
            for s, t in zip(S, z):
                mu[s] = t
            vertices.append(tuple(mu))
    return vertices


def barycentric_points(vertices: Sequence[Belief], step: Fraction,
                       budget: int = 2000) -> Iterator[Belief]:
    """Convex combinations of ``vertices`` on a barycentric grid, coarsened
    until the point count fits ``budget``."""
    k = len(vertices)
    if k == 0:
        return
    m = int(1 / step)

    def count(mm):
        from math import comb
        return comb(mm + k - 1, k - 1)

    while m > 1 and count(m) > budget:
        m //= 2

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    n = len(vertices[0])
    for weights in compositions(m, k):
        yield tuple(sum(Fraction(w, m) * vert[s] for w, vert in zip(weights, vertices))
                    for s in range(n))
