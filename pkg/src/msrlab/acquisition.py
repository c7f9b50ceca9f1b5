"""Myopic information acquisition and the kappa-separability scan.

All verdicts are relative to a finite menu: explicit signals plus binary
precision families, which are scanned on their grid and then refined
around the best grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from scipy.optimize import minimize_scalar

from .model import (Belief, InformationStructure, Security, condition, expectation, mass,
                    support)
from .scoring import ScoringRule, expected_gain
from .separability import (NonSepWitness, barycentric_points, check_witness,
                           nonseparable_regions, witness_polytope_vertices)
from .signals import (ENTROPY, PRECISION, BinaryFamily, CostStructure, Menu, Signal,
                      _relative_entropy_term, random_posterior, signal_cost)


_EPS = 1e-9


def gross_gain(cell_belief: Sequence, sig: Signal, rule: ScoringRule, x: Security, reference=None):
    """Expected score improvement from learning ``sig`` and announcing each
    posterior mean, against ``reference`` (default: the current mean)."""
    y_old = expectation(cell_belief, x) if reference is None else reference
    total = 0 * y_old
    for g, w in random_posterior(cell_belief, sig).atoms:
        total += w * expected_gain(g, rule, expectation(g, x), y_old, x)
    return total


def net_gain(cell_belief: Sequence, sig: Signal, rule: ScoringRule, x: Security,
             kappa: CostStructure):
    if sig.is_uninformative:
        return 0 * expectation(cell_belief, x)
    cost = signal_cost(kappa, sig, cell_belief)
    if cost == math.inf:
        return -math.inf
    return gross_gain(cell_belief, sig, rule, x) - cost


@dataclass(frozen=True)
class Choice:
    signal: Signal | None
    gain: object  # net expected gain of the best option, 0 for no signal

    @property
    def acquire(self) -> bool:
        return self.signal is not None


def _binary_family_value(cell_belief: Sequence, fam: BinaryFamily, rule: ScoringRule,
                         x: Security, kappa: CostStructure):
    """Float net gain of ``fam`` as a function of q, or None without a closed form.

    Under the quadratic rule the gain is the variance of the posterior mean,
    (2q-1)^2 s^2 / (P(z) P(n)) with s = p(1-p)(E[X|event] - E[X|rest]).
    """
    if rule.kind != "quadratic" or kappa.kind not in (ENTROPY, PRECISION):
        return None
    p_in = mass(cell_belief, fam.event)
    p_out = 1 - p_in
    if not p_in or not p_out:
        return lambda q: 0.0
    m_in = sum(cell_belief[s] * x[s] for s in fam.event if cell_belief[s]) / p_in
    m_out = sum(cell_belief[s] * x[s] for s in range(len(cell_belief))
                if cell_belief[s] and s not in fam.event) / p_out
    s2 = float(p_in * p_out * (m_in - m_out)) ** 2
    a, b = float(p_in), float(p_out)
    if kappa.kind == ENTROPY and kappa.reference == "uniform":
        ra = len(fam.event) / fam.n_states
    else:
        ra = a
    rb = 1 - ra
    c = float(kappa.c)

    def kl(u, m, mc):
        # KL((u, 1-u) || (m, mc)) with mc = 1 - m supplied separately
        return m * _relative_entropy_term(u / m) + mc * _relative_entropy_term((1 - u) / mc)

    def value(q):
        q = float(q)
        d = 2 * q - 1
        if d == 0:
            return 0.0
        if kappa.assumption2 and (q <= 0 or q >= 1):
            return -math.inf
        pz, pn = q * a + (1 - q) * b, (1 - q) * a + q * b
        gain = d * d * s2 / (pz * pn)
        if kappa.kind == PRECISION:
            k = d * d
        else:
            mz, mn = q * ra + (1 - q) * rb, (1 - q) * ra + q * rb
            k = ra * kl(q, mz, mn) + rb * kl(1 - q, mz, mn)
        return gain - c * k
    return value


def _refine(grid, k: int, value):
    """Best float probe between the grid neighbours of index ``k``."""
    lo = grid[k - 1] if k > 0 else grid[k]
    hi = grid[k + 1] if k + 1 < len(grid) else grid[k]
    if lo == hi:
        return None
    lo, hi = float(lo), float(hi)
    best = None
    for j in range(1, 32):
        h = (hi - lo) / 2**j
        for q in (lo + h, hi - h):
            val = value(q)
            if best is None or val > best[1]:
                best = (q, val)
    def objective(t):
        v = value(t)
        return -v if v > -math.inf else 1e300

    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    if lo < res.x < hi and value(res.x) > best[1]:
        best = (res.x, value(res.x))
    return best


def best_signal(cell_belief: Sequence, rule: ScoringRule, x: Security, kappa: CostStructure,
                menu: Menu, refine: bool = True, stop_above=None) -> Choice:
    """Myopically optimal signal for a trader holding ``cell_belief``.

    Ties keep the earlier option, and not acquiring wins every tie.  With
    ``stop_above`` the search returns as soon as some option beats it.
    Family members are located in floating point and then re-scored with
    ``net_gain``, so the reported gain never comes from the fast path.
    """
    best = Choice(None, 0 * expectation(cell_belief, x))
    if len(support(cell_belief)) <= 1 or not menu:
        return best

    def consider(sig, val):
        nonlocal best
        if val > best.gain:
            best = Choice(sig, val)
        return stop_above is not None and best.gain > stop_above

    for sig in menu.signals:
        if consider(sig, net_gain(cell_belief, sig, rule, x, kappa)):
            return best
    for fam in menu.families:
        supp = support(cell_belief)
        if not supp & fam.event or supp <= fam.event:
            continue  # uninformative within this belief's support
        exact_value = lambda q, fam=fam: net_gain(cell_belief, fam.signal(q), rule, x, kappa)  # noqa: E731
        value = _binary_family_value(cell_belief, fam, rule, x, kappa) or \
            (lambda q, fam=fam: float(exact_value(Fraction(q) if isinstance(q, float) else q)))
        vals = [value(q) for q in fam.grid]
        k = max(range(len(vals)), key=lambda j: (vals[j], -j))
        candidates = [(fam.grid[k], vals[k])]
        if refine:
            found = _refine(fam.grid, k, value)
            if found is not None and found[1] > vals[k]:
                q = Fraction(found[0])
                short = q.limit_denominator(10**12)
                lo, hi = min(fam.grid), max(fam.grid)
                candidates.append((short if lo < short < hi and short not in (0, 1) else q,
                                   found[1]))
        for q, approx in candidates:
            # a float value clearly below the incumbent cannot win once re-scored
            if 2 * q == 1 or approx < float(best.gain) - _EPS:
                continue
            if consider(fam.signal(q), exact_value(q)):
                return best
    return best


@dataclass
class AcquisitionReport:
    entries: list[dict] = field(default_factory=list)

    @property
    def acquisition(self) -> bool:
        return any(e["acquired"] for e in self.entries)


def no_information_acquisition(mu: Sequence, x: Security, structure: InformationStructure,
                               kappa: CostStructure, menu: Menu, rule: ScoringRule | None = None,
                               refine: bool = True, stop_early: bool = False):
    """True iff no trader, at any cell meeting the support of ``mu``, gains by
    buying a menu signal.  Returns ``(verdict, report)``."""
    rule = (rule or ScoringRule.quadratic()).bind(x)
    report = AcquisitionReport()
    supp = support(mu)
    for i in range(structure.n_traders):
        for cell in structure.cells(i):
            if not cell & supp:
                continue
            belief = condition(mu, cell)
            choice = best_signal(belief, rule, x, kappa, menu, refine,
                                 stop_above=0 if stop_early else None)
            report.entries.append({"trader": i, "cell": tuple(sorted(cell)),
                                   "signal": choice.signal.name if choice.signal else None,
                                   "net_gain": choice.gain, "acquired": choice.acquire})
            if stop_early and choice.acquire:
                return False, report
    return not report.acquisition, report


def instant_opportunity(r: Sequence, z, trader: int, x: Security,
                        structure: InformationStructure, rule: ScoringRule,
                        kappa: CostStructure, menu: Menu, refine: bool = True):
    """Best expected one-shot payoff of ``trader`` revising announcement ``z``
    when the state is drawn from ``r``, net of signal cost."""
    rule = rule.bind(x)
    total = 0.0 * 0
    supp = support(r)
    for cell in structure.cells(trader):
        if not cell & supp:
            continue
        belief = condition(r, cell)
        mean = expectation(belief, x)
        base = expected_gain(belief, rule, mean, z, x)
        choice = best_signal(belief, rule, x, kappa, menu, refine)
        total += mass(r, cell) * (base + max(choice.gain, 0 * base))
    return total


# -- kappa scan ------------------------------------------------------------------

@dataclass(frozen=True)
class ScanGrid:
    """Value grid per non-separable region: ``1/step - 1`` interior points plus
    ``depth`` geometric steps toward each end; priors on each witness
    polytope: its vertices plus barycentric points with the same step."""

    step: Fraction = Fraction(1, 64)
    depth: int = 200
    budget: int = 2000

    def values(self, region) -> list[Fraction]:
        if region.kind == "point":
            return [region.lo]
        lo, hi = region.lo, region.hi
        m = int(1 / self.step)
        out = [lo + (hi - lo) * Fraction(k, m) for k in range(1, m)]
        for j in range(int(math.log2(m)) + 1, self.depth + 1):
            h = (hi - lo) / 2**j
            out += [lo + h, hi - h]
        return out


@dataclass(frozen=True)
class KappaVerdict:
    non_separable: bool
    witness: NonSepWitness | None
    grid: ScanGrid
    checked: int

    @property
    def label(self) -> str:
        return "kappa-non-separable" if self.non_separable else "kappa-separable-up-to-resolution"


def candidate_priors(x: Security, structure: InformationStructure, grid: ScanGrid):
    """Non-separable priors, yielded as witnesses in scan order."""
    for region in nonseparable_regions(x, structure):
        for v in grid.values(region):
            verts = witness_polytope_vertices(x, structure, v)
            seen = set()
            pool = list(verts)
            if len(verts) > 1:
                pool += list(barycentric_points(verts, grid.step, grid.budget))
            for mu in pool:
                if mu in seen:
                    continue
                seen.add(mu)
                if any(x[s] != v for s in support(mu)):
                    yield NonSepWitness(mu, v, support(mu))


def kappa_separability_scan(x: Security, structure: InformationStructure, kappa: CostStructure,
                            menu: Menu, rule: ScoringRule | None = None,
                            grid: ScanGrid | None = None, candidates=None) -> KappaVerdict:
    """``candidates`` may hold a precomputed ``candidate_priors`` list for the same grid."""
    grid = grid or ScanGrid()
    checked = 0
    pool = candidates if candidates is not None else candidate_priors(x, structure, grid)
    for w in pool:
        checked += 1
        ok, _ = no_information_acquisition(w.prior, x, structure, kappa, menu, rule,
                                           stop_early=True)
        if ok:
            return KappaVerdict(True, w, grid, checked)
    return KappaVerdict(False, None, grid, checked)


def verify_kappa_witness(x, structure, kappa, menu, w: NonSepWitness, rule=None) -> bool:
    return check_witness(x, structure, w) and \
        no_information_acquisition(w.prior, x, structure, kappa, menu, rule)[0]


def kappa_threshold(x: Security, structure: InformationStructure, kappa: CostStructure,
                    menu: Menu, c_lo, c_hi, rule: ScoringRule | None = None,
                    grid: ScanGrid | None = None, rtol: float = 1e-6) -> float:
    """Bisect the marginal cost at which the scan verdict flips.

    Requires a separable verdict at ``c_lo`` and a non-separable one at ``c_hi``.
    """
    grid = grid or ScanGrid()
    pool = list(candidate_priors(x, structure, grid))  # independent of c
    scan = lambda c: kappa_separability_scan(x, structure, kappa.with_c(c), menu, rule,  # noqa: E731
                                             grid, pool).non_separable
    lo, hi = float(c_lo), float(c_hi)
    if scan(lo) or not scan(hi):
        raise ValueError("threshold is not bracketed by c_lo and c_hi")
    while hi - lo > rtol * hi:
        mid = (lo + hi) / 2
        if scan(mid):
            hi = mid
        else:
            lo = mid
    return hi
