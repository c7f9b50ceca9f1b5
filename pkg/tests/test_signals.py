import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from msrlab.signals import (ENTROPY, PRECISION, TABLE, BinaryFamily, CostStructure, Signal,
                            bayes_posterior, cost_function, default_menu, entropy, is_garbling,
                            mutual_information, random_posterior, signal_cost, validate_cost)

from conftest import EX1_PRIOR, Z_SIGNAL

CELL = (F(1, 4), 0, F(3, 4), 0)


def bsc(q, name="bsc"):
    q = F(q)
    return Signal.of(name, {"h": [q, 1 - q], "t": [1 - q, q]})


def test_posterior_example():
    assert bayes_posterior(CELL, Z_SIGNAL, "n") == (0, 0, 1, 0)
    assert bayes_posterior(EX1_PRIOR, Z_SIGNAL, "z") == (F(2, 9), F(3, 9), F(3, 9), F(1, 9))


def test_random_posterior_example():
    rp = random_posterior(CELL, Z_SIGNAL)
    weights = sorted(w for _, w in rp.atoms)
    assert weights == [F(3, 8), F(5, 8)]
    assert dict((w, g) for g, w in rp.atoms)[F(5, 8)] == (F(2, 5), 0, F(3, 5), 0)


def test_entropy_and_information():
    assert entropy([F(1, 2), F(1, 2)]) == pytest.approx(math.log(2))
    assert mutual_information((F(1, 2), F(1, 2)), Signal.revealing(2)) == pytest.approx(math.log(2))
    assert mutual_information(EX1_PRIOR, Signal.uninformative(4)) == 0


def test_garbling_kernel():
    g = is_garbling(bsc(F(3, 5)), bsc(F(9, 10)))
    assert g is not None and g[0][0] == F(5, 8)
    assert is_garbling(bsc(F(9, 10)), bsc(F(3, 5))) is None
    assert is_garbling(Signal.uninformative(2), bsc(F(3, 5))) is not None


def test_cost_kinds():
    k = CostStructure(F(1), ENTROPY, assumption2=False)
    reveal = Signal.revealing(2)
    assert cost_function(k, reveal, (F(1, 2), F(1, 2))) == pytest.approx(math.log(2))
    assert cost_function(CostStructure(F(1), ENTROPY), reveal) == math.inf
    assert cost_function(CostStructure(F(1), PRECISION), bsc(F(3, 4))) == F(1, 4)
    table = CostStructure(F(2), TABLE, {"z": F(0)}, assumption2=False)
    assert signal_cost(table, Z_SIGNAL) == 0
    assert signal_cost(table, bsc(F(3, 4))) == math.inf


@given(st.fractions(F(1, 10), F(10)), st.fractions(F(1, 10), F(10)))
def test_cost_homogeneous_in_c(c1, c2):
    sig = BinaryFamily(frozenset({0}), 4).signal(F(3, 4))
    k1, k2 = CostStructure(c1), CostStructure(c2)
    assert signal_cost(k1, sig, EX1_PRIOR) * c2 == pytest.approx(signal_cost(k2, sig, EX1_PRIOR) * c1)


def test_validate_cost():
    menu = default_menu(4).grid_signals()
    assert validate_cost(CostStructure(F(1)), menu, EX1_PRIOR).ok
    with pytest.raises(ValueError):
        CostStructure(F(0))
    table = CostStructure(F(1), TABLE, {"weak": F(2), "strong": F(1)})
    rep = validate_cost(table, [bsc(F(3, 5), "weak"), bsc(F(9, 10), "strong")])
    assert not rep.ok and "(iii)" in rep.violations[0]
    assert validate_cost(CostStructure(F(1)), []).warnings
    rep = validate_cost(CostStructure(F(1)), [Z_SIGNAL])
    assert rep.ok and rep.warnings


beliefs = st.lists(st.integers(0, 9), min_size=4, max_size=4).filter(any).map(
    lambda w: tuple(F(v, sum(w)) for v in w))
precisions = st.integers(10, 20).map(lambda k: F(k, 20))


@given(beliefs, st.integers(0, 3), precisions)
def test_bayes_plausibility(b, s, q):
    sig = BinaryFamily(frozenset({s}), 4).signal(q)
    assert random_posterior(b, sig).mean() == b
    assert random_posterior(b, Z_SIGNAL).mean() == b


@given(beliefs, st.integers(0, 3), precisions, precisions)
def test_entropy_cost_monotone_under_garbling(b, s, q1, q2):
    fam = BinaryFamily(frozenset({s}), 4)
    lo, hi = sorted((q1, q2))
    weak, strong = fam.signal(lo), fam.signal(hi)
    assert is_garbling(weak, strong) is not None
    k = CostStructure(F(1))
    assert signal_cost(k, weak, b) <= signal_cost(k, strong, b) + 1e-12
