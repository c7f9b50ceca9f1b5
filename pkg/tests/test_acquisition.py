import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from msrlab.acquisition import (ScanGrid, best_signal, gross_gain, instant_opportunity,
                                kappa_separability_scan, net_gain, no_information_acquisition,
                                verify_kappa_witness)
from msrlab.model import expectation
from msrlab.scoring import ScoringRule
from msrlab.signals import TABLE, BinaryFamily, CostStructure, Menu, Signal, default_menu

from conftest import EX1_PI, EX1_X, EX2_PI, EX2_X, Z_SIGNAL, ex2_family

CELL = (F(1, 4), 0, F(3, 4), 0)
FREE_Z = CostStructure(F(1), TABLE, {"z": F(0)}, assumption2=False)


def variance_of_mean(b, sig, x):
    # oracle: enumerate realizations by hand
    mean = sum(p * v for p, v in zip(b, x.payoffs))
    total = 0
    for row in sig.table:
        pr = sum(p * l for p, l in zip(b, row))
        if pr:
            m = sum(p * l * v for p, l, v in zip(b, row, x.payoffs)) / pr
            total += pr * (m - mean) ** 2
    return total


def test_free_signal_gain(quad):
    assert net_gain(CELL, Z_SIGNAL, quad, EX1_X, FREE_Z) == F(3, 20)
    assert gross_gain(CELL, Z_SIGNAL, quad, EX1_X) == variance_of_mean(CELL, Z_SIGNAL, EX1_X)


def test_uninformative_signal_is_free(quad):
    assert net_gain(CELL, Signal.uninformative(4), quad, EX1_X, CostStructure(F(5))) == 0


def test_best_signal_picks_free_z(quad):
    choice = best_signal(CELL, quad, EX1_X, FREE_Z, Menu((Z_SIGNAL,)))
    assert choice.acquire and choice.gain == F(3, 20)
    assert not best_signal(CELL, quad, EX1_X, FREE_Z, Menu()).acquire


def test_degenerate_prior_never_acquires():
    mu = (0, 0, 0, F(1))
    ok, _ = no_information_acquisition(mu, EX1_X, EX1_PI, CostStructure(F(1, 100)), default_menu(4))
    assert ok


def test_high_cost_blocks_acquisition():
    mu = (F(1, 8), F(3, 8), F(3, 8), F(1, 8))
    ok, rep = no_information_acquisition(mu, EX1_X, EX1_PI, CostStructure(F(10)), default_menu(4))
    assert ok and all(e["signal"] is None for e in rep.entries)
    ok, _ = no_information_acquisition(mu, EX1_X, EX1_PI, CostStructure(F(1)), default_menu(4))
    assert not ok


beliefs = st.lists(st.integers(1, 9), min_size=4, max_size=4).map(
    lambda w: tuple(F(v, sum(w)) for v in w))
costs = st.sampled_from([F(1, 10), F(1, 2), F(1), F(3), F(10)])


@given(beliefs, st.integers(0, 3), st.integers(11, 19), costs, costs)
def test_net_gain_monotone_in_cost(b, s, k, c1, c2):
    rule = ScoringRule.quadratic(EX1_X)
    sig = BinaryFamily(frozenset({s}), 4).signal(F(k, 20))
    lo, hi = sorted((c1, c2))
    assert net_gain(b, sig, rule, EX1_X, CostStructure(lo)) >= \
        net_gain(b, sig, rule, EX1_X, CostStructure(hi))


@given(beliefs, st.integers(0, 3), st.integers(11, 20))
def test_gross_gain_is_variance_of_mean(b, s, k):
    rule = ScoringRule.quadratic(EX1_X)
    sig = BinaryFamily(frozenset({s}), 4).signal(F(k, 20))
    assert gross_gain(b, sig, rule, EX1_X) == variance_of_mean(b, sig, EX1_X)


@given(beliefs, st.sampled_from([F(k, 2) for k in range(7)]), st.integers(0, 1))
def test_instant_opportunity_bounds(r, z, trader):
    rule = ScoringRule.quadratic(EX1_X)
    kappa = CostStructure(F(1))
    val = instant_opportunity(r, z, trader, EX1_X, EX1_PI, rule, kappa, Menu())
    assert val >= 0
    # revising the trader's own cell means is worth (mean - z)^2 on average
    mean = expectation(r, EX1_X)
    assert val >= (mean - z) ** 2 - 1e-12
    with_menu = instant_opportunity(r, z, trader, EX1_X, EX1_PI, rule, kappa, default_menu(4))
    assert with_menu >= val - 1e-12


def test_scan_example2_small_cost():
    kappa = CostStructure(F(1, 10))
    v = kappa_separability_scan(EX2_X, EX2_PI, kappa, default_menu(4), grid=ScanGrid(depth=40))
    assert v.non_separable
    m = v.witness.prior[1]
    assert v.witness.prior == ex2_family(m)
    assert verify_kappa_witness(EX2_X, EX2_PI, kappa, default_menu(4), v.witness)


def test_scan_example1_separable_at_low_cost():
    v = kappa_separability_scan(EX1_X, EX1_PI, CostStructure(F(1)), default_menu(4),
                                grid=ScanGrid(depth=20))
    assert not v.non_separable and v.label == "kappa-separable-up-to-resolution"


def test_scan_example1_nonseparable_at_high_cost():
    v = kappa_separability_scan(EX1_X, EX1_PI, CostStructure(F(5)), default_menu(4),
                                grid=ScanGrid(depth=20))
    assert v.non_separable and v.label == "kappa-non-separable"
