"""Command-line entry point: ``msrlab <verb> ...``.

Exit codes: 0 success, 2 invalid input or usage, 1 internal inconsistency.
Rationals are written as "p/q" strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from contextlib import contextmanager
from dataclasses import replace
from fractions import Fraction

from . import __version__
from .acquisition import ScanGrid, kappa_separability_scan, verify_kappa_witness
from .classifier import CASE2, adversarial_structure, classify
from .market import detect_convergence, run_market
from .model import ModelError, Security, StateSpace, format_number
from .poll import cost_sweep, market_value, parse_grid, poll_accuracy, prior_grid, run_poll
from .scenario import Scenario, _menu_from, evaluate, load, to_dict
from .separability import (check_witness, find_lambda_certificate, find_nonseparable_witness,
                           verify_certificate)
from .signals import CostStructure, default_menu


def _fmt(v):
    if isinstance(v, (list, tuple)):
        return [_fmt(e) for e in v]
    if isinstance(v, dict):
        return {str(k): _fmt(e) for k, e in v.items()}
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, (int, float, Fraction)):
        return format_number(v)
    return str(v)


@contextmanager
def _output(path):
    if path:
        with open(path, "w", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def _emit_json(obj, path):
    with _output(path) as fh:
        fh.write(json.dumps(obj, indent=2) + "\n")


def _state_label(sc: Scenario, k: int) -> str:
    return sc.space.states[k]


def _state_index(sc: Scenario, label: str) -> int:
    try:
        return sc.space.index(label)
    except (KeyError, ValueError):
        if label.isdigit() and int(label) < sc.n_states:
            return int(label)
        raise ModelError(f"unknown state {label!r}") from None


# -- verbs ----------------------------------------------------------------------

def cmd_classify(args) -> int:
    x = Security(tuple(evaluate(t) for t in args.payoffs.split(",")))
    cls = classify(x)
    out = {"payoffs": _fmt(x.payoffs), "case": cls.case, "subkind": cls.subkind,
           "evidence": _fmt(cls.evidence)}
    if cls.case == CASE2:
        adv = adversarial_structure(x)
        lo, hi = adv.value_range()
        u = (lo + hi) / 2
        space = StateSpace.of_size(len(x))
        sc = Scenario("adversarial", space, x, adv.structure, adv.prior_at_value(u),
                      menu=default_menu(len(x)))
        out["states"] = [space.states[k] for k in cls.states]
        out["common_value"] = format_number(u)
        out["scenario"] = to_dict(sc)
        if args.emit_scenario:
            with open(args.emit_scenario, "w") as fh:
                json.dump(to_dict(sc), fh, indent=2)
    _emit_json(out, args.out)
    return 0


def _cell_labels(sc: Scenario, cell) -> str:
    return "{" + ",".join(sc.space.states[k] for k in sorted(cell)) + "}"


def cmd_check_separable(args) -> int:
    sc = load(args.scenario)
    w = find_nonseparable_witness(sc.security, sc.structure)
    if w is not None:
        if not check_witness(sc.security, sc.structure, w):
            raise RuntimeError("witness failed its own check")
        out = {"separable": False, "witness": {
            "prior": _fmt(w.prior), "value": format_number(w.value),
            "support": [sc.space.states[k] for k in sorted(w.support)]}}
    else:
        cert = find_lambda_certificate(sc.security, sc.structure)
        if cert is None or not verify_certificate(sc.security, sc.structure, cert):
            raise RuntimeError("neither a witness nor a verified certificate was found")
        out = {"separable": True, "certificate": [
            {"region": rc.region.describe(),
             "weights": [{_cell_labels(sc, cell): format_number(lam)
                          for cell, lam in sorted(wt.items(), key=lambda kv: sorted(kv[0]))}
                         for wt in rc.weights]}
            for rc in cert.regions]}
    _emit_json(out, args.out)
    return 0


def _apply_cost_flags(sc: Scenario, args) -> Scenario:
    cost = sc.cost
    if getattr(args, "cost_kind", None):
        cost = CostStructure(cost.c, args.cost_kind, dict(cost.table), cost.reference,
                             cost.assumption2)
    if getattr(args, "c", None):
        cost = cost.with_c(evaluate(args.c))
    sc = replace(sc, cost=cost)
    if getattr(args, "menu", None):
        try:
            with open(args.menu) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            raise ModelError(f"cannot read menu file: {err}") from err
        sc = replace(sc, menu=_menu_from(data.get("menu", data), sc.space, sc.params, sc.exact))
    return sc


def cmd_check_kappa(args) -> int:
    sc = _apply_cost_flags(load(args.scenario), args)
    grid = ScanGrid(evaluate(args.grid_step), args.depth)
    verdict = kappa_separability_scan(sc.security, sc.structure, sc.cost, sc.menu, sc.rule, grid)
    out = {"verdict": verdict.label, "relative_to": "menu",
           "c": format_number(sc.cost.c), "cost_kind": sc.cost.kind,
           "grid_step": format_number(grid.step), "approach_depth": grid.depth,
           "priors_checked": verdict.checked}
    if verdict.witness is not None:
        w = verdict.witness
        if not verify_kappa_witness(sc.security, sc.structure, sc.cost, sc.menu, w, sc.rule):
            raise RuntimeError("scan witness failed verification")
        out["witness"] = {"prior": _fmt(w.prior), "value": format_number(w.value)}
    _emit_json(out, args.out)
    return 0


def _states(sc: Scenario, args) -> list[int]:
    if args.all_states:
        return [k for k in range(sc.n_states) if sc.prior[k]]
    if args.state is None:
        raise ModelError("give --state or --all-states")
    return [_state_index(sc, args.state)]


def cmd_simulate(args) -> int:
    sc = load(args.scenario)
    with _output(args.out) as fh:
        for s in _states(sc, args):
            tr = run_market(sc, s, args.seed, args.max_rounds)
            for r in tr.records:
                fh.write(json.dumps({
                    "state": _state_label(sc, s), "round": r.round, "announcer": r.announcer,
                    "signal": r.signal, "realization": r.realization,
                    "announcement": format_number(r.announcement), "public": _fmt(r.public),
                    "payoff": format_number(r.payoff), "cost": format_number(r.cost)}) + "\n")
            verdict, v = detect_convergence(tr)
            fh.write(json.dumps({"state": _state_label(sc, s), "verdict": verdict,
                                 "value": format_number(v), "stop": tr.stop,
                                 "martingale": tr.martingale_ok}) + "\n")
    return 0


def cmd_poll(args) -> int:
    sc = load(args.scenario)
    rows = []
    for s in _states(sc, args):
        res = run_poll(sc, s, args.seed)
        rows.append({"state": _state_label(sc, s), "announcements": _fmt(res.announcements),
                     "signals": list(res.signals), "prediction": format_number(res.prediction),
                     "accuracy": format_number(res.accuracy)})
    expected, _ = poll_accuracy(sc)
    _emit_json({"polls": rows, "expected_accuracy": format_number(expected)}, args.out)
    return 0


def cmd_sweep_cost(args) -> int:
    sc = load(args.scenario)
    res = cost_sweep(sc, parse_grid(args.c_grid), args.max_rounds)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["c", "A_market", "A_poll", "jumped"])
    for rec in res.records:
        writer.writerow([format_number(rec.c), format_number(rec.A_market),
                         format_number(rec.A_poll), int(res.jumped(rec))])
    with _output(args.out) as fh:
        fh.write(buf.getvalue())
    return 0


def cmd_value(args) -> int:
    sc = load(args.scenario)
    step = evaluate(args.grid_step)
    priors = [p for p in prior_grid(sc.n_states, step, not args.allow_zeros)
              if len({sc.security[k] for k, q in enumerate(p) if q}) > 1]
    value, argmin, _ = market_value(sc, priors, args.max_rounds)
    _emit_json({"value": format_number(value), "argmin_prior": _fmt(argmin),
                "priors": len(priors), "profile": "myopic"}, args.out)
    return 0


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msrlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_, scenario=True):
        sp = sub.add_parser(name, help=help_)
        if scenario:
            sp.add_argument("scenario", help="scenario file or bundled name (e.g. example1)")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = verb("classify", cmd_classify, "classify a security by its payoffs", scenario=False)
    sp.add_argument("--payoffs", required=True, help="comma-separated payoffs, e.g. 0,1,2,3")
    sp.add_argument("--emit-scenario", help="for Case 2, also write the adversarial scenario")

    verb("check-separable", cmd_check_separable, "witness or certificate for (X, partitions)")

    sp = verb("check-kappa", cmd_check_kappa, "kappa-separability scan over the menu")
    sp.add_argument("--cost-kind", choices=("entropy", "precision", "table"))
    sp.add_argument("--c", help="marginal cost")
    sp.add_argument("--menu", help="JSON file holding a menu object")
    sp.add_argument("--grid-step", default="1/64")
    sp.add_argument("--depth", type=int, default=200, help="geometric steps toward region ends")

    for name, func, help_ in (("simulate", cmd_simulate, "run the market, JSON lines per round"),
                              ("poll", cmd_poll, "run the one-round poll")):
        sp = verb(name, func, help_)
        sp.add_argument("--state", help="true state label")
        sp.add_argument("--all-states", action="store_true")
        sp.add_argument("--seed", type=int, default=0)
        if name == "simulate":
            sp.add_argument("--max-rounds", type=int, default=200)

    sp = verb("sweep-cost", cmd_sweep_cost, "market vs poll accuracy over marginal costs (CSV)")
    sp.add_argument("--c-grid", required=True, help="start:stop:step or c1,c2,... (decreasing)")
    sp.add_argument("--max-rounds", type=int, default=200)

    sp = verb("value", cmd_value, "minimum of A_market - A_poll over a prior grid")
    sp.add_argument("--grid-step", default="1/16")
    sp.add_argument("--allow-zeros", action="store_true", help="include priors without full support")
    sp.add_argument("--max-rounds", type=int, default=200)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except ModelError as err:
        print(f"msrlab: invalid input: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # noqa: BLE001
        print(f"msrlab: internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
