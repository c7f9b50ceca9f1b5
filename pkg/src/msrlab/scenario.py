"""Scenario files: JSON documents describing a complete market setup.

Numbers may be given as JSON numbers or as strings holding rational
arithmetic ("3/8", "(1-2*m)/2"), where names refer to the optional
``params`` mapping.  Priors must already be normalized.
"""

from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .model import (Belief, InformationStructure, ModelError, Security, StateSpace,
                    check_belief, expectation, format_number, to_number, validate_structure)
from .scoring import LOGARITHMIC, QUADRATIC, ScoringRule
from .signals import (ENTROPY, BinaryFamily, CostStructure, Menu, Signal, default_menu)

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow}


def evaluate(expr, params: dict | None = None) -> Fraction:
    """Exact value of a number or a small arithmetic expression."""
    if isinstance(expr, (int, float, Fraction)) and not isinstance(expr, bool):
        return to_number(expr)
    if not isinstance(expr, str):
        raise ModelError(f"not a number: {expr!r}")
    params = params or {}

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return to_number(node.value) if isinstance(node.value, float) else Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise ModelError(f"unknown parameter {node.id!r}")
            return evaluate(params[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Pow) and Fraction(right).denominator != 1:
                raise ModelError("only integer powers are allowed")
            return Fraction(_OPS[type(node.op)](left, right))
        raise ModelError(f"unsupported expression {expr!r}")

    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as err:
        raise ModelError(f"cannot parse {expr!r}") from err
    try:
        return walk(tree)
    except ZeroDivisionError as err:
        raise ModelError(f"division by zero in {expr!r}") from err


@dataclass(frozen=True)
class Scenario:
    name: str
    space: StateSpace
    security: Security
    structure: InformationStructure
    prior: Belief
    rule: ScoringRule = field(default_factory=ScoringRule)
    cost: CostStructure = field(default_factory=lambda: CostStructure(Fraction(1)))
    menu: Menu = field(default_factory=Menu)
    exact: bool = True
    announcement_grid: tuple | None = None
    initial_announcement: Fraction | None = None
    params: dict = field(default_factory=dict)

    @property
    def n_states(self) -> int:
        return len(self.space)

    @property
    def start(self):
        """Announcement standing before the first round."""
        if self.initial_announcement is not None:
            return self.initial_announcement
        return expectation(self.prior, self.security)

    def with_cost(self, c) -> "Scenario":
        return replace(self, cost=self.cost.with_c(c))

    def with_prior(self, prior: Belief) -> "Scenario":
        return replace(self, prior=check_belief(prior, self.n_states))


def _menu_from(data, space: StateSpace, params, exact: bool) -> Menu:
    if data is None:
        return Menu()
    if data == "default":
        return default_menu(len(space))
    signals = []
    for entry in data.get("signals", []):
        lik = {r: [_num(v, params, exact) for v in row] for r, row in entry["likelihood"].items()}
        signals.append(Signal(entry["name"], tuple(lik), tuple(tuple(r) for r in lik.values())))
    families = []
    if data.get("default_families"):
        families.extend(default_menu(len(space)).families)
    for entry in data.get("families", []):
        grid = tuple(evaluate(q, params) for q in entry.get("grid", ()))
        families.append(BinaryFamily(frozenset(space.index(s) for s in entry["event"]),
                                     len(space), grid, entry.get("label", "")))
    return Menu(tuple(signals), tuple(families))


def _num(v, params, exact: bool):
    value = evaluate(v, params)
    return value if exact else float(value)


def from_dict(data: dict) -> Scenario:
    """Build and validate a scenario; raises ModelError on bad input."""
    try:
        params = data.get("params", {})
        exact = data.get("numeric", "rational") == "rational"
        space = StateSpace(tuple(data["states"]))
        security = Security(tuple(_num(v, params, exact) for v in data["payoffs"]))
        if len(security) != len(space):
            raise ModelError("one payoff per state is required")
        structure = InformationStructure.from_labels(space, data["partitions"])
        report = validate_structure(space, structure)
        if not report:
            raise ModelError(f"invalid information structure: {report.message}")
        prior = check_belief(tuple(_num(v, params, exact) for v in data["prior"]), len(space))

        rd = data.get("rule", {"kind": QUADRATIC})
        if rd.get("kind", QUADRATIC) == LOGARITHMIC:
            rule = ScoringRule.logarithmic(security, _opt(rd.get("a"), params),
                                           _opt(rd.get("b"), params))
        else:
            rule = ScoringRule.quadratic(security)

        cd = data.get("cost", {})
        table = {k: evaluate(v, params) for k, v in cd.get("table", {}).items()}
        cost = CostStructure(evaluate(cd.get("c", 1), params), cd.get("kind", ENTROPY), table,
                             cd.get("reference", "belief"), bool(data.get("assumption2", True)))
        menu = _menu_from(data.get("menu"), space, params, exact)
        grid = data.get("announcement_grid")
        grid = tuple(sorted(_num(v, params, exact) for v in grid)) if grid else None
        start = data.get("initial_announcement")
        start = _num(start, params, exact) if start is not None else None
    except KeyError as err:
        raise ModelError(f"scenario is missing field {err.args[0]!r}") from err
    except (TypeError, ValueError) as err:
        if isinstance(err, ModelError):
            raise
        raise ModelError(str(err)) from err
    return Scenario(data.get("name", "scenario"), space, security, structure, prior, rule, cost,
                    menu, exact, grid, start, dict(params))


def _opt(v, params):
    return None if v is None else evaluate(v, params)


BUNDLED = ("example1", "example1_signal", "example2", "adversarial_4state")


def bundled_path(name: str):
    return resources.files("msrlab") / "scenarios" / f"{name}.json"


def load(source: str | Path, overrides: dict | None = None) -> Scenario:
    """Load a scenario from a path or a bundled name such as "example1"."""
    path = Path(source)
    if not path.exists() and str(source).removesuffix(".json") in BUNDLED:
        text = bundled_path(str(source).removesuffix(".json")).read_text()
    elif not path.exists() and path.name.removesuffix(".json") in BUNDLED:
        text = bundled_path(path.name.removesuffix(".json")).read_text()
    else:
        try:
            text = path.read_text()
        except OSError as err:
            raise ModelError(f"cannot read scenario {source}: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ModelError(f"scenario is not valid JSON: {err}") from err
    if overrides:
        data = {**data, **overrides}
        if "params" in overrides:
            data["params"] = {**json.loads(text).get("params", {}), **overrides["params"]}
    return from_dict(data)


def to_dict(s: Scenario) -> dict:
    out = {
        "name": s.name,
        "states": list(s.space.states),
        "payoffs": [format_number(v) for v in s.security.payoffs],
        "partitions": s.structure.to_labels(s.space),
        "prior": [format_number(p) for p in s.prior],
        "numeric": "rational" if s.exact else "float",
        "rule": {"kind": s.rule.kind},
        "cost": {"kind": s.cost.kind, "c": format_number(s.cost.c),
                 "reference": s.cost.reference},
        "assumption2": s.cost.assumption2,
    }
    if s.rule.kind == LOGARITHMIC:
        out["rule"].update(a=format_number(s.rule.a), b=format_number(s.rule.b))
    if s.cost.table:
        out["cost"]["table"] = {k: format_number(v) for k, v in s.cost.table.items()}
    if s.menu:
        out["menu"] = {
            "signals": [{"name": sig.name,
                         "likelihood": {r: [format_number(v) for v in row]
                                        for r, row in zip(sig.realizations, sig.table)}}
                        for sig in s.menu.signals],
            "families": [{"event": [s.space.states[k] for k in sorted(f.event)],
                          "grid": [format_number(q) for q in f.grid], "label": f.label}
                         for f in s.menu.families]}
    if s.announcement_grid:
        out["announcement_grid"] = [format_number(v) for v in s.announcement_grid]
    if s.initial_announcement is not None:
        out["initial_announcement"] = format_number(s.initial_announcement)
    if s.params:
        out["params"] = {k: v if isinstance(v, str) else format_number(v)
                         for k, v in s.params.items()}
    return out


def dumps(s: Scenario) -> str:
    return json.dumps(to_dict(s), indent=2)
