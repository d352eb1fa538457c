"""JSON formats for models, ideals and operations.

Rationals travel as strings ("p/q") so nothing ever passes through a float.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

from .closure import (
    CheckReport,
    SpectraReport,
    StableOpSpec,
    SpecError,
    build_spec,
    make_generator,
    psi,
    raw_spec,
)
from .groups import GroupError, UpSet, parse_factors
from .spectrum import (
    ROOT,
    ModelError,
    ModuleTuple,
    PrimeInfo,
    SpectrumTree,
    compatibility_problems,
    validate_model,
)


class InputError(ValueError):
    """Malformed or inconsistent input; the CLI maps it to exit code 2."""


def read_json(path):
    """Load JSON from a path, or from stdin when the path is "-"."""
    try:
        if str(path) == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _rational(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"coordinate {x!r} must be an integer or a string 'p/q'")
    try:
        return Fraction(x) if isinstance(x, int) else Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot read {x!r} as an exact rational") from None


def _fmt(q: Fraction) -> str:
    return str(q)


# -- models ----------------------------------------------------------------------


def parse_model(data) -> SpectrumTree:
    if not isinstance(data, dict) or "branches" not in data:
        raise InputError("a model needs a 'branches' list")
    try:
        branches = [(str(b["id"]), parse_factors(b["factors"])) for b in data["branches"]]
        shared = [
            (str(s["node"]), [(str(a[0]), int(a[1])) for a in s["attachments"]])
            for s in data.get("shared", [])
        ]
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InputError(f"malformed model: {exc}") from None
    tree = SpectrumTree.from_shared(branches, shared, name=str(data.get("name", "")))
    diags = validate_model(tree)
    if diags:
        raise ModelError(diags)
    return tree


def load_model(path) -> SpectrumTree:
    return parse_model(read_json(path))


def dump_model(tree: SpectrumTree) -> dict:
    shared = []
    for node in sorted(tree.nodes.values(), key=lambda n: n.id):
        if node.id == ROOT:
            continue
        default = node.id == node.levels[0][0] or node.id == f"{node.levels[0][0]}.{node.levels[0][1]}"
        if len(node.levels) > 1 or not default:
            shared.append({"node": node.id, "attachments": [[b, d] for b, d in node.levels]})
    return {
        "name": tree.name,
        "branches": [{"id": b, "factors": list(g.factors)} for b, g in tree.branches],
        "shared": shared,
    }


# -- ideals ----------------------------------------------------------------------


def parse_upset(group, data) -> UpSet:
    if data == "unit":
        return UpSet.principal(group, group.zero())
    if data == "zero":
        return UpSet.empty(group)
    if data == "full":
        return UpSet.all(group)
    if not isinstance(data, dict):
        raise InputError(f"component {data!r} must be 'unit', 'zero', 'full' or a cut object")
    try:
        level = int(data.get("level", 0))
        bound = [_rational(x) for x in data["bound"]]
        closed = data.get("closed", True)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed cut {data!r}: {exc}") from None
    if not isinstance(closed, bool):
        raise InputError(f"'closed' must be a boolean in {data!r}")
    try:
        return UpSet.cut(group, level, bound, closed)
    except GroupError as exc:
        raise InputError(f"bad cut {data!r}: {exc}") from None


def dump_upset(S: UpSet):
    if S.is_empty:
        return "zero"
    if S.is_all:
        return "full"
    if S.level == 0 and S.closed and not any(S.bound.coords):
        return "unit"
    return {"level": S.level, "bound": [_fmt(c) for c in S.bound.coords], "closed": S.closed}


def parse_ideal(tree: SpectrumTree, data) -> ModuleTuple:
    if data == "zero":
        data = {b: "zero" for b in tree.branch_ids()}
    if not isinstance(data, dict):
        raise InputError("an ideal is a map from branch ids to components")
    unknown = sorted(set(data) - set(tree.branch_ids()))
    if unknown:
        raise InputError(f"unknown branches {unknown}")
    missing = sorted(set(tree.branch_ids()) - set(data))
    if missing:
        raise InputError(f"missing components for branches {missing}")
    I = ModuleTuple.of({b: parse_upset(tree.group(b), data[b]) for b in tree.branch_ids()})
    problems = compatibility_problems(tree, I)
    if problems:
        raise InputError("; ".join(problems))
    return I


def load_ideal(tree, path) -> ModuleTuple:
    return parse_ideal(tree, read_json(path))


def dump_ideal(I: ModuleTuple) -> dict:
    return {b: dump_upset(S) for b, S in I.items()}


# -- operations ------------------------------------------------------------------


def _ids(data, key) -> list[str]:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise InputError(f"'{key}' must be a list of node ids")
    return [str(x) for x in value]


def parse_op(tree: SpectrumTree, data, strict: bool = True) -> StableOpSpec:
    """Read an operation; ``strict=False`` keeps it exactly as written."""
    if not isinstance(data, dict):
        raise InputError("an operation is a JSON object")
    for key in list(_ids(data, "lambda")) + _ids(data, "delta1") + _ids(data, "delta2"):
        if key not in tree.nodes:
            raise InputError(f"unknown node {key!r}")
    if "gens" in data:
        try:
            gens = [make_generator(tree, g["kind"], str(g["prime"])) for g in data["gens"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed generator list: {exc}") from None
        except ModelError as exc:
            raise InputError(str(exc)) from None
        return psi(tree, gens)
    delta1, delta2 = _ids(data, "delta1"), _ids(data, "delta2")
    if not strict:
        return raw_spec(tree, delta1, delta2)
    lam = _ids(data, "lambda") if "lambda" in data else None
    return build_spec(tree, delta1, delta2, lam)


def load_op(tree, path, strict: bool = True) -> StableOpSpec:
    return parse_op(tree, read_json(path), strict)


def dump_op(op: StableOpSpec) -> dict:
    return {"lambda": sorted(op.lam), "delta1": sorted(op.delta1), "delta2": sorted(op.delta2)}


def dump_spectra(report: SpectraReport) -> dict:
    return {"qspec": list(report.qspec), "psspec": list(report.psspec)}


def dump_primes(rows: list[PrimeInfo]) -> list[dict]:
    return [
        {
            "node": r.node,
            "branched": r.branched,
            "localized_max_principal": r.localized_max_principal,
            "divisorial": r.divisorial_over_R,
            "maximal": r.maximal,
        }
        for r in rows
    ]


def dump_check(report: CheckReport) -> dict:
    return {
        "checked": report.checked,
        "failures": report.failures,
        "ok": report.ok,
        "counterexample": report.counterexample,
    }


__all__ = [
    "InputError",
    "SpecError",
    "read_json",
    "dumps",
    "parse_model",
    "load_model",
    "dump_model",
    "parse_upset",
    "dump_upset",
    "parse_ideal",
    "load_ideal",
    "dump_ideal",
    "parse_op",
    "load_op",
    "dump_op",
    "dump_spectra",
    "dump_primes",
    "dump_check",
]
