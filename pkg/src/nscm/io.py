"""JSON serialisation of models and the `k=v,...` assignment syntax used on the CLI."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .errors import ParseError
from .model import MultiFunction, Nscm, Signature


def _token(value, where: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError(f"{where}: value tokens must be strings, got {value!r}")
    return str(value)


def _values(raw, where: str) -> list[str]:
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{where}: expected a nonempty list of values")
    out = [_token(v, where) for v in raw]
    if len(set(out)) != len(out):
        raise ParseError(f"{where}: repeated value in {out}")
    return out


def _variables(raw, where: str) -> list[dict]:
    if not isinstance(raw, list):
        raise ParseError(f"{where} must be a list")
    for entry in raw:
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
            raise ParseError(f"{where}: every entry needs a string 'name'")
    return raw


def signature_from_json(data: Mapping[str, Any]) -> Signature:
    if not isinstance(data, Mapping):
        raise ParseError("model JSON must be an object")
    exo = _variables(data.get("exogenous", []), "exogenous")
    endo = _variables(data.get("endogenous", []), "endogenous")
    ranges = {}
    for entry in exo + endo:
        name = entry["name"]
        if name in ranges:
            raise ParseError(f"variable {name} declared twice")
        ranges[name] = _values(entry.get("range"), f"range of {name}")
    return Signature(
        tuple(e["name"] for e in exo), tuple(e["name"] for e in endo), ranges
    )


def model_from_json(data: Mapping[str, Any], *, check: bool = True) -> Nscm:
    """Build a model from the canonical JSON object, validating unless `check` is false."""
    sig = signature_from_json(data)
    equations = []
    for entry in data.get("endogenous", []):
        name = entry["name"]
        parents = entry.get("parents", [])
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise ParseError(f"parents of {name} must be a list of names")
        for p in parents:
            if p not in sig:
                raise ParseError(f"{name} has unknown parent {p!r}")
        table = {}
        for i, row in enumerate(entry.get("table", [])):
            where = f"{name}.table[{i}]"
            cond = row.get("if") if isinstance(row, dict) else None
            if not isinstance(cond, dict) or set(cond) != set(parents):
                raise ParseError(f"{where}: 'if' must assign exactly the parents {parents}")
            key = tuple(_token(cond[p], where) for p in parents)
            if key in table:
                raise ParseError(f"{where}: duplicate row for {cond}")
            table[key] = frozenset(_values(row.get("then"), where + ".then"))
        if "otherwise" in entry:
            fallback = frozenset(_values(entry["otherwise"], f"{name}.otherwise"))
            for key in sig.assignments(parents):
                table.setdefault(tuple(key[p] for p in parents), fallback)
        equations.append(MultiFunction(name, tuple(parents), table))
    if not check:
        return Nscm(sig, {f.child: f for f in equations})
    return Nscm.build(sig, equations)


def signature_to_json(sig: Signature) -> dict:
    return {
        "exogenous": [{"name": u, "range": list(sig.ranges[u])} for u in sig.exogenous],
        "endogenous": [{"name": v, "range": list(sig.ranges[v])} for v in sig.endogenous],
    }


def model_to_json(model: Nscm) -> dict:
    """Canonical JSON: variables and rows in declaration/range order, no 'otherwise'."""
    sig = model.signature
    out = signature_to_json(sig)
    for entry in out["endogenous"]:
        f = model.equations[entry["name"]]
        rank = {v: i for i, v in enumerate(sig.ranges[f.child])}
        entry["parents"] = list(f.parents)
        entry["table"] = [
            {"if": row, "then": sorted(f(row), key=rank.__getitem__)}
            for row in sig.assignments(f.parents)
        ]
    return out


def load_model(path) -> Nscm:
    return model_from_json(load_json(path))


def load_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}", exc.pos) from None


def dumps(data) -> str:
    """Byte-stable JSON text (insertion order is already canonical)."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def parse_assignment(text: str | None) -> dict[str, str]:
    """Parse `A=1,B=0` into a dict. The empty string is the empty assignment."""
    if text is None:
        return {}
    out: dict[str, str] = {}
    text = text.strip()
    if not text:
        return out
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not name or not value:
            raise ParseError(f"expected NAME=VALUE, got {part.strip()!r}")
        if name in out:
            raise ParseError(f"{name} assigned twice")
        out[name] = value
    return out


def parse_edges(text: str) -> list[tuple[str, str]]:
    """Parse `A->B,C->D` into a list of edges."""
    edges = []
    for part in text.split(","):
        if not part.strip():
            continue
        src, sep, dst = part.partition("->")
        if not sep or not src.strip() or not dst.strip():
            raise ParseError(f"expected PARENT->CHILD, got {part.strip()!r}")
        edges.append((src.strip(), dst.strip()))
    return edges
