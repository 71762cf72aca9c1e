"""Actual causation: counterfactual dependence in some structural
simplification of the actual setting.

It suffices to search the structural simplifications of the model itself,
one per legal edge-removal set, keeping those that also simplify the actual
setting. Removal sets that leave the cause no longer an ancestor of the
effect cannot exhibit dependence and are skipped unless ``prune=False``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dependence import cf_depends_star
from .errors import SemanticError
from .io import model_to_json
from .model import Assignment, Edge, Nscm, is_solution
from .simplification import (
    GraphSimplification,
    enumerate_graph_simplifications,
    is_setting_simplification,
    structural_simplify,
)


@dataclass(frozen=True)
class CauseQuery:
    model: Nscm
    world: Assignment
    cause: tuple[str, str]
    effect: tuple[str, str]

    def check(self) -> None:
        sig = self.model.signature
        (x_var, x), (y_var, y) = self.cause, self.effect
        for var, value in (self.cause, self.effect):
            if not sig.is_endogenous(var):
                raise SemanticError(f"{var} must be endogenous")
            sig.value_index(var, value)
        if x_var == y_var:
            raise SemanticError("cause and effect must be about different variables")
        if not is_solution(self.model, self.world):
            raise SemanticError("the world is not a solution of the model")
        if self.world[x_var] != x or self.world[y_var] != y:
            raise SemanticError(
                f"the actual world does not satisfy {x_var}={x} and {y_var}={y}"
            )


@dataclass(frozen=True)
class CauseWitness:
    removed_edges: tuple[Edge, ...]
    simplified_model: Nscm = field(repr=False)
    x_alt: str
    counterfactual_solution: dict[str, str]

    def to_json(self) -> dict:
        children = {c for _, c in self.removed_edges}
        equations = [
            e for e in model_to_json(self.simplified_model)["endogenous"] if e["name"] in children
        ]
        return {
            "removed_edges": [list(e) for e in self.removed_edges],
            "removed_count": len(self.removed_edges),
            "x_alt": self.x_alt,
            "counterfactual_solution": dict(self.counterfactual_solution),
            "simplified_equations": equations,
        }


@dataclass(frozen=True)
class CauseResult:
    verdict: bool
    witnesses: list[CauseWitness]

    def __bool__(self) -> bool:
        return self.verdict


def list_setting_simplifications(model: Nscm, world: Assignment) -> list[tuple[GraphSimplification, Nscm]]:
    """Structural simplifications of the model that also simplify the setting at `world`."""
    if not is_solution(model, world):
        raise SemanticError("the world is not a solution of the model")
    out = []
    for gs in enumerate_graph_simplifications(model.graph):
        simplified = structural_simplify(model, gs)
        if is_setting_simplification(model, simplified, world):
            out.append((gs, simplified))
    return out


def actual_cause(query: CauseQuery, *, prune: bool = True,
                 require_distinct: bool = False) -> CauseResult:
    """Decide whether query.cause is an actual cause of query.effect.

    Witnesses come out ordered by number of removed edges, then
    lexicographically; the empty removal appears iff there is plain
    counterfactual dependence.
    """
    query.check()
    model, world = query.model, query.world
    (x_var, x), (y_var, y) = query.cause, query.effect
    witnesses = []
    for gs in enumerate_graph_simplifications(model.graph):
        if prune and y_var not in gs.result_graph.descendants(x_var):
            continue
        simplified = structural_simplify(model, gs)
        if not is_setting_simplification(model, simplified, world):
            continue
        found = cf_depends_star(simplified, world, x_var, x, y_var, y,
                                require_distinct=require_distinct)
        if found is not None:
            witnesses.append(CauseWitness(
                tuple(gs.sorted_removed()), simplified, found.x_alt,
                found.counterfactual_solution,
            ))
    return CauseResult(bool(witnesses), witnesses)


def explain(query: CauseQuery, *, prune: bool = True, require_distinct: bool = False) -> dict:
    """Actual-cause verdict plus the plain counterfactual-dependence verdict."""
    result = actual_cause(query, prune=prune, require_distinct=require_distinct)
    (x_var, x), (y_var, y) = query.cause, query.effect
    plain = cf_depends_star(query.model, query.world, x_var, x, y_var, y,
                            require_distinct=require_distinct)
    return {
        "cause": {x_var: x},
        "effect": {y_var: y},
        "verdict": result.verdict,
        "plain_dependence": plain is not None,
        "witnesses": [w.to_json() for w in result.witnesses],
    }


def render_explanation(report: dict) -> str:
    (x_var, x), = report["cause"].items()
    (y_var, y), = report["effect"].items()
    lines = [
        f"{x_var}={x} is {'an' if report['verdict'] else 'not an'} actual cause of {y_var}={y}",
        "plain counterfactual dependence: " + ("yes" if report["plain_dependence"] else "no"),
    ]
    if not report["witnesses"]:
        lines.append("no structural simplification exhibits dependence")
    for w in report["witnesses"]:
        removed = ", ".join(f"{a}->{b}" for a, b in w["removed_edges"]) or "(none)"
        cf = ",".join(f"{k}={v}" for k, v in w["counterfactual_solution"].items())
        lines.append(f"witness: remove {removed}; {x_var}<-{w['x_alt']} admits {cf}")
    return "\n".join(lines) + "\n"
