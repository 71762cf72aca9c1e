"""Dependence and counterfactual dependence, observational and interventional.

Every query returns a `DependenceWitness` when the relation holds and `None`
otherwise, so results can be used directly in boolean context.

The alternative value x' ranges over the whole range of X, x itself
included, as the definitions are stated. ``require_distinct=True`` restricts
to x' != x. The two never disagree: setting X to its actual value leaves the
actual world as the only counterfactual solution, because every equation
then sits on its pinned actual row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import SemanticError
from .model import Assignment, Dag, Nscm, intervene, is_solution


@dataclass(frozen=True)
class DependenceWitness:
    base_intervention: dict[str, str]
    context: dict[str, str]
    x: str
    x_alt: str
    y: str
    state: dict[str, str] | None = None
    counterfactual_solution: dict[str, str] | None = None

    def to_json(self) -> dict:
        out = {
            "base_intervention": dict(self.base_intervention),
            "context": dict(self.context),
        }
        if self.state is not None:
            out["state"] = dict(self.state)
        out.update(x=self.x, x_alt=self.x_alt, y=self.y)
        if self.counterfactual_solution is not None:
            out["counterfactual_solution"] = dict(self.counterfactual_solution)
        return out


def _check_pair(model: Nscm, x_var: str, y_var: str):
    sig = model.signature
    for v in (x_var, y_var):
        if not sig.is_endogenous(v):
            raise SemanticError(f"{v} must be endogenous")
    if x_var == y_var:
        raise SemanticError("cause and effect variables must differ")


def _alternatives(model: Nscm, x_var: str, x: str, require_distinct: bool) -> list[str]:
    return [v for v in model.signature.ranges[x_var] if not (require_distinct and v == x)]


def depends_star(model: Nscm, context: Assignment, x_var: str, x: str, y_var: str, y: str,
                 *, require_distinct: bool = False) -> DependenceWitness | None:
    """Y=y depends* on X=x in the partial setting (model, context).

    Some solution at the context has X=x and Y=y, and for some x' every
    solution of the model intervened with X <- x' has Y != y.
    """
    _check_pair(model, x_var, y_var)
    sig = model.signature
    sig.value_index(x_var, x)
    sig.value_index(y_var, y)
    sig.check_assignment(context, sig.exogenous, "context")
    ix, iy = sig.endogenous.index(x_var), sig.endogenous.index(y_var)
    engine = model.engine
    if not any(s[ix] == x and s[iy] == y for s in engine.states(context)):
        return None
    for x_alt in _alternatives(model, x_var, x, require_distinct):
        if all(s[iy] != y for s in engine.states(context, do={x_var: x_alt})):
            return DependenceWitness({}, dict(context), x, x_alt, y)
    return None


def _cf_search(model: Nscm, world: Assignment, x_var: str, y_var: str,
               require_distinct: bool) -> tuple[str, dict] | None:
    ctx = model.context_of(world)
    iy = model.signature.endogenous.index(y_var)
    y = world[y_var]
    for x_alt in _alternatives(model, x_var, world[x_var], require_distinct):
        for s in model.engine.states(ctx, do={x_var: x_alt}, pin=world):
            if s[iy] != y:
                return x_alt, model.state_dict(s)
    return None


def cf_depends_star(model: Nscm, world: Assignment, x_var: str, x: str, y_var: str, y: str,
                    *, require_distinct: bool = False) -> DependenceWitness | None:
    """Y=y counterfactually depends* on X=x in the full setting (model, world).

    The world has X=x and Y=y, and for some x' the refined model intervened
    with X <- x' admits a solution with Y != y.
    """
    _check_pair(model, x_var, y_var)
    model.signature.value_index(x_var, x)
    model.signature.value_index(y_var, y)
    if not is_solution(model, world):
        raise SemanticError("the world is not a solution of the model")
    if world[x_var] != x or world[y_var] != y:
        return None
    found = _cf_search(model, world, x_var, y_var, require_distinct)
    if found is None:
        return None
    x_alt, cf_state = found
    return DependenceWitness(
        {}, model.context_of(world), x, x_alt, y,
        state={v: world[v] for v in model.signature.endogenous},
        counterfactual_solution=cf_state,
    )


def _check_base(model: Nscm, base, x_var: str, y_var: str) -> dict[str, str]:
    do = model.signature.check_intervention(base)
    if x_var in do:
        raise SemanticError(f"{x_var} is intervened on; dependence on it is undefined")
    if y_var in do:
        raise SemanticError(f"{y_var} is intervened on; it cannot vary")
    return do


def depends(model: Nscm, base, context: Assignment, x_var: str, x: str, y_var: str, y: str,
            *, require_distinct: bool = False) -> DependenceWitness | None:
    """Y=y depends on X=x in the partial setting (model intervened with `base`, context)."""
    _check_pair(model, x_var, y_var)
    do = _check_base(model, base, x_var, y_var)
    found = depends_star(intervene(model, do), context, x_var, x, y_var, y,
                         require_distinct=require_distinct)
    if found is None:
        return None
    return DependenceWitness(do, found.context, x, found.x_alt, y)


def cf_depends(model: Nscm, base, world: Assignment, x_var: str, x: str, y_var: str, y: str,
               *, require_distinct: bool = False) -> DependenceWitness | None:
    """Y=y counterfactually depends on X=x in (model intervened with `base`, world)."""
    _check_pair(model, x_var, y_var)
    do = _check_base(model, base, x_var, y_var)
    intervened = intervene(model, do)
    if not is_solution(intervened, world):
        raise SemanticError("the world is not a solution of the intervened model")
    found = cf_depends_star(intervened, world, x_var, x, y_var, y,
                            require_distinct=require_distinct)
    if found is None:
        return None
    return DependenceWitness(do, found.context, x, found.x_alt, y, found.state,
                             found.counterfactual_solution)


def _search(model: Nscm, x_var: str, y_var: str, bases: Iterator[dict],
            require_distinct: bool) -> DependenceWitness | None:
    sig = model.signature
    contexts = list(sig.contexts())
    for base in bases:
        intervened = intervene(model, base)
        for ctx in contexts:
            for s in intervened.engine.states(ctx):
                world = {**ctx, **intervened.state_dict(s)}
                found = _cf_search(intervened, world, x_var, y_var, require_distinct)
                if found is not None:
                    x_alt, cf_state = found
                    return DependenceWitness(
                        dict(base), ctx, world[x_var], x_alt, world[y_var],
                        state=intervened.state_dict(s), counterfactual_solution=cf_state,
                    )
    return None


def depends_on(model: Nscm, x_var: str, y_var: str, *,
               require_distinct: bool = False) -> DependenceWitness | None:
    """Y depends on X: counterfactual dependence in some intervened setting.

    Base interventions range over every subset of the other endogenous
    variables (never X or Y), smallest first; the first witness in that
    order is returned.
    """
    _check_pair(model, x_var, y_var)
    others = [v for v in model.signature.endogenous if v not in (x_var, y_var)]
    return _search(model, x_var, y_var, model.signature.interventions(others), require_distinct)


def directly_depends(model: Nscm, x_var: str, y_var: str, *,
                     require_distinct: bool = False) -> DependenceWitness | None:
    """Y directly depends on X: dependence with every other endogenous variable held fixed."""
    _check_pair(model, x_var, y_var)
    others = [v for v in model.signature.endogenous if v not in (x_var, y_var)]
    return _search(model, x_var, y_var, model.signature.assignments(others), require_distinct)


def ancestors(graph: Dag, node: str) -> frozenset[str]:
    if node not in graph.nodes:
        raise SemanticError(f"unknown variable {node!r}")
    return graph.ancestors(node)


def is_ancestor(graph: Dag, a: str, b: str) -> bool:
    """True iff there is a directed path of length >= 1 from a to b."""
    for n in (a, b):
        if n not in graph.nodes:
            raise SemanticError(f"unknown variable {n!r}")
    return b in graph.descendants(a)
