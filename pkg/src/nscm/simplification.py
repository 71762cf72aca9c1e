"""Structural simplification of graphs, models and full settings, and
interventional extension between models."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .errors import EnumerationLimitError, SemanticError
from .model import Assignment, Dag, Edge, MultiFunction, Nscm, is_solution, refine


@dataclass(frozen=True)
class GraphSimplification:
    base_graph: Dag
    removed_edges: frozenset[Edge]

    @property
    def result_graph(self) -> Dag:
        return self.base_graph.without(self.removed_edges)

    def sorted_removed(self) -> list[Edge]:
        return self.base_graph.sorted_edges(self.removed_edges)

    def to_json(self) -> dict:
        return {"removed_edges": [list(e) for e in self.sorted_removed()]}


def is_graph_simplification(g1: Dag, g2: Dag) -> bool:
    """g2 is a subgraph of g1 whose every removed edge also removed an
    ancestor-descendant pair, and that adds no new ancestor pairs."""
    if set(g1.nodes) != set(g2.nodes):
        raise SemanticError("graphs are over different node sets")
    if not g2.edges <= g1.edges:
        return False
    anc2 = g2.ancestor_pairs()
    if not anc2 <= g1.ancestor_pairs():
        return False
    return all(edge not in anc2 for edge in g1.edges - g2.edges)


def enumerate_graph_simplifications(graph: Dag) -> list[GraphSimplification]:
    """Every valid removal set, ordered by size and then lexicographically."""
    edges = graph.sorted_edges()
    out = []
    for k in range(len(edges) + 1):
        for removed in itertools.combinations(edges, k):
            if is_graph_simplification(graph, graph.without(removed)):
                out.append(GraphSimplification(graph, frozenset(removed)))
    return out


def simplification_of(graph: Dag, removed: Iterable[Edge]) -> GraphSimplification:
    """Wrap a removal set, checking that it is a legal graph simplification."""
    removed = frozenset(tuple(e) for e in removed)
    missing = removed - graph.edges
    if missing:
        raise SemanticError(f"edges {sorted(missing)} are not in the graph")
    if not is_graph_simplification(graph, graph.without(removed)):
        names = ", ".join(f"{a}->{b}" for a, b in graph.sorted_edges(removed))
        raise SemanticError(f"removing {names} is not a structural simplification")
    return GraphSimplification(graph, removed)


def generalized_apply(f: MultiFunction, partial: Assignment) -> frozenset[str]:
    """Union of f over all completions of a partial parent assignment."""
    extra = set(partial) - set(f.parents)
    if extra:
        raise SemanticError(f"{sorted(extra)} are not parents of {f.child}")
    positions = [(i, partial[p]) for i, p in enumerate(f.parents) if p in partial]
    out: set[str] = set()
    for row, values in f.table.items():
        if all(row[i] == v for i, v in positions):
            out |= values
    return frozenset(out)


def _generalized(f: MultiFunction, parents: tuple[str, ...], signature) -> MultiFunction:
    table = {}
    for row in signature.assignments(parents):
        table[tuple(row[p] for p in parents)] = generalized_apply(f, row)
    return MultiFunction(f.child, parents, table)


def structural_simplify(model: Nscm, gs: GraphSimplification) -> Nscm:
    """The unique structural simplification of `model` over gs.result_graph."""
    if gs.base_graph != model.graph:
        raise SemanticError("the simplification was built for a different graph")
    if not gs.removed_edges:
        return model
    result = gs.result_graph
    eqs = dict(model.equations)
    for _, child in gs.removed_edges:
        eqs[child] = _generalized(model.equations[child], result.parents(child), model.signature)
    return Nscm(model.signature, eqs)


def _same_signature(m1: Nscm, m2: Nscm):
    if m1.signature != m2.signature:
        raise SemanticError("models are over different signatures")


def is_structural_simplification(m1: Nscm, m2: Nscm) -> bool:
    """m2's graph simplifies m1's and each of m2's equations is m1's generalized
    function restricted to m2's parents."""
    _same_signature(m1, m2)
    if not is_graph_simplification(m1.graph, m2.graph):
        return False
    for x in m1.signature.endogenous:
        f2 = m2.equations[x]
        g1 = m1.equations[x]
        for row, values in f2.table.items():
            if generalized_apply(g1, dict(zip(f2.parents, row))) != values:
                return False
    return True


def is_setting_simplification(m1: Nscm, m2: Nscm, world: Assignment) -> bool:
    """(m2, world) structurally simplifies (m1, world): compare the refinements."""
    _same_signature(m1, m2)
    if not is_solution(m1, world):
        raise SemanticError("the world is not a solution of the first model")
    if not is_solution(m2, world):
        raise SemanticError("the world is not a solution of the second model")
    return is_structural_simplification(refine(m1, world), refine(m2, world))


def is_interventional_extension(m1: Nscm, m2: Nscm, *, limit: int | None = None) -> bool:
    """Every interventionist possibility of m1 is one of m2.

    Checked as solution-set inclusion for every context and every
    intervention: a possibility statement holds exactly when some solution of
    the intervened model satisfies its body.
    """
    _same_signature(m1, m2)
    sig = m1.signature
    total = sig.context_count() * sig.intervention_count()
    if limit is not None and total > limit:
        raise EnumerationLimitError(
            f"{total} (context, intervention) pairs exceed the limit of {limit}"
        )
    return extension_counterexample(m1, m2) is None


def extension_counterexample(m1: Nscm, m2: Nscm) -> dict | None:
    """First (context, intervention, state) possible in m1 but not in m2, if any."""
    _same_signature(m1, m2)
    sig = m1.signature
    contexts = list(sig.contexts())
    for do in sig.interventions():
        for ctx in contexts:
            second = set(m2.engine.states(ctx, do=do))
            for s in m1.engine.states(ctx, do=do):
                if s not in second:
                    return {"context": ctx, "do": do, "state": m1.state_dict(s)}
    return None
