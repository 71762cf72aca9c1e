"""Idealized causal discovery from interventionist possibility sets.

A possibility set records, for every context and every intervention, the set
of states that experiments showed to be reachable. Under the exhaustivity
assumption these are exactly the solutions of the intervened ground-truth
model, which is what `generate_possibilities` produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ParseError, SemanticError
from .io import signature_from_json, signature_to_json
from .model import Assignment, Dag, MultiFunction, Nscm, Signature

ContextKey = tuple[str, ...]
DoKey = tuple[tuple[str, str], ...]
StateTuple = tuple[str, ...]


@dataclass(frozen=True)
class PossibilitySet:
    signature: Signature
    records: Mapping[tuple[ContextKey, DoKey], frozenset[StateTuple]]

    def key(self, context: Assignment, do: Assignment) -> tuple[ContextKey, DoKey]:
        sig = self.signature
        return (
            tuple(context[u] for u in sig.exogenous),
            tuple((v, do[v]) for v in sig.canonical(do)),
        )

    def state_set(self, context: Assignment, do: Assignment) -> frozenset[StateTuple]:
        return self.records[self.key(context, do)]

    def states(self, context: Assignment, do: Assignment) -> list[dict[str, str]]:
        endo = self.signature.endogenous
        rows = [dict(zip(endo, s)) for s in self.state_set(context, do)]
        return sorted(rows, key=self.signature.assignment_key)

    def validate(self) -> None:
        """Raise SemanticError unless coverage and effectiveness hold."""
        sig = self.signature
        expected = set()
        for u in sig.contexts():
            for do in sig.interventions():
                key = self.key(u, do)
                expected.add(key)
                states = self.records.get(key)
                if not states:
                    raise SemanticError(f"no possible state recorded for context {u} and do {do}")
                for s in states:
                    if len(s) != len(sig.endogenous):
                        raise SemanticError(f"state {s} does not cover every endogenous variable")
                    for v, x in zip(sig.endogenous, s):
                        sig.value_index(v, x)
                    for v, x in key[1]:
                        if s[sig.endogenous.index(v)] != x:
                            raise SemanticError(
                                f"state {dict(zip(sig.endogenous, s))} contradicts do {do}"
                            )
        extra = set(self.records) - expected
        if extra:
            raise SemanticError(f"{len(extra)} records have malformed keys")

    def statistics(self) -> dict:
        sizes = [len(s) for s in self.records.values()]
        return {
            "contexts": self.signature.context_count(),
            "interventions": self.signature.intervention_count(),
            "records": len(self.records),
            "states": sum(sizes),
            "nondeterministic_records": sum(1 for n in sizes if n > 1),
        }

    def to_json(self) -> dict:
        sig = self.signature
        records = []
        for u in sig.contexts():
            for do in sig.interventions():
                records.append({"context": u, "do": do, "states": self.states(u, do)})
        return {"signature": signature_to_json(sig), "records": records}

    @classmethod
    def from_json(cls, data: Mapping) -> "PossibilitySet":
        if not isinstance(data, Mapping) or "records" not in data:
            raise ParseError("possibility set JSON needs 'signature' and 'records'")
        sig = signature_from_json(data.get("signature", {}))
        records: dict = {}
        probe = cls(sig, {})
        for i, rec in enumerate(data["records"]):
            try:
                context, do, states = rec["context"], rec["do"], rec["states"]
            except (KeyError, TypeError):
                raise ParseError(f"records[{i}] needs 'context', 'do' and 'states'") from None
            sig.check_assignment(context, sig.exogenous, f"records[{i}].context")
            do = sig.check_intervention(do)
            key = probe.key(context, do)
            rows = set()
            for s in states:
                sig.check_assignment(s, sig.endogenous, f"records[{i}] state")
                rows.add(tuple(s[v] for v in sig.endogenous))
            records[key] = records.get(key, frozenset()) | frozenset(rows)
        out = cls(sig, records)
        out.validate()
        return out


def generate_possibilities(model: Nscm) -> PossibilitySet:
    """The exhaustive possibility set of a ground-truth model."""
    sig = model.signature
    records = {}
    for u in sig.contexts():
        ukey = tuple(u[v] for v in sig.exogenous)
        for do in sig.interventions():
            dkey = tuple(do.items())
            records[(ukey, dkey)] = frozenset(model.engine.states(u, do=do))
    return PossibilitySet(sig, records)


def _endogenous_edge(S: PossibilitySet, x_var: str, y_var: str) -> bool:
    sig = S.signature
    endo = sig.endogenous
    ix, iy = endo.index(x_var), endo.index(y_var)
    others = [v for v in endo if v not in (x_var, y_var)]
    for u in sig.contexts():
        for z in sig.assignments(others):
            observed = {(s[ix], s[iy]) for s in S.state_set(u, z)}
            for x_alt in sig.ranges[x_var]:
                after = {s[iy] for s in S.state_set(u, {**z, x_var: x_alt})}
                if any(y not in after for _, y in observed):
                    return True
    return False


def _exogenous_edge(S: PossibilitySet, u_var: str, x_var: str) -> bool:
    sig = S.signature
    ix = sig.endogenous.index(x_var)
    rest = [u for u in sig.exogenous if u != u_var]
    others = [v for v in sig.endogenous if v != x_var]
    for z in sig.assignments(others):
        for fixed in sig.assignments(rest):
            seen = {
                frozenset(s[ix] for s in S.state_set({**fixed, u_var: a}, z))
                for a in sig.ranges[u_var]
            }
            if len(seen) > 1:
                return True
    return False


def infer_gs(S: PossibilitySet) -> Dag:
    """The graph of edges witnessed by direct dependence inside S.

    Endogenous X->Y: with every other endogenous variable held fixed, some
    recorded state has X=x, Y=y, yet after additionally setting X <- x' no
    recorded state has Y=y. Exogenous U->X: with every other endogenous
    variable and every other exogenous coordinate held fixed, the recorded
    values of X change with U.
    """
    sig = S.signature
    edges = set()
    for y in sig.endogenous:
        for x in sig.endogenous:
            if x != y and _endogenous_edge(S, x, y):
                edges.add((x, y))
        for u in sig.exogenous:
            if _exogenous_edge(S, u, y):
                edges.add((u, y))
    return Dag(sig.variables, frozenset(edges))


def build_model(S: PossibilitySet, graph: Dag, *, inferred: Dag | None = None) -> Nscm:
    """The unique model over `graph` whose interventionist possibilities are S.

    x is in f_X(a, b) iff some context agreeing with b on X's exogenous
    parents has a recorded state with X=x under the intervention A <- a on
    X's endogenous parents.
    """
    sig = S.signature
    if set(graph.nodes) != set(sig.variables):
        raise SemanticError("graph and possibility set are over different variables")
    graph = Dag(sig.variables, graph.edges)
    graph.topological_order()
    if any(sig.is_exogenous(c) for _, c in graph.edges):
        raise SemanticError("exogenous variables cannot have parents")
    gs = infer_gs(S) if inferred is None else inferred
    missing = gs.edges - graph.edges
    if missing:
        names = ", ".join(f"{a}->{b}" for a, b in gs.sorted_edges(missing))
        raise SemanticError(f"graph omits inferred edges {names}")
    contexts = list(sig.contexts())
    equations = []
    for x in sig.endogenous:
        ix = sig.endogenous.index(x)
        parents = graph.parents(x)
        endo_parents = [p for p in parents if sig.is_endogenous(p)]
        exo_parents = [p for p in parents if sig.is_exogenous(p)]
        table = {}
        for row in sig.assignments(parents):
            do = {p: row[p] for p in endo_parents}
            values = set()
            for u in contexts:
                if all(u[b] == row[b] for b in exo_parents):
                    values.update(s[ix] for s in S.state_set(u, do))
            table[tuple(row[p] for p in parents)] = frozenset(values)
        equations.append(MultiFunction(x, parents, table))
    return Nscm.build(sig, equations)


def default_model(S: PossibilitySet) -> Nscm:
    gs = infer_gs(S)
    return build_model(S, gs, inferred=gs)
