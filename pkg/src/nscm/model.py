"""Signatures, nondeterministic structural causal models and their core operations.

Values are opaque string tokens. Every variable declares an ordered, finite,
nonempty range; that order (together with the declaration order of the
variables) fixes every iteration order in the package, so results are
reproducible.

Assignments (contexts, states, worlds, interventions) are plain mappings from
variable name to value token. A *world* is a single mapping covering both the
exogenous and the endogenous variables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import ModelError, SemanticError

Assignment = Mapping[str, str]
Edge = tuple[str, str]


@dataclass(frozen=True)
class Signature:
    exogenous: tuple[str, ...]
    endogenous: tuple[str, ...]
    ranges: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        object.__setattr__(self, "exogenous", tuple(self.exogenous))
        object.__setattr__(self, "endogenous", tuple(self.endogenous))
        object.__setattr__(
            self, "ranges", {k: tuple(str(v) for v in vs) for k, vs in self.ranges.items()}
        )
        names = self.exogenous + self.endogenous
        if len(set(names)) != len(names):
            raise SemanticError("variable names must be distinct across exogenous and endogenous")
        if set(self.ranges) != set(names):
            missing = sorted(set(names) - set(self.ranges))
            extra = sorted(set(self.ranges) - set(names))
            raise SemanticError(f"ranges do not match variables (missing {missing}, extra {extra})")
        for name in names:
            r = self.ranges[name]
            if not r:
                raise SemanticError(f"range of {name} is empty")
            if len(set(r)) != len(r):
                raise SemanticError(f"range of {name} has repeated values")

    @cached_property
    def variables(self) -> tuple[str, ...]:
        return self.exogenous + self.endogenous

    @cached_property
    def _position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    @cached_property
    def _value_position(self) -> dict[str, dict[str, int]]:
        return {v: {x: i for i, x in enumerate(r)} for v, r in self.ranges.items()}

    def __contains__(self, name) -> bool:
        return name in self._position

    def position(self, name: str) -> int:
        try:
            return self._position[name]
        except KeyError:
            raise SemanticError(f"unknown variable {name!r}") from None

    def is_exogenous(self, name: str) -> bool:
        return self.position(name) < len(self.exogenous)

    def is_endogenous(self, name: str) -> bool:
        return self.position(name) >= len(self.exogenous)

    def value_index(self, name: str, value: str) -> int:
        try:
            return self._value_position[name][value]
        except KeyError:
            if name not in self._position:
                raise SemanticError(f"unknown variable {name!r}") from None
            raise SemanticError(f"value {value!r} is not in the range of {name}") from None

    def canonical(self, names: Iterable[str]) -> tuple[str, ...]:
        """Sort variable names into declaration order."""
        return tuple(sorted(names, key=self.position))

    def assignment_key(self, assignment: Assignment) -> tuple:
        """Sort key: variables in declaration order, values in range order."""
        return tuple(
            (self._position[v], self._value_position[v][assignment[v]])
            for v in self.canonical(assignment)
        )

    def check_assignment(self, assignment: Assignment, domain: Iterable[str], what="assignment"):
        """Raise SemanticError unless `assignment` is total over `domain` and in range."""
        domain = tuple(domain)
        for name, value in assignment.items():
            if name not in domain:
                if name in self:
                    raise SemanticError(f"{what} assigns {name}, which is outside its domain")
                raise SemanticError(f"unknown variable {name!r} in {what}")
            self.value_index(name, value)
        missing = [v for v in domain if v not in assignment]
        if missing:
            raise SemanticError(f"{what} does not assign {', '.join(missing)}")

    def check_intervention(self, intervention) -> dict[str, str]:
        """Normalise an intervention (mapping or sequence of pairs) to a canonical dict."""
        pairs = list(intervention.items()) if isinstance(intervention, Mapping) else list(intervention)
        seen = set()
        for name, value in pairs:
            if name in seen:
                raise SemanticError(f"variable {name} is intervened on twice")
            seen.add(name)
            if not self.is_endogenous(name):
                raise SemanticError(f"cannot intervene on exogenous variable {name}")
            self.value_index(name, value)
        return {v: dict(pairs)[v] for v in self.canonical(seen)}

    def assignments(self, names: Sequence[str]) -> Iterator[dict[str, str]]:
        """All total assignments over `names`, in lexicographic range order."""
        names = tuple(names)
        for values in itertools.product(*(self.ranges[n] for n in names)):
            yield dict(zip(names, values))

    def contexts(self) -> Iterator[dict[str, str]]:
        return self.assignments(self.exogenous)

    def states(self) -> Iterator[dict[str, str]]:
        return self.assignments(self.endogenous)

    def interventions(self, candidates: Sequence[str] | None = None) -> Iterator[dict[str, str]]:
        """Every intervention over subsets of `candidates` (default: all endogenous).

        Ordered by subset size, then lexicographically by declaration order,
        then by value tuple in range order. Starts with the empty intervention.
        """
        pool = self.canonical(self.endogenous if candidates is None else candidates)
        for k in range(len(pool) + 1):
            for subset in itertools.combinations(pool, k):
                yield from self.assignments(subset)

    def intervention_count(self, candidates: Sequence[str] | None = None) -> int:
        pool = self.endogenous if candidates is None else candidates
        n = 1
        for v in pool:
            n *= len(self.ranges[v]) + 1
        return n

    def context_count(self) -> int:
        n = 1
        for v in self.exogenous:
            n *= len(self.ranges[v])
        return n


@dataclass(frozen=True)
class Dag:
    nodes: tuple[str, ...]
    edges: frozenset[Edge] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        unknown = {n for e in self.edges for n in e} - set(self.nodes)
        if unknown:
            raise SemanticError(f"edges mention unknown nodes {sorted(unknown)}")

    @cached_property
    def _order(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    def edge_key(self, edge: Edge):
        return (self._order[edge[0]], self._order[edge[1]])

    def sorted_edges(self, edges: Iterable[Edge] | None = None) -> list[Edge]:
        return sorted(self.edges if edges is None else edges, key=self.edge_key)

    def parents(self, node: str) -> tuple[str, ...]:
        return tuple(sorted((p for p, c in self.edges if c == node), key=self._order.__getitem__))

    def children(self, node: str) -> tuple[str, ...]:
        return tuple(sorted((c for p, c in self.edges if p == node), key=self._order.__getitem__))

    def topological_order(self) -> list[str]:
        """Kahn's algorithm, ties broken by node order. Raises on a cycle."""
        indegree = {n: 0 for n in self.nodes}
        for _, c in self.edges:
            indegree[c] += 1
        ready = [n for n in self.nodes if indegree[n] == 0]
        order = []
        while ready:
            ready.sort(key=self._order.__getitem__)
            n = ready.pop(0)
            order.append(n)
            for c in self.children(n):
                indegree[c] -= 1
                if indegree[c] == 0:
                    ready.append(c)
        if len(order) != len(self.nodes):
            cyclic = [n for n in self.nodes if n not in order]
            raise SemanticError(f"graph has a cycle through {', '.join(cyclic)}")
        return order

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except SemanticError:
            return False
        return True

    @cached_property
    def _descendants(self) -> dict[str, frozenset[str]]:
        out = {}
        for n in reversed(self.topological_order()):
            reach = set()
            for c in self.children(n):
                reach.add(c)
                reach |= out[c]
            out[n] = frozenset(reach)
        return out

    def descendants(self, node: str) -> frozenset[str]:
        return self._descendants[node]

    def ancestors(self, node: str) -> frozenset[str]:
        return frozenset(n for n in self.nodes if node in self._descendants[n])

    def ancestor_pairs(self) -> frozenset[Edge]:
        """Anc(G): every (ancestor, descendant) pair, irreflexive."""
        return frozenset((a, d) for a, ds in self._descendants.items() for d in ds)

    def without(self, edges: Iterable[Edge]) -> "Dag":
        return Dag(self.nodes, self.edges - frozenset(edges))


def _as_value_set(value) -> frozenset[str]:
    if isinstance(value, (str, int)):
        return frozenset({str(value)})
    return frozenset(str(v) for v in value)


@dataclass(frozen=True)
class MultiFunction:
    """A set-valued structural equation given as a total table.

    `table` maps each parent-value tuple (ordered like `parents`) to a
    nonempty set of child values.
    """

    child: str
    parents: tuple[str, ...]
    table: Mapping[tuple[str, ...], frozenset[str]]

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(
            self, "table", {tuple(k): frozenset(v) for k, v in self.table.items()}
        )

    def __call__(self, assignment: Assignment) -> frozenset[str]:
        return self.table[tuple(assignment[p] for p in self.parents)]

    @property
    def is_deterministic(self) -> bool:
        return all(len(out) == 1 for out in self.table.values())

    @classmethod
    def constant(cls, child: str, values) -> "MultiFunction":
        return cls(child, (), {(): _as_value_set(values)})

    @classmethod
    def from_rule(
        cls, signature: Signature, child: str, parents: Sequence[str], rule: Callable
    ) -> "MultiFunction":
        """Tabulate `rule(**parent_values)`; it may return one value or an iterable of values."""
        parents = tuple(parents)
        table = {}
        for values in itertools.product(*(signature.ranges[p] for p in parents)):
            table[values] = _as_value_set(rule(**dict(zip(parents, values))))
        return cls(child, parents, table)

    def reordered(self, parents: Sequence[str]) -> "MultiFunction":
        """The same function with its parents listed in a different order."""
        parents = tuple(parents)
        idx = [self.parents.index(p) for p in parents]
        table = {tuple(k[i] for i in idx): v for k, v in self.table.items()}
        return MultiFunction(self.child, parents, table)


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    code: str
    message: str
    edge: Edge | None = None

    def to_json(self) -> dict:
        out = {"level": self.level, "code": self.code, "message": self.message}
        if self.edge is not None:
            out["edge"] = list(self.edge)
        return out


class _Engine:
    """Precompiled forward enumerator for one model.

    Enumerates the solutions of the model at a context, optionally after an
    intervention (`do`) and optionally with the actualized refinement at a
    world (`pin`) applied first: an equation evaluated at the pinned world's
    own parent values yields only the pinned world's value.
    """

    def __init__(self, model: "Nscm"):
        sig = model.signature
        order = model.graph.topological_order()
        self.endogenous = sig.endogenous
        self.steps = []
        for var in order:
            if sig.is_exogenous(var):
                continue
            f = model.equations[var]
            rank = sig._value_position[var]
            table = {k: tuple(sorted(v, key=rank.__getitem__)) for k, v in f.table.items()}
            self.steps.append((var, f.parents, table))
        positions = sig._value_position
        self.state_key = lambda s: tuple(
            positions[v][x] for v, x in zip(self.endogenous, s)
        )

    def states(self, context: Assignment, do: Assignment | None = None,
               pin: Assignment | None = None) -> list[tuple[str, ...]]:
        world = dict(context)
        steps = self.steps
        n = len(steps)
        endo = self.endogenous
        out = []
        pinkeys = None
        if pin is not None:
            pinkeys = [tuple(pin[p] for p in parents) for _, parents, _ in steps]

        def rec(i):
            if i == n:
                out.append(tuple(world[v] for v in endo))
                return
            var, parents, table = steps[i]
            if do and var in do:
                values = (do[var],)
            else:
                key = tuple(world[p] for p in parents)
                if pinkeys is not None and key == pinkeys[i]:
                    values = (pin[var],)
                else:
                    values = table[key]
            for value in values:
                world[var] = value
                rec(i + 1)

        rec(0)
        out.sort(key=self.state_key)
        return out


@dataclass(frozen=True)
class Nscm:
    """A nondeterministic structural causal model over a finite signature.

    The causal graph is derived from the equations' parent lists. The plain
    constructor does not validate; use `Nscm.build` (or `validate_model`)
    for user-supplied input.
    """

    signature: Signature
    equations: Mapping[str, MultiFunction] = field(default_factory=dict)

    @classmethod
    def build(cls, signature: Signature, equations: Iterable[MultiFunction]) -> "Nscm":
        """Construct, put parents into declaration order, and validate."""
        eqs = {}
        for f in equations:
            if f.child in eqs:
                raise SemanticError(f"two equations for {f.child}")
            if all(p in signature for p in f.parents):
                f = f.reordered(signature.canonical(f.parents))
            eqs[f.child] = f
        model = cls(signature, eqs)
        model.check()
        return model

    def check(self) -> "Nscm":
        errors = [d for d in validate_model(self) if d.level == "error"]
        if errors:
            raise ModelError(errors)
        return self

    @cached_property
    def graph(self) -> Dag:
        nodes = self.signature.variables
        edges = frozenset(
            (p, x) for x, f in self.equations.items() for p in f.parents if p in self.signature
        )
        return Dag(nodes, edges)

    @property
    def is_deterministic(self) -> bool:
        return all(f.is_deterministic for f in self.equations.values())

    @cached_property
    def engine(self) -> _Engine:
        return _Engine(self)

    def state_dict(self, state: Sequence[str]) -> dict[str, str]:
        return dict(zip(self.signature.endogenous, state))

    def state_tuple(self, world: Assignment) -> tuple[str, ...]:
        return tuple(world[v] for v in self.signature.endogenous)

    def context_of(self, world: Assignment) -> dict[str, str]:
        return {u: world[u] for u in self.signature.exogenous}


def validate_model(model: Nscm) -> list[Diagnostic]:
    """Structural errors plus irrelevant-edge lint warnings, in a stable order."""
    sig = model.signature
    out: list[Diagnostic] = []

    def error(code, message, edge=None):
        out.append(Diagnostic("error", code, message, edge))

    for x in model.equations:
        if x not in sig:
            error("unknown-variable", f"equation for unknown variable {x}")
        elif sig.is_exogenous(x):
            error("exogenous-equation", f"exogenous variable {x} must not have an equation")
    for x in sig.endogenous:
        if x not in model.equations:
            error("missing-equation", f"endogenous variable {x} has no equation")
    if out:
        return out

    structurally_ok = True
    for x in sig.endogenous:
        f = model.equations[x]
        if f.child != x:
            error("child-mismatch", f"equation stored under {x} is for {f.child}")
        bad = [p for p in f.parents if p not in sig]
        if bad:
            error("unknown-parent", f"{x} has unknown parents {bad}")
            structurally_ok = False
            continue
        if len(set(f.parents)) != len(f.parents):
            error("duplicate-parent", f"{x} lists a parent twice")
            structurally_ok = False
            continue
        if x in f.parents:
            error("self-parent", f"{x} lists itself as a parent", (x, x))
            structurally_ok = False
            continue
        expected = set(itertools.product(*(sig.ranges[p] for p in f.parents)))
        present = set(f.table)
        for row in sorted(expected - present):
            error("table-not-total", f"{x} has no table row for {dict(zip(f.parents, row))}")
        for row in sorted(present - expected, key=repr):
            error("bad-row", f"{x} has a table row {row!r} outside the parent ranges")
        for row in sorted(expected & present):
            outs = f.table[row]
            if not outs:
                error("empty-output", f"{x} has an empty output at {dict(zip(f.parents, row))}")
            stray = sorted(v for v in outs if v not in sig.ranges[x])
            if stray:
                error("value-out-of-range", f"{x} outputs {stray} outside its range")
    if not structurally_ok:
        return out
    if not model.graph.is_acyclic():
        try:
            model.graph.topological_order()
        except SemanticError as exc:
            error("cycle", str(exc))
        return out
    if out:
        return out

    for x in sig.endogenous:
        f = model.equations[x]
        for p in f.parents:
            if _edge_is_irrelevant(sig, f, p):
                out.append(Diagnostic(
                    "warning", "irrelevant-edge",
                    f"edge {p}->{x} is irrelevant: {x}'s equation never varies with {p}",
                    (p, x),
                ))
    return out


def _edge_is_irrelevant(sig: Signature, f: MultiFunction, parent: str) -> bool:
    if len(sig.ranges[parent]) == 1:
        return True
    if not f.is_deterministic:
        return False
    i = f.parents.index(parent)
    groups: dict[tuple, frozenset] = {}
    for row, outs in f.table.items():
        rest = row[:i] + row[i + 1:]
        if groups.setdefault(rest, outs) != outs:
            return False
    return True


def _check_world(model: Nscm, world: Assignment):
    model.signature.check_assignment(world, model.signature.variables, "world")


def is_solution(model: Nscm, world: Assignment) -> bool:
    _check_world(model, world)
    return all(
        world[x] in model.equations[x](world) for x in model.signature.endogenous
    )


def solutions(model: Nscm, context: Assignment) -> list[dict[str, str]]:
    """All states v such that (context, v) solves the model, in canonical order."""
    model.signature.check_assignment(context, model.signature.exogenous, "context")
    return [model.state_dict(s) for s in model.engine.states(context)]


def intervene(model: Nscm, intervention) -> Nscm:
    """The model M_{Y<-y}: intervened variables get parentless constant equations."""
    do = model.signature.check_intervention(intervention)
    if not do:
        return model
    eqs = dict(model.equations)
    for var, value in do.items():
        eqs[var] = MultiFunction.constant(var, value)
    return Nscm(model.signature, eqs)


def refine(model: Nscm, world: Assignment) -> Nscm:
    """The actualized refinement: pin each equation's actual row to the actual value."""
    if not is_solution(model, world):
        raise SemanticError("refinement is only defined at a solution of the model")
    eqs = {}
    for x in model.signature.endogenous:
        f = model.equations[x]
        key = tuple(world[p] for p in f.parents)
        table = dict(f.table)
        table[key] = frozenset({world[x]})
        eqs[x] = MultiFunction(x, f.parents, table)
    return Nscm(model.signature, eqs)
