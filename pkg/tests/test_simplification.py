import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracle import is_graph_simplification as nx_is_graph_simplification
from oracle import to_nx
from randmodels import random_context, random_model

from nscm.catalog import LATE_PREEMPTION_WORLD
from nscm.errors import EnumerationLimitError, SemanticError
from nscm.model import Dag, MultiFunction, Nscm, is_solution, solutions
from nscm.simplification import (
    GraphSimplification,
    enumerate_graph_simplifications,
    extension_counterexample,
    generalized_apply,
    is_graph_simplification,
    is_interventional_extension,
    is_setting_simplification,
    is_structural_simplification,
    simplification_of,
    structural_simplify,
)

seeds = st.integers(0, 2**32 - 1)


def removals(graph):
    return [gs.removed_edges for gs in enumerate_graph_simplifications(graph)]


def test_graph_simplification_examples(lp):
    g = lp.graph
    assert is_graph_simplification(g, g.without([("BH", "BS")]))
    assert not is_graph_simplification(g, g.without([("SH", "BS")]))
    assert is_graph_simplification(g, g)
    with pytest.raises(SemanticError):
        is_graph_simplification(g, Dag(("A",), frozenset()))


def test_enumeration_examples(lp):
    found = removals(lp.graph)
    assert found[0] == frozenset()
    for expected in ({("BT", "BH")}, {("BH", "BS")}, {("BT", "BH"), ("BH", "BS")}):
        assert frozenset(expected) in found
    assert not any(r == {("SH", "BS")} for r in found)
    assert frozenset(lp.graph.edges) in found
    sizes = [len(r) for r in found]
    assert sizes == sorted(sizes)
    assert removals(Dag(("A", "B"), frozenset({("A", "B")}))) == [frozenset(), frozenset({("A", "B")})]
    assert removals(Dag(("A", "B"), frozenset())) == [frozenset()]


def test_simplification_of_validates(lp):
    assert simplification_of(lp.graph, [("BH", "BS")]).removed_edges == {("BH", "BS")}
    with pytest.raises(SemanticError):
        simplification_of(lp.graph, [("SH", "BS")])
    with pytest.raises(SemanticError):
        simplification_of(lp.graph, [("BS", "ST")])


def test_generalized_apply_examples(lp):
    f_bs, f_sh = lp.equations["BS"], lp.equations["SH"]
    assert generalized_apply(f_bs, {"SH": "0"}) == {"0", "1"}
    assert generalized_apply(f_bs, {"SH": "1"}) == {"1"}
    assert generalized_apply(f_bs, {"SH": "1", "BH": "0"}) == f_bs({"SH": "1", "BH": "0"})
    assert generalized_apply(f_sh, {}) == {"0", "1"}
    with pytest.raises(SemanticError):
        generalized_apply(f_sh, {"BT": "1"})


def test_structural_simplify_examples(lp):
    m = structural_simplify(lp, simplification_of(lp.graph, [("BH", "BS")]))
    assert m.equations["BS"].table == {("0",): {"0", "1"}, ("1",): {"1"}}
    assert structural_simplify(lp, simplification_of(lp.graph, [])) is lp
    m = structural_simplify(lp, simplification_of(lp.graph, [("BT", "BH")]))
    assert m.equations["BH"].table == {("0",): {"0", "1"}, ("1",): {"0"}}
    assert is_structural_simplification(lp, m)
    assert is_structural_simplification(lp, lp)


def test_structural_simplification_rejects_wrong_tables(ex2):
    narrowed = Nscm.build(ex2.signature, [ex2.equations["X"], MultiFunction.constant("Y", "0")])
    assert not is_structural_simplification(ex2, narrowed)


def test_setting_simplification_examples(lp):
    bh_bs = structural_simplify(lp, simplification_of(lp.graph, [("BH", "BS")]))
    assert is_setting_simplification(lp, bh_bs, LATE_PREEMPTION_WORLD)
    st_sh = structural_simplify(lp, simplification_of(lp.graph, [("ST", "SH")]))
    assert not is_setting_simplification(lp, st_sh, LATE_PREEMPTION_WORLD)
    assert is_setting_simplification(lp, lp, LATE_PREEMPTION_WORLD)


def test_extension_examples(lp):
    bh_bs = structural_simplify(lp, simplification_of(lp.graph, [("BH", "BS")]))
    assert is_interventional_extension(lp, bh_bs)
    assert not is_interventional_extension(bh_bs, lp)
    counter = extension_counterexample(bh_bs, lp)
    assert counter["do"] == {"ST": "0"} and counter["state"]["BS"] == "0"
    assert is_interventional_extension(lp, lp)


def test_extension_limit(lp):
    with pytest.raises(EnumerationLimitError):
        is_interventional_extension(lp, lp, limit=10)


def test_gs_json(lp):
    gs = simplification_of(lp.graph, [("BH", "BS"), ("BT", "BH")])
    assert gs.to_json() == {"removed_edges": [["BT", "BH"], ["BH", "BS"]]}


# --- properties --------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(seeds)
def test_graph_simplification_matches_networkx(seed):
    rng = random.Random(seed)
    m = random_model(rng, edge_prob=0.6)
    g = m.graph
    edges = sorted(g.edges)
    removed = [e for e in edges if rng.random() < 0.5]
    ours = is_graph_simplification(g, g.without(removed))
    theirs = nx_is_graph_simplification(to_nx(g.nodes, g.edges), to_nx(g.nodes, set(edges) - set(removed)))
    assert ours == theirs


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_generalized_apply_is_monotone(seed):
    rng = random.Random(seed)
    m = random_model(rng, edge_prob=0.7)
    x = rng.choice(m.signature.endogenous)
    f = m.equations[x]
    full = {p: rng.choice(m.signature.ranges[p]) for p in f.parents}
    smaller = {p: v for p, v in full.items() if rng.random() < 0.5}
    smallest = {p: v for p, v in smaller.items() if rng.random() < 0.5}
    assert generalized_apply(f, full) <= generalized_apply(f, smaller) <= generalized_apply(f, smallest)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_disconnected_simplification_collects_all_values(seed):
    m = random_model(random.Random(seed), edge_prob=0.7)
    gs = GraphSimplification(m.graph, m.graph.edges)
    flat = structural_simplify(m, gs)
    for x, f in m.equations.items():
        assert flat.equations[x].table[()] == frozenset().union(*f.table.values())


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_structural_simplify_is_a_structural_simplification(seed):
    rng = random.Random(seed)
    m = random_model(rng, edge_prob=0.6)
    gs = rng.choice(enumerate_graph_simplifications(m.graph))
    simplified = structural_simplify(m, gs)
    assert simplified.graph == gs.result_graph
    assert is_structural_simplification(m, simplified)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_composition_of_simplifications(seed):
    rng = random.Random(seed)
    m = random_model(rng, edge_prob=0.7)
    options = enumerate_graph_simplifications(m.graph)
    gs = rng.choice(options)
    first = [e for e in gs.sorted_removed() if rng.random() < 0.5]
    if not is_graph_simplification(m.graph, m.graph.without(first)):
        return
    step1 = structural_simplify(m, simplification_of(m.graph, first))
    rest = gs.removed_edges - set(first)
    if not is_graph_simplification(step1.graph, step1.graph.without(rest)):
        return
    step2 = structural_simplify(step1, simplification_of(step1.graph, rest))
    assert step2 == structural_simplify(m, gs)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_actual_world_survives_simplification(seed):
    # extension guarantees the actual world is a solution of every simplification
    rng = random.Random(seed)
    m = random_model(rng, edge_prob=0.6)
    u = random_context(rng, m.signature)
    world = {**u, **rng.choice(solutions(m, u))}
    gs = rng.choice(enumerate_graph_simplifications(m.graph))
    assert is_solution(structural_simplify(m, gs), world)
