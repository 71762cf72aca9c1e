import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracle import brute_solutions, tables_of
from randmodels import random_context, random_intervention, random_model

from nscm.catalog import BINARY, LATE_PREEMPTION_WORLD
from nscm.errors import ModelError, SemanticError
from nscm.model import (
    Dag,
    MultiFunction,
    Nscm,
    Signature,
    intervene,
    is_solution,
    refine,
    solutions,
    validate_model,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def codes(model):
    return [d.code for d in validate_model(model)]


# --- signature and graph -----------------------------------------------------

def test_signature_rejects_overlap_and_empty_ranges():
    with pytest.raises(SemanticError):
        Signature(("A",), ("A",), {"A": ("0",)})
    with pytest.raises(SemanticError):
        Signature((), ("A",), {"A": ()})
    with pytest.raises(SemanticError):
        Signature((), ("A",), {"A": ("0", "0")})
    with pytest.raises(SemanticError):
        Signature((), ("A",), {})


def test_signature_value_checks():
    sig = Signature(("U",), ("X",), {"U": BINARY, "X": BINARY})
    with pytest.raises(SemanticError):
        sig.value_index("X", "2")
    with pytest.raises(SemanticError):
        sig.check_intervention({"U": "0"})
    with pytest.raises(SemanticError):
        sig.check_assignment({"U": "0"}, sig.variables)


def test_interventions_enumerated_smallest_first():
    sig = Signature((), ("A", "B"), {"A": BINARY, "B": BINARY})
    listed = list(sig.interventions())
    assert listed[0] == {}
    assert listed[1:5] == [{"A": "0"}, {"A": "1"}, {"B": "0"}, {"B": "1"}]
    assert len(listed) == sig.intervention_count() == 9


def test_dag_cycle_detected():
    g = Dag(("A", "B"), frozenset({("A", "B"), ("B", "A")}))
    assert not g.is_acyclic()
    with pytest.raises(SemanticError):
        g.topological_order()


def test_lp_graph(lp):
    assert lp.graph.ancestors("BS") == {"ST", "BT", "SH", "BH"}
    assert lp.graph.parents("BH") == ("BT", "SH")


# --- validation --------------------------------------------------------------

def test_bundled_models_are_lint_clean(lp, accuracy, ex2, thm1):
    for m in (lp, accuracy, ex2, thm1):
        assert validate_model(m) == []


def test_constant_child_edge_warns():
    sig = Signature((), ("A", "B"), {"A": BINARY, "B": BINARY})
    m = Nscm.build(sig, [
        MultiFunction.constant("A", {"0", "1"}),
        MultiFunction.from_rule(sig, "B", ["A"], lambda A: "1"),
    ])
    diags = validate_model(m)
    assert [(d.level, d.code, d.edge) for d in diags] == [("warning", "irrelevant-edge", ("A", "B"))]


def test_singleton_range_parent_warns():
    # Such an edge can never be witnessed by direct dependence, even when the child is multi-valued.
    sig = Signature((), ("A", "B"), {"A": ("0",), "B": BINARY})
    m = Nscm.build(sig, [
        MultiFunction.constant("A", "0"),
        MultiFunction.from_rule(sig, "B", ["A"], lambda A: {"0", "1"}),
    ])
    assert codes(m) == ["irrelevant-edge"]


def test_multivalued_constant_child_no_warning(ex2):
    assert codes(ex2) == []


def test_validation_errors():
    sig = Signature(("U",), ("X", "Y"), {"U": BINARY, "X": BINARY, "Y": BINARY})
    missing = Nscm(sig, {"X": MultiFunction.constant("X", "0")})
    assert codes(missing) == ["missing-equation"]
    partial = Nscm(sig, {
        "X": MultiFunction("X", ("U",), {("0",): frozenset({"0"})}),
        "Y": MultiFunction.constant("Y", set()),
    })
    assert set(codes(partial)) == {"table-not-total", "empty-output"}
    stray = Nscm(sig, {
        "X": MultiFunction.constant("X", "7"),
        "Y": MultiFunction.constant("Y", "0"),
    })
    assert codes(stray) == ["value-out-of-range"]
    cyclic = Nscm(sig, {
        "X": MultiFunction.from_rule(sig, "X", ["Y"], lambda Y: Y),
        "Y": MultiFunction.from_rule(sig, "Y", ["X"], lambda X: X),
    })
    assert codes(cyclic) == ["cycle"]
    with pytest.raises(ModelError):
        cyclic.check()
    exo = Nscm(sig, {
        "U": MultiFunction.constant("U", "0"),
        "X": MultiFunction.constant("X", "0"),
        "Y": MultiFunction.constant("Y", "0"),
    })
    assert codes(exo) == ["exogenous-equation"]


def test_self_parent_error():
    sig = Signature((), ("X",), {"X": BINARY})
    m = Nscm(sig, {"X": MultiFunction.from_rule(sig, "X", ["X"], lambda X: X)})
    assert codes(m) == ["self-parent"]


# --- solutions, intervention, refinement -------------------------------------

def test_is_solution_examples(lp, ex2):
    assert is_solution(lp, LATE_PREEMPTION_WORLD)
    assert not is_solution(lp, {v: "0" for v in lp.signature.endogenous})
    assert is_solution(ex2, {"X": "1", "Y": "0"})
    assert is_solution(ex2, {"X": "1", "Y": "1"})
    with pytest.raises(SemanticError):
        is_solution(ex2, {"X": "1", "Y": "5"})


def test_solutions_examples(lp, ex2):
    assert solutions(lp, {}) == [{k: LATE_PREEMPTION_WORLD[k] for k in lp.signature.endogenous}]
    assert solutions(ex2, {}) == [{"X": "1", "Y": "0"}, {"X": "1", "Y": "1"}]


def test_intervene_examples(lp):
    assert solutions(intervene(lp, {"ST": "0"}), {}) == [
        {"ST": "0", "BT": "1", "SH": "0", "BH": "1", "BS": "1"}
    ]
    assert intervene(lp, {}) is lp
    everything = {"ST": "0", "BT": "0", "SH": "1", "BH": "1", "BS": "0"}
    assert solutions(intervene(lp, everything), {}) == [everything]
    assert intervene(lp, {"SH": "0"}).graph.parents("SH") == ()


def test_refine_examples(ex2, lp):
    r = refine(ex2, {"X": "1", "Y": "0"})
    assert r.equations["Y"].table[("1",)] == {"0"}
    assert r.equations["Y"].table[("0",)] == {"0", "1"}
    assert refine(lp, LATE_PREEMPTION_WORLD).equations == lp.equations
    with pytest.raises(SemanticError):
        refine(ex2, {"X": "0", "Y": "0"})


def test_refine_and_intervene_do_not_commute(ex2):
    refined_first = intervene(refine(ex2, {"X": "1", "Y": "0"}), {"X": "0"})
    assert solutions(refined_first, {}) == [{"X": "0", "Y": "0"}, {"X": "0", "Y": "1"}]
    intervened_first = refine(intervene(ex2, {"X": "0"}), {"X": "0", "Y": "0"})
    assert solutions(intervened_first, {}) == [{"X": "0", "Y": "0"}]


def test_from_rule_accepts_sets_and_scalars():
    sig = Signature((), ("A", "B"), {"A": BINARY, "B": BINARY})
    f = MultiFunction.from_rule(sig, "B", ["A"], lambda A: {"0", A})
    assert f.table == {("0",): {"0"}, ("1",): {"0", "1"}}
    assert not f.is_deterministic


# --- properties --------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(seeds)
def test_solutions_nonempty_and_match_brute_force(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_endo=5, max_exo=2, max_range=3)
    for u in m.signature.contexts():
        found = solutions(m, u)
        assert found
        brute = sorted(brute_solutions(m.signature, tables_of(m), u), key=m.signature.assignment_key)
        assert found == brute


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_deterministic_models_have_unique_solutions(seed):
    m = random_model(random.Random(seed), deterministic=True)
    assert all(len(solutions(m, u)) == 1 for u in m.signature.contexts())


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_effectiveness(seed):
    rng = random.Random(seed)
    m = random_model(rng)
    do = random_intervention(rng, m.signature)
    for u in m.signature.contexts():
        for s in solutions(intervene(m, do), u):
            assert all(s[v] == x for v, x in do.items())


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_refinement_keeps_world_and_shrinks(seed):
    rng = random.Random(seed)
    m = random_model(rng)
    u = random_context(rng, m.signature)
    base = solutions(m, u)
    world = {**u, **rng.choice(base)}
    r = refine(m, world)
    refined = solutions(r, u)
    assert {k: world[k] for k in m.signature.endogenous} in refined
    assert all(s in base for s in refined)
    assert r.graph == m.graph
