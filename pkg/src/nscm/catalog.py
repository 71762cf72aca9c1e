"""Ready-made models used throughout the tests, demos and CLI golden files."""

from __future__ import annotations

from .model import MultiFunction, Nscm, Signature

BINARY = ("0", "1")


def _bit(flag: bool) -> str:
    return "1" if flag else "0"


def late_preemption() -> Nscm:
    """Suzy and Billy throw; Suzy's rock arrives first and shatters the bottle."""
    sig = Signature((), ("ST", "BT", "SH", "BH", "BS"), {v: BINARY for v in ("ST", "BT", "SH", "BH", "BS")})
    rule = MultiFunction.from_rule
    return Nscm.build(sig, [
        MultiFunction.constant("ST", "1"),
        MultiFunction.constant("BT", "1"),
        rule(sig, "SH", ["ST"], lambda ST: ST),
        rule(sig, "BH", ["BT", "SH"], lambda BT, SH: _bit(BT == "1" and SH == "0")),
        rule(sig, "BS", ["SH", "BH"], lambda SH, BH: _bit(SH == "1" or BH == "1")),
    ])


LATE_PREEMPTION_WORLD = {"ST": "1", "BT": "1", "SH": "1", "BH": "0", "BS": "1"}


def treatment() -> Nscm:
    """Default treatment X=1; recovery Y is possible but not certain under either treatment."""
    sig = Signature((), ("X", "Y"), {"X": BINARY, "Y": BINARY})
    return Nscm.build(sig, [
        MultiFunction.constant("X", "1"),
        MultiFunction.from_rule(sig, "Y", ["X"], lambda X: {"0", "1"}),
    ])


TREATMENT_CONTEXT: dict[str, str] = {}


def suzy_accuracy() -> Nscm:
    """Late preemption where Suzy does not throw and her accuracy SA is endogenous."""
    names = ("ST", "BT", "SA", "SH", "BH", "BS")
    sig = Signature((), names, {v: BINARY for v in names})
    rule = MultiFunction.from_rule
    return Nscm.build(sig, [
        MultiFunction.constant("ST", "0"),
        MultiFunction.constant("BT", "1"),
        MultiFunction.constant("SA", "1"),
        rule(sig, "SH", ["ST", "SA"], lambda ST, SA: _bit(ST == "1" and SA == "1")),
        rule(sig, "BH", ["BT", "SH"], lambda BT, SH: _bit(BT == "1" and SH == "0")),
        rule(sig, "BS", ["SH", "BH"], lambda SH, BH: _bit(SH == "1" or BH == "1")),
    ])


SUZY_ACCURACY_WORLD = {"ST": "0", "BT": "1", "SA": "1", "SH": "0", "BH": "1", "BS": "1"}


def ancestor_counterexample() -> Nscm:
    """Y = |X| with X = A or -A depending on a free switch Z: Z is an ancestor of Y
    yet Y never depends on Z."""
    sig = Signature(
        ("A",), ("Z", "X", "Y"),
        {"A": ("1", "2"), "Z": BINARY, "X": ("-2", "-1", "1", "2"), "Y": ("1", "2")},
    )
    return Nscm.build(sig, [
        MultiFunction.constant("Z", {"0", "1"}),
        MultiFunction.from_rule(sig, "X", ["A", "Z"], lambda A, Z: A if Z == "1" else f"-{A}"),
        MultiFunction.from_rule(sig, "Y", ["X"], lambda X: X.lstrip("-")),
    ])


BUNDLED = {
    "lp": late_preemption,
    "ex2": treatment,
    "accuracy-variant": suzy_accuracy,
    "thm1-counterexample": ancestor_counterexample,
}
