"""The causal language: ASTs, a recursive-descent parser, a printer, and the
three satisfaction relations (full settings, partial settings, whole models).

Concrete syntax::

    causal   := cterm { ("|"|"&") cterm }
    cterm    := ["!"] ( "(" causal ")" | modal | basic )
    modal    := ("[" ints "]" | "<" ints ">") bexpr
    ints     := [ ident "<-" value { "," ident "<-" value } ]
    bexpr    := bterm { ("|"|"&") bterm }
    bterm    := ["!"] ( "(" bexpr ")" | ident "=" value )

``&`` binds tighter than ``|``. A modality's body extends as far to the right
as it can while it remains a basic formula. Any modality-free subformula of a
causal formula is read as a single empty-intervention box, so ``X=1 | Y=1``
means ``[] (X=1 | Y=1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Union

from .errors import ParseError, SemanticError
from .model import Assignment, Nscm, Signature, is_solution


@dataclass(frozen=True)
class Atom:
    var: str
    value: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Modal:
    """``[Y<-y] body`` when `box`, else ``<Y<-y> body`` (read as ``![Y<-y]!body``)."""

    intervention: tuple[tuple[str, str], ...]
    body: "Formula"
    box: bool = True

    @property
    def do(self) -> dict[str, str]:
        return dict(self.intervention)


Formula = Union[Atom, Not, And, Or, Modal]


def box(intervention, body) -> Modal:
    pairs = tuple(intervention.items()) if isinstance(intervention, Mapping) else tuple(intervention)
    return Modal(pairs, body, True)


def diamond(intervention, body) -> Modal:
    pairs = tuple(intervention.items()) if isinstance(intervention, Mapping) else tuple(intervention)
    return Modal(pairs, body, False)


def conj(*args) -> Formula:
    return args[0] if len(args) == 1 else And(tuple(args))


def disj(*args) -> Formula:
    return args[0] if len(args) == 1 else Or(tuple(args))


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow><-)|(?P<punct>[\[\]<>()!&|=,])|(?P<word>[A-Za-z0-9_.+\-]+))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip():
                raise ParseError(f"unexpected character {rest.strip()[0]!r}", pos + len(rest) - len(rest.lstrip()))
            break
        start = m.start(m.lastgroup)
        if m.lastgroup == "arrow":
            tokens.append(("<-", "<-", start))
        elif m.lastgroup == "punct":
            tokens.append((m.group("punct"), m.group("punct"), start))
        else:
            tokens.append(("word", m.group("word"), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Signature | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = signature

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, kind):
        tok = self.tok
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {found}", tok[2])
        self.i += 1
        return tok

    def at(self, kind) -> bool:
        return self.tok[0] == kind

    # causal level
    def causal(self) -> Formula:
        args = [self.causal_conj()]
        while self.at("|"):
            self.i += 1
            args.append(self.causal_conj())
        return disj(*args)

    def causal_conj(self) -> Formula:
        args = [self.cterm()]
        while self.at("&"):
            self.i += 1
            args.append(self.cterm())
        return conj(*args)

    def cterm(self) -> Formula:
        if self.at("!"):
            self.i += 1
            return Not(self.cterm_body())
        return self.cterm_body()

    def cterm_body(self) -> Formula:
        if self.at("("):
            self.i += 1
            inner = self.causal()
            self.take(")")
            return inner
        if self.at("[") or self.at("<"):
            return self.modal()
        return self.atom()

    def modal(self) -> Modal:
        is_box = self.at("[")
        self.i += 1
        close = "]" if is_box else ">"
        pairs = []
        seen = set()
        if not self.at(close):
            while True:
                name_tok = self.take("word")
                self.take("<-")
                value_tok = self.take("word")
                name, value = self.resolve(name_tok, value_tok)
                if name in seen:
                    raise ParseError(f"variable {name} intervened on twice", name_tok[2])
                seen.add(name)
                pairs.append((name, value))
                if not self.at(","):
                    break
                self.i += 1
        self.take(close)
        return Modal(tuple(pairs), self.bexpr(), is_box)

    # basic level
    def bexpr(self) -> Formula:
        args = [self.bconj()]
        while self.at("|"):
            saved = self.i
            self.i += 1
            try:
                args.append(self.bconj())
            except ParseError:
                self.i = saved
                break
        return disj(*args)

    def bconj(self) -> Formula:
        args = [self.bterm()]
        while self.at("&"):
            saved = self.i
            self.i += 1
            try:
                args.append(self.bterm())
            except ParseError:
                self.i = saved
                break
        return conj(*args)

    def bterm(self) -> Formula:
        if self.at("!"):
            self.i += 1
            return Not(self.bterm_body())
        return self.bterm_body()

    def bterm_body(self) -> Formula:
        if self.at("("):
            self.i += 1
            inner = self.bexpr()
            self.take(")")
            return inner
        if self.at("[") or self.at("<"):
            raise ParseError("modalities cannot be nested inside a modality", self.tok[2])
        return self.atom()

    def atom(self) -> Atom:
        name_tok = self.take("word")
        self.take("=")
        value_tok = self.take("word")
        return Atom(*self.resolve(name_tok, value_tok))

    def resolve(self, name_tok, value_tok) -> tuple[str, str]:
        name, value = name_tok[1], value_tok[1]
        if self.sig is None:
            return name, value
        if name not in self.sig:
            raise ParseError(f"unknown variable {name!r}", name_tok[2])
        if not self.sig.is_endogenous(name):
            raise ParseError(f"{name} is exogenous; formulas mention endogenous variables only", name_tok[2])
        if value not in self.sig.ranges[name]:
            raise ParseError(f"{value!r} is not in the range of {name}", value_tok[2])
        return name, value


def _has_modal(f: Formula) -> bool:
    if isinstance(f, Modal):
        return True
    if isinstance(f, Atom):
        return False
    if isinstance(f, Not):
        return _has_modal(f.arg)
    return any(_has_modal(a) for a in f.args)


def _lift(f: Formula) -> Formula:
    """Wrap every maximal modality-free subformula into an empty box."""
    if not _has_modal(f):
        return Modal((), f, True)
    if isinstance(f, Modal):
        return f
    if isinstance(f, Not):
        return Not(_lift(f.arg))
    return type(f)(tuple(_lift(a) for a in f.args))


def parse_formula(text: str, signature: Signature | None = None) -> Formula:
    """Parse a causal formula; with a signature, names and values are checked."""
    p = _Parser(text, signature)
    f = p.causal()
    if not p.at("eof"):
        raise ParseError(f"unexpected {p.tok[1]!r}", p.tok[2])
    return _lift(f)


def parse_basic(text: str, signature: Signature | None = None) -> Formula:
    """Parse a modality-free formula (no lifting)."""
    p = _Parser(text, signature)
    f = p.bexpr()
    if not p.at("eof"):
        raise ParseError(f"unexpected {p.tok[1]!r}", p.tok[2])
    return f


# --- printing and JSON -------------------------------------------------------

def format_formula(f: Formula) -> str:
    """Text that parses back to exactly `f` (for lifted causal or basic formulas)."""
    if isinstance(f, Atom):
        return f"{f.var}={f.value}"
    if isinstance(f, Modal):
        inner = ", ".join(f"{v}<-{x}" for v, x in f.intervention)
        opening, closing = ("[", "]") if f.box else ("<", ">")
        body = format_formula(f.body)
        if not isinstance(f.body, Atom):
            body = f"({body})"
        return f"{opening}{inner}{closing} {body}"
    if isinstance(f, Not):
        inner = format_formula(f.arg)
        if isinstance(f.arg, (Atom, Modal)):
            return f"!{inner}"
        return f"!({inner})"
    op = " & " if isinstance(f, And) else " | "
    parts = []
    for a in f.args:
        text = format_formula(a)
        parts.append(f"({text})" if isinstance(a, (And, Or)) else text)
    return op.join(parts)


def formula_to_json(f: Formula) -> dict:
    if isinstance(f, Atom):
        return {"op": "atom", "var": f.var, "value": f.value}
    if isinstance(f, Not):
        return {"op": "not", "arg": formula_to_json(f.arg)}
    if isinstance(f, Modal):
        return {
            "op": "box" if f.box else "diamond",
            "do": [[v, x] for v, x in f.intervention],
            "body": formula_to_json(f.body),
        }
    return {
        "op": "and" if isinstance(f, And) else "or",
        "args": [formula_to_json(a) for a in f.args],
    }


def formula_from_json(data: Mapping) -> Formula:
    op = data.get("op")
    if op == "atom":
        return Atom(data["var"], data["value"])
    if op == "not":
        return Not(formula_from_json(data["arg"]))
    if op in ("and", "or"):
        args = tuple(formula_from_json(a) for a in data["args"])
        return And(args) if op == "and" else Or(args)
    if op in ("box", "diamond"):
        return Modal(
            tuple((v, x) for v, x in data["do"]), formula_from_json(data["body"]), op == "box"
        )
    raise ParseError(f"unknown formula node {op!r}")


# --- semantics ---------------------------------------------------------------

def eval_basic(state: Assignment, phi: Formula) -> bool:
    if isinstance(phi, Atom):
        return state[phi.var] == phi.value
    if isinstance(phi, Not):
        return not eval_basic(state, phi.arg)
    if isinstance(phi, And):
        return all(eval_basic(state, a) for a in phi.args)
    if isinstance(phi, Or):
        return any(eval_basic(state, a) for a in phi.args)
    raise SemanticError("a modality cannot appear inside a basic formula")


def check_formula(signature: Signature, psi: Formula, *, causal: bool = True) -> None:
    """Raise SemanticError if `psi` is ill-formed for `signature`."""
    if isinstance(psi, Modal):
        if not causal:
            raise SemanticError("modalities cannot be nested")
        signature.check_intervention(psi.intervention)
        check_formula(signature, psi.body, causal=False)
    elif isinstance(psi, Atom):
        if causal:
            raise SemanticError("atoms must appear inside a modality in a causal formula")
        if not signature.is_endogenous(psi.var):
            raise SemanticError(f"{psi.var} is exogenous")
        signature.value_index(psi.var, psi.value)
    elif isinstance(psi, Not):
        check_formula(signature, psi.arg, causal=causal)
    else:
        for a in psi.args:
            check_formula(signature, a, causal=causal)


def _combine(psi: Formula, modal: Callable[[Modal], bool]) -> bool:
    if isinstance(psi, Modal):
        return modal(psi)
    if isinstance(psi, Not):
        return not _combine(psi.arg, modal)
    if isinstance(psi, And):
        return all(_combine(a, modal) for a in psi.args)
    if isinstance(psi, Or):
        return any(_combine(a, modal) for a in psi.args)
    raise SemanticError("bare atom in a causal formula; wrap it with parse_formula or box((), ...)")


def _prepare(signature: Signature, psi: Formula) -> Formula:
    if not _has_modal(psi):
        psi = Modal((), psi, True)
    check_formula(signature, psi)
    return psi


def counterfactual_states(model: Nscm, world: Assignment, intervention) -> list[dict[str, str]]:
    """Solutions of the refined-then-intervened model at the world's context."""
    do = model.signature.check_intervention(intervention)
    ctx = model.context_of(world)
    return [model.state_dict(s) for s in model.engine.states(ctx, do=do, pin=world)]


def _modal_at_world(model: Nscm, world: Assignment, m: Modal) -> bool:
    ctx = model.context_of(world)
    found = (
        eval_basic(model.state_dict(s), m.body)
        for s in model.engine.states(ctx, do=m.do, pin=world)
    )
    return all(found) if m.box else any(found)


def eval_full(model: Nscm, world: Assignment, psi: Formula) -> bool:
    """Truth in the full causal setting (model, world); `world` must be a solution."""
    psi = _prepare(model.signature, psi)
    if not is_solution(model, world):
        raise SemanticError("the world is not a solution of the model")
    return _combine(psi, lambda m: _modal_at_world(model, world, m))


def _modal_over(model: Nscm, worlds: list[dict], m: Modal) -> bool:
    # box: every solution satisfies it; diamond is the dual, so some solution does
    results = (_modal_at_world(model, w, m) for w in worlds)
    return all(results) if m.box else any(results)


def _worlds(model: Nscm, context: Assignment) -> list[dict]:
    return [{**context, **model.state_dict(s)} for s in model.engine.states(context)]


def eval_partial(model: Nscm, context: Assignment, psi: Formula) -> bool:
    """Truth in the partial setting (model, context).

    Each basic causal formula is quantified over the solutions at `context`;
    Boolean connectives are applied outside that quantifier.
    """
    psi = _prepare(model.signature, psi)
    model.signature.check_assignment(context, model.signature.exogenous, "context")
    worlds = _worlds(model, context)
    return _combine(psi, lambda m: _modal_over(model, worlds, m))


def eval_model(model: Nscm, psi: Formula) -> bool:
    """Truth in the model: basic causal formulas quantified over every solution."""
    psi = _prepare(model.signature, psi)
    worlds = [w for u in model.signature.contexts() for w in _worlds(model, u)]
    return _combine(psi, lambda m: _modal_over(model, worlds, m))
