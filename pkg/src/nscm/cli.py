"""Query nondeterministic causal models from the command line.

Exit codes: 0 success or true verdict, 1 false verdict, 2 usage or parse
error, 3 semantic error (e.g. the world is not a solution).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import io
from .actual_cause import CauseQuery, explain, list_setting_simplifications, render_explanation
from .catalog import BUNDLED
from .dependence import depends_on, directly_depends
from .discovery import PossibilitySet, build_model, generate_possibilities, infer_gs
from .errors import EnumerationLimitError, NscmError, ParseError, SemanticError
from .formula import eval_full, eval_model, eval_partial, format_formula, formula_to_json, parse_formula
from .model import Dag, Nscm, intervene, solutions, validate_model
from .simplification import (
    enumerate_graph_simplifications,
    extension_counterexample,
    is_setting_simplification,
    simplification_of,
    structural_simplify,
)

MAX_VARIABLES = 12
MAX_INTERVENTIONS = 10**7


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _resolve(path: str) -> str:
    """Bare names of bundled models (e.g. `lp.json`) resolve to the packaged copies."""
    p = Path(path)
    if not p.exists() and p.parent == Path(".") and p.stem in BUNDLED:
        return str(resources.files("nscm") / "data" / f"{p.stem}.json")
    return path


def _load(path: str):
    return io.load_model(_resolve(path))


def _fmt(assignment) -> str:
    return ",".join(f"{k}={v}" for k, v in assignment.items()) or "(empty)"


def _edges(edges) -> str:
    return ", ".join(f"{a}->{b}" for a, b in edges) or "(none)"


def _guard(model: Nscm, force: bool):
    if force:
        return
    sig = model.signature
    if len(sig.variables) > MAX_VARIABLES:
        raise EnumerationLimitError(
            f"{len(sig.variables)} variables exceed the limit of {MAX_VARIABLES}; use --force"
        )
    total = sig.context_count() * sig.intervention_count()
    if total > MAX_INTERVENTIONS:
        raise EnumerationLimitError(
            f"{total} (context, intervention) pairs exceed the limit of {MAX_INTERVENTIONS}; use --force"
        )


def _world(model: Nscm, context_text, state_text) -> dict:
    sig = model.signature
    if context_text is None and sig.exogenous:
        raise _UsageError("--context is required for models with exogenous variables")
    context = io.parse_assignment(context_text)
    state = io.parse_assignment(state_text)
    sig.check_assignment(context, sig.exogenous, "context")
    sig.check_assignment(state, sig.endogenous, "state")
    return {**context, **state}


def _single(text: str, flag: str) -> tuple[str, str]:
    pairs = io.parse_assignment(text)
    if len(pairs) != 1:
        raise _UsageError(f"{flag} takes exactly one NAME=VALUE")
    return next(iter(pairs.items()))


# --- subcommands; each returns (exit code, JSON-able result, text) -----------

def cmd_validate(args):
    model = io.model_from_json(io.load_json(_resolve(args.model)), check=False)
    diags = validate_model(model)
    ok = not any(d.level == "error" for d in diags)
    text = "".join(f"{d.level}: {d.message}\n" for d in diags) or "ok\n"
    return (0 if ok else 1), {"valid": ok, "diagnostics": [d.to_json() for d in diags]}, text


def cmd_solve(args):
    model = _load(args.model)
    sig = model.signature
    do = sig.check_intervention(io.parse_assignment(args.do))
    target = intervene(model, do)
    if args.context is None:
        contexts = list(sig.contexts())
    else:
        contexts = [io.parse_assignment(args.context)]
    rows, lines = [], []
    for u in contexts:
        states = solutions(target, u)
        rows.append({"context": u, "states": states})
        lines.append(f"context {_fmt(u)}:")
        lines.extend(f"  {_fmt(s)}" for s in states)
    return 0, {"do": do, "solutions": rows}, "\n".join(lines) + "\n"


def cmd_eval(args):
    model = _load(args.model)
    sig = model.signature
    psi = parse_formula(args.formula, sig)
    if args.state is not None:
        world = _world(model, args.context, args.state)
        semantics, value = "full", eval_full(model, world, psi)
    elif args.context is not None:
        context = io.parse_assignment(args.context)
        semantics, value = "partial", eval_partial(model, context, psi)
    else:
        semantics, value = "model", eval_model(model, psi)
    result = {
        "formula": format_formula(psi),
        "ast": formula_to_json(psi),
        "semantics": semantics,
        "value": value,
    }
    return (0 if value else 1), result, f"{str(value).lower()}\n"


def cmd_depends(args):
    model = _load(args.model)
    _guard(model, args.force)
    search = directly_depends if args.direct else depends_on
    found = search(model, args.source, args.target, require_distinct=args.require_distinct)
    relation = "directly depends" if args.direct else "depends"
    verdict = found is not None
    text = f"{args.target} {relation if verdict else 'does not ' + relation.replace('depends', 'depend')} on {args.source}\n"
    if verdict and args.witness:
        text += (
            f"  base intervention: {_fmt(found.base_intervention)}\n"
            f"  context: {_fmt(found.context)}\n"
            f"  state: {_fmt(found.state)}\n"
            f"  {args.source}<-{found.x_alt} admits {_fmt(found.counterfactual_solution)}\n"
        )
    result = {"verdict": verdict, "witness": found.to_json() if found else None}
    return (0 if verdict else 1), result, text


def cmd_cause(args):
    model = _load(args.model)
    _guard(model, args.force)
    world = _world(model, args.context, args.state)
    query = CauseQuery(model, world, _single(args.cause, "--cause"), _single(args.effect, "--effect"))
    report = explain(query, prune=not args.no_prune, require_distinct=args.require_distinct)
    text = render_explanation(report)
    if not args.witnesses:
        text = "\n".join(text.splitlines()[:2]) + "\n"
    return (0 if report["verdict"] else 1), report, text


def cmd_simplify(args):
    model = _load(args.model)
    _guard(model, args.force)
    world = None
    if args.setting_state is not None:
        world = _world(model, args.setting_context, args.setting_state)
    elif args.setting_context is not None:
        raise _UsageError("--setting-context needs --setting-state")

    if args.remove is None:
        if world is None:
            found = [(gs, None) for gs in enumerate_graph_simplifications(model.graph)]
        else:
            found = list_setting_simplifications(model, world)
        listed = [gs.to_json() for gs, _ in found]
        text = "".join(f"remove {_edges(gs.sorted_removed())}\n" for gs, _ in found)
        kind = "setting" if world is not None else "graph"
        return 0, {"kind": kind, "simplifications": listed}, text

    gs = simplification_of(model.graph, io.parse_edges(args.remove))
    simplified = structural_simplify(model, gs)
    result = {"removed_edges": gs.to_json()["removed_edges"], "model": io.model_to_json(simplified)}
    if args.write:
        Path(args.write).write_text(io.dumps(result["model"]))
    code = 0
    text = f"remove {_edges(gs.sorted_removed())}: structural simplification\n"
    if world is not None:
        ok = is_setting_simplification(model, simplified, world)
        result["setting_simplification"] = ok
        text += f"setting simplification at {_fmt(world)}: {str(ok).lower()}\n"
        code = 0 if ok else 1
    return code, result, text


def cmd_extension(args):
    m1, m2 = _load(args.model1), _load(args.model2)
    _guard(m1, args.force)
    if m1.signature != m2.signature:
        raise SemanticError("models are over different signatures")
    counter = extension_counterexample(m1, m2)
    verdict = counter is None
    text = f"{args.model2} {'is' if verdict else 'is not'} an interventional extension of {args.model1}\n"
    if counter is not None:
        text += (
            f"  context {_fmt(counter['context'])}, do {_fmt(counter['do'])}: "
            f"{_fmt(counter['state'])} is possible only in the first model\n"
        )
    return (0 if verdict else 1), {"verdict": verdict, "counterexample": counter}, text


def _complete_graph(gs: Dag, sig) -> Dag:
    order = [v for v in gs.topological_order() if sig.is_endogenous(v)]
    edges = {(u, v) for u in sig.exogenous for v in sig.endogenous}
    edges |= {(a, b) for i, a in enumerate(order) for b in order[i + 1:]}
    return Dag(sig.variables, frozenset(edges))


def cmd_discover(args):
    if (args.model is None) == (args.possibilities is None):
        raise _UsageError("give either MODEL or --possibilities FILE")
    if args.model is not None:
        model = _load(args.model)
        _guard(model, args.force)
        S = generate_possibilities(model)
    else:
        S = PossibilitySet.from_json(io.load_json(args.possibilities))
    sig = S.signature
    gs = infer_gs(S)
    if args.graph in (None, "gs"):
        graph = gs
    elif args.graph == "complete":
        graph = _complete_graph(gs, sig)
    else:
        data = io.load_json(args.graph)
        try:
            graph = Dag(sig.variables, frozenset(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError, ValueError):
            raise ParseError("graph JSON must be {\"edges\": [[parent, child], ...]}") from None
    built = build_model(S, graph, inferred=gs)
    if args.save_possibilities:
        with open(args.save_possibilities, "w") as fh:
            fh.write(io.dumps(S.to_json()))
    stats = S.statistics()
    result = {
        "inferred_edges": [list(e) for e in gs.sorted_edges()],
        "graph_edges": [list(e) for e in graph.sorted_edges()],
        "statistics": stats,
        "model": io.model_to_json(built),
    }
    text = (
        f"inferred edges: {_edges(gs.sorted_edges())}\n"
        f"model graph: {_edges(graph.sorted_edges())}\n"
        + "".join(f"{k}: {v}\n" for k, v in stats.items())
        + io.dumps(result["model"])
    )
    return 0, result, text


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nscm", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit a JSON envelope")
    parser.add_argument("--force", action="store_true", help="lift enumeration size guards")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="enumerate solutions")
    p.add_argument("model")
    p.add_argument("--context")
    p.add_argument("--do")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eval", help="evaluate a causal formula")
    p.add_argument("model")
    p.add_argument("--formula", required=True)
    p.add_argument("--context")
    p.add_argument("--state")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("depends", help="decide (direct) dependence of one variable on another")
    p.add_argument("model")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--direct", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--require-distinct", action="store_true")
    p.set_defaults(func=cmd_depends)

    p = sub.add_parser("cause", help="decide actual causation")
    p.add_argument("model")
    p.add_argument("--state", required=True)
    p.add_argument("--context")
    p.add_argument("--cause", required=True)
    p.add_argument("--effect", required=True)
    p.add_argument("--witnesses", action="store_true")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--require-distinct", action="store_true")
    p.set_defaults(func=cmd_cause)

    p = sub.add_parser("simplify", help="list or check structural simplifications")
    p.add_argument("model")
    p.add_argument("--remove")
    p.add_argument("--setting-state")
    p.add_argument("--setting-context")
    p.add_argument("--write", metavar="PATH", help="save the simplified model (with --remove)")
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("extension", help="is MODEL2 an interventional extension of MODEL1")
    p.add_argument("model1")
    p.add_argument("model2")
    p.set_defaults(func=cmd_extension)

    p = sub.add_parser("discover", help="infer the graph and default model from possibilities")
    p.add_argument("model", nargs="?")
    p.add_argument("--possibilities")
    p.add_argument("--graph", help="complete, gs, or a JSON file with {\"edges\": [...]}")
    p.add_argument("--save-possibilities", metavar="PATH")
    p.set_defaults(func=cmd_discover)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    try:
        args = _build_parser().parse_args(argv)
        code, result, text = args.func(args)
    except (_UsageError, ParseError) as exc:
        return _fail(stderr, as_json, "usage" if isinstance(exc, _UsageError) else "parse", exc, 2)
    except NscmError as exc:
        return _fail(stderr, as_json, "semantic", exc, 3)
    except OSError as exc:
        return _fail(stderr, as_json, "usage", exc, 2)
    if as_json:
        stdout.write(json.dumps({"version": 1, "result": result}, indent=2) + "\n")
    else:
        stdout.write(text)
    return code


def _fail(stderr, as_json, kind, exc, code) -> int:
    if as_json:
        stderr.write(json.dumps({"version": 1, "error": {"kind": kind, "message": str(exc)}}) + "\n")
    else:
        stderr.write(f"nscm: {kind} error: {exc}\n")
    return code


def main() -> None:
    sys.exit(run())
