"""Finite-domain nondeterministic structural causal models."""

from .actual_cause import (
    CauseQuery,
    CauseResult,
    CauseWitness,
    actual_cause,
    explain,
    list_setting_simplifications,
    render_explanation,
)
from .dependence import (
    DependenceWitness,
    ancestors,
    cf_depends,
    cf_depends_star,
    depends,
    depends_on,
    depends_star,
    directly_depends,
    is_ancestor,
)
from .discovery import PossibilitySet, build_model, default_model, generate_possibilities, infer_gs
from .errors import EnumerationLimitError, ModelError, NscmError, ParseError, SemanticError
from .formula import (
    And,
    Atom,
    Modal,
    Not,
    Or,
    eval_basic,
    eval_full,
    eval_model,
    eval_partial,
    format_formula,
    parse_formula,
)
from .io import load_model, model_from_json, model_to_json
from .model import (
    Dag,
    Diagnostic,
    MultiFunction,
    Nscm,
    Signature,
    intervene,
    is_solution,
    refine,
    solutions,
    validate_model,
)
from .simplification import (
    GraphSimplification,
    enumerate_graph_simplifications,
    generalized_apply,
    is_graph_simplification,
    is_interventional_extension,
    is_setting_simplification,
    is_structural_simplification,
    structural_simplify,
)

__version__ = "0.1.0"
