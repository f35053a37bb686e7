"""explikit: interpretable rule learning with multi-level, multi-modal
explanatory dialogues over a relational knowledge base."""

from .engine import (
    ProofNode,
    Solution,
    SolveLimits,
    SolveResult,
    Substitution,
    entails,
    ground_saturate,
    solve,
    unify,
)
from .explain import (
    ExplanationNode,
    ExplanatoryTree,
    build_tree,
    drill_down,
    global_explanation,
    local_explanation,
)
from .learner import (
    ClauseScore,
    InducedModel,
    LearnLimits,
    ModeDeclarations,
    generate_new_clause,
    learn,
    score,
    validate_model,
)
from .media import MediaRef, MediaRegistry, load_manifest
from .parser import ParseError, parse_atom, parse_examples, parse_program
from .terms import (
    Atom,
    Clause,
    Constant,
    ExampleSet,
    KnowledgeBase,
    Term,
    Variable,
    render,
)
from .verbalize import TemplateSet, verbalize_atom, verbalize_clause, verbalize_global

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Clause",
    "ClauseScore",
    "Constant",
    "ExampleSet",
    "ExplanationNode",
    "ExplanatoryTree",
    "InducedModel",
    "KnowledgeBase",
    "LearnLimits",
    "MediaRef",
    "MediaRegistry",
    "ModeDeclarations",
    "ParseError",
    "ProofNode",
    "Solution",
    "SolveLimits",
    "SolveResult",
    "Substitution",
    "TemplateSet",
    "Term",
    "Variable",
    "build_tree",
    "drill_down",
    "entails",
    "generate_new_clause",
    "global_explanation",
    "ground_saturate",
    "learn",
    "load_manifest",
    "local_explanation",
    "parse_atom",
    "parse_examples",
    "parse_program",
    "render",
    "score",
    "solve",
    "unify",
    "validate_model",
    "verbalize_atom",
    "verbalize_clause",
    "verbalize_global",
]
