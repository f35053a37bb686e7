"""Template-based verbalization of atoms, clauses, and models.

Phrase patterns use ``{N}`` slots for the N-th argument (1-based) and
``{a N}`` for the argument preceded by an indefinite article picked by its
first letter. Predicates without an explicit template fall back to the
generic rule: first argument, predicate words, second argument, any further
arguments joined by the "and" connective. Verbalization therefore never
fails on a parseable clause.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .terms import Atom, Clause, Constant, KnowledgeBase, Term, Variable

_SLOT = re.compile(r"\{(a )?(\d+)\}")
_VOWELS = "aeiou"


@dataclass(frozen=True)
class TemplateSet:
    predicate_templates: dict[tuple[str, int], str] = field(default_factory=dict)
    connective_because: str = "because"
    connective_and: str = "and"
    constant_names: dict[str, str] = field(default_factory=dict)

    def display(self, term: Term) -> str:
        if isinstance(term, Constant):
            return self.constant_names.get(term.name, term.name)
        return term.name


DEFAULT_TEMPLATES = TemplateSet()


def load_templates(source: str) -> TemplateSet:
    """Parse the JSON template file (keys are ``predicate/arity`` strings)."""
    raw = json.loads(source)
    templates: dict[tuple[str, int], str] = {}
    for key, pattern in raw.get("predicates", {}).items():
        name, _, arity = key.partition("/")
        templates[(name, int(arity))] = pattern
    return TemplateSet(
        predicate_templates=templates,
        connective_because=raw.get("because", "because"),
        connective_and=raw.get("and", "and"),
        constant_names=dict(raw.get("constant_names", {})),
    )


def instance_constants(kb: KnowledgeBase) -> dict[str, str]:
    """Uniform capitalization defaults: constants that occur as the subject of
    an ``is_a`` fact but never as an object are instances and display
    capitalized; everything else stays lowercase."""
    subjects: list[str] = []
    objects: set[str] = set()
    for clause in kb.facts():
        atom = clause.head
        if atom.predicate == "is_a" and atom.arity == 2:
            subjects.append(atom.args[0].name)  # type: ignore[union-attr]
            objects.add(atom.args[1].name)  # type: ignore[union-attr]
    return {s: s.capitalize() for s in subjects if s not in objects}


def _with_article(word: str) -> str:
    article = "an" if word[:1].lower() in _VOWELS else "a"
    return f"{article} {word}"


def verbalize_atom(atom: Atom, templates: TemplateSet = DEFAULT_TEMPLATES) -> str:
    args = [templates.display(a) for a in atom.args]
    pattern = templates.predicate_templates.get((atom.predicate, atom.arity))
    if pattern is not None:

        def fill(match: re.Match[str]) -> str:
            index = int(match.group(2)) - 1
            if not 0 <= index < len(args):
                return match.group(0)
            return _with_article(args[index]) if match.group(1) else args[index]

        return _SLOT.sub(fill, pattern)
    phrase = atom.predicate.replace("_", " ")
    if not args:
        return phrase
    if len(args) == 1:
        return f"{args[0]} {phrase}"
    rest = f" {templates.connective_and} ".join(args[2:])
    tail = f" {templates.connective_and} {rest}" if rest else ""
    return f"{args[0]} {phrase} {args[1]}{tail}"


def verbalize_clause(
    head: Atom,
    body: tuple[Atom, ...] | list[Atom],
    templates: TemplateSet = DEFAULT_TEMPLATES,
) -> str:
    """One sentence: head, "because", the body reasons joined by "and"."""
    head_text = verbalize_atom(head, templates)
    if not body:
        return f"{head_text}."
    reasons = f" {templates.connective_and} ".join(
        verbalize_atom(b, templates) for b in body
    )
    return f"{head_text}, {templates.connective_because} {reasons}."


def verbalize_global(
    clauses: list[Clause] | tuple[Clause, ...],
    templates: TemplateSet = DEFAULT_TEMPLATES,
) -> list[str]:
    """One sentence per model clause, model order preserved."""
    return [verbalize_clause(c.head, c.body, templates) for c in clauses]
