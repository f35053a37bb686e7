"""Symbolic values: terms, atoms, Horn clauses, knowledge bases, example sets.

The term language is deliberately function-free: a term is either a constant
(lowercase identifier) or a logic variable (identifier starting with an
uppercase letter or underscore). Everything is immutable and hashable, and
equality is structural throughout.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

CONSTANT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
VARIABLE_RE = re.compile(r"[A-Z_][a-zA-Z0-9_]*\Z")


@dataclass(frozen=True, slots=True)
class Constant:
    name: str

    def __post_init__(self) -> None:
        if not CONSTANT_RE.match(self.name):
            raise ValueError(f"invalid constant name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __post_init__(self) -> None:
        if not VARIABLE_RE.match(self.name):
            raise ValueError(f"invalid variable name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


Term = Union[Constant, Variable]


@dataclass(frozen=True, slots=True)
class Atom:
    """A predicate applied to terms, e.g. ``is_a(plant, being)``."""

    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> tuple[str, int]:
        """(predicate name, arity) — the indexing key for a knowledge base."""
        return (self.predicate, len(self.args))

    def is_ground(self) -> bool:
        return not any(isinstance(a, Variable) for a in self.args)

    def variables(self) -> Iterator[Variable]:
        for a in self.args:
            if isinstance(a, Variable):
                yield a

    def constants(self) -> Iterator[Constant]:
        for a in self.args:
            if isinstance(a, Constant):
                yield a

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True, slots=True)
class Clause:
    """A Horn clause ``head :- body``; an empty body makes it a fact."""

    head: Atom
    body: tuple[Atom, ...] = ()

    @property
    def is_fact(self) -> bool:
        return not self.body

    def atoms(self) -> Iterator[Atom]:
        yield self.head
        yield from self.body

    def variables(self) -> Iterator[Variable]:
        seen: set[str] = set()
        for atom in self.atoms():
            for v in atom.variables():
                if v.name not in seen:
                    seen.add(v.name)
                    yield v

    def __str__(self) -> str:
        if self.is_fact:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(a) for a in self.body)}."


def render(x: Term | Atom | Clause) -> str:
    """Canonical text form; parsing the result reproduces ``x`` exactly."""
    return str(x)


class KbError(Exception):
    """Base class for knowledge-base construction and parse errors."""


class NonGroundFactError(KbError):
    def __init__(self, clause: Clause, line: int | None = None):
        self.clause = clause
        self.line = line
        at = f" at line {line}" if line is not None else ""
        super().__init__(f"fact contains a variable{at}: {clause}")


class ArityConflictError(KbError):
    def __init__(self, predicate: str, arities: Iterable[int]):
        self.predicate = predicate
        self.arities = sorted(set(arities))
        super().__init__(
            f"predicate {predicate!r} used with conflicting arities {self.arities}"
        )


@dataclass(frozen=True)
class KnowledgeBase:
    """An ordered set of clauses with a (predicate, arity) index.

    Clause order equals source order; resolution and explanation determinism
    depend on it. The index and the constant listing are derived on
    construction and always consistent with the clause tuple. A secondary
    first-argument index narrows clause selection for goals with a ground
    first argument; it only skips clauses whose head could never unify, so
    solution order is unchanged.
    """

    clauses: tuple[Clause, ...]
    index: dict[tuple[str, int], tuple[int, ...]] = field(compare=False)
    constants: tuple[str, ...] = field(compare=False)
    _first_const: dict[tuple[str, int], dict[str, tuple[int, ...]]] = field(
        compare=False, repr=False, default_factory=dict
    )
    _first_var: dict[tuple[str, int], tuple[int, ...]] = field(
        compare=False, repr=False, default_factory=dict
    )
    _merged: dict[tuple[str, int, str], tuple[int, ...]] = field(
        compare=False, repr=False, default_factory=dict
    )

    @staticmethod
    def from_clauses(
        clauses: Iterable[Clause],
        *,
        require_ground_facts: bool = True,
        lines: dict[int, int] | None = None,
    ) -> "KnowledgeBase":
        """Build a validated knowledge base from clauses in order.

        ``lines`` optionally maps clause positions to source lines for error
        reporting. ``require_ground_facts`` is relaxed only for learner-built
        programs whose universally quantified clauses never reach a file.
        """
        clause_tuple = tuple(clauses)
        index: dict[tuple[str, int], list[int]] = {}
        first_const: dict[tuple[str, int], dict[str, list[int]]] = {}
        first_var: dict[tuple[str, int], list[int]] = {}
        arities: dict[str, set[int]] = {}
        constants: list[str] = []
        seen_constants: set[str] = set()
        for pos, clause in enumerate(clause_tuple):
            if require_ground_facts and clause.is_fact and not clause.head.is_ground():
                raise NonGroundFactError(clause, (lines or {}).get(pos))
            for atom in clause.atoms():
                arities.setdefault(atom.predicate, set()).add(atom.arity)
                if len(arities[atom.predicate]) > 1:
                    raise ArityConflictError(atom.predicate, arities[atom.predicate])
                for c in atom.constants():
                    if c.name not in seen_constants:
                        seen_constants.add(c.name)
                        constants.append(c.name)
            key = clause.head.key
            index.setdefault(key, []).append(pos)
            first = clause.head.args[0] if clause.head.args else None
            if isinstance(first, Constant):
                first_const.setdefault(key, {}).setdefault(first.name, []).append(pos)
            else:
                first_var.setdefault(key, []).append(pos)
        return KnowledgeBase(
            clauses=clause_tuple,
            index={k: tuple(v) for k, v in index.items()},
            constants=tuple(constants),
            _first_const={
                k: {n: tuple(v) for n, v in inner.items()}
                for k, inner in first_const.items()
            },
            _first_var={k: tuple(v) for k, v in first_var.items()},
        )

    def clauses_for(
        self, key: tuple[str, int], first_arg: "Term | None" = None
    ) -> Iterator[tuple[int, Clause]]:
        """Clauses whose head matches ``key``, in knowledge-base order.

        With a ground ``first_arg``, clauses whose head starts with a
        different constant are skipped (they could not unify anyway).
        """
        if isinstance(first_arg, Constant):
            cache_key = (key[0], key[1], first_arg.name)
            positions = self._merged.get(cache_key)
            if positions is None:
                consts = self._first_const.get(key, {}).get(first_arg.name, ())
                variables = self._first_var.get(key, ())
                positions = tuple(sorted(consts + variables))
                self._merged[cache_key] = positions
        else:
            positions = self.index.get(key, ())
        for pos in positions:
            yield pos, self.clauses[pos]

    def facts(self) -> Iterator[Clause]:
        return (c for c in self.clauses if c.is_fact)

    def rules(self) -> Iterator[Clause]:
        return (c for c in self.clauses if not c.is_fact)

    def merge_before(self, other: "KnowledgeBase") -> "KnowledgeBase":
        """A knowledge base with our clauses ordered before ``other``'s."""
        return KnowledgeBase.from_clauses(
            self.clauses + other.clauses, require_ground_facts=False
        )

    def __len__(self) -> int:
        return len(self.clauses)


class DisjointnessViolationError(KbError):
    def __init__(self, atom: Atom):
        self.atom = atom
        super().__init__(f"example appears as both positive and negative: {atom}")


class MixedTargetError(KbError):
    def __init__(self, expected: tuple[str, int], got: tuple[str, int]):
        self.expected = expected
        self.got = got
        super().__init__(
            f"examples mix target predicates: expected {expected[0]}/{expected[1]},"
            f" got {got[0]}/{got[1]}"
        )


@dataclass(frozen=True)
class ExampleSet:
    """Disjoint positive and negative ground examples of one target predicate.

    ``target`` is inferred from the first example and is None for an empty
    set (an empty examples file is legal and learns an empty model).
    """

    positives: tuple[Atom, ...]
    negatives: tuple[Atom, ...]
    target: tuple[str, int] | None

    @staticmethod
    def from_atoms(
        positives: Iterable[Atom], negatives: Iterable[Atom]
    ) -> "ExampleSet":
        pos: list[Atom] = []
        neg: list[Atom] = []
        target: tuple[str, int] | None = None
        for atom, polarity in [(a, True) for a in positives] + [
            (a, False) for a in negatives
        ]:
            if target is None:
                target = atom.key
            elif atom.key != target:
                raise MixedTargetError(target, atom.key)
            bucket = pos if polarity else neg
            if atom not in bucket:
                bucket.append(atom)
        for atom in pos:
            if atom in neg:
                raise DisjointnessViolationError(atom)
        return ExampleSet(tuple(pos), tuple(neg), target)
