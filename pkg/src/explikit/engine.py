"""Unification, substitution, and depth-bounded SLD resolution with proof capture.

Resolution is standard SLD: clauses are tried in knowledge-base order, body
literals are resolved left to right, and the engine backtracks on failure.
Every successful derivation is recorded as a ProofNode tree whose nodes are
the ground clause instances used. Clause variables are renamed apart at each
use with a per-call monotone counter; renamed names never appear in the
returned trees because nodes are materialized under the final answer
substitution.

``ground_saturate`` is an independent bottom-up fixpoint evaluator used as a
testing oracle for the resolution path; the two must never share inference
code.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .terms import Atom, Clause, Constant, KnowledgeBase, Term, Variable

logger = logging.getLogger(__name__)

_RENAMED = re.compile(r"_G(\d+)\Z")


class Substitution(Mapping[str, Term]):
    """An immutable binding of variable names to terms.

    Application walks variable chains to their ends, so applying twice equals
    applying once; applying to a ground atom is the identity.
    """

    __slots__ = ("_bindings",)

    def __init__(self, bindings: dict[str, Term] | None = None):
        self._bindings: dict[str, Term] = dict(bindings or {})

    def walk(self, term: Term) -> Term:
        while isinstance(term, Variable) and term.name in self._bindings:
            term = self._bindings[term.name]
        return term

    def bind(self, name: str, value: Term) -> "Substitution":
        new = dict(self._bindings)
        new[name] = value
        return Substitution(new)

    def apply(self, atom: Atom) -> Atom:
        return Atom(atom.predicate, tuple(self.walk(a) for a in atom.args))

    def apply_clause(self, clause: Clause) -> Clause:
        return Clause(self.apply(clause.head), tuple(self.apply(b) for b in clause.body))

    def resolved(self) -> dict[str, Term]:
        """Bindings with every chain fully walked (the normalized view)."""
        return {name: self.walk(Variable(name)) for name in self._bindings}

    def __getitem__(self, name: str) -> Term:
        return self.walk(Variable(name))

    def __iter__(self) -> Iterator[str]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}->{v}" for k, v in sorted(self.resolved().items()))
        return f"{{{inner}}}"


EMPTY_SUBSTITUTION = Substitution()


def unify_terms(a: Term, b: Term, subst: Substitution) -> Substitution | None:
    a, b = subst.walk(a), subst.walk(b)
    if a == b:
        return subst
    if isinstance(a, Variable):
        return subst.bind(a.name, b)
    if isinstance(b, Variable):
        return subst.bind(b.name, a)
    return None


def unify(a: Atom, b: Atom, subst: Substitution | None = None) -> Substitution | None:
    """Most general unifier of two atoms extending ``subst``, or None.

    Failure is a value, not an error. With a function-free term language the
    occurs check degenerates to the variable-identity test inside
    ``unify_terms``.
    """
    subst = subst if subst is not None else EMPTY_SUBSTITUTION
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return None
    current: Substitution | None = subst
    for x, y in zip(a.args, b.args):
        current = unify_terms(x, y, current)
        if current is None:
            return None
    return current


@dataclass(frozen=True)
class ProofNode:
    """One resolution step: a ground goal and the ground clause instance
    whose head resolved it, with one child per body literal."""

    goal: Atom
    clause: Clause
    children: tuple["ProofNode", ...]
    clause_index: int  # position of the generalized clause in the KB

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["ProofNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class Solution:
    """Answer bindings for the query's variables plus the recorded proof."""

    substitution: Substitution
    proof: ProofNode


@dataclass(frozen=True)
class SolveLimits:
    depth: int = 64
    max_solutions: int | None = None

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("depth limit must be >= 1")


DEFAULT_LIMITS = SolveLimits()


@dataclass
class SolveResult:
    solutions: list[Solution]
    depth_limit_hit: bool = False

    def __iter__(self) -> Iterator[Solution]:
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)


@dataclass(frozen=True)
class _Pending:
    """A proof-tree template; atoms become ground under the final substitution."""

    goal: Atom
    clause: Clause
    children: tuple["_Pending", ...]
    clause_index: int

    def materialize(self, subst: Substitution) -> ProofNode:
        return ProofNode(
            goal=subst.apply(self.goal),
            clause=subst.apply_clause(self.clause),
            children=tuple(c.materialize(subst) for c in self.children),
            clause_index=self.clause_index,
        )


class _Search:
    def __init__(self, kb: KnowledgeBase, limits: SolveLimits, query: Atom):
        self.kb = kb
        self.limits = limits
        self.depth_limit_hit = False
        self._clause_vars: dict[int, tuple[str, ...]] = {}
        # Fresh names must not collide with variables the caller already uses.
        taken = (
            int(m.group(1))
            for v in query.variables()
            if (m := _RENAMED.match(v.name))
        )
        self._counter = itertools.count(max(taken, default=0) + 1)

    def _rename(self, pos: int, clause: Clause) -> Clause:
        names = self._clause_vars.get(pos)
        if names is None:
            names = tuple(v.name for v in clause.variables())
            self._clause_vars[pos] = names
        if not names:
            return clause
        mapping = {name: Variable(f"_G{next(self._counter)}") for name in names}
        sub = Substitution(mapping)  # type: ignore[arg-type]
        return sub.apply_clause(clause)

    def prove(
        self, goal: Atom, subst: Substitution, depth: int
    ) -> Iterator[tuple[Substitution, _Pending]]:
        if depth > self.limits.depth:
            self.depth_limit_hit = True
            return
        first = subst.walk(goal.args[0]) if goal.args else None
        for pos, clause in self.kb.clauses_for(goal.key, first):
            renamed = self._rename(pos, clause)
            unified = unify(goal, renamed.head, subst)
            if unified is None:
                continue
            for final, children in self._prove_body(renamed.body, unified, depth):
                yield final, _Pending(goal, renamed, children, pos)

    def _prove_body(
        self, body: tuple[Atom, ...], subst: Substitution, depth: int
    ) -> Iterator[tuple[Substitution, tuple[_Pending, ...]]]:
        if not body:
            yield subst, ()
            return
        first, rest = body[0], body[1:]
        for s1, node in self.prove(first, subst, depth + 1):
            for s2, siblings in self._prove_body(rest, s1, depth):
                yield s2, (node, *siblings)


def solve(query: Atom, kb: KnowledgeBase, limits: SolveLimits = DEFAULT_LIMITS) -> SolveResult:
    """All SLD solutions for ``query`` within limits, each with its proof tree.

    Solutions come in SLD order and the search is deterministic. A hit depth
    limit is reported as a flag on the result (partial results are still
    returned) and signals possible incompleteness.
    """
    search = _Search(kb, limits, query)
    query_vars = tuple(query.variables())
    solutions: list[Solution] = []
    for subst, pending in search.prove(query, EMPTY_SUBSTITUTION, 1):
        answer = Substitution({v.name: subst.walk(v) for v in query_vars})
        solutions.append(Solution(answer, pending.materialize(subst)))
        if limits.max_solutions is not None and len(solutions) >= limits.max_solutions:
            return SolveResult(solutions, search.depth_limit_hit)
    return SolveResult(solutions, search.depth_limit_hit)


def entails(kb: KnowledgeBase, atom: Atom, limits: SolveLimits = DEFAULT_LIMITS) -> bool:
    """True iff ``atom`` has a proof within limits.

    A depth-limited search that found nothing is indeterminate; it is logged
    and conservatively reported as False (closed-world reading).
    """
    if not atom.is_ground():
        raise ValueError(f"entailment is defined for ground atoms only: {atom}")
    result = solve(atom, kb, SolveLimits(depth=limits.depth, max_solutions=1))
    if result.solutions:
        return True
    if result.depth_limit_hit:
        logger.warning("entailment of %s indeterminate: depth limit %d hit", atom, limits.depth)
    return False


def _match_body(
    body: tuple[Atom, ...],
    facts_by_key: dict[tuple[str, int], list[Atom]],
    subst: Substitution,
) -> Iterator[Substitution]:
    if not body:
        yield subst
        return
    first, rest = body[0], body[1:]
    for fact in facts_by_key.get(first.key, ()):
        unified = unify(first, fact, subst)
        if unified is not None:
            yield from _match_body(rest, facts_by_key, unified)


def ground_saturate(kb: KnowledgeBase) -> frozenset[Atom]:
    """Least fixed point of bottom-up rule application over the constant universe.

    The independent forward-chaining oracle: terminates because the program is
    function-free, so the Herbrand base is finite. Head variables that the
    body leaves unbound are enumerated over the knowledge base's constants.
    """
    atoms: set[Atom] = set()
    by_key: dict[tuple[str, int], list[Atom]] = {}

    def add(atom: Atom) -> bool:
        if atom in atoms:
            return False
        atoms.add(atom)
        by_key.setdefault(atom.key, []).append(atom)
        return True

    for clause in kb.facts():
        add(clause.head)
    rules = list(kb.rules())
    universe = [Constant(name) for name in kb.constants]
    changed = True
    while changed:
        changed = False
        for rule in rules:
            # Snapshot the matches: extending the fact set mid-join would make
            # the pass order-dependent (the fixpoint itself would not change).
            for subst in list(_match_body(rule.body, by_key, EMPTY_SUBSTITUTION)):
                head = subst.apply(rule.head)
                if head.is_ground():
                    changed |= add(head)
                    continue
                free = [v.name for v in head.variables()]
                for combo in itertools.product(universe, repeat=len(free)):
                    grounding = Substitution(dict(zip(free, combo)))
                    changed |= add(grounding.apply(head))
    return frozenset(atoms)


def proof_to_json(node: ProofNode) -> dict:
    """Documented JSON shape: goal, clause, children, recursively."""
    from .terms import render

    return {
        "goal": _atom_json(node.goal),
        "clause": {
            "text": render(node.clause),
            "head": _atom_json(node.clause.head),
            "body": [_atom_json(b) for b in node.clause.body],
        },
        "children": [proof_to_json(c) for c in node.children],
    }


def _atom_json(atom: Atom) -> dict:
    return {
        "text": str(atom),
        "predicate": atom.predicate,
        "args": [
            {"const": a.name} if isinstance(a, Constant) else {"var": a.name}
            for a in atom.args
        ],
    }


def proof_to_dot(node: ProofNode) -> str:
    """GraphViz rendering of a proof tree, goals as labels."""
    lines = ["digraph proof {", "  node [shape=box];"]
    counter = itertools.count()

    def emit(n: ProofNode) -> int:
        my_id = next(counter)
        lines.append(f'  n{my_id} [label="{n.goal}"];')
        for child in n.children:
            child_id = emit(child)
            lines.append(f"  n{my_id} -> n{child_id};")
        return my_id

    emit(node)
    lines.append("}")
    return "\n".join(lines)
