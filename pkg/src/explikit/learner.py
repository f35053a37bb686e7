"""Sequential-covering rule induction over a background theory.

The covering loop repeatedly asks ``generate_new_clause`` for the admissible
candidate with the best positive coverage, accepts it, and removes every
positive the accepted clause covers. A candidate is admissible iff it covers
at least one remaining positive and no negative; examples are assumed
noise-free, so a single covered negative disqualifies a clause outright.

Candidate clauses are enumerated exhaustively from mode declarations: the
head is the target predicate over distinct variables, and bodies are all
subsets (up to ``max_body_literals``) of the schema literals instantiated
with constants from the declared pools, in declaration order. The quality
criterion is positive coverage, tie-broken by fewer body literals and then by
enumeration order, which makes learning fully deterministic.
"""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .engine import SolveLimits, entails
from .terms import Atom, Clause, Constant, ExampleSet, KnowledgeBase, Variable

logger = logging.getLogger(__name__)


class ModesError(Exception):
    """Malformed mode declarations."""


@dataclass(frozen=True)
class BodySchema:
    """Shape of an allowed body literal.

    Each argument is either the name of a head variable or a pool reference
    ``"#<pool>"`` whose constants are enumerated. Fresh body variables are not
    supported.
    """

    predicate: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class ModeDeclarations:
    target: tuple[str, int]
    head_vars: tuple[str, ...]
    body_schemas: tuple[BodySchema, ...]
    constant_pools: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.head_vars) != self.target[1]:
            raise ModesError(
                f"target {self.target[0]}/{self.target[1]} needs "
                f"{self.target[1]} head variables, got {len(self.head_vars)}"
            )
        for schema in self.body_schemas:
            for arg in schema.args:
                if arg.startswith("#"):
                    if arg[1:] not in self.constant_pools:
                        raise ModesError(f"unknown constant pool {arg[1:]!r}")
                elif arg not in self.head_vars:
                    raise ModesError(
                        f"schema argument {arg!r} is neither a head variable nor a pool"
                    )

    def head(self) -> Atom:
        return Atom(self.target[0], tuple(Variable(v) for v in self.head_vars))

    def literals(self) -> Iterator[Atom]:
        """All instantiated body literals, in deterministic enumeration order."""
        for schema in self.body_schemas:
            choices: list[list] = []
            for arg in schema.args:
                if arg.startswith("#"):
                    choices.append([Constant(c) for c in self.constant_pools[arg[1:]]])
                else:
                    choices.append([Variable(arg)])
            for combo in itertools.product(*choices):
                yield Atom(schema.predicate, tuple(combo))


def load_modes(source: str) -> tuple[ModeDeclarations, "LearnLimits"]:
    """Parse the JSON mode/limits configuration (schema in docs/schemas)."""
    raw = json.loads(source)
    target = raw["target"]
    modes = ModeDeclarations(
        target=(target["predicate"], int(target["arity"])),
        head_vars=tuple(target["head_vars"]),
        body_schemas=tuple(
            BodySchema(s["predicate"], tuple(s["args"])) for s in raw["body_schemas"]
        ),
        constant_pools={k: tuple(v) for k, v in raw.get("constant_pools", {}).items()},
    )
    limits_raw = raw.get("limits", {})
    limits = LearnLimits(
        max_body_literals=int(limits_raw.get("max_body_literals", 2)),
        depth=int(limits_raw.get("depth", 64)),
    )
    return modes, limits


@dataclass(frozen=True)
class LearnLimits:
    max_body_literals: int = 2
    depth: int = 64

    def solve_limits(self) -> SolveLimits:
        return SolveLimits(depth=self.depth, max_solutions=1)


@dataclass(frozen=True)
class ClauseScore:
    pos_covered: int
    neg_covered: int
    literal_count: int


@dataclass(frozen=True)
class InducedModel:
    """The learned clauses for one target predicate, in learning order."""

    target: tuple[str, int]
    clauses: tuple[Clause, ...]

    def as_kb(self) -> KnowledgeBase:
        return KnowledgeBase.from_clauses(self.clauses, require_ground_facts=False)

    def render(self) -> str:
        return "".join(f"{clause}\n" for clause in self.clauses)

    @staticmethod
    def from_kb(kb: KnowledgeBase, target: tuple[str, int] | None = None) -> "InducedModel":
        clauses = kb.clauses
        if target is None:
            if not clauses:
                raise ValueError("cannot infer a target from an empty model file")
            target = clauses[0].head.key
        mismatched = [c for c in clauses if c.head.key != target]
        if mismatched:
            raise ValueError(f"model clause head is not {target[0]}/{target[1]}: {mismatched[0]}")
        return InducedModel(target, clauses)

    def __len__(self) -> int:
        return len(self.clauses)


def _with_clause(kb: KnowledgeBase, clause: Clause) -> KnowledgeBase:
    return KnowledgeBase.from_clauses(
        kb.clauses + (clause,), require_ground_facts=False
    )


def score(
    clause: Clause,
    positives: Sequence[Atom],
    negatives: Sequence[Atom],
    kb: KnowledgeBase,
    limits: LearnLimits = LearnLimits(),
) -> ClauseScore:
    """Coverage of one clause via resolution against ``kb`` plus the clause."""
    program = _with_clause(kb, clause)
    solve_limits = limits.solve_limits()
    pos = sum(1 for p in positives if entails(program, p, solve_limits))
    neg = sum(1 for n in negatives if entails(program, n, solve_limits))
    return ClauseScore(pos, neg, len(clause.body))


def candidate_clauses(modes: ModeDeclarations, limits: LearnLimits) -> Iterator[Clause]:
    """Every candidate in enumeration order: subsets of the instantiated
    schema literals by ascending size, lexicographic within a size."""
    head = modes.head()
    literals = list(modes.literals())
    for size in range(limits.max_body_literals + 1):
        for body in itertools.combinations(literals, size):
            yield Clause(head, body)


def generate_new_clause(
    pos: Sequence[Atom],
    negatives: Sequence[Atom],
    kb: KnowledgeBase,
    modes: ModeDeclarations,
    limits: LearnLimits = LearnLimits(),
) -> Clause | None:
    """Best admissible candidate for the remaining positives, or None.

    Admissible: covers >= 1 of ``pos`` and no negative. Best: maximal
    positive coverage, tie-broken by fewer literals, then by enumeration
    order (first wins).
    """
    best: Clause | None = None
    best_score: ClauseScore | None = None
    solve_limits = limits.solve_limits()
    for candidate in candidate_clauses(modes, limits):
        program = _with_clause(kb, candidate)
        # One covered negative disqualifies outright, so stop at the first.
        if any(entails(program, n, solve_limits) for n in negatives):
            continue
        covered = sum(1 for p in pos if entails(program, p, solve_limits))
        if covered < 1:
            continue
        s = ClauseScore(covered, 0, len(candidate.body))
        if (
            best_score is None
            or s.pos_covered > best_score.pos_covered
            or (
                s.pos_covered == best_score.pos_covered
                and s.literal_count < best_score.literal_count
            )
        ):
            best, best_score = candidate, s
    return best


@dataclass
class LearnResult:
    model: InducedModel
    uncoverable: tuple[Atom, ...] = ()

    @property
    def complete(self) -> bool:
        return not self.uncoverable


class UncoverablePositivesError(Exception):
    """Raised only by callers that demand a complete model; ``learn`` itself
    reports uncoverable positives on the result."""

    def __init__(self, atoms: Sequence[Atom]):
        self.atoms = tuple(atoms)
        listing = ", ".join(str(a) for a in atoms)
        super().__init__(f"no admissible clause covers: {listing}")


def learn(
    kb: KnowledgeBase,
    examples: ExampleSet,
    modes: ModeDeclarations,
    limits: LearnLimits = LearnLimits(),
) -> LearnResult:
    """Sequential covering over ``examples`` against background ``kb``.

    Every accepted clause covers at least one remaining positive and no
    negative, and all positives it covers are removed before the next round,
    so the loop terminates. When some positives admit no clause they are
    reported via ``LearnResult.uncoverable`` alongside the partial model.
    """
    if examples.target is not None and examples.target != modes.target:
        raise ModesError(
            f"examples target {examples.target[0]}/{examples.target[1]} does not "
            f"match modes target {modes.target[0]}/{modes.target[1]}"
        )
    remaining = list(examples.positives)
    clauses: list[Clause] = []
    solve_limits = limits.solve_limits()
    while remaining:
        clause = generate_new_clause(remaining, examples.negatives, kb, modes, limits)
        if clause is None:
            logger.warning("uncoverable positives: %s", ", ".join(map(str, remaining)))
            return LearnResult(
                InducedModel(modes.target, tuple(clauses)), tuple(remaining)
            )
        if clause in clauses:  # cannot happen while coverage strictly shrinks
            logger.error("duplicate clause generated, stopping: %s", clause)
            return LearnResult(
                InducedModel(modes.target, tuple(clauses)), tuple(remaining)
            )
        program = _with_clause(kb, clause)
        remaining = [p for p in remaining if not entails(program, p, solve_limits)]
        clauses.append(clause)
        logger.info("accepted clause: %s (remaining positives: %d)", clause, len(remaining))
    return LearnResult(InducedModel(modes.target, tuple(clauses)))


@dataclass(frozen=True)
class ValidationReport:
    """Per-example entailment of the model against the training set."""

    positives: tuple[tuple[Atom, bool], ...]
    negatives: tuple[tuple[Atom, bool], ...]

    @property
    def complete(self) -> bool:
        return all(entailed for _, entailed in self.positives)

    @property
    def consistent(self) -> bool:
        return not any(entailed for _, entailed in self.negatives)

    @property
    def positives_entailed(self) -> int:
        return sum(1 for _, e in self.positives if e)

    @property
    def negatives_entailed(self) -> int:
        return sum(1 for _, e in self.negatives if e)

    def lines(self) -> list[str]:
        out = []
        for atom, entailed in self.positives:
            out.append(f"{'+' if entailed else 'MISSED'}  pos {atom}")
        for atom, entailed in self.negatives:
            out.append(f"{'COVERED' if entailed else '-'}  neg {atom}")
        out.append(
            f"complete={str(self.complete).lower()} "
            f"({self.positives_entailed}/{len(self.positives)} positives), "
            f"consistent={str(self.consistent).lower()} "
            f"({self.negatives_entailed}/{len(self.negatives)} negatives entailed)"
        )
        return out


def validate_model(
    model: InducedModel,
    kb: KnowledgeBase,
    examples: ExampleSet,
    limits: LearnLimits = LearnLimits(),
) -> ValidationReport:
    program = model.as_kb().merge_before(kb)
    solve_limits = limits.solve_limits()
    return ValidationReport(
        positives=tuple((p, entails(program, p, solve_limits)) for p in examples.positives),
        negatives=tuple((n, entails(program, n, solve_limits)) for n in examples.negatives),
    )
