"""Explanatory trees: the recorded first proof of a classified example.

A tree is built from the engine's first SLD proof of the query against the
model's clauses ordered before the background theory, converted node for
node. Node ids are preorder integers, so sessions can be resumed and tests
can address nodes stably. Every constant in a node's head is looked up in the
media registry; a missing entry yields an empty image list, never an error.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .engine import ProofNode, SolveLimits, entails, solve
from .learner import InducedModel, LearnLimits
from .media import MediaRef, MediaRegistry
from .terms import Atom, Clause, KnowledgeBase, render


class ExplanationError(Exception):
    pass


class NotEntailedError(ExplanationError):
    def __init__(self, query: Atom):
        self.query = query
        super().__init__(f"no proof exists for {query}")


class NotGroundError(ExplanationError):
    def __init__(self, query: Atom):
        self.query = query
        super().__init__(f"query contains variables: {query}")


class FactLeafError(ExplanationError):
    def __init__(self, node_id: int):
        self.node_id = node_id
        super().__init__(f"node {node_id} is a fact; the drill-down ends here")


class NoSuchChildError(ExplanationError):
    def __init__(self, node_id: int, index: int, size: int):
        self.node_id = node_id
        self.index = index
        super().__init__(
            f"node {node_id} has {size} body literal(s), no child {index}"
        )


class NoSuchNodeError(ExplanationError):
    def __init__(self, node_id: int):
        self.node_id = node_id
        super().__init__(f"no node {node_id} in this tree")


@dataclass(frozen=True)
class ExplanationNode:
    """A ground clause instance: the head it explains and the body reasons."""

    id: int
    head: Atom
    body: tuple[Atom, ...]
    children: tuple[int, ...]
    depth: int
    images: tuple[MediaRef, ...] = ()

    @property
    def is_fact(self) -> bool:
        return not self.body


@dataclass(frozen=True)
class ExplanatoryTree:
    query: Atom
    root: int
    nodes: dict[int, ExplanationNode] = field(compare=False)
    model_clause: Clause

    def node(self, node_id: int) -> ExplanationNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise NoSuchNodeError(node_id) from None

    def parent_of(self, node_id: int) -> int | None:
        for node in self.nodes.values():
            if node_id in node.children:
                return node.id
        return None

    def __len__(self) -> int:
        return len(self.nodes)


def build_tree(
    query: Atom,
    model: InducedModel,
    kb: KnowledgeBase,
    registry: MediaRegistry | None = None,
    limits: LearnLimits = LearnLimits(),
) -> ExplanatoryTree:
    """The first proof of ``query`` against model + theory, as an explanatory tree."""
    if not query.is_ground():
        raise NotGroundError(query)
    program = model.as_kb().merge_before(kb)
    result = solve(query, program, SolveLimits(depth=limits.depth, max_solutions=1))
    if not result.solutions:
        raise NotEntailedError(query)
    proof = result.solutions[0].proof
    counter = itertools.count()
    nodes: dict[int, ExplanationNode] = {}

    def convert(p: ProofNode, depth: int) -> int:
        node_id = next(counter)  # preorder: taken before descending
        child_ids = tuple(convert(c, depth + 1) for c in p.children)
        images: list[MediaRef] = []
        if registry is not None:
            for const in p.goal.constants():
                images.extend(registry.lookup(const.name))
        nodes[node_id] = ExplanationNode(
            id=node_id,
            head=p.goal,
            body=tuple(c.goal for c in p.children),
            children=child_ids,
            depth=depth,
            images=tuple(images),
        )
        return node_id

    root_id = convert(proof, 0)
    return ExplanatoryTree(
        query=query,
        root=root_id,
        nodes=nodes,
        model_clause=program.clauses[proof.clause_index],
    )


def global_explanation(
    model: InducedModel,
    for_example: Atom | None = None,
    kb: KnowledgeBase | None = None,
    limits: LearnLimits = LearnLimits(),
) -> list[Clause]:
    """All model clauses; or, for an example, just the clauses that entail it."""
    if for_example is None:
        return list(model.clauses)
    if kb is None:
        raise ValueError("filtering by example needs the background theory")
    solve_limits = limits.solve_limits()
    kept = []
    for clause in model.clauses:
        one = KnowledgeBase.from_clauses((clause,), require_ground_facts=False)
        if entails(one.merge_before(kb), for_example, solve_limits):
            kept.append(clause)
    return kept


def local_explanation(node: ExplanationNode) -> tuple[Atom, tuple[Atom, ...]]:
    """The ground clause pair (head, body) stored at the node."""
    return node.head, node.body


def drill_down(tree: ExplanatoryTree, node_id: int, child_index: int) -> ExplanationNode:
    """Child ``child_index`` (1-based) of the node; fact leaves end the drill-down."""
    node = tree.node(node_id)
    if node.is_fact:
        raise FactLeafError(node_id)
    if not 1 <= child_index <= len(node.body):
        raise NoSuchChildError(node_id, child_index, len(node.body))
    return tree.node(node.children[child_index - 1])


def tree_to_json(tree: ExplanatoryTree) -> dict:
    """Documented JSON shape mirrored by the HTTP tree endpoint."""
    return {
        "query": _atom_json(tree.query),
        "root": tree.root,
        "model_clause": render(tree.model_clause),
        "nodes": [
            {
                "id": node.id,
                "head": _atom_json(node.head),
                "body": [_atom_json(b) for b in node.body],
                "children": list(node.children),
                "depth": node.depth,
                "images": [
                    {"constant": ref.constant, "caption": ref.caption}
                    for ref in node.images
                ],
            }
            for _, node in sorted(tree.nodes.items())
        ],
    }


def _atom_json(atom: Atom) -> dict:
    from .engine import _atom_json as engine_atom_json

    return engine_atom_json(atom)


def tree_to_dot(tree: ExplanatoryTree) -> str:
    """GraphViz rendering of the tree, root at the top, fact leaves rounded."""
    lines = ["digraph explanation {", "  node [shape=box];"]
    for _, node in sorted(tree.nodes.items()):
        shape = ' style="rounded"' if node.is_fact else ""
        lines.append(f'  n{node.id} [label="{node.head}"{shape}];')
        for child in node.children:
            lines.append(f"  n{node.id} -> n{child};")
    lines.append("}")
    return "\n".join(lines)
