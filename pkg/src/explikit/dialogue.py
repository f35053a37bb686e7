"""Session state machine for the explanatory dialogue.

A session answers structured requests against one explanatory tree at a
time: classify an example (builds the tree), ask what the target predicate
means (global explanation), ask why (local explanation of the cursor), drill
down into a numbered reason, show an image, go back, quit. Requests that
violate the navigation contract raise DialogueError subclasses and leave the
session untouched; valid requests are appended to the transcript, so
replaying a transcript against a fresh session reproduces identical
responses.
"""
from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from typing import Union

from . import explain
from .explain import ExplanatoryTree, build_tree, global_explanation
from .learner import InducedModel, LearnLimits
from .media import MediaRef, MediaRegistry
from .parser import parse_atom
from .terms import Atom, KnowledgeBase
from .verbalize import TemplateSet, verbalize_atom, verbalize_clause, verbalize_global

AWAITING_QUERY = "awaiting_query"
EXPLORING = "exploring"
ENDED = "ended"

DEFAULT_STRINGS = {
    "intro": (
        "Hello! I explain why the learned model classifies examples the way "
        "it does. Ask what the target predicate means, or give me an example "
        "to classify."
    ),
    "advice": (
        "You can drill down into any numbered reason, go back to the previous "
        "explanation, ask for an image, or quit at any time."
    ),
    "epilogue": "Goodbye! I hope the explanations were helpful.",
    "negative": "No: {sentence} cannot be derived. The example is classified as negative.",
    "no_model_for": "I have not learned a model for '{predicate}'.",
    "image_caption": "Here is an image of {name}.",
    "image_missing": "I have no image of {name}.",
}


@dataclass(frozen=True)
class Classify:
    atom: Atom


@dataclass(frozen=True)
class WhatMeans:
    predicate: str


@dataclass(frozen=True)
class Why:
    pass


@dataclass(frozen=True)
class DrillDown:
    index: int


@dataclass(frozen=True)
class ShowImage:
    constant: str | None = None


@dataclass(frozen=True)
class Back:
    pass


@dataclass(frozen=True)
class Quit:
    pass


Request = Union[Classify, WhatMeans, Why, DrillDown, ShowImage, Back, Quit]


def request_to_json(request: Request) -> dict:
    if isinstance(request, Classify):
        return {"type": "classify", "atom": str(request.atom)}
    if isinstance(request, WhatMeans):
        return {"type": "what_means", "predicate": request.predicate}
    if isinstance(request, Why):
        return {"type": "why"}
    if isinstance(request, DrillDown):
        return {"type": "drill_down", "index": request.index}
    if isinstance(request, ShowImage):
        body: dict = {"type": "show_image"}
        if request.constant is not None:
            body["constant"] = request.constant
        return body
    if isinstance(request, Back):
        return {"type": "back"}
    if isinstance(request, Quit):
        return {"type": "quit"}
    raise TypeError(f"not a request: {request!r}")


def request_from_json(raw: dict) -> Request:
    kind = raw.get("type")
    if kind == "classify":
        return Classify(parse_atom(raw["atom"]))
    if kind == "what_means":
        return WhatMeans(raw["predicate"])
    if kind == "why":
        return Why()
    if kind == "drill_down":
        return DrillDown(int(raw["index"]))
    if kind == "show_image":
        return ShowImage(raw.get("constant"))
    if kind == "back":
        return Back()
    if kind == "quit":
        return Quit()
    raise ValueError(f"unknown request type: {kind!r}")


@dataclass(frozen=True)
class Choice:
    index: int
    text: str


@dataclass(frozen=True)
class Response:
    text: str
    images: tuple[MediaRef, ...] = ()
    choices: tuple[Choice, ...] = ()
    state_after: str = AWAITING_QUERY
    classification: str | None = None  # set on classify answers only

    def to_json(self) -> dict:
        body: dict = {
            "text": self.text,
            "images": [
                {"constant": ref.constant, "caption": ref.caption} for ref in self.images
            ],
            "choices": [{"index": c.index, "text": c.text} for c in self.choices],
            "state_after": self.state_after,
        }
        if self.classification is not None:
            body["classification"] = self.classification
        return body


class DialogueError(Exception):
    code = "dialogue_error"


class FactLeafReached(DialogueError):
    code = "fact_leaf"

    def __init__(self) -> None:
        super().__init__("this is a basic fact; the drill-down ends here")


class NoSuchChoice(DialogueError):
    code = "no_such_child"

    def __init__(self, index: int, size: int):
        self.index = index
        super().__init__(f"there is no reason {index}; choose between 1 and {size}")


class AtRoot(DialogueError):
    code = "at_root"

    def __init__(self) -> None:
        super().__init__("already at the first explanation; there is nothing to go back to")


class SessionEnded(DialogueError):
    code = "session_ended"

    def __init__(self) -> None:
        super().__init__("the session has ended")


class NoActiveExplanation(DialogueError):
    code = "no_active_explanation"

    def __init__(self) -> None:
        super().__init__("no example has been classified yet")


@dataclass
class DialogueSession:
    """Cursor into an explanatory tree plus navigation history and transcript."""

    model: InducedModel
    kb: KnowledgeBase
    registry: MediaRegistry | None
    templates: TemplateSet
    strings: dict[str, str]
    limits: LearnLimits
    session_id: str
    state: str = AWAITING_QUERY
    tree: ExplanatoryTree | None = None
    cursor: int = 0
    history: list[int] = field(default_factory=list)
    transcript: list[tuple[dict | None, dict]] = field(default_factory=list)

    # -- helpers ----------------------------------------------------------

    def _cursor_node(self) -> explain.ExplanationNode:
        assert self.tree is not None
        return self.tree.node(self.cursor)

    def _choices(self) -> tuple[Choice, ...]:
        if self.state != EXPLORING or self.tree is None:
            return ()
        node = self._cursor_node()
        return tuple(
            Choice(i + 1, verbalize_atom(atom, self.templates))
            for i, atom in enumerate(node.body)
        )

    def _local_response(self, classification: str | None = None) -> Response:
        node = self._cursor_node()
        return Response(
            text=verbalize_clause(node.head, node.body, self.templates),
            choices=self._choices(),
            state_after=self.state,
            classification=classification,
        )

    def _record(self, request: Request, response: Response) -> Response:
        self.transcript.append((request_to_json(request), response.to_json()))
        return response

    def cursor_path(self) -> list[int]:
        return [*self.history, self.cursor] if self.tree is not None else []

    # -- request handling --------------------------------------------------

    def handle(self, request: Request) -> Response:
        if self.state == ENDED:
            raise SessionEnded()
        if isinstance(request, Classify):
            return self._record(request, self._classify(request.atom))
        if isinstance(request, WhatMeans):
            return self._record(request, self._what_means(request.predicate))
        if isinstance(request, Why):
            self._require_tree()
            return self._record(request, self._local_response())
        if isinstance(request, DrillDown):
            return self._record(request, self._drill_down(request.index))
        if isinstance(request, ShowImage):
            return self._record(request, self._show_image(request.constant))
        if isinstance(request, Back):
            return self._record(request, self._back())
        if isinstance(request, Quit):
            self.state = ENDED
            return self._record(
                request, Response(text=self.strings["epilogue"], state_after=ENDED)
            )
        raise TypeError(f"not a request: {request!r}")

    def _require_tree(self) -> None:
        if self.tree is None or self.state != EXPLORING:
            raise NoActiveExplanation()

    def _classify(self, atom: Atom) -> Response:
        try:
            tree = build_tree(atom, self.model, self.kb, self.registry, self.limits)
        except explain.NotEntailedError:
            self.state = AWAITING_QUERY
            self.tree = None
            self.history = []
            sentence = verbalize_atom(atom, self.templates)
            return Response(
                text=self.strings["negative"].format(sentence=sentence),
                state_after=self.state,
                classification="negative",
            )
        self.tree = tree
        self.cursor = tree.root
        self.history = []
        self.state = EXPLORING
        return self._local_response(classification="positive")

    def _what_means(self, predicate: str) -> Response:
        if predicate != self.model.target[0]:
            return Response(
                text=self.strings["no_model_for"].format(predicate=predicate),
                choices=self._choices(),
                state_after=self.state,
            )
        sentences = verbalize_global(global_explanation(self.model), self.templates)
        return Response(
            text="\n".join(sentences),
            choices=self._choices(),
            state_after=self.state,
        )

    def _drill_down(self, index: int) -> Response:
        self._require_tree()
        assert self.tree is not None
        node = self._cursor_node()
        try:
            child = explain.drill_down(self.tree, self.cursor, index)
        except explain.FactLeafError:
            raise FactLeafReached() from None
        except explain.NoSuchChildError:
            raise NoSuchChoice(index, len(node.body)) from None
        self.history.append(self.cursor)
        self.cursor = child.id
        return self._local_response()

    def _show_image(self, constant: str | None) -> Response:
        if constant is None:
            self._require_tree()
            constants = [c.name for c in self._cursor_node().head.constants()]
        else:
            constants = [constant]
        refs: list[MediaRef] = []
        lines: list[str] = []
        for name in constants:
            found = self.registry.lookup(name) if self.registry is not None else ()
            display = self.templates.constant_names.get(name, name)
            if found:
                refs.extend(found)
                lines.append(self.strings["image_caption"].format(name=display))
        if not refs:
            names = ", ".join(
                self.templates.constant_names.get(n, n) for n in constants
            )
            lines.append(self.strings["image_missing"].format(name=names))
        return Response(
            text="\n".join(lines),
            images=tuple(refs),
            choices=self._choices(),
            state_after=self.state,
        )

    def _back(self) -> Response:
        self._require_tree()
        if not self.history:
            raise AtRoot()
        self.cursor = self.history.pop()
        return self._local_response()

    def export_transcript(self) -> str:
        """JSON lines, one request/response pair per line."""
        return "".join(
            json.dumps({"request": req, "response": resp}, ensure_ascii=False) + "\n"
            for req, resp in self.transcript
        )


def open_session(
    model: InducedModel,
    kb: KnowledgeBase,
    registry: MediaRegistry | None,
    templates: TemplateSet,
    strings: dict[str, str] | None = None,
    limits: LearnLimits = LearnLimits(),
) -> DialogueSession:
    """A fresh session whose transcript is seeded with the static introduction."""
    merged = dict(DEFAULT_STRINGS)
    merged.update(strings or {})
    session = DialogueSession(
        model=model,
        kb=kb,
        registry=registry,
        templates=templates,
        strings=merged,
        limits=limits,
        session_id=uuid.uuid4().hex,
    )
    intro = Response(
        text=f"{merged['intro']}\n{merged['advice']}", state_after=AWAITING_QUERY
    )
    session.transcript.append((None, intro.to_json()))
    return session


def replay(
    transcript: list[tuple[dict | None, dict]],
    model: InducedModel,
    kb: KnowledgeBase,
    registry: MediaRegistry | None,
    templates: TemplateSet,
    strings: dict[str, str] | None = None,
    limits: LearnLimits = LearnLimits(),
) -> DialogueSession:
    """Re-run a transcript's requests against a fresh session."""
    session = open_session(model, kb, registry, templates, strings, limits)
    for raw_request, _ in transcript:
        if raw_request is None:
            continue
        session.handle(request_from_json(raw_request))
    return session
