"""Pydantic models for the HTTP wire format.

These mirror the JSON schemas shipped in docs/schemas; the dialogue engine's
own dataclasses stay transport-free and are converted here.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ApiError(BaseModel):
    code: str
    message: str
    details: Optional[dict] = None


class SessionCreated(BaseModel):
    session_id: str


class DialogueRequest(BaseModel):
    """Structured dialogue request; ``atom`` crosses the wire as program text."""

    type: Literal[
        "classify", "what_means", "why", "drill_down", "show_image", "back", "quit"
    ]
    atom: Optional[str] = None
    predicate: Optional[str] = None
    index: Optional[int] = None
    constant: Optional[str] = None


class ImageRef(BaseModel):
    constant: str
    url: str
    mime: str
    caption: Optional[str] = None


class ChoiceModel(BaseModel):
    index: int
    text: str


class DialogueResponse(BaseModel):
    text: str
    images: list[ImageRef] = Field(default_factory=list)
    choices: list[ChoiceModel] = Field(default_factory=list)
    state_after: Literal["awaiting_query", "exploring", "ended"]
    classification: Optional[Literal["positive", "negative"]] = None


class AtomModel(BaseModel):
    text: str
    predicate: str
    args: list[dict]


class ClauseModel(BaseModel):
    text: str
    head: AtomModel
    body: list[AtomModel]


class ModelResponse(BaseModel):
    target: str
    clauses: list[ClauseModel]


class TreeNodeModel(BaseModel):
    id: int
    head: AtomModel
    body: list[AtomModel]
    children: list[int]
    depth: int
    images: list[ImageRef] = Field(default_factory=list)


class TreeResponse(BaseModel):
    query: AtomModel
    root: int
    model_clause: str
    nodes: list[TreeNodeModel]
    cursor: int
    path: list[int]


class HealthResponse(BaseModel):
    status: Literal["ok"]
