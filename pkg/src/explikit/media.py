"""Registry mapping constants to image assets for visual explanations.

The manifest is a JSON array of ``{constant, path, caption}`` entries; paths
are relative to the media root and every referenced file must exist at load
time. Lookup of an unknown constant returns an empty list, not an error.
"""
from __future__ import annotations

import json
import mimetypes
from dataclasses import dataclass, field
from pathlib import Path


class MediaError(Exception):
    pass


class ManifestSyntaxError(MediaError):
    def __init__(self, detail: str):
        super().__init__(f"malformed media manifest: {detail}")


class MissingFileError(MediaError):
    def __init__(self, constant: str, path: str):
        self.constant = constant
        self.path = path
        super().__init__(f"media file for {constant!r} does not exist: {path}")


@dataclass(frozen=True)
class MediaRef:
    constant: str
    path: Path  # absolute, resolved under the media root
    mime: str
    caption: str | None = None


@dataclass(frozen=True)
class MediaRegistry:
    root: Path
    refs: dict[str, tuple[MediaRef, ...]] = field(default_factory=dict)

    def lookup(self, constant: str) -> tuple[MediaRef, ...]:
        return self.refs.get(constant, ())

    def constants(self) -> tuple[str, ...]:
        return tuple(self.refs)

    def __len__(self) -> int:
        return sum(len(v) for v in self.refs.values())


def load_manifest(manifest_path: Path, media_root: Path) -> MediaRegistry:
    """Load and validate a manifest; rejects entries escaping the media root."""
    try:
        raw = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestSyntaxError(str(exc)) from exc
    if not isinstance(raw, list):
        raise ManifestSyntaxError("top level must be a JSON array")
    root = media_root.resolve()
    refs: dict[str, list[MediaRef]] = {}
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict) or "constant" not in entry or "path" not in entry:
            raise ManifestSyntaxError(f"entry {i} needs 'constant' and 'path'")
        constant = entry["constant"]
        path = (root / entry["path"]).resolve()
        if not path.is_relative_to(root):
            raise ManifestSyntaxError(f"entry {i} escapes the media root: {entry['path']}")
        if not path.is_file():
            raise MissingFileError(constant, entry["path"])
        mime, _ = mimetypes.guess_type(path.name)
        refs.setdefault(constant, []).append(
            MediaRef(
                constant=constant,
                path=path,
                mime=mime or "application/octet-stream",
                caption=entry.get("caption"),
            )
        )
    return MediaRegistry(root=root, refs={k: tuple(v) for k, v in refs.items()})
