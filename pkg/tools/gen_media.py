#!/usr/bin/env python3
"""Regenerate the bundled placeholder instance images (dev tool, needs Pillow)."""
from __future__ import annotations

from pathlib import Path

from PIL import Image, ImageDraw

INSTANCES = {
    "bobby": ("#c8b08a", "rabbit"),
    "fluffy": ("#e8e3d5", "rabbit"),
    "bella": ("#d2622a", "fox"),
    "samson": ("#7a5230", "dog"),
    "argo": ("#444444", "dog"),
    "tipsie": ("#9a9a9a", "mouse"),
    "dandelion": ("#f4c430", "flower"),
    "clover": ("#3a7d44", "flower"),
    "parsley": ("#2e8b57", "herb"),
    "rosemary": ("#6f8f6b", "herb"),
}

SIZE = 96


def main() -> None:
    out_dir = Path(__file__).resolve().parents[1] / "src" / "explikit" / "data" / "media"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, (color, concept) in INSTANCES.items():
        img = Image.new("RGB", (SIZE, SIZE), color)
        draw = ImageDraw.Draw(img)
        draw.rectangle([4, 4, SIZE - 5, SIZE - 5], outline="white", width=2)
        draw.text((10, 34), name, fill="white")
        draw.text((10, 52), f"({concept})", fill="white")
        img.save(out_dir / f"{name}.png", optimize=True)
        print(f"wrote {out_dir / f'{name}.png'}")


if __name__ == "__main__":
    main()
