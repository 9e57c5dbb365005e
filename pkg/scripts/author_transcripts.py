#!/usr/bin/env python3
"""Regenerate the shipped replay transcripts from the authored response banks.

Run from the repo root after changing anything that affects prompt content
(templates, manifests, catalog instructions, authored responses):

    python3 scripts/author_transcripts.py
"""

from pathlib import Path

from genem.authoring import write_all_transcripts

OUT = Path(__file__).resolve().parent.parent / "src" / "genem" / "data" / "transcripts"

if __name__ == "__main__":
    for path in write_all_transcripts(OUT):
        print(f"wrote {path}")
