"""Split a C source around its #pragma scop / #pragma endscop markers."""

from __future__ import annotations

import re

from ..errors import MissingMarkers, MultipleRegions

_BEGIN = re.compile(r"^\s*#pragma\s+scop\s*$")
_END = re.compile(r"^\s*#pragma\s+endscop\s*$")


def extract_scop_region(source: str) -> tuple[str, str, str]:
    """Return (prefix, region, suffix); concatenation reproduces the input.

    prefix ends with the begin-marker line, suffix starts at the end-marker
    line, so the region text itself excludes both markers.
    """
    lines = source.splitlines(keepends=True)
    begins = [i for i, ln in enumerate(lines) if _BEGIN.match(ln.rstrip("\n"))]
    ends = [i for i, ln in enumerate(lines) if _END.match(ln.rstrip("\n"))]
    if len(begins) > 1 or len(ends) > 1:
        raise MultipleRegions(f"{len(begins)} begin / {len(ends)} end markers")
    if len(begins) != 1 or len(ends) != 1:
        raise MissingMarkers(f"{len(begins)} begin / {len(ends)} end markers")
    b, e = begins[0], ends[0]
    if e < b:
        raise MissingMarkers("endscop precedes scop")
    prefix = "".join(lines[: b + 1])
    region = "".join(lines[b + 1 : e])
    suffix = "".join(lines[e:])
    return prefix, region, suffix


def replace_scop_region(source: str, new_region: str) -> str:
    prefix, _, suffix = extract_scop_region(source)
    if new_region and not new_region.endswith("\n"):
        new_region += "\n"
    return prefix + new_region + suffix
