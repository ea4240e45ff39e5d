"""Integrating a generated region back into the original program."""

from __future__ import annotations

import re

from ..scop.markers import extract_scop_region

_FOR_VAR = re.compile(r"\bfor\s*\(\s*(?:int\s+)?([A-Za-z_]\w*)\s*=")
_INT_DECL = re.compile(r"\bint\b([^;(){}]*);")


def _declared_ints(text: str) -> set:
    names: set = set()
    for decl in _INT_DECL.findall(text):
        for part in decl.split(","):
            part = part.split("=")[0].strip().lstrip("*")
            if re.fullmatch(r"[A-Za-z_]\w*", part):
                names.add(part)
    names.update(re.findall(r"\bfor\s*\(\s*int\s+([A-Za-z_]\w*)", text))
    return names


def splice_scop(original: str, generated_region: str) -> str:
    """Replace the region between the markers with generated code; loop
    iterators the program never declares get an int declaration injected
    just above the begin marker. Malformed regions are spliced anyway so the
    compiler produces the diagnostic that feeds the next prompt."""
    prefix, _, suffix = extract_scop_region(original)
    region = generated_region if generated_region.endswith("\n") else generated_region + "\n"
    used = set(_FOR_VAR.findall(region))
    declared = _declared_ints(prefix + region + suffix)
    missing = sorted(used - declared)
    if missing:
        lines = prefix.splitlines(keepends=True)
        decl = f"  int {', '.join(missing)};\n"
        lines.insert(len(lines) - 1, decl)
        prefix = "".join(lines)
    return prefix + region + suffix
