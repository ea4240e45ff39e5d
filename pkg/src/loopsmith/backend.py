"""Optimized-version producer for dataset examples.

Backends are pluggable: an external polyhedral source-to-source tool run as
a subprocess, or the builtin conservative transformer which only acts when
legality is certain: an OpenMP parallel pragma on outer loops free of
loop-carried dependences, and 32x rectangular tiling on perfect nests of
depth >= 2 whose dependences are all loop-independent. Anything else passes
through unchanged. Dataset admission re-verifies every output differentially.
"""

from __future__ import annotations

import re
import shutil
import subprocess
from dataclasses import dataclass

from .errors import BackendUnavailable
from .scop.deps import compute_dependences
from .scop.markers import extract_scop_region, replace_scop_region
from .scop.model import Scop
from .scop.parser import parse_scop
from .scop.render import render_region
from .sidecar import extract_defines

TILE = 32

EXTERNAL_DEFAULT_FLAGS = ("-q", "--tile", "--parallel", "--nocloogbacktrack")


@dataclass
class BackendConfig:
    kind: str = "builtin"  # "builtin" | "external"
    external_path: str = "pluto"
    external_flags: tuple = EXTERNAL_DEFAULT_FLAGS
    timeout: float = 120.0


def _nests(scop: Scop) -> list:
    """Statements grouped by their top-level schedule position."""
    groups: dict[int, list] = {}
    for stmt in scop.statements:
        groups.setdefault(stmt.schedule.constants[0], []).append(stmt)
    return [groups[key] for key in sorted(groups)]


def _nest_deps(deps, stmt_ids) -> list:
    ids = set(stmt_ids)
    return [d for d in deps if d.source_stmt in ids and d.target_stmt in ids]


def _is_perfect(nest) -> bool:
    iters = nest[0].iterators
    if len(iters) < 2:
        return False
    for stmt in nest:
        if stmt.iterators != iters or stmt.guards or stmt.call is not None:
            return False
        if any(c != 0 for c in stmt.schedule.constants[1:-1]):
            return False
        if stmt.schedule.constants[0] != nest[0].schedule.constants[0]:
            return False
    return True


def _render_nest(nest, indent="  ") -> str:
    base = min(s.schedule.constants[0] for s in nest)
    shifted = []
    for s in nest:
        entries = list(s.schedule.entries)
        entries[0] -= base
        shifted.append(
            type(s)(
                id=s.id, schedule=type(s.schedule)(tuple(entries)), loops=s.loops,
                write=s.write, reads=s.reads, op=s.op, rhs=s.rhs,
                guards=s.guards, call=s.call,
            )
        )
    return render_region(Scop(statements=tuple(shifted)), indent=indent)


def _render_tiled(nest, parallel: bool, indent="  ") -> str:
    """Rectangular 32-tiling of a perfect nest, paper-listing shape."""
    from .scop.render import render_statement

    loops = nest[0].loops
    lines = []
    if parallel:
        lines.append("#pragma omp parallel for")
    pad = ""
    for d, loop in enumerate(loops):
        t = f"t{d + 1}"
        lines.append(
            f"{pad}for ({t} = {loop.lower.render()}; {t} < {loop.upper.render()}; "
            f"{t} += {TILE})"
        )
        pad += indent
    for d, loop in enumerate(loops):
        t = f"t{d + 1}"
        up = loop.upper.render()
        lines.append(
            f"{pad}for ({loop.name} = {t}; "
            f"{loop.name} < ({t} + {TILE} < {up} ? {t} + {TILE} : {up}); "
            f"{loop.name}++)"
        )
        pad += indent
    for stmt in sorted(nest, key=lambda s: s.schedule.sort_key()):
        lines.append(f"{pad}{render_statement(stmt)}")
    return "\n".join(lines) + "\n"


def optimize_scop_region(scop: Scop, deps) -> tuple[str, list]:
    """Transformed region text plus a log of applied transforms per nest."""
    parts = []
    applied = []
    for nest in _nests(scop):
        ndeps = _nest_deps(deps, [s.id for s in nest])
        parallel_ok = all(d.carried != 0 for d in ndeps)
        tile_ok = _is_perfect(nest) and all(d.carried is None for d in ndeps)
        if tile_ok:
            parts.append(_render_tiled(nest, parallel=True))
            applied.append("tile+parallel")
        elif parallel_ok:
            parts.append("#pragma omp parallel for\n" + _render_nest(nest))
            applied.append("parallel")
        else:
            parts.append(_render_nest(nest))
            applied.append("none")
    return "".join(parts), applied


def optimize_example(program: str, config: BackendConfig = BackendConfig()) -> tuple[str, str]:
    """Return (optimized program, backend tag). External failures fall back
    to the builtin transformer, flagged in the tag."""
    if config.kind == "external":
        try:
            return _run_external(program, config), "external"
        except BackendUnavailable:
            optimized, _ = _builtin(program)
            return optimized, "builtin-fallback"
    optimized, applied = _builtin(program)
    tag = "builtin" if any(a != "none" for a in applied) else "builtin-noop"
    return optimized, tag


def _builtin(program: str) -> tuple[str, list]:
    params = extract_defines(program)
    _, region, _ = extract_scop_region(program)
    scop = parse_scop(region, params)
    deps = compute_dependences(scop, collapse=True)
    new_region, applied = optimize_scop_region(scop, deps.dependences)
    if all(a == "none" for a in applied):
        return program, applied
    from .pipeline.splice import splice_scop

    return splice_scop(program, new_region), applied


def _run_external(program: str, config: BackendConfig) -> str:
    import tempfile
    from pathlib import Path

    tool = shutil.which(config.external_path)
    if tool is None:
        raise BackendUnavailable(f"{config.external_path} not on PATH")
    with tempfile.TemporaryDirectory(prefix="loopsmith-ext-") as tmp:
        src = Path(tmp) / "example.c"
        src.write_text(program)
        try:
            proc = subprocess.run(
                [tool, *config.external_flags, str(src)],
                cwd=tmp,
                capture_output=True,
                text=True,
                timeout=config.timeout,
            )
        except subprocess.TimeoutExpired as exc:
            raise BackendUnavailable("external optimizer timed out") from exc
        if proc.returncode != 0:
            raise BackendUnavailable(proc.stderr[:2000])
        outputs = [p for p in Path(tmp).iterdir() if p.suffix == ".c" and p != src]
        if not outputs:
            raise BackendUnavailable("external optimizer produced no output file")
        return outputs[0].read_text()


_FOR_VAR = re.compile(r"\bfor\s*\(\s*(?:int\s+)?([A-Za-z_]\w*)\s*=")
_ARRAY_NAME = re.compile(r"\b([A-Za-z_]\w*)\s*\[")


def optimize_region_conservative(region: str) -> str:
    """Value-free transform used by the canned stub provider: only acts when
    the region is structurally free of dependences (no array has a write
    plus any other access), which is legal under any parameter values."""
    iterators = set(_FOR_VAR.findall(region))
    arrays = set(_ARRAY_NAME.findall(region))
    idents = set(re.findall(r"\b[A-Za-z_]\w*\b", region))
    params = {
        name: 1
        for name in idents - iterators - arrays - {"for", "if", "int", "else"}
    }
    try:
        scop = parse_scop(region, params)
    except Exception:
        return region
    writes: dict[str, int] = {}
    touches: dict[str, int] = {}
    for stmt in scop.statements:
        for ref, access in stmt.iter_accesses():
            touches[access.array_name] = touches.get(access.array_name, 0) + 1
            if ref[0] == "w":
                writes[access.array_name] = writes.get(access.array_name, 0) + 1
    conflict = any(writes.get(n, 0) >= 1 and touches[n] >= 2 for n in touches)
    if conflict or not scop.statements:
        return region
    new_region, applied = optimize_scop_region(scop, [])
    return new_region if any(a != "none" for a in applied) else region
