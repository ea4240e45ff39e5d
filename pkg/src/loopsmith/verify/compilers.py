"""Compiler invocation with stable, relative diagnostics."""

from __future__ import annotations

import shutil
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import CompilerNotFound

DEFAULT_CC = "gcc"
DEFAULT_CFLAGS = ("-O3", "-fopenmp")


@dataclass
class CompileResult:
    ok: bool
    binary: str | None
    stderr: str
    command: list


def compile_program(
    source: str,
    workdir,
    cc: str = DEFAULT_CC,
    cflags=DEFAULT_CFLAGS,
    name: str = "candidate",
    cache: dict | None = None,
) -> CompileResult:
    """Compile source written as <name>.c inside workdir; the compiler runs
    with a relative path so diagnostics stay byte-stable across machines."""
    if shutil.which(cc) is None:
        raise CompilerNotFound(f"compiler {cc!r} not found on PATH")
    key = (hash(source), cc, tuple(cflags), name)
    if cache is not None and key in cache:
        return cache[key]
    work = Path(workdir)
    work.mkdir(parents=True, exist_ok=True)
    src = work / f"{name}.c"
    src.write_text(source)
    out = work / f"{name}.bin"
    cmd = [cc, *cflags, f"{name}.c", "-o", f"{name}.bin", "-lm"]
    proc = subprocess.run(cmd, cwd=work, capture_output=True, text=True)
    result = CompileResult(
        ok=proc.returncode == 0,
        binary=str(out) if proc.returncode == 0 else None,
        stderr=proc.stderr,
        command=cmd,
    )
    if cache is not None:
        cache[key] = result
    return result
