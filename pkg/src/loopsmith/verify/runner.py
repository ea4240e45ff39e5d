"""Binary execution and output parsing for the verification convention."""

from __future__ import annotations

import os
import subprocess
import time
from dataclasses import dataclass, field


@dataclass
class RunResult:
    rc: int
    stdout: str
    stderr: str
    wall: float
    timed_out: bool

    @property
    def ok(self) -> bool:
        return self.rc == 0 and not self.timed_out


def run_binary(path, args=(), timeout: float = 600.0, omp_threads: int = 2) -> RunResult:
    env = dict(os.environ)
    env["OMP_NUM_THREADS"] = str(omp_threads)
    start = time.monotonic()
    try:
        proc = subprocess.run(
            [str(path), *args],
            capture_output=True,
            text=True,
            timeout=timeout,
            env=env,
        )
        return RunResult(
            rc=proc.returncode,
            stdout=proc.stdout,
            stderr=proc.stderr,
            wall=time.monotonic() - start,
            timed_out=False,
        )
    except subprocess.TimeoutExpired as exc:
        return RunResult(
            rc=-1,
            stdout=(exc.stdout or b"").decode() if isinstance(exc.stdout, bytes) else (exc.stdout or ""),
            stderr=(exc.stderr or b"").decode() if isinstance(exc.stderr, bytes) else (exc.stderr or ""),
            wall=time.monotonic() - start,
            timed_out=True,
        )


@dataclass
class ProgramOutput:
    checksums: dict = field(default_factory=dict)
    scop_time: float | None = None
    elems: dict = field(default_factory=dict)  # array -> {index tuple: value}


def parse_output(stdout: str) -> ProgramOutput:
    out = ProgramOutput()
    for line in stdout.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "checksum" and len(parts) == 3:
            out.checksums[parts[1]] = float(parts[2])
        elif parts[0] == "scop_time" and len(parts) == 2:
            out.scop_time = float(parts[1])
        elif parts[0] == "elem" and len(parts) >= 4:
            idx = tuple(int(v) for v in parts[2:-1])
            out.elems.setdefault(parts[1], {})[idx] = float(parts[-1])
    return out
