"""Differential testing and SCoP timing.

Every (compile, run) outcome maps to exactly one verdict class:
CE, IA, RE, ET or Pass. Checksum comparison is only the fast filter;
a mismatch triggers the element-wise pass that localizes the first
differing element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import LoopsmithError
from .compilers import DEFAULT_CC, DEFAULT_CFLAGS, compile_program
from .inputs import apply_input
from .runner import parse_output, run_binary

CE, IA, RE, ET, PASS = "CE", "IA", "RE", "ET", "Pass"


@dataclass
class VerifyConfig:
    cc: str = DEFAULT_CC
    cflags: tuple = DEFAULT_CFLAGS
    scop_time_limit: float = 120.0   # per-run SCoP budget
    original_time_limit: float = 600.0
    wall_grace: float = 30.0
    runs: int = 5
    warmup: int = 1
    rel_tol: float = 1e-6
    abs_tol: float = 1e-9
    omp_threads: int = 2


@dataclass
class Verdict:
    klass: str
    detail: str = ""
    scop_time: float | None = None  # present iff klass == Pass

    def __post_init__(self):
        if (self.scop_time is not None) != (self.klass == PASS):
            raise ValueError("scop_time present iff verdict is Pass")

    @property
    def passed(self) -> bool:
        return self.klass == PASS


class OriginalFailed(LoopsmithError):
    """The reference program itself failed; an environment problem, not a
    candidate verdict."""


def _close(a: float, b: float, cfg: VerifyConfig) -> bool:
    if a == b:
        return True  # covers equal infinities, where a - b would be nan
    if math.isnan(a) or math.isnan(b):
        return math.isnan(a) and math.isnan(b)
    if math.isinf(a) or math.isinf(b):
        return False
    return abs(a - b) <= max(cfg.abs_tol, cfg.rel_tol * max(abs(a), abs(b)))


def _first_mismatch(ref, cand, cfg: VerifyConfig):
    for array in sorted(ref):
        got = cand.get(array, {})
        for idx in sorted(ref[array]):
            want = ref[array][idx]
            have = got.get(idx)
            if have is None or not _close(want, have, cfg):
                return array, idx, want, have
    for array in sorted(set(cand) - set(ref)):
        return array, (), None, None
    return None


def differential_test(
    original: str,
    candidate: str,
    inputs,
    extents: dict,
    cfg: VerifyConfig = VerifyConfig(),
    workdir=None,
    cache: dict | None = None,
) -> Verdict:
    """Run both programs on every input; compare checksums then elements."""
    import tempfile

    own = workdir is None
    workdir = workdir or tempfile.mkdtemp(prefix="loopsmith-verify-")
    from pathlib import Path

    workdir = Path(workdir)
    cand_cap = cfg.scop_time_limit + cfg.wall_grace
    try:
        for n, test_input in enumerate(inputs):
            osrc = apply_input(original, test_input, extents)
            csrc = apply_input(candidate, test_input, extents)
            obuild = compile_program(
                osrc, workdir / f"in{n}", cfg.cc, cfg.cflags, name="original", cache=cache
            )
            if not obuild.ok:
                raise OriginalFailed(f"original does not compile: {obuild.stderr[:800]}")
            cbuild = compile_program(
                csrc, workdir / f"in{n}", cfg.cc, cfg.cflags, name="candidate", cache=cache
            )
            if not cbuild.ok:
                return Verdict(CE, cbuild.stderr)

            orun = run_binary(obuild.binary, timeout=cfg.original_time_limit,
                              omp_threads=cfg.omp_threads)
            if not orun.ok:
                raise OriginalFailed(f"original run failed on {test_input.id}")
            crun = run_binary(cbuild.binary, timeout=cand_cap, omp_threads=cfg.omp_threads)
            if crun.timed_out:
                return Verdict(ET, f"wall clock over {cand_cap:.1f}s on {test_input.id}")
            if crun.rc != 0:
                sig = f"signal {-crun.rc}" if crun.rc < 0 else f"exit {crun.rc}"
                return Verdict(RE, f"{sig} on {test_input.id}: {crun.stderr[:400]}")

            oout = parse_output(orun.stdout)
            cout = parse_output(crun.stdout)
            if cout.scop_time is not None and cout.scop_time > cfg.scop_time_limit:
                return Verdict(ET, f"scop_time {cout.scop_time:.3f}s over limit")
            mismatch = [
                arr for arr in oout.checksums
                if arr not in cout.checksums
                or not _close(oout.checksums[arr], cout.checksums[arr], cfg)
            ]
            if mismatch:
                odump = run_binary(obuild.binary, ("dump",), timeout=cfg.original_time_limit,
                                   omp_threads=cfg.omp_threads)
                cdump = run_binary(cbuild.binary, ("dump",), timeout=cand_cap,
                                   omp_threads=cfg.omp_threads)
                if not cdump.ok:
                    return Verdict(RE, f"dump run failed on {test_input.id}")
                where = _first_mismatch(
                    parse_output(odump.stdout).elems, parse_output(cdump.stdout).elems, cfg
                )
                if where is not None:
                    array, idx, want, have = where
                    return Verdict(
                        IA,
                        f"input {test_input.id}: {array}{list(idx)} expected {want} got {have}",
                    )
                # checksum drift inside tolerance at element level: accept

        timing_input = next(iter(inputs), None)
        if timing_input is None:
            return Verdict(PASS, "no inputs", scop_time=0.0)
        csrc = apply_input(candidate, timing_input, extents)
        cbuild = compile_program(csrc, workdir / "in0", cfg.cc, cfg.cflags,
                                 name="candidate", cache=cache)
        mean = time_scop(cbuild.binary, cfg)
        if mean is None:
            return Verdict(ET, "timing run over the scop limit")
        return Verdict(PASS, "all inputs agree", scop_time=mean)
    finally:
        if own:
            import shutil

            shutil.rmtree(workdir, ignore_errors=True)


def time_scop(binary, cfg: VerifyConfig = VerifyConfig(),
              runs: int | None = None, warmup: int | None = None) -> float | None:
    """Mean SCoP wall time over `runs` executions after `warmup`; None when
    any run breaks the per-run limit (an ET outcome for the caller)."""
    runs = cfg.runs if runs is None else runs
    warmup = cfg.warmup if warmup is None else warmup
    cap = cfg.scop_time_limit + cfg.wall_grace
    times = []
    for n in range(warmup + runs):
        result = run_binary(binary, timeout=cap, omp_threads=cfg.omp_threads)
        if result.timed_out or result.rc != 0:
            return None
        out = parse_output(result.stdout)
        if out.scop_time is None or out.scop_time > cfg.scop_time_limit:
            return None
        if n >= warmup:
            times.append(out.scop_time)
    return sum(times) / len(times)
