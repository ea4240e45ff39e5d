"""Coverage-guided selection of test inputs.

The original program is built with branch instrumentation; an input is
retained only when it increases cumulative branch coverage inside the scop
region. The loop stops at 100% coverage or after a saturation run of
consecutive non-improving mutants.
"""

from __future__ import annotations

import gzip
import json
import shutil
import subprocess
from dataclasses import dataclass
from pathlib import Path

from ..errors import CompilerNotFound, CoverageToolUnavailable
from ..rng import Rng
from .compilers import compile_program
from .inputs import MUTATION_KINDS, apply_input, mutate
from .runner import run_binary

COVERAGE_CFLAGS = ("-O0", "--coverage", "-fopenmp")


@dataclass
class CoverageReport:
    branch_total: int
    branch_taken: int

    @property
    def percent(self) -> float:
        if self.branch_total == 0:
            return 100.0
        return 100.0 * self.branch_taken / self.branch_total


def _scop_line_span(source: str) -> tuple[int, int]:
    begin = end = 0
    for n, line in enumerate(source.splitlines(), start=1):
        stripped = line.strip()
        if stripped == "#pragma scop":
            begin = n
        elif stripped == "#pragma endscop":
            end = n
    return begin, end


def _gcov_branches(workdir: Path, source_name: str, gcov: str) -> dict:
    """(line-offset, branch-idx) -> taken?, restricted later by the caller."""
    # compiling straight to a binary names the counters <bin>-<src>.gcda;
    # gcov accepts the data-file path directly
    gcda = sorted(workdir.glob("*.gcda"))
    if not gcda:
        raise CoverageToolUnavailable("no .gcda counters produced")
    proc = subprocess.run(
        [gcov, "--json-format", "--branch-probabilities", gcda[0].name],
        cwd=workdir,
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        raise CoverageToolUnavailable(proc.stderr[:400])
    out = {}
    for blob in workdir.glob("*.gcov.json.gz"):
        doc = json.loads(gzip.decompress(blob.read_bytes()))
        for f in doc.get("files", []):
            if Path(f.get("file", "")).name != source_name:
                continue
            for line in f.get("lines", []):
                for k, br in enumerate(line.get("branches", [])):
                    out[(line["line_number"], k)] = br.get("count", 0) > 0
    if not out and not list(workdir.glob("*.gcov.json.gz")):
        raise CoverageToolUnavailable("gcov produced no JSON output")
    return out


def _branches_for_input(program, test_input, extents, cfg, workdir, gcov):
    src = apply_input(program, test_input, extents)
    build = compile_program(src, workdir, cfg.cc, COVERAGE_CFLAGS, name="covered")
    if not build.ok:
        raise CoverageToolUnavailable(f"instrumented build failed: {build.stderr[:400]}")
    run = run_binary(build.binary, timeout=cfg.original_time_limit,
                     omp_threads=cfg.omp_threads)
    if not run.ok:
        raise CoverageToolUnavailable(f"instrumented run failed on {test_input.id}")
    begin, end = _scop_line_span(src)
    taken = _gcov_branches(workdir, "covered.c", gcov)
    return {
        (line - begin, k): hit
        for (line, k), hit in taken.items()
        if begin < line < end
    }


def coverage_loop(
    program: str,
    seed_inputs,
    extents: dict,
    cfg,
    workdir,
    rng: Rng | None = None,
    saturation: int = 50,
    max_inputs: int = 200,
    gcov: str = "gcov",
    fallback_cap: int = 5,
):
    """Greedy coverage-increasing selection over seeds plus mutants.

    Returns (retained inputs, CoverageReport, degraded flag). When the
    coverage tooling is unusable the first `fallback_cap` seeds are retained
    and the flag is set.
    """
    rng = rng or Rng(0).split("coverage")
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    if shutil.which(gcov) is None:
        return list(seed_inputs)[:fallback_cap], None, True

    retained = []
    covered: dict = {}
    universe: dict = {}
    stale = 0
    count = 0

    def consider(test_input) -> bool:
        nonlocal stale
        sub = workdir / f"cov{len(universe)}_{count}"
        sub.mkdir(exist_ok=True)
        hits = _branches_for_input(program, test_input, extents, cfg, sub, gcov)
        for key, hit in hits.items():
            universe.setdefault(key, False)
            if hit:
                universe[key] = universe[key] or True
        new = [k for k, hit in hits.items() if hit and not covered.get(k)]
        if new or not retained:
            for k in new:
                covered[k] = True
            retained.append(test_input)
            stale = 0
            return True
        stale += 1
        return False

    try:
        seeds = list(seed_inputs)
        for test_input in seeds:
            count += 1
            consider(test_input)
            if _full(covered, universe):
                break
        while not _full(covered, universe) and stale < saturation and count < max_inputs:
            count += 1
            base = rng.choice(retained or seeds)
            kind = MUTATION_KINDS[count % len(MUTATION_KINDS)]
            consider(mutate(base, kind, rng.split(("mutant", count))))
    except (CoverageToolUnavailable, CompilerNotFound):
        return list(seed_inputs)[:fallback_cap], None, True

    total = len(universe)
    taken = sum(1 for k in universe if covered.get(k))
    return retained, CoverageReport(branch_total=total, branch_taken=taken), False


def _full(covered: dict, universe: dict) -> bool:
    return bool(universe) and all(covered.get(k) for k in universe)
