"""Four-step feedback-driven generation.

Step 1: retrieve demonstrations, generate K candidates, compile.
Step 2: regenerate compile failures once with the diagnostics, test every
        compiling candidate, time and rank the passing ones.
Step 3: feed testing results and the performance ranking back and generate
        a fresh round of K candidates.
Step 4: one more compile-feedback pass, test, time; the fastest passing
        candidate across all steps is the output, or the original unchanged
        (NoImprovement) when nothing passes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import LoopsmithError, NoCodeBlock, ProviderTimeout
from ..llm.prompts import PromptKind, extract_code_block, render_prompt
from ..llm.providers import ChatTranscript, complete, transcript_hash
from ..retrieval.index import pick_demonstrations, retrieve_top_n
from ..retrieval.scoring import RetrievalConfig
from ..retrieval.target import prepare_target
from ..rng import Rng
from ..verify.compilers import compile_program
from ..verify.coverage import coverage_loop
from ..verify.difftest import CE, PASS, Verdict, VerifyConfig, differential_test, time_scop
from ..verify.inputs import apply_input, builtin_seed_inputs, parse_array_decls
from .splice import splice_scop


@dataclass
class PipelineConfig:
    k: int = 7
    seed: int = 0
    model: str = "default"
    timing: str = "wall"  # "wall" | "virtual" (deterministic, for replay tests)
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    coverage_saturation: int = 50


@dataclass
class GenerationAttempt:
    id: int
    step: int
    prompt_kind: str
    demo_ids: list = field(default_factory=list)
    prompt_sha: str = ""
    region: str | None = None  # generated scop region text
    program: str | None = None
    verdict: Verdict | None = None
    rank: int | None = None

    @property
    def passed(self) -> bool:
        return self.verdict is not None and self.verdict.passed


@dataclass
class PipelineResult:
    final_program: str
    report: dict
    attempts: list
    no_improvement: bool


def _virtual_time(text: str) -> float:
    digest = hashlib.sha256(text.encode()).hexdigest()
    return 0.5 + (int(digest[:12], 16) % 10 ** 6) / 2e6


def rank_performance(passing) -> tuple[list, str]:
    """Ascending by mean scop time, ties by attempt id; E.4 rank string."""
    if not passing:
        raise ValueError("rank_performance needs at least one passing attempt")
    ordered = sorted(passing, key=lambda a: (a.verdict.scop_time, a.id))
    for n, att in enumerate(ordered):
        att.rank = n + 1
    return ordered, " > ".join(str(a.id) for a in ordered)


def _rank_with_original(passing, original_time: float) -> str:
    entries = [(a.verdict.scop_time, a.id) for a in passing]
    entries.append((original_time, 0))
    entries.sort()
    return " > ".join(str(i) for _, i in entries)


class _Runner:
    def __init__(self, program, index, provider, cfg: PipelineConfig, workdir):
        self.program = program
        self.index = index
        self.provider = provider
        self.cfg = cfg
        self.workdir = Path(workdir)
        self.workdir.mkdir(parents=True, exist_ok=True)
        self.attempts: list[GenerationAttempt] = []
        self.cache: dict = {}
        self.transcripts: dict[int, ChatTranscript] = {}

    def next_id(self) -> int:
        return len(self.attempts) + 1

    def generate(self, step, kind, prompt, transcript, demo_ids=()) -> GenerationAttempt:
        att = GenerationAttempt(
            id=self.next_id(),
            step=step,
            prompt_kind=kind.value,
            demo_ids=list(demo_ids),
        )
        self.attempts.append(att)
        transcript.add("user", prompt)
        att.prompt_sha = transcript_hash(transcript)
        self.transcripts[att.id] = transcript
        try:
            response = complete(self.provider, transcript)
            att.region = extract_code_block(response)
        except (NoCodeBlock, ProviderTimeout) as exc:
            att.verdict = Verdict(CE, f"no usable candidate: {exc}")
            return att
        att.program = splice_scop(self.program, att.region)
        build = compile_program(
            att.program,
            self.workdir / f"attempt{att.id:02d}",
            self.cfg.verify.cc,
            self.cfg.verify.cflags,
            cache=self.cache,
        )
        if not build.ok:
            att.verdict = Verdict(CE, build.stderr)
        return att

    def regenerate_ce(self, attempts, step) -> list:
        fresh = []
        for att in attempts:
            if att.verdict is None or att.verdict.klass != CE or att.region is None:
                continue
            transcript = self.transcripts[att.id]
            prompt = render_prompt(
                PromptKind.COMPILE_FEEDBACK,
                {"last_code": att.region, "error": att.verdict.detail},
            )
            fresh.append(
                self.generate(step, PromptKind.COMPILE_FEEDBACK, prompt, transcript)
            )
        return fresh

    def test_round(self, attempts, inputs, extents):
        for att in attempts:
            if att.verdict is not None or att.program is None:
                continue
            att.verdict = differential_test(
                self.program,
                att.program,
                inputs,
                extents,
                self.cfg.verify,
                workdir=self.workdir / f"test{att.id:02d}",
                cache=self.cache,
            )
            if att.passed and self.cfg.timing == "virtual":
                att.verdict = Verdict(PASS, att.verdict.detail,
                                      scop_time=_virtual_time(att.program))


def run_pipeline(program: str, index, provider, cfg: PipelineConfig,
                 workdir) -> PipelineResult:
    runner = _Runner(program, index, provider, cfg, workdir)
    target = prepare_target(program)
    extents = parse_array_decls(program)
    seeds = builtin_seed_inputs(extents)
    retained, coverage, coverage_degraded = coverage_loop(
        program,
        seeds,
        extents,
        cfg.verify,
        runner.workdir / "coverage",
        rng=Rng(cfg.seed).split("coverage"),
        saturation=cfg.coverage_saturation,
    )

    result = retrieve_top_n(target.features, target.tokens, index, cfg.retrieval)

    # Step 1: demonstration prompting, K candidates, compile
    step1 = []
    for c in range(cfg.k):
        demo_rng = Rng(cfg.seed).split(("demos", c))
        demos = pick_demonstrations(result, cfg.retrieval, demo_rng)
        prompt = render_prompt(
            PromptKind.WITH_DEMONSTRATION,
            {
                "demonstrations": [
                    (r.example_region, r.optimized_region) for r in demos
                ],
                "target_code": target.region,
            },
        )
        transcript = ChatTranscript(model=cfg.model)
        step1.append(
            runner.generate(1, PromptKind.WITH_DEMONSTRATION, prompt, transcript,
                            demo_ids=[r.id for r in demos])
        )

    # Step 2: one CE-feedback regeneration, then test + rank
    step2 = runner.regenerate_ce(step1, step=2)
    runner.test_round(step1 + step2, retained, extents)
    passing = [a for a in runner.attempts if a.passed]
    if passing:
        rank_performance(passing)

    original_time = (
        _virtual_time(program)
        if cfg.timing == "virtual"
        else _time_original(runner, retained, extents)
    )

    # Step 3: testing + ranking feedback, a fresh round of K candidates
    available = [(a.id, a.region) for a in sorted(passing, key=lambda a: a.rank)]
    failed = [
        (a.id, a.region)
        for a in runner.attempts
        if a.region is not None and not a.passed
    ]
    rank_string = _rank_with_original(passing, original_time) if passing else ""
    step3 = []
    for _ in range(cfg.k):
        prompt = render_prompt(
            PromptKind.TEST_RANK_FEEDBACK,
            {
                "available": available,
                "failed": failed,
                "target_code": target.region,
                "rank": rank_string,
            },
        )
        kind = PromptKind.TEST_RANK_FEEDBACK if available else PromptKind.BASE
        step3.append(
            runner.generate(3, kind, prompt, ChatTranscript(model=cfg.model))
        )

    # Step 4: final compile-feedback pass, test, select the fastest
    step4 = runner.regenerate_ce(step3, step=4)
    runner.test_round(step3 + step4, retained, extents)
    passing = [a for a in runner.attempts if a.passed]
    if passing:
        rank_performance(passing)

    chosen = min(passing, key=lambda a: (a.verdict.scop_time, a.id)) if passing else None
    no_improvement = chosen is None
    final_program = program if no_improvement else chosen.program

    report = {
        "target_sha": hashlib.sha256(program.encode()).hexdigest(),
        "config": {
            "k": cfg.k,
            "demos": cfg.retrieval.demos,
            "top_n": cfg.retrieval.top_n,
            "seed": cfg.seed,
            "timing": cfg.timing,
            "scop_time_limit": cfg.verify.scop_time_limit,
            "model": cfg.model,
        },
        "coverage": {
            "retained_inputs": [t.id for t in retained],
            "degraded": coverage_degraded,
            "branch_total": coverage.branch_total if coverage else None,
            "branch_taken": coverage.branch_taken if coverage else None,
        },
        "original_time": original_time,
        "attempts": [
            {
                "id": a.id,
                "step": a.step,
                "prompt_kind": a.prompt_kind,
                "demo_ids": a.demo_ids,
                "prompt_sha": a.prompt_sha,
                "code_sha": hashlib.sha256(a.region.encode()).hexdigest() if a.region else None,
                "verdict": a.verdict.klass if a.verdict else None,
                "detail": (a.verdict.detail[:300] if a.verdict else ""),
                "scop_time": a.verdict.scop_time if a.verdict else None,
                "rank": a.rank if a.passed else None,
            }
            for a in runner.attempts
        ],
        "final": {
            "attempt_id": chosen.id if chosen else None,
            "scop_time": chosen.verdict.scop_time if chosen else None,
            "passed": chosen is not None,
        },
        "no_improvement": no_improvement,
    }
    return PipelineResult(
        final_program=final_program,
        report=report,
        attempts=runner.attempts,
        no_improvement=no_improvement,
    )


def _time_original(runner: _Runner, inputs, extents) -> float:
    cfg = runner.cfg.verify
    src = apply_input(runner.program, inputs[0], extents) if inputs else runner.program
    build = compile_program(src, runner.workdir / "original", cfg.cc, cfg.cflags,
                            name="original", cache=runner.cache)
    if not build.ok:
        raise LoopsmithError("original program does not compile")
    mean = time_scop(build.binary, cfg)
    if mean is None:
        raise LoopsmithError("original program breaks the scop time limit")
    return mean
