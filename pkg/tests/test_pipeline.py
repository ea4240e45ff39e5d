"""Four-step pipeline: stub run, CE regeneration, ranking, failure paths."""

import json

import pytest

from loopsmith.llm.providers import CannedTransformProvider, ReplayProvider
from loopsmith.pipeline.run import (
    GenerationAttempt,
    PipelineConfig,
    rank_performance,
    run_pipeline,
)
from loopsmith.retrieval.index import build_index
from loopsmith.retrieval.scoring import RetrievalConfig
from loopsmith.scop.markers import extract_scop_region
from loopsmith.synth.core import synthesize
from loopsmith.verify.difftest import PASS, Verdict, VerifyConfig

from conftest import TEST_SIZES, make_record, quick_verify_config, require_cc


def _quick_cfg(k=2, seed=1):
    return PipelineConfig(
        k=k,
        seed=seed,
        timing="virtual",
        retrieval=RetrievalConfig(top_n=4, demos=2),
        verify=VerifyConfig(scop_time_limit=10.0, wall_grace=8.0, runs=1, warmup=0),
        coverage_saturation=2,
    )


@pytest.fixture(scope="module")
def tiny_index():
    records = [make_record(seed) for seed in range(5)]
    return build_index(records, RetrievalConfig(top_n=4, demos=2), validate=False)


def _target_program():
    return synthesize(40, size_spec=TEST_SIZES).program


def test_stub_pipeline_completes_and_passes(tmp_path, tiny_index):
    require_cc()
    result = run_pipeline(
        _target_program(), tiny_index, CannedTransformProvider(), _quick_cfg(), tmp_path
    )
    assert not result.no_improvement
    assert result.report["final"]["passed"]
    steps = {a["step"] for a in result.report["attempts"]}
    assert 1 in steps and 3 in steps
    # monotone selection: the chosen candidate is fastest among passing
    passing = [a for a in result.report["attempts"] if a["verdict"] == "Pass"]
    chosen = result.report["final"]
    assert chosen["scop_time"] == min(a["scop_time"] for a in passing)


def test_ce_fixture_converts_to_pass_in_step_two(tmp_path, tiny_index):
    require_cc()
    target = _target_program()
    region = extract_scop_region(target)[1]
    broken = "for (q1 = 0; q1 < S1; q1++ {\n  ;\n"  # missing paren: guaranteed CE
    fixed = region
    fixture = [
        {"response": f"```c\n{broken}\n```"},   # step 1, candidate 1
        {"response": f"```c\n{region}\n```"},   # step 1, candidate 2
        {"response": f"```c\n{fixed}\n```"},    # step 2 regeneration of candidate 1
        {"response": f"```c\n{region}\n```"},   # step 3, candidate 1
        {"response": f"```c\n{region}\n```"},   # step 3, candidate 2
    ]
    result = run_pipeline(
        target, tiny_index, ReplayProvider(fixture), _quick_cfg(), tmp_path
    )
    attempts = result.report["attempts"]
    first = attempts[0]
    assert first["step"] == 1 and first["verdict"] == "CE"
    regen = [a for a in attempts if a["step"] == 2]
    assert len(regen) == 1
    assert regen[0]["prompt_kind"] == "compile_feedback"
    assert regen[0]["verdict"] == "Pass"
    assert result.report["final"]["passed"]


def test_all_failing_candidates_return_original(tmp_path, tiny_index):
    require_cc()
    target = _target_program()
    wrong = extract_scop_region(target)[1].replace("=", "= 1 + ", 1)
    fixture = [{"response": f"```c\n{wrong}\n```"}] * 8
    result = run_pipeline(
        target, tiny_index, ReplayProvider(fixture), _quick_cfg(), tmp_path
    )
    assert result.no_improvement
    assert result.final_program == target
    verdicts = {a["verdict"] for a in result.report["attempts"]}
    assert "Pass" not in verdicts
    assert result.report["final"]["attempt_id"] is None


def test_pipeline_deterministic_under_replay(tmp_path, tiny_index):
    require_cc()
    target = _target_program()
    region = extract_scop_region(target)[1]
    fixture = [{"response": f"```c\n{region}\n```"}] * 4
    reports = []
    for rep in range(2):
        result = run_pipeline(
            target, tiny_index, ReplayProvider(fixture), _quick_cfg(), tmp_path / str(rep)
        )
        reports.append(json.dumps(result.report, sort_keys=True))
    assert reports[0] == reports[1]


def _passing(attempt_id, t):
    att = GenerationAttempt(id=attempt_id, step=2, prompt_kind="x")
    att.verdict = Verdict(PASS, "", scop_time=t)
    return att


def test_rank_performance_order_and_string():
    ordered, rank = rank_performance(
        [_passing(1, 2.0), _passing(2, 1.0), _passing(3, 3.0)]
    )
    assert [a.id for a in ordered] == [2, 1, 3]
    assert rank == "2 > 1 > 3"
    assert [a.rank for a in ordered] == [1, 2, 3]


def test_rank_single_and_ties():
    ordered, rank = rank_performance([_passing(7, 1.5)])
    assert rank == "7"
    ordered, rank = rank_performance([_passing(5, 1.0), _passing(2, 1.0)])
    assert rank == "2 > 5"  # equal times: lower id first
