"""Prompt templates pinned byte-for-byte to committed goldens."""

from pathlib import Path

import pytest

from loopsmith.errors import MissingSlot, NoCodeBlock
from loopsmith.llm.prompts import (
    GENERATION_RULES,
    PromptKind,
    extract_code_block,
    find_target_code,
    render_prompt,
)

GOLDENS = Path(__file__).parent / "goldens"

TARGET = "for (i = 0; i < N; i++)\n  A[i] = A[i] + 1;"
ORI1 = "for (i = 0; i < M; i++)\n  B[i] = B[i] * 2;"
OPT1 = "#pragma omp parallel for\nfor (i = 0; i < M; i++)\n  B[i] = B[i] * 2;"
ORI2 = "for (j = 0; j < K; j++)\n  C[j] = C[j] - 1;"
OPT2 = "#pragma omp parallel for\nfor (j = 0; j < K; j++)\n  C[j] = C[j] - 1;"
ORI3 = "for (k = 0; k < L; k++)\n  D[k] = D[k] + 3;"
OPT3 = "#pragma omp parallel for\nfor (k = 0; k < L; k++)\n  D[k] = D[k] + 3;"


def _golden(name):
    return (GOLDENS / name).read_text()


def test_base_prompt_golden():
    got = render_prompt(PromptKind.BASE, {"target_code": TARGET})
    assert got == _golden("prompt_base.txt")


def test_with_demonstration_golden_and_arity():
    got = render_prompt(
        PromptKind.WITH_DEMONSTRATION,
        {
            "demonstrations": [(ORI1, OPT1), (ORI2, OPT2), (ORI3, OPT3)],
            "target_code": TARGET,
        },
    )
    assert got == _golden("prompt_with_demonstration.txt")
    assert got.count("// original code") == 3
    assert got.count("// optimized code") == 3
    assert got.index(OPT3) < got.index(TARGET)  # demos precede the target


def test_compile_feedback_golden():
    got = render_prompt(
        PromptKind.COMPILE_FEEDBACK,
        {
            "last_code": "for (i = 0; i < N; i++)\n  A[i] = A[i] + ;",
            "error": "candidate.c:12:25: error: expected expression before ';' token",
        },
    )
    assert got == _golden("prompt_compile_feedback.txt")


def test_test_rank_feedback_golden():
    got = render_prompt(
        PromptKind.TEST_RANK_FEEDBACK,
        {
            "available": [(2, OPT1), (1, OPT2)],
            "failed": [(3, "for (i = 0; i <= N; i++)\n  A[i] = A[i + 1];")],
            "target_code": TARGET,
            "rank": "2 > 1 > 0",
        },
    )
    assert got == _golden("prompt_test_rank_feedback.txt")


def test_quoted_rule_lines_present_everywhere():
    for name in (
        "prompt_base.txt",
        "prompt_with_demonstration.txt",
        "prompt_compile_feedback.txt",
        "prompt_test_rank_feedback.txt",
    ):
        text = _golden(name)
        assert "Do not define new function." in text
        assert "Put your code in markdown code block." in text
        assert GENERATION_RULES in text


def test_all_failed_falls_back_to_base():
    got = render_prompt(
        PromptKind.TEST_RANK_FEEDBACK,
        {"available": [], "failed": [(1, "x")], "target_code": TARGET, "rank": ""},
    )
    assert got == render_prompt(PromptKind.BASE, {"target_code": TARGET})


def test_missing_slot():
    with pytest.raises(MissingSlot):
        render_prompt(PromptKind.BASE, {})
    with pytest.raises(MissingSlot):
        render_prompt(PromptKind.COMPILE_FEEDBACK, {"last_code": "x"})


def test_extract_code_block_variants():
    assert extract_code_block("text\n```c\nX = 1;\n```\nmore") == "X = 1;\n"
    assert extract_code_block("```\nY\n```") == "Y\n"
    two = "```c\nfirst\n```\n```c\nsecond\n```"
    assert extract_code_block(two) == "first\n"
    with pytest.raises(NoCodeBlock):
        extract_code_block("no fences here")


def test_find_target_code_in_each_kind():
    base = render_prompt(PromptKind.BASE, {"target_code": TARGET})
    assert find_target_code(base) == TARGET
    demo = render_prompt(
        PromptKind.WITH_DEMONSTRATION,
        {"demonstrations": [(ORI1, OPT1)], "target_code": TARGET},
    )
    assert find_target_code(demo) == TARGET
    rank = render_prompt(
        PromptKind.TEST_RANK_FEEDBACK,
        {
            "available": [(1, OPT1)],
            "failed": [],
            "target_code": TARGET,
            "rank": "1 > 0",
        },
    )
    assert find_target_code(rank) == TARGET
