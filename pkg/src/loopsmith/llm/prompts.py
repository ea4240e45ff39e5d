"""Prompt rendering for the four generation stages.

Rendering is a pure byte-stable function; golden-file tests pin each
template. The five generation rules are appended to every prompt kind.
"""

from __future__ import annotations

import re
from enum import Enum

from ..errors import MissingSlot, NoCodeBlock


class PromptKind(Enum):
    BASE = "base"
    WITH_DEMONSTRATION = "with_demonstration"
    COMPILE_FEEDBACK = "compile_feedback"
    TEST_RANK_FEEDBACK = "test_rank_feedback"


GENERATION_RULES = """Here are some generation rules:
1. Provide one optimized code.
2. Do not include the original C program in your response.
3. Do not define new function.
4. Existed variables do not need to be redefined. If you generate new variable for computing, please use the double type.
5. Put your code in markdown code block."""


def _need(slots: dict, *names):
    missing = [n for n in names if n not in slots]
    if missing:
        raise MissingSlot(", ".join(missing))
    return [slots[n] for n in names]


def _base(slots: dict) -> str:
    (target,) = _need(slots, "target_code")
    return (
        "As a compiler, given the C program below, improve its performance "
        "using meaning-preserving loop transformation methods:\n\n"
        f"{target}\n\n"
        f"{GENERATION_RULES}"
    )


def _with_demonstration(slots: dict) -> str:
    demos, target = _need(slots, "demonstrations", "target_code")
    if not demos:
        raise MissingSlot("demonstrations")
    blocks = []
    for ori, opt in demos:
        blocks.append(
            "// original code\n\n"
            f"{ori}\n\n"
            "// optimized code\n\n"
            f"{opt}\n"
        )
    return (
        "\n".join(blocks)
        + "\nPlease analyze what meaning-preserving loop transformation methods "
        "are used in above examples, and tell me what you learn.\n\n"
        "please use appropriate methods you learn from examples to improve its "
        "performance:\n\n"
        f"{target}\n\n"
        f"{GENERATION_RULES}"
    )


def _compile_feedback(slots: dict) -> str:
    last_code, error = _need(slots, "last_code", "error")
    return (
        "This optimized version:\n\n"
        f"{last_code}\n\n"
        "did a wrong transformation from the source code, resulting in a "
        "compilation error.\n"
        "This is the compiler error message:\n\n"
        f"{error}\n\n"
        "Please check the optimized code and regenerate it.\n\n"
        f"{GENERATION_RULES}"
    )


def _test_rank_feedback(slots: dict) -> str:
    available, failed, target, rank = _need(
        slots, "available", "failed", "target_code", "rank"
    )
    if not available:
        # every previous candidate failed: revert to the base prompt
        return _base({"target_code": target})
    blocks = []
    for idx, code in available:
        blocks.append(f"Available Example [{idx}]:\n\n{code}\n")
    for idx, code in failed:
        blocks.append(f"Failed Example [{idx}]:\n\n{code}\n")
    failed_ids = ", ".join(str(idx) for idx, _ in failed) if failed else "none"
    return (
        "\n".join(blocks)
        + "\nThe above examples are optimized by LLMs using meaning-preserving "
        "loop transformation methods.\n"
        "Available examples pass compilation, execution and equivalence checks; "
        "failed examples do not.\n"
        "Here is the original code:\n\n"
        f"{target}\n\n"
        'Performance rank result (">" means better than):\n\n'
        f"{rank}\n\n"
        f"Failed: {failed_ids}\n\n"
        "Task:\n"
        "Analyze why available examples succeeded and failed examples broke "
        "correctness. Improve the performance of original code using the "
        "highest-impact meaning-preserving loop transformation methods learnt "
        "from the ranked examples.\n\n"
        f"{GENERATION_RULES}"
    )


_RENDERERS = {
    PromptKind.BASE: _base,
    PromptKind.WITH_DEMONSTRATION: _with_demonstration,
    PromptKind.COMPILE_FEEDBACK: _compile_feedback,
    PromptKind.TEST_RANK_FEEDBACK: _test_rank_feedback,
}


def render_prompt(kind: PromptKind, slots: dict) -> str:
    return _RENDERERS[kind](slots)


_FENCE = re.compile(r"```[A-Za-z0-9_+-]*[ \t]*\n(.*?)```", re.S)


def extract_code_block(response: str) -> str:
    """Body of the first fenced code block (rule 1 requests exactly one)."""
    match = _FENCE.search(response)
    if not match:
        raise NoCodeBlock("response contains no fenced code block")
    return match.group(1)


# anchors the canned provider uses to locate the target inside a prompt
_TARGET_ANCHORS = [
    ("Here is the original code:\n\n", "\n\nPerformance rank result"),
    ("improve its performance:\n\n", "\n\nHere are some generation rules:"),
    ("loop transformation methods:\n\n", "\n\nHere are some generation rules:"),
]


def find_target_code(prompt: str) -> str:
    for begin, end in _TARGET_ANCHORS:
        b = prompt.find(begin)
        if b < 0:
            continue
        b += len(begin)
        e = prompt.find(end, b)
        if e > b:
            return prompt[b:e]
    raise MissingSlot("no target code found in prompt")
