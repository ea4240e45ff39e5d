"""Test inputs: seed initializers and value/operator/statement mutations.

An input is a set of per-array fill rules spliced into the program's marked
init region; every rule is a deterministic function of the element indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..fillers import (
    FillRule,
    affine_rule,
    alternating_rule,
    constant_rule,
    render_init_body,
    splice_init,
)
from ..rng import Rng

MUTATION_KINDS = ("value", "operator", "statement")

_VALUE_CATALOG = (0, 1, -1)

_ARRAY_DECL = re.compile(
    r"^\s*(?:static\s+)?double\s+([A-Za-z_]\w*)((?:\s*\[[^\]]+\])+)\s*;", re.M
)
_EXTENT = re.compile(r"\[([^\]]+)\]")


def parse_array_decls(program: str) -> dict:
    """array -> tuple of C extent expressions, from global declarations."""
    out = {}
    for name, dims in _ARRAY_DECL.findall(program):
        out[name] = tuple(e.strip() for e in _EXTENT.findall(dims))
    return out


@dataclass(frozen=True)
class TestInput:
    __test__ = False  # domain class, not a pytest collection target

    id: str
    rules: tuple  # FillRule per array, order = fill statement order
    provenance: str  # seed | value-mutant | operator-mutant | statement-mutant


def builtin_seed_inputs(arrays: dict) -> list:
    """Three deterministic seeds: index-affine, constant, alternating-sign."""
    names = sorted(arrays)
    return [
        TestInput(
            "seed-affine",
            tuple(affine_rule(n, len(arrays[n]), k) for k, n in enumerate(names)),
            "seed",
        ),
        TestInput(
            "seed-constant",
            tuple(constant_rule(n, len(arrays[n])) for n in names),
            "seed",
        ),
        TestInput(
            "seed-alternating",
            tuple(alternating_rule(n, len(arrays[n])) for n in names),
            "seed",
        ),
    ]


def apply_input(program: str, test_input: TestInput, extents: dict) -> str:
    body = render_init_body(test_input.rules, extents)
    return splice_init(program, body)


def mutate(test_input: TestInput, kind: str, rng: Rng) -> TestInput:
    if kind == "value":
        return _mutate_value(test_input, rng)
    if kind == "operator":
        return _mutate_operator(test_input, rng)
    if kind == "statement":
        return _mutate_statement(test_input, rng)
    raise ValueError(f"unknown mutation kind {kind!r}")


def _mutate_value(test_input: TestInput, rng: Rng) -> TestInput:
    """Perturb one constant: sign flip, x10, or a boundary value."""
    sites = [
        (ri, path, value)
        for ri, rule in enumerate(test_input.rules)
        for path, value in rule.constants()
    ]
    if not sites:
        return TestInput(test_input.id + "+v0", test_input.rules, "value-mutant")
    ri, path, value = rng.choice(sites)
    candidates = [c for c in (-value, 10 * value, *_VALUE_CATALOG) if c != value]
    new = rng.choice(candidates)
    rules = list(test_input.rules)
    rules[ri] = rules[ri].replace(path, lambda node: ("num", new))
    return TestInput(f"{test_input.id}+v{ri}", tuple(rules), "value-mutant")


def _mutate_operator(test_input: TestInput, rng: Rng) -> TestInput:
    sites = [
        (ri, path, op)
        for ri, rule in enumerate(test_input.rules)
        for path, op in rule.operators()
    ]
    if not sites:
        return TestInput(test_input.id + "+o0", test_input.rules, "operator-mutant")
    ri, path, op = rng.choice(sites)
    new = rng.choice([o for o in ("+", "-", "*") if o != op])
    rules = list(test_input.rules)
    rules[ri] = rules[ri].replace(path, lambda node: (new, node[1], node[2]))
    return TestInput(f"{test_input.id}+o{ri}", tuple(rules), "operator-mutant")


def _mutate_statement(test_input: TestInput, rng: Rng) -> TestInput:
    """Duplicate, drop or reorder whole per-array fill statements."""
    rules = list(test_input.rules)
    action = rng.choice(["duplicate", "drop", "reorder"])
    if action == "duplicate" or len(rules) < 2:
        k = rng.randint(0, len(rules) - 1)
        rules.insert(k, rules[k])
    elif action == "drop":
        rules.pop(rng.randint(0, len(rules) - 1))
    else:
        a = rng.randint(0, len(rules) - 1)
        b = rng.randint(0, len(rules) - 1)
        rules[a], rules[b] = rules[b], rules[a]
    return TestInput(f"{test_input.id}+s", tuple(rules), "statement-mutant")


# --- optional LLM-produced seed inputs ---

_LLM_LINE = re.compile(r"^\s*([A-Za-z_]\w*)\s*:\s*(.+?)\s*$")


def parse_llm_fills(text: str, arrays: dict) -> list | None:
    """Parse `NAME: expr` lines over i0..i{d-1}; None when unusable."""
    rules = {}
    for line in text.splitlines():
        m = _LLM_LINE.match(line)
        if not m or m.group(1) not in arrays:
            continue
        expr = _parse_fill_expr(m.group(2), len(arrays[m.group(1)]))
        if expr is None:
            return None
        rules[m.group(1)] = FillRule(m.group(1), len(arrays[m.group(1)]), expr)
    if set(rules) != set(arrays):
        return None
    return [rules[n] for n in sorted(rules)]


def llm_seed_inputs(provider, arrays: dict, program: str) -> tuple[list, bool]:
    """Ask the provider for initializers; fall back to builtins, flagged."""
    from ..llm.providers import ChatTranscript, complete

    names = ", ".join(
        f"{n}({len(arrays[n])}D)" for n in sorted(arrays)
    )
    prompt = (
        "Propose one deterministic integer fill rule per array for testing the "
        "program below. Answer with one line per array, formatted "
        "`NAME: expression`, using only +, -, *, %, integer literals and the "
        f"index variables i0..i3. Arrays: {names}.\n\n{program}"
    )
    transcript = ChatTranscript().add("user", prompt)
    try:
        response = complete(provider, transcript)
    except Exception:
        return builtin_seed_inputs(arrays), True
    rules = parse_llm_fills(response, arrays)
    if rules is None:
        return builtin_seed_inputs(arrays), True
    return [TestInput("seed-llm", tuple(rules), "seed")] + builtin_seed_inputs(arrays), False


def _parse_fill_expr(text: str, dims: int):
    tokens = re.findall(r"\d+|i\d+|[-+*%()]", text)
    if "".join(tokens).replace(" ", "") != text.replace(" ", ""):
        return None
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        node = term()
        while peek() in ("+", "-") and node is not None:
            op = take()
            rhs = term()
            node = (op, node, rhs) if rhs is not None else None
        return node

    def term():
        node = factor()
        while peek() in ("*", "%") and node is not None:
            op = take()
            rhs = factor()
            node = (op, node, rhs) if rhs is not None else None
        return node

    def factor():
        tok = take()
        if tok is None:
            return None
        if tok == "-":
            inner = factor()
            return ("neg", inner) if inner is not None else None
        if tok == "(":
            inner = expr()
            if peek() != ")":
                return None
            take()
            return inner
        if tok.isdigit():
            return ("num", int(tok))
        if tok.startswith("i") and tok[1:].isdigit():
            d = int(tok[1:])
            return ("idx", d) if d < dims else None
        return None

    node = expr()
    return node if node is not None and pos == len(tokens) else None
