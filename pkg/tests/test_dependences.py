"""Dependence analysis: paper-anchored cases plus dual-route agreement.

The Listing-2 oracle below enumerates touched cells by hand, independent of
the Scop machinery, and the expected records were frozen from it.
"""

import pytest
from hypothesis import given, settings, strategies as st

from loopsmith.scop.deps import (
    RAW,
    WAR,
    WAW,
    collapse_records,
    compute_dependences,
    scan_dependences,
)
from loopsmith.scop.parser import parse_scop


def test_syrk_has_all_three_types_on_C(syrk_scop):
    deps = compute_dependences(syrk_scop)
    assert not deps.best_effort
    types = {d.dep_type for d in deps if d.array_name == "C"}
    assert types == {RAW, WAW, WAR}
    # reads of A never conflict: no records on A
    assert not [d for d in deps if d.array_name == "A"]


def test_self_update_zero_distance_all_types():
    scop = parse_scop("for (i = 0; i < N; i++) A[i] = A[i] + 1;", {"N": 8})
    deps = compute_dependences(scop)
    got = {(d.dep_type, d.distance, d.carried) for d in deps}
    assert got == {(RAW, (0,), None), (WAR, (0,), None), (WAW, (0,), None)}


LISTING2 = """
for (i = 2; i < N; i++) {
  for (j = 0; j < M; j++)
    A[i - 1][i] = A[i - 2][i] + C[i][j] * 6;
  for (k = 0; k < M; k++)
    A[k + 1][k] = A[i][k] - C[k + 1][i] * 4;
}
"""


def _listing2_hand_oracle(n, m):
    """Independent enumeration: writes/reads of both statements by cell."""
    touches = []  # (time, stmt, (i,) or (i, inner), kind, cell)
    for i in range(2, n):
        for j in range(m):
            time = (0, i, 0, j, 0)
            touches.append((time, 0, (i, j), "w", (i - 1, i)))
            touches.append((time, 0, (i, j), "r", (i - 2, i)))
        for k in range(m):
            time = (0, i, 1, k, 0)
            touches.append((time, 1, (i, k), "w", (k + 1, k)))
            touches.append((time, 1, (i, k), "r", (i, k)))
    pairs = set()
    for t1 in touches:
        for t2 in touches:
            if t1[4] != t2[4] or ("w" not in (t1[3], t2[3])):
                continue
            if t1[0] > t2[0]:
                continue
            if t1[0] == t2[0] and (t1[1] != t2[1] or t1[2] != t2[2]):
                continue
            if t1 is t2 and t1[3] != "w":
                continue
            shared = 1 if t1[1] != t2[1] else 2
            dist = tuple(t2[2][l] - t1[2][l] for l in range(shared))
            kind = {("w", "r"): RAW, ("r", "w"): WAR, ("w", "w"): WAW}[(t1[3], t2[3])]
            pairs.add((kind, t1[1], t2[1], dist))
    return pairs


def test_listing2_carried_war_distance_one():
    scop = parse_scop(LISTING2, {"N": 10, "M": 10})
    deps = compute_dependences(scop)
    # hand oracle on the same 10x10 domain
    expected = _listing2_hand_oracle(10, 10)
    got = {(d.dep_type, d.source_stmt, d.target_stmt, d.distance) for d in deps if d.array_name == "A"}
    assert got == {p for p in expected}
    # the configured A[i-1][i] / A[i-2][i] pair yields the carried dependence
    # between S2's read and S1's write at distance 1 on iterator i
    assert (WAR, 1, 0, (1,)) in got


def test_constant_index_waw_carried():
    scop = parse_scop("for (i = 0; i < N; i++) A[5] = A[5] + i;", {"N": 4})
    deps = compute_dependences(scop)
    waw = {d.distance for d in deps if d.dep_type == WAW}
    assert waw == {(0,), (1,), (2,), (3,)}


def test_no_alias_when_offsets_differ():
    scop = parse_scop("for (i = 0; i < N; i++) A[i + 1][i] = A[i][i] + 1;", {"N": 6})
    deps = compute_dependences(scop)
    # A's write cell (i+1, i) never equals the read cell (i, i): only the
    # degenerate write-self WAW(0) remains
    assert {(d.dep_type, d.distance) for d in deps} == {(WAW, (0,))}


def test_scan_matches_analytic_on_syrk(syrk_scop):
    analytic = compute_dependences(syrk_scop)
    scanned = scan_dependences(syrk_scop)
    assert set(analytic.dependences) == set(scanned)


def test_best_effort_on_coefficient_two():
    scop = parse_scop("for (i = 0; i < N; i++) A[2 * i] = A[i] + 1;", {"N": 6})
    deps = compute_dependences(scop)
    assert deps.best_effort
    scanned = scan_dependences(scop)
    assert set(deps.dependences) == set(collapse_records(scanned)) or set(
        deps.dependences
    ) == set(scanned)


def test_guarded_statement_falls_back_to_scan():
    scop = parse_scop(
        "for (i = 0; i < N; i++) if (i < M) A[i] = A[i - 1] + 1;", {"N": 9, "M": 5}
    )
    deps = compute_dependences(scop)
    assert deps.best_effort
    raw = [d for d in deps if d.dep_type == RAW and d.carried == 0]
    assert raw and all(d.distance == (1,) for d in raw)


def test_collapse_merges_varying_levels(syrk_scop):
    exact = compute_dependences(syrk_scop).dependences
    collapsed = collapse_records(exact)
    assert len(collapsed) < len(exact)
    s2_self = [
        d for d in collapsed
        if d.source_stmt == 1 and d.target_stmt == 1 and d.carried == 1
    ]
    assert s2_self
    # the k level varies, outer i and inner j are pinned to zero
    assert all(d.distance[0] == 0 and d.distance[1] is None and d.distance[2] == 0
               for d in s2_self)


def test_collapsed_mode_equals_collapsed_exact(syrk_scop):
    direct = compute_dependences(syrk_scop, collapse=True)
    via_exact = collapse_records(compute_dependences(syrk_scop).dependences)
    assert set(direct.dependences) == set(via_exact)


@st.composite
def tiny_scops(draw):
    """Random one/two-statement nests in the synthesizer's index shape."""
    n = draw(st.integers(1, 2))
    depth = draw(st.integers(1, 2))
    size = draw(st.integers(3, 6))
    names = ["i", "j"]
    lines = []
    for level in range(depth):
        lines.append(
            f"for ({names[level]} = 0; {names[level]} < {size}; {names[level]}++) "
        )
    body = []
    for s in range(n):
        arr = draw(st.sampled_from(["A", "B"]))
        wit = draw(st.sampled_from(names[:depth]))
        woff = draw(st.integers(0, 2))
        rarr = draw(st.sampled_from(["A", "B"]))
        rit = draw(st.sampled_from(names[:depth]))
        roff = draw(st.integers(0, 2))
        body.append(f"{arr}[{wit} + {woff}] = {rarr}[{rit} + {roff}] + {s + 1};")
    region = "".join(lines) + "{ " + " ".join(body) + " }"
    return region, size


@given(tiny_scops())
@settings(max_examples=60, deadline=None)
def test_dual_route_agreement_property(case):
    region, size = case
    scop = parse_scop(region, {})
    analytic = compute_dependences(scop)
    assert not analytic.best_effort
    scanned = scan_dependences(scop)
    assert set(analytic.dependences) == set(scanned)
