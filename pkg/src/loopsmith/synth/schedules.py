"""Random schedule matrix construction and reordering into a legal interleaving."""

from __future__ import annotations

from ..rng import Rng
from ..scop.model import ScheduleVector

_LEVEL_LETTERS = "ijkl"


def _raw_draw(params, rng: Rng) -> list[list[int]]:
    """Per statement: depth in 1..loop_depth, constants below statement_index."""
    rows = []
    for _ in range(params.num_statements):
        depth = rng.randint(1, params.loop_depth)
        rows.append([rng.randint(0, params.statement_index - 1) for _ in range(depth + 1)])
    return rows


class _Node:
    """A loop body: ending statements and sub-loops keyed by raw constant."""

    def __init__(self):
        self.ending: dict[int, list[int]] = {}
        self.loops: dict[int, _Node] = {}

    def insert(self, stmt: int, consts: list[int]):
        if len(consts) == 1:
            self.ending.setdefault(consts[0], []).append(stmt)
        else:
            self.loops.setdefault(consts[0], _Node()).insert(stmt, consts[1:])


def _reorder(raw: list[list[int]]) -> list[list]:
    """Renumber sibling positions consecutively from 0 (statements before the
    loop they tie with), name each structural loop uniquely, and return the
    vectors in textual order: statement i is the i-th in the interleaving."""
    root = _Node()
    for stmt, consts in enumerate(raw):
        root.insert(stmt, consts)

    ordered: list[list] = []
    level_counts: dict[int, int] = {}

    def name_loop(level: int) -> str:
        n = level_counts.get(level, 0)
        level_counts[level] = n + 1
        letter = _LEVEL_LETTERS[level % len(_LEVEL_LETTERS)]
        return letter if n == 0 else f"{letter}{n + 1}"

    def walk(node: _Node, level: int, prefix: list):
        pos = 0
        for key in sorted(set(node.ending) | set(node.loops)):
            for _stmt in sorted(node.ending.get(key, [])):
                ordered.append(prefix + [pos])
                pos += 1
            if key in node.loops:
                name = name_loop(level)
                walk(node.loops[key], level + 1, prefix + [pos, name])
                pos += 1

    walk(root, 0, [])
    return ordered


def generate_schedules(params, rng: Rng) -> list[ScheduleVector]:
    raw = _raw_draw(params, rng)
    vectors = [ScheduleVector(tuple(e)) for e in _reorder(raw)]
    keys = [v.sort_key() for v in vectors]
    assert keys == sorted(keys), "reorder must leave vectors lexicographically sorted"
    return vectors
