"""Loop-bound solving for synthesized nests.

Rules (derived from the worked bound examples, see tests):
  lower(it) = max(0, -c) over all access rows (it, c);
  upper(it) = min over sizes of the array dims it indexes (exclusive, the
  offset does not loosen the upper side); emitted declarations are padded by
  the max positive offset instead.
A drawn iterator-in-bound constraint (it < outer) replaces the upper bound
only when it is pointwise at least as tight; an empty interval aborts the
draw with Infeasible.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..affine import AffineExpr
from ..errors import Infeasible
from ..rng import Rng

DEFAULT_SIZES = (("S1", 64), ("S2", 96), ("S3", 128))


@dataclass
class LoopBound:
    name: str
    level: int
    lower: int
    upper: AffineExpr  # exclusive
    upper_value: int   # max attainable exclusive upper, for nested checks
    triangular: str | None = None  # outer iterator name when bound is it < outer


def loop_table(schedules):
    """name -> (level, ancestors tuple), consistent across sharing statements."""
    table: dict[str, tuple] = {}
    for vec in schedules:
        iters = vec.iterators
        for level, name in enumerate(iters):
            seen = table.get(name)
            entry = (level, iters[:level])
            if seen is None:
                table[name] = entry
            elif seen != entry:
                raise AssertionError(f"loop {name} used at inconsistent levels")
    return table


def draw_iterator_bounds(schedules, params, rng: Rng) -> dict:
    """Per-loop triangular upper draws: probability p at nest level 2,
    halving at each deeper level; the referenced iterator is a uniform
    choice among the loop's ancestors."""
    out: dict[str, str] = {}
    for name, (level, ancestors) in loop_table(schedules).items():
        if level < 1:
            continue
        prob = params.iterator_bounds_prob / (2 ** (level - 1))
        brng = rng.split(("itbound", name))
        if brng.random() * 100.0 < prob:
            out[name] = brng.choice(list(ancestors))
    return out


def solve_bounds(schedules, accesses, sizes, size_spec, rng: Rng, it_bounds=None):
    """accesses: per-statement {"write": (name, rows), "reads": [...]};
    sizes: array -> per-dim size-parameter names; it_bounds: loop -> outer
    iterator for drawn triangular constraints. Returns name -> LoopBound."""
    size_value = dict(size_spec)
    table = loop_table(schedules)
    it_bounds = it_bounds or {}

    lower: dict[str, int] = {name: 0 for name in table}
    upper_cands: dict[str, set] = {name: set() for name in table}
    for entry in accesses:
        for name, rows in [entry["write"]] + entry["reads"]:
            for d, (it, c) in enumerate(rows):
                lower[it] = max(lower[it], -c)
                upper_cands[it].add(sizes[name][d])

    bounds: dict[str, LoopBound] = {}
    for name, (level, ancestors) in sorted(table.items(), key=lambda kv: kv[1][0]):
        cands = upper_cands[name]
        if not cands:
            cands = {rng.split(("default-bound", name)).choice([s for s, _ in size_spec])}
        value, param = min((size_value[p], p) for p in cands)
        upper = AffineExpr.var(param)
        upper_value = value
        triangular = None

        outer = it_bounds.get(name)
        if outer is not None and outer in ancestors:
            outer_max = bounds[outer].upper_value - 1  # max attainable value
            if outer_max <= value:
                upper = AffineExpr.var(outer)
                upper_value = outer_max
                triangular = outer

        if lower[name] >= upper_value:
            raise Infeasible(
                f"iterator {name}: empty interval [{lower[name]}, {upper_value})"
            )
        bounds[name] = LoopBound(name, level, lower[name], upper, upper_value, triangular)
    return bounds


def declared_extents(accesses, sizes):
    """array -> per-dim (size param, positive padding) covering all offsets."""
    pads: dict[str, list] = {}
    for entry in accesses:
        for name, rows in [entry["write"]] + entry["reads"]:
            pad = pads.setdefault(name, [0] * len(sizes[name]))
            for d, (_, c) in enumerate(rows):
                pad[d] = max(pad[d], c)
    return {
        name: tuple(
            (sizes[name][d], pads.get(name, [0] * len(sizes[name]))[d])
            for d in range(len(sizes[name]))
        )
        for name in sizes
    }
