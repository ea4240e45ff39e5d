"""Seed-to-program synthesis: the full parameter-driven generation chain."""

from __future__ import annotations

from dataclasses import dataclass

from ..affine import AffineExpr
from ..errors import Infeasible
from ..rng import Rng, derive_seed
from ..scop.model import READ, WRITE, ArrayAccess, LoopInfo, Scop, Statement
from .arrays import (
    DEFAULT_NAMES,
    assign_arrays,
    check_circular_dependence,
    resolve_accesses,
)
from .bounds import DEFAULT_SIZES, declared_extents, draw_iterator_bounds, solve_bounds
from .emit import emit_program
from .params import LoopParameters, sample_parameters
from .schedules import generate_schedules

MAX_RETRIES = 8


@dataclass
class SynthRecord:
    seed: int
    retries: int
    params: LoopParameters
    scop: Scop
    program: str
    configured_deps: list  # (stmt, slot, source) links that survived the cycle check
    dropped_deps: list


def _access(name: str, rows) -> tuple:
    return name, rows


def _to_access(name, rows, kind) -> ArrayAccess:
    return ArrayAccess(
        name, tuple(AffineExpr.var(it, 1, c) for it, c in rows), kind
    )


def _build_rhs(stmt_rng: Rng, write, reads):
    """Random +,-,* combination of the reads and one literal; a same-index
    read of the written array turns the statement into a compound update."""
    compound = None
    order = list(range(len(reads)))
    for k in order:
        if reads[k] == write:
            compound = k
            break
    op = "="
    rhs_terms = []
    if compound is not None:
        op = stmt_rng.choice(("+=", "*="))
        rhs_terms = [("read", k) for k in order if k != compound]
    else:
        rhs_terms = [("read", k) for k in order]
    rhs_terms.append(("num", stmt_rng.randint(2, 9)))
    node = rhs_terms[0]
    ops = ("+", "-", "*")
    for term in rhs_terms[1:]:
        drawn = stmt_rng.choice(ops)
        if drawn == "*":
            # one product per statement keeps self-feeding chains finite
            ops = ("+", "-")
        node = (drawn, node, term)
    return op, compound, node


def build_scop(params: LoopParameters, rng: Rng, size_spec=DEFAULT_SIZES,
               name_list=DEFAULT_NAMES):
    """One generation attempt; raises Infeasible when bounds have no solution."""
    schedules = generate_schedules(params, rng.split("schedules"))
    pending, dims = assign_arrays(params, schedules, rng.split("arrays"), name_list)
    dropped = check_circular_dependence(pending, schedules)
    size_names = [s for s, _ in size_spec]
    accesses, sizes = resolve_accesses(
        pending, dims, schedules, params, rng.split("resolve"), size_names
    )
    it_bounds = draw_iterator_bounds(schedules, params, rng.split("itbounds"))
    bounds = solve_bounds(schedules, accesses, sizes, size_spec, rng.split("bounds"),
                          it_bounds)

    extents = declared_extents(accesses, sizes)
    statements = []
    for i, (vec, entry) in enumerate(zip(schedules, accesses)):
        loops = tuple(
            LoopInfo(
                name,
                AffineExpr.constant(bounds[name].lower),
                bounds[name].upper,
            )
            for name in vec.iterators
        )
        srng = rng.split(("expr", i))
        wname, wrows = entry["write"]
        write = _to_access(wname, wrows, WRITE)
        reads = [_to_access(n, r, READ) for n, r in entry["reads"]]
        op, compound, rhs = _build_rhs(srng, entry["write"], entry["reads"])
        if compound is not None:
            # parser convention: the implicit self-read sits at index 0
            self_read = reads.pop(compound)
            reads.insert(0, self_read)
            rhs = _shift_read_indexes(rhs, compound)
        statements.append(
            Statement(
                id=i,
                schedule=vec,
                loops=loops,
                write=write,
                reads=tuple(reads),
                op=op,
                rhs=rhs,
            )
        )

    arrays = tuple(
        sorted(
            (
                name,
                tuple(
                    AffineExpr.var(param).plus(pad) if pad else AffineExpr.var(param)
                    for param, pad in extents[name]
                ),
            )
            for name in sizes
        )
    )
    configured = [link for p in pending for link in
                  [(p.id, slot, src) for slot, src in p.dep_links()]]
    scop = Scop(
        statements=tuple(statements),
        global_params=tuple(size_spec),
        arrays=arrays,
    )
    return scop, configured, dropped


def _shift_read_indexes(node, removed: int):
    """Re-point ("read", k) nodes after the compound self-read moved to 0."""
    def remap(k):
        if k < removed:
            return k + 1
        return k  # k > removed impossible: terms built without the removed one

    tag = node[0]
    if tag == "read":
        return ("read", remap(node[1]))
    if tag in ("num", "param", "iter"):
        return node
    if tag == "neg":
        return ("neg", _shift_read_indexes(node[1], removed))
    op, left, right = node
    return (op, _shift_read_indexes(left, removed), _shift_read_indexes(right, removed))


def synthesize(seed: int, size_spec=DEFAULT_SIZES, name_list=DEFAULT_NAMES) -> SynthRecord:
    """Deterministic per seed; retries derived sub-seeds on Infeasible draws."""
    last_error = None
    for retry in range(MAX_RETRIES + 1):
        attempt_seed = seed if retry == 0 else derive_seed(seed, ("retry", retry))
        params = sample_parameters(attempt_seed)
        rng = Rng(attempt_seed).split("synthesize")
        try:
            scop, configured, dropped = build_scop(params, rng, size_spec, name_list)
        except Infeasible as exc:
            last_error = exc
            continue
        program = emit_program(scop, title=f"loopsmith example seed={seed}")
        return SynthRecord(
            seed=seed,
            retries=retry,
            params=params,
            scop=scop,
            program=program,
            configured_deps=configured,
            dropped_deps=dropped,
        )
    raise Infeasible(f"seed {seed}: no feasible draw after {MAX_RETRIES} retries") from last_error
