"""Array assignment: no-dep alternatives, dependence-origin links, cycle
repair, and resolution of names/indexes through the dependence chains."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..rng import Rng

DEFAULT_NAMES = ("A", "B", "C", "D", "E", "F")


@dataclass
class PendingAccess:
    """An access whose final array may come from a dependence source.

    name/rows hold the no-dep alternative (always drawn so streams stay
    aligned); dep_source overrides them until a cycle check clears it.
    """

    kind: str  # "read" | "write"
    name: str
    rows: list  # [(iterator, const), ...] for the no-dep alternative
    dep_source: int | None = None
    dropped_dep: bool = False


@dataclass
class PendingStatement:
    id: int
    write: PendingAccess
    reads: list = field(default_factory=list)

    def dep_links(self):
        """Yield (access_slot, source) for live dependence-origin entries."""
        if self.write.dep_source is not None:
            yield ("w", self.write.dep_source)
        for k, r in enumerate(self.reads):
            if r.dep_source is not None:
                yield (("r", k), r.dep_source)


def _array_dims(rng: Rng, name: str) -> int:
    return rng.split(("dims", name)).randint(1, 2)


def _gen_rows(rng: Rng, iterators, dims: int, max_const: int) -> list:
    return [
        (rng.choice(iterators), rng.randint(-max_const, max_const))
        for _ in range(dims)
    ]


def assign_arrays(params, schedules, rng: Rng, name_list=DEFAULT_NAMES):
    """Algorithm steps: per-statement no-dep draws, dependence draws, and
    priority assignment. Returns (pending statements, dims-per-name)."""
    n = params.num_statements
    dims: dict[str, int] = {}
    pending: list[PendingStatement] = []
    for i in range(n):
        srng = rng.split(("stmt", i))
        iterators = schedules[i].iterators
        names = srng.sample(name_list, params.array_list)

        def draw(kind):
            name = srng.choice(names)
            d = dims.setdefault(name, _array_dims(rng, name))
            return PendingAccess(kind, name, _gen_rows(srng, iterators, d, params.array_indexes))

        write = draw("write")
        if n > 1 and srng.percent(params.write_dep_prob):
            write.dep_source = srng.choice([s for s in range(n) if s != i])

        n_nodep = srng.randint(1, params.read_array)
        dep_count = srng.randint(0, params.read_dep) if n > 1 else 0
        reads = []
        for _ in range(min(dep_count, params.read_array)):
            r = draw("read")
            r.dep_source = srng.choice([s for s in range(n) if s != i])
            reads.append(r)
        while len(reads) < n_nodep:
            reads.append(draw("read"))
        pending.append(PendingStatement(id=i, write=write, reads=reads))
    return pending, dims


def check_circular_dependence(pending, schedules):
    """Drop dependence links until statement->source is acyclic.

    Each detected cycle loses the link owned by the statement latest in the
    schedule, write links before read links for determinism.
    """
    order = {i: schedules[i].sort_key() for i in range(len(pending))}

    def find_cycle():
        graph = {p.id: sorted({src for _, src in p.dep_links()}) for p in pending}
        state: dict[int, int] = {}
        stack: list[int] = []

        def dfs(v):
            state[v] = 1
            stack.append(v)
            for nxt in graph[v]:
                if state.get(nxt, 0) == 1:
                    return stack[stack.index(nxt):]
                if state.get(nxt, 0) == 0:
                    cycle = dfs(nxt)
                    if cycle:
                        return cycle
            state[v] = 2
            stack.pop()
            return None

        for v in graph:
            if state.get(v, 0) == 0:
                cycle = dfs(v)
                if cycle:
                    return cycle
        return None

    dropped = []
    while True:
        cycle = find_cycle()
        if cycle is None:
            return dropped
        latest = max(cycle, key=lambda v: order[v])
        nxt = cycle[(cycle.index(latest) + 1) % len(cycle)]
        stmt = pending[latest]
        for slot, src in stmt.dep_links():
            if src != nxt:
                continue
            access = stmt.write if slot == "w" else stmt.reads[slot[1]]
            access.dep_source = None
            access.dropped_dep = True
            dropped.append((latest, slot, src))
            break


def resolve_accesses(pending, dims, schedules, params, rng: Rng, size_names):
    """Resolve dependence-origin names/indexes through write chains and draw
    per-dimension sizes; returns (per-statement concrete accesses, sizes).

    A dependent access copies its source write's index rows shifted by a
    drawn distance, mapping iterators by nest level (innermost fallback).
    """
    iterators = {p.id: schedules[p.id].iterators for p in pending}
    write_memo: dict[int, tuple] = {}

    def map_rows(rows, src_id, dst_id):
        src_it, dst_it = iterators[src_id], iterators[dst_id]
        out = []
        for it, c in rows:
            level = min(src_it.index(it), len(dst_it) - 1)
            out.append((dst_it[level], c))
        return out

    def shift(rows, stream):
        return [(it, c + stream.randint(-params.dep_distance, params.dep_distance))
                for it, c in rows]

    def resolve_write(i, seen=()):
        if i in write_memo:
            return write_memo[i]
        if i in seen:
            raise AssertionError("cycle survived check_circular_dependence")
        acc = pending[i].write
        if acc.dep_source is None:
            resolved = (acc.name, list(acc.rows))
        else:
            name, rows = resolve_write(acc.dep_source, seen + (i,))
            rows = map_rows(rows, acc.dep_source, i)
            resolved = (name, shift(rows, rng.split(("dist", i, "w"))))
        write_memo[i] = resolved
        return resolved

    concrete = []
    sizes: dict[str, tuple] = {}

    def draw_sizes(name):
        if name not in sizes:
            srng = rng.split(("size", name))
            sizes[name] = tuple(srng.choice(size_names) for _ in range(dims[name]))
        return sizes[name]

    for p in pending:
        name, rows = resolve_write(p.id)
        draw_sizes(name)
        entry = {"write": (name, rows), "reads": []}
        for k, r in enumerate(p.reads):
            if r.dep_source is None:
                rname, rrows = r.name, list(r.rows)
            else:
                rname, rrows = resolve_write(r.dep_source)
                rrows = shift(
                    map_rows(rrows, r.dep_source, p.id),
                    rng.split(("dist", p.id, "r", k)),
                )
            draw_sizes(rname)
            entry["reads"].append((rname, rrows))
        concrete.append(entry)
    return concrete, sizes
