"""Domain model for static control parts: schedules, accesses, statements."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..affine import AffineExpr

READ = "read"
WRITE = "write"


@dataclass(frozen=True)
class ScheduleVector:
    """2d+1 interleaving of constant positions and iterator names.

    entries = (c0, i1, c1, ..., id, cd): even slots are integers ordering
    siblings at each nest level, odd slots are the surrounding iterators
    outermost-first.
    """

    entries: tuple

    def __post_init__(self):
        if len(self.entries) % 2 == 0:
            raise ValueError("schedule vector length must be odd (2d+1)")
        for pos, e in enumerate(self.entries):
            ok = isinstance(e, int) if pos % 2 == 0 else isinstance(e, str)
            if not ok:
                raise ValueError(f"bad entry {e!r} at position {pos}")

    @property
    def depth(self) -> int:
        return len(self.entries) // 2

    @property
    def constants(self) -> tuple[int, ...]:
        return self.entries[0::2]

    @property
    def iterators(self) -> tuple[str, ...]:
        return self.entries[1::2]

    def padded(self, depth: int) -> tuple:
        """Paper-style presentation padded with zeros to a common depth."""
        extra = depth - self.depth
        if extra < 0:
            raise ValueError("padding depth below own depth")
        return tuple(self.entries) + (0, 0) * extra

    def sort_key(self) -> tuple:
        # ints before strings at the same slot; legal interleavings always
        # diverge at a constant slot, the string case is for stability only
        return tuple(
            (0, e) if isinstance(e, int) else (1, e) for e in self.entries
        )

    def shared_prefix_depth(self, other: "ScheduleVector") -> int:
        """Number of loops containing both statements (common (c, iter) path)."""
        shared = 0
        for level in range(min(self.depth, other.depth)):
            if self.entries[2 * level] != other.entries[2 * level]:
                break
            if self.entries[2 * level + 1] != other.entries[2 * level + 1]:
                break
            shared += 1
        return shared

    def precedes(self, other: "ScheduleVector") -> bool:
        """Textual (lexicographic) order; equality counts as False."""
        return self.sort_key() < other.sort_key()


@dataclass(frozen=True)
class LoopInfo:
    """One surrounding loop: name plus inclusive-lower/exclusive-upper bounds."""

    name: str
    lower: AffineExpr
    upper: AffineExpr


@dataclass(frozen=True)
class ArrayAccess:
    array_name: str
    rows: tuple[AffineExpr, ...]  # one affine index per array dimension
    kind: str  # READ or WRITE

    def index_matrix(self, iterators, env=None) -> tuple[tuple[int, ...], ...]:
        """Rows = array dims, columns = iterator coefficients then constant."""
        env = env or {}
        out = []
        for row in self.rows:
            folded = row.substitute(env)
            leftovers = set(folded.names) - set(iterators)
            if leftovers:
                raise ValueError(f"unresolved names in index: {sorted(leftovers)}")
            out.append(tuple(folded.coeff(it) for it in iterators) + (folded.const,))
        return tuple(out)


@dataclass(frozen=True)
class Statement:
    """One assignment (or opaque call) with its surrounding loop context.

    rhs is an operator tree of tuples: ("num", v), ("param", name),
    ("read", k) referencing reads[k], ("neg", node), or (op, left, right)
    with op in {"+", "-", "*"}.
    """

    id: int
    schedule: ScheduleVector
    loops: tuple[LoopInfo, ...]
    write: ArrayAccess | None
    reads: tuple[ArrayAccess, ...]
    op: str = "="
    rhs: tuple | None = None
    guards: tuple = ()  # AffineExpr constraints, each meaning expr >= 0
    call: str | None = None  # opaque side-effect-free call, no accesses

    def __post_init__(self):
        if self.call is None and self.write is None:
            raise ValueError("statement needs exactly one write (or be a call)")
        if self.call is not None and (self.write or self.reads):
            raise ValueError("opaque call statements carry no accesses")

    @property
    def iterators(self) -> tuple[str, ...]:
        return tuple(l.name for l in self.loops)

    @property
    def accesses(self) -> tuple[ArrayAccess, ...]:
        out = tuple(self.reads)
        if self.write is not None:
            out = (self.write,) + out
        return out

    def iter_accesses(self):
        """Yield (ref, access) pairs; refs are ("w",) or ("r", k)."""
        if self.write is not None:
            yield ("w",), self.write
        for k, r in enumerate(self.reads):
            yield ("r", k), r


@dataclass(frozen=True)
class Scop:
    statements: tuple[Statement, ...]
    global_params: tuple[tuple[str, int], ...] = ()
    arrays: tuple[tuple[str, tuple[AffineExpr, ...]], ...] = ()

    @property
    def params(self) -> dict:
        return dict(self.global_params)

    @property
    def array_sizes(self) -> dict:
        return dict(self.arrays)

    @property
    def max_depth(self) -> int:
        return max((s.schedule.depth for s in self.statements), default=0)

    def iterator_bounds(self) -> dict:
        """name -> (lower, upper); raises if one name has conflicting bounds."""
        out: dict = {}
        for s in self.statements:
            for loop in s.loops:
                bounds = (loop.lower, loop.upper)
                seen = out.get(loop.name)
                if seen is not None and seen != bounds:
                    raise ValueError(f"iterator {loop.name} has conflicting bounds")
                out[loop.name] = bounds
        return out

    def domain_points(self, stmt: Statement, limit: int | None = None):
        """Enumerate the statement's concrete iteration vectors in order."""
        env = self.params
        vec: list[int] = []
        count = 0

        def walk(level: int):
            nonlocal count
            if level == len(stmt.loops):
                if all(g.evaluate({**env, **binding()}) >= 0 for g in stmt.guards):
                    count += 1
                    if limit is not None and count > limit:
                        raise MemoryError("domain enumeration over limit")
                    yield tuple(vec)
                return
            loop = stmt.loops[level]
            scope = {**env, **binding()}
            lo = loop.lower.evaluate(scope)
            hi = loop.upper.evaluate(scope)
            for v in range(lo, hi):
                vec.append(v)
                yield from walk(level + 1)
                vec.pop()

        def binding():
            return {l.name: v for l, v in zip(stmt.loops, vec)}

        yield from walk(0)

    def domain_size(self, stmt: Statement, cap: int) -> int:
        """Point count, stopping early once cap is exceeded (returns cap+1)."""
        n = 0
        for _ in self.domain_points(stmt):
            n += 1
            if n > cap:
                return cap + 1
        return n
