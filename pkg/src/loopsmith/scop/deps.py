"""Data-dependence analysis over a Scop.

Two routes compute the same record set:

* the analytic solver reduces each ordered access pair to index-equality
  equations (offset union-find) plus a difference-constraint system for the
  loop bounds, decided exactly by shortest-path feasibility; realized
  distance vectors are enumerated per carrying level;
* the exhaustive scan walks every iteration of every statement and pairs
  conflicting touches per memory cell.

The analytic route handles index rows with at most one iterator at
coefficient 1 and bounds that are constants or outer-iterator +/- constant
(the synthesizer's output shape). Richer inputs fall back to the scan and
the result is flagged best_effort.

Access pairs within one statement instance count as dependences at zero
distance, including the write paired with itself: a statement like
`A[i] = A[i] + 1` carries loop-independent RAW, WAR and WAW records.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import DomainTooLarge
from .model import READ, WRITE, Scop, Statement

RAW = "RAW"
WAW = "WAW"
WAR = "WAR"

_TYPE = {(WRITE, READ): RAW, (READ, WRITE): WAR, (WRITE, WRITE): WAW}

_INF = 10 ** 15


def _sort_key(dep: "Dependence") -> tuple:
    # robust to None entries in collapsed distances
    return (
        dep.dep_type,
        dep.source_stmt,
        dep.target_stmt,
        dep.array_name,
        dep.source_ref,
        dep.target_ref,
        tuple((d is None, 0 if d is None else d) for d in dep.distance),
        dep.carried is None,
        dep.carried or 0,
    )


@dataclass(frozen=True)
class Dependence:
    dep_type: str
    source_stmt: int
    target_stmt: int
    array_name: str
    distance: tuple  # ints; None entries mark varying levels (collapsed mode)
    carried: int | None  # carrying loop level, None = loop-independent
    source_ref: tuple = ("w",)
    target_ref: tuple = ("w",)

    @property
    def loop_carried(self) -> bool:
        return self.carried is not None


@dataclass
class DependenceAnalysis:
    dependences: list
    best_effort: bool = False

    def __iter__(self):
        return iter(self.dependences)

    def __len__(self):
        return len(self.dependences)


class _UnsupportedForm(Exception):
    pass


class _Inconsistent(Exception):
    pass


# --- offset union-find: val(node) = val(root) + offset ---

class _Uf:
    def __init__(self):
        self.parent: dict = {}
        self.offset: dict = {}

    def add(self, node):
        if node not in self.parent:
            self.parent[node] = node
            self.offset[node] = 0

    def resolve(self, node):
        """Return (root, offset) with val(node) = val(root) + offset."""
        self.add(node)
        chain = []
        while self.parent[node] != node:
            chain.append(node)
            node = self.parent[node]
        off = 0
        for n in reversed(chain):
            off += self.offset[n]
            self.parent[n] = node
            self.offset[n] = off
        return node, self.offset.get(chain[0], 0) if chain else 0

    def union(self, a, b, delta):
        """Impose val(a) = val(b) + delta; raise on contradiction."""
        ra, oa = self.resolve(a)
        rb, ob = self.resolve(b)
        if ra == rb:
            if oa != ob + delta:
                raise _Inconsistent()
            return
        # val(ra) = val(a) - oa = val(b) + delta - oa = val(rb) + ob + delta - oa
        self.parent[ra] = rb
        self.offset[ra] = ob + delta - oa


# --- difference-constraint graph: edge (u, v, w) means val(v) - val(u) <= w ---

def _closure(nodes, edges):
    """Floyd-Warshall; returns dist dict or None on a negative cycle."""
    dist = {a: {b: (0 if a == b else _INF) for b in nodes} for a in nodes}
    for u, v, w in edges:
        if w < dist[u][v]:
            dist[u][v] = w
    for k in nodes:
        dk = dist[k]
        for a in nodes:
            dak = dist[a][k]
            if dak == _INF:
                continue
            da = dist[a]
            for b in nodes:
                alt = dak + dk[b]
                if alt < da[b]:
                    da[b] = alt
    for a in nodes:
        if dist[a][a] < 0:
            return None
    return dist


def _row_form(row, iterators, params):
    """(iterator-name-or-None, const) for a unit-coefficient index row."""
    folded = row.substitute(params)
    if folded.is_constant:
        return None, folded.const
    if len(folded.terms) != 1:
        raise _UnsupportedForm("multiple iterators in one index row")
    name, coeff = folded.terms[0]
    if coeff != 1 or name not in iterators:
        raise _UnsupportedForm(f"coefficient {coeff} on {name}")
    return name, folded.const


def _bound_form(expr, outer_names, params):
    """(outer-iterator-or-None, const) for a difference-form bound."""
    folded = expr.substitute(params)
    if folded.is_constant:
        return None, folded.const
    if len(folded.terms) != 1:
        raise _UnsupportedForm("bound with several iterators")
    name, coeff = folded.terms[0]
    if coeff != 1 or name not in outer_names:
        raise _UnsupportedForm(f"bound coefficient {coeff} on {name}")
    return name, folded.const


def _bound_edges(tag, stmt: Statement, params):
    """Difference edges anchoring each level variable to ZERO / outer levels."""
    edges = []
    names = [l.name for l in stmt.loops]
    for level, loop in enumerate(stmt.loops):
        var = (tag, level)
        ref, c = _bound_form(loop.lower, names[:level], params)
        if ref is None:
            edges.append((var, "Z", -c))  # var >= c
        else:
            edges.append((var, (tag, names.index(ref)), -c))  # var >= ref + c
        ref, c = _bound_form(loop.upper, names[:level], params)
        if ref is None:
            edges.append(("Z", var, c - 1))  # var <= c - 1
        else:
            edges.append(((tag, names.index(ref)), var, c - 1))  # var <= ref + c - 1
    return edges


class _PairSolver:
    """All dependence records for one ordered access pair."""

    def __init__(self, scop, src, dst, a_ref, a, b_ref, b, exact, record_cap):
        self.scop = scop
        self.src = src
        self.dst = dst
        self.a_ref, self.a = a_ref, a
        self.b_ref, self.b = b_ref, b
        self.exact = exact
        self.record_cap = record_cap
        self.params = scop.params
        self.shared = src.schedule.shared_prefix_depth(dst.schedule)
        self.out: set = set()

    def solve(self) -> set:
        if self.src.guards or self.dst.guards:
            raise _UnsupportedForm("if-guarded statement")
        uf = _Uf()
        uf.add("Z")
        for ra, rb in itertools.zip_longest(self.a.rows, self.b.rows):
            if ra is None or rb is None:
                raise _UnsupportedForm("access dimensionality mismatch")
            pa, ca = _row_form(ra, self.src.iterators, self.params)
            qb, cb = _row_form(rb, self.dst.iterators, self.params)
            try:
                if pa is None and qb is None:
                    if ca != cb:
                        return self.out
                elif qb is None:
                    uf.union(("s", self.src.iterators.index(pa)), "Z", cb - ca)
                elif pa is None:
                    uf.union(("t", self.dst.iterators.index(qb)), "Z", ca - cb)
                else:
                    uf.union(
                        ("s", self.src.iterators.index(pa)),
                        ("t", self.dst.iterators.index(qb)),
                        cb - ca,
                    )
            except _Inconsistent:
                return self.out

        base = []
        for tag, stmt in (("s", self.src), ("t", self.dst)):
            for u, v, w in _bound_edges(tag, stmt, self.params):
                base.append(self._root_edge(uf, u, v, w))

        self._case_independent(uf, base)
        for lstar in range(self.shared):
            self._case_carried(uf, base, lstar)
        return self.out

    # -- helpers --

    def _root_edge(self, uf, u, v, w):
        ru, ou = uf.resolve(u)
        rv, ov = uf.resolve(v)
        # val(v) - val(u) <= w  ->  val(rv) - val(ru) <= w - ov + ou
        return (ru, rv, w - ov + ou)

    def _dist_expr(self, uf, level):
        """Distance at a shared level as (const) or (rx, ry, offset)."""
        rx, ox = uf.resolve(("s", level))
        ry, oy = uf.resolve(("t", level))
        if rx == ry:
            return oy - ox, None
        return None, (rx, ry, oy - ox)

    def _feasible(self, uf, edges):
        nodes = {r for e in edges for r in (e[0], e[1])}
        nodes.add(uf.resolve("Z")[0])
        return _closure(sorted(nodes, key=repr), edges)

    def _pin_edges(self, expr, value):
        rx, ry, off = expr
        # (val(ry) - val(rx)) + off == value
        return [(rx, ry, value - off), (ry, rx, off - value)]

    def _ge_edge(self, expr, value):
        rx, ry, off = expr
        # (val(ry) - val(rx)) + off >= value
        return [(ry, rx, off - value)]

    def _emit(self, dist, carried):
        kinds = (self.a.kind, self.b.kind)
        self.out.add(
            Dependence(
                dep_type=_TYPE[kinds],
                source_stmt=self.src.id,
                target_stmt=self.dst.id,
                array_name=self.a.array_name,
                distance=tuple(dist),
                carried=carried,
                source_ref=self.a_ref,
                target_ref=self.b_ref,
            )
        )
        if len(self.out) > self.record_cap:
            raise DomainTooLarge("dependence record cap exceeded")

    def _case_independent(self, uf, base):
        if self.src.id != self.dst.id:
            if not self.src.schedule.precedes(self.dst.schedule):
                return
        elif self.a_ref == self.b_ref and self.a.kind != WRITE:
            return
        edges = list(base)
        consts = []
        for level in range(self.shared):
            const, expr = self._dist_expr(uf, level)
            if const is not None:
                if const != 0:
                    return
            else:
                edges.extend(self._pin_edges(expr, 0))
            consts.append(0)
        if self._feasible(uf, edges) is not None:
            self._emit(consts, None)

    def _case_carried(self, uf, base, lstar):
        edges = list(base)
        exprs = {}
        for level in range(self.shared):
            const, expr = self._dist_expr(uf, level)
            if level < lstar:
                if const is not None:
                    if const != 0:
                        return
                else:
                    edges.extend(self._pin_edges(expr, 0))
            else:
                floor = 1 if level == lstar else None
                if const is not None:
                    if floor is not None and const < floor:
                        return
                else:
                    if floor is not None:
                        edges.extend(self._ge_edge(expr, floor))
                    exprs[level] = (const, expr)
                    continue
                exprs[level] = (const, None)

        if self.exact:
            self._enumerate(uf, edges, lstar, exprs, [0] * lstar)
        else:
            dist = self._collapse(uf, edges, lstar, exprs)
            if dist is not None:
                self._emit(dist, lstar)

    def _enumerate(self, uf, edges, lstar, exprs, prefix):
        levels = sorted(exprs)

        def rec(idx, edges, acc):
            if idx == len(levels):
                self._emit(prefix + acc, lstar)
                return
            const, expr = exprs[levels[idx]]
            if const is not None:
                rec(idx + 1, edges, acc + [const])
                return
            dist = _closure(self._nodes(edges), edges)
            if dist is None:
                return
            rx, ry, off = expr
            lo = -dist[ry][rx] + off if dist[ry][rx] < _INF else -_INF
            hi = dist[rx][ry] + off if dist[rx][ry] < _INF else _INF
            if levels[idx] == lstar:
                lo = max(lo, 1)
            if hi - lo > self.record_cap:
                raise DomainTooLarge("unbounded distance enumeration")
            for val in range(lo, hi + 1):
                pinned = edges + self._pin_edges(expr, val)
                if _closure(self._nodes(pinned), pinned) is not None:
                    rec(idx + 1, pinned, acc + [val])

        if self._feasible(uf, edges) is None:
            return
        rec(0, edges, [])

    def _collapse(self, uf, edges, lstar, exprs):
        dist = self._feasible(uf, edges)
        if dist is None:
            return None
        out = [0] * lstar
        for level in sorted(exprs):
            const, expr = exprs[level]
            if const is not None:
                out.append(const)
                continue
            rx, ry, off = expr
            lo = -dist[ry][rx] + off if dist[ry][rx] < _INF else None
            hi = dist[rx][ry] + off if dist[rx][ry] < _INF else None
            if level == lstar and lo is not None:
                lo = max(lo, 1)
            out.append(lo if lo is not None and lo == hi else None)
        return out

    def _nodes(self, edges):
        return sorted({r for e in edges for r in (e[0], e[1])}, key=repr)


# --- exhaustive scan ---

def scan_dependences(scop: Scop, max_points: int = 200_000, max_pairs: int = 5_000_000):
    """Oracle route: walk every iteration and pair conflicting cell touches."""
    params = scop.params
    cells: dict = {}
    points = 0
    for stmt in scop.statements:
        for vec in scop.domain_points(stmt):
            points += 1
            if points > max_points:
                raise DomainTooLarge(f"domain above {max_points} points")
            env = {**params, **{l.name: v for l, v in zip(stmt.loops, vec)}}
            time = tuple(
                e if isinstance(e, int) else env[e] for e in stmt.schedule.entries
            )
            for ref, access in stmt.iter_accesses():
                cell = (access.array_name, tuple(r.evaluate(env) for r in access.rows))
                cells.setdefault(cell, []).append((time, stmt, vec, access.kind, ref))

    out: set = set()
    pair_budget = max_pairs
    for (array, _), touches in cells.items():
        if not any(t[3] == WRITE for t in touches):
            continue
        pair_budget -= len(touches) * len(touches)
        if pair_budget < 0:
            raise DomainTooLarge("pairwise scan above budget")
        for t1 in touches:
            for t2 in touches:
                if t1[3] == READ and t2[3] == READ:
                    continue
                if t1 is t2:
                    if t1[3] != WRITE:
                        continue
                elif t1[0] > t2[0]:
                    continue
                elif t1[0] == t2[0] and (t1[1].id != t2[1].id or t1[2] != t2[2]):
                    continue  # same time tuple only for same-instance pairs
                shared = t1[1].schedule.shared_prefix_depth(t2[1].schedule)
                dist = tuple(t2[2][i] - t1[2][i] for i in range(shared))
                carried = next((i for i, d in enumerate(dist) if d != 0), None)
                out.add(
                    Dependence(
                        dep_type=_TYPE[(t1[3], t2[3])],
                        source_stmt=t1[1].id,
                        target_stmt=t2[1].id,
                        array_name=array,
                        distance=dist,
                        carried=carried,
                        source_ref=t1[4],
                        target_ref=t2[4],
                    )
                )
    return sorted(out, key=_sort_key)


def compute_dependences(
    scop: Scop,
    collapse: bool = False,
    record_cap: int = 200_000,
    scan_points: int = 200_000,
) -> DependenceAnalysis:
    """Analytic dependences; falls back to the scan (flagged) off-form."""
    records: set = set()
    try:
        for src in scop.statements:
            for dst in scop.statements:
                for a_ref, a in src.iter_accesses():
                    for b_ref, b in dst.iter_accesses():
                        if a.array_name != b.array_name:
                            continue
                        if a.kind == READ and b.kind == READ:
                            continue
                        solver = _PairSolver(
                            scop, src, dst, a_ref, a, b_ref, b,
                            exact=not collapse, record_cap=record_cap,
                        )
                        records.update(solver.solve())
    except _UnsupportedForm:
        scanned = scan_dependences(scop, max_points=scan_points)
        if collapse:
            scanned = collapse_records(scanned)
        return DependenceAnalysis(list(scanned), best_effort=True)
    return DependenceAnalysis(sorted(records, key=_sort_key), best_effort=False)


def collapse_records(records) -> list:
    """Merge per-distance records of one access pair; varying levels -> None."""
    groups: dict = {}
    for r in records:
        key = (
            r.dep_type, r.source_stmt, r.target_stmt, r.array_name,
            r.source_ref, r.target_ref, len(r.distance),
        )
        groups.setdefault(key, []).append(r)
    out = []
    for key, group in sorted(groups.items()):
        # carried level partitions the family exactly like the analytic cases
        by_level: dict = {}
        for r in group:
            by_level.setdefault(r.carried, []).append(r)
        for carried, fam in sorted(by_level.items(), key=lambda kv: (kv[0] is None, kv[0])):
            dists = [f.distance for f in fam]
            merged = tuple(
                dists[0][i] if all(d[i] == dists[0][i] for d in dists) else None
                for i in range(len(dists[0]))
            )
            out.append(
                Dependence(
                    dep_type=key[0], source_stmt=key[1], target_stmt=key[2],
                    array_name=key[3], distance=merged, carried=carried,
                    source_ref=key[4], target_ref=key[5],
                )
            )
    return sorted(out, key=_sort_key)
