"""Corpus diversity report: eight loop properties, four clusters each.

Only the dependence-count bins are fixed by convention (0-2 / 3-5 / 6-10 /
11+); the remaining seven properties use the bin edges below, chosen so a
diverse corpus can reach every cluster. The array-size property can occupy
at most three bins with the default three-entry size list.
"""

from __future__ import annotations

from collections import Counter

PROPERTIES = (
    "nstmts", "bound", "depth", "schedule",
    "ndeps", "dep_type", "narrays", "array_size",
)

CLUSTERS = ("A", "B", "C", "D")


def _bin(value, edges) -> str:
    """edges: three ascending thresholds; value <= edge -> that cluster."""
    for label, edge in zip(CLUSTERS, edges):
        if value <= edge:
            return label
    return CLUSTERS[-1]


def property_clusters(scop, deps) -> dict:
    """Cluster labels for one scop; deps are collapsed dependence records."""
    statements = scop.statements
    loops = {}
    for s in statements:
        for loop in s.loops:
            loops[loop.name] = loop
    iterator_names = set(loops)
    triangular = sum(
        1 for loop in loops.values() if set(loop.upper.names) & iterator_names
    )
    depth = max((s.schedule.depth for s in statements), default=0)
    nests = len({s.schedule.constants[0] for s in statements})
    arrays = {a.array_name for s in statements for _, a in s.iter_accesses()}
    sizes = set()
    for _, dims in scop.arrays:
        for d in dims:
            sizes.update(d.names)
    carried_types = {d.dep_type for d in deps if d.carried is not None}
    return {
        "nstmts": _bin(len(statements), (1, 2, 4)),
        "bound": _bin(triangular, (0, 1, 2)),
        "depth": _bin(depth, (1, 2, 3)),
        "schedule": _bin(nests, (1, 2, 3)),
        "ndeps": _bin(len(list(deps)), (2, 5, 10)),
        "dep_type": _bin(len(carried_types), (0, 1, 2)),
        "narrays": _bin(len(arrays), (1, 2, 3)),
        "array_size": _bin(len(sizes), (1, 2, 3)),
    }


def corpus_occupancy(cluster_rows) -> dict:
    """property -> Counter of cluster labels over a corpus."""
    occupancy = {prop: Counter() for prop in PROPERTIES}
    for row in cluster_rows:
        for prop, label in row.items():
            occupancy[prop][label] += 1
    return occupancy
