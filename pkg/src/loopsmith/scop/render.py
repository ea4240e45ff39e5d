"""Render a Scop back to C source for the region between the markers."""

from __future__ import annotations

from ..affine import AffineExpr
from .model import ArrayAccess, Scop, Statement


def render_access(access: ArrayAccess) -> str:
    return access.array_name + "".join(f"[{row.render()}]" for row in access.rows)


def render_rhs(node, reads) -> str:
    def rec(n):
        tag = n[0]
        if tag == "num":
            return repr(n[1])
        if tag in ("param", "iter"):
            return n[1]
        if tag == "read":
            return render_access(reads[n[1]])
        if tag == "neg":
            return f"-{rec(n[1])}"
        op, left, right = n
        return f"({rec(left)} {op} {rec(right)})"

    text = rec(node)
    if text.startswith("(") and text.endswith(")"):
        # strip one redundant outer layer when it spans the whole expression
        depth = 0
        for i, ch in enumerate(text):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and i < len(text) - 1:
                return text
        return text[1:-1]
    return text


def render_statement(stmt: Statement) -> str:
    if stmt.call is not None:
        return f"{stmt.call}();"
    body = render_rhs(stmt.rhs, stmt.reads) if stmt.rhs is not None else "0"
    return f"{render_access(stmt.write)} {stmt.op} {body};"


def _guard_text(stmt: Statement) -> str:
    return " && ".join(f"{g.render()} >= 0" for g in stmt.guards)


def render_region(scop: Scop, indent: str = "  ") -> str:
    """Nested for-loops reconstructed from the statements' 2d+1 schedules."""
    lines: list[str] = []

    def emit(stmts: list[Statement], level: int, depth: int):
        pad = indent * depth
        groups: dict[int, list[Statement]] = {}
        for s in stmts:
            groups.setdefault(s.schedule.constants[level], []).append(s)
        for const in sorted(groups):
            group = groups[const]
            ending = [s for s in group if s.schedule.depth == level]
            deeper = [s for s in group if s.schedule.depth > level]
            for s in sorted(ending, key=lambda s: s.id):
                if s.guards:
                    lines.append(f"{pad}if ({_guard_text(s)})")
                    lines.append(f"{pad}{indent}{render_statement(s)}")
                else:
                    lines.append(f"{pad}{render_statement(s)}")
            if deeper:
                loop = deeper[0].loops[level]
                lines.append(
                    f"{pad}for ({loop.name} = {loop.lower.render()}; "
                    f"{loop.name} < {loop.upper.render()}; {loop.name}++) {{"
                )
                emit(deeper, level + 1, depth + 1)
                lines.append(f"{pad}}}")

    emit(list(scop.statements), 0, 0)
    return "\n".join(lines) + "\n"
