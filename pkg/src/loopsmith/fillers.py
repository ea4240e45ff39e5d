"""Deterministic array initializer rules shared by emission and testing.

A fill rule is a small integer expression over the element's indices; the
emitted C reduces it modulo a small prime so values stay exactly
representable through long accumulation chains.
"""

from __future__ import annotations

from dataclasses import dataclass

# expression nodes: ("num", v) | ("idx", d) | ("neg", e) | (op, l, r), op in + - * %
_OPS = ("+", "-", "*")


@dataclass(frozen=True)
class FillRule:
    array: str
    dims: int
    expr: tuple
    mod: int = 97
    signed: bool = False  # skip the mod wrap for rules that are already bounded

    def render_expr(self, node=None, names=None) -> str:
        node = self.expr if node is None else node
        names = names or [f"li{d}" for d in range(self.dims)]
        tag = node[0]
        if tag == "num":
            return str(node[1])
        if tag == "idx":
            return names[node[1]]
        if tag == "neg":
            return f"(-{self.render_expr(node[1], names)})"
        op, left, right = node
        return f"({self.render_expr(left, names)} {op} {self.render_expr(right, names)})"

    def evaluate(self, idx) -> float:
        def rec(node):
            tag = node[0]
            if tag == "num":
                return node[1]
            if tag == "idx":
                return idx[node[1]]
            if tag == "neg":
                return -rec(node[1])
            op, left, right = node
            a, b = rec(left), rec(right)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            return a - (a // b) * b if b else 0  # C-free euclidean fallback

        value = rec(self.expr)
        return float(value if self.signed else value % self.mod)

    def constants(self) -> list:
        out = []

        def rec(node, path):
            if node[0] == "num":
                out.append((path, node[1]))
            elif node[0] == "neg":
                rec(node[1], path + (1,))
            elif node[0] not in ("idx",):
                rec(node[1], path + (1,))
                rec(node[2], path + (2,))

        rec(self.expr, ())
        return out

    def operators(self) -> list:
        out = []

        def rec(node, path):
            if node[0] in _OPS:
                out.append((path, node[0]))
                rec(node[1], path + (1,))
                rec(node[2], path + (2,))
            elif node[0] == "neg":
                rec(node[1], path + (1,))

        rec(self.expr, ())
        return out

    def replace(self, path, builder) -> "FillRule":
        def rec(node, path):
            if not path:
                return builder(node)
            parts = list(node)
            parts[path[0]] = rec(parts[path[0]], path[1:])
            return tuple(parts)

        return FillRule(self.array, self.dims, rec(self.expr, path), self.mod, self.signed)


def affine_rule(array: str, dims: int, salt: int = 0) -> FillRule:
    expr = ("num", 1 + 4 * salt)
    for d in range(dims):
        term = ("*", ("+", ("idx", d), ("num", 1)), ("num", (7, 13, 11, 17)[d % 4]))
        expr = ("+", expr, term)
    return FillRule(array, dims, expr)


def constant_rule(array: str, dims: int, value: int = 1) -> FillRule:
    return FillRule(array, dims, ("num", value), signed=True)


def alternating_rule(array: str, dims: int) -> FillRule:
    total = ("idx", 0)
    for d in range(1, dims):
        total = ("+", total, ("idx", d))
    sign = ("-", ("*", ("%", total, ("num", 2)), ("num", 2)), ("num", 1))
    base = ("+", ("%", total, ("num", 7)), ("num", 3))
    return FillRule(array, dims, ("*", sign, base), signed=True)


INIT_BEGIN = "/* loopsmith init begin */"
INIT_END = "/* loopsmith init end */"


def render_init_body(rules, extents, indent="  ") -> str:
    """C statements filling each array; extents maps array -> extent exprs."""
    lines = []
    for rule in rules:
        exts = extents[rule.array]
        pad = indent
        for d in range(rule.dims):
            lines.append(
                f"{pad}for (li{d} = 0; li{d} < {exts[d]}; li{d}++)"
            )
            pad += indent
        ref = rule.array + "".join(f"[li{d}]" for d in range(rule.dims))
        expr = rule.render_expr()
        if rule.signed:
            lines.append(f"{pad}{ref} = (double)({expr});")
        else:
            lines.append(f"{pad}{ref} = (double)((({expr}) % {rule.mod} + {rule.mod}) % {rule.mod});")
    return "\n".join(lines) + "\n"


def splice_init(program: str, body: str) -> str:
    """Replace the marked init region's body with freshly rendered fills."""
    begin = program.index(INIT_BEGIN) + len(INIT_BEGIN)
    end = program.index(INIT_END)
    return program[:begin] + "\n" + body + "  " + program[end:].lstrip(" ")
