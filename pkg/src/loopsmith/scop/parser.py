"""Parser for the restricted C subset allowed between scop markers.

Accepted constructs: for loops with affine bounds, if conditionals with
affine conditions, assignments `lhs = expr` / `lhs op= expr` over array
references, and side-effect-free calls which become opaque statements.
Schedules are reconstructed from nesting and textual order in 2d+1 form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..affine import AffineExpr
from ..errors import NonAffineBound, ParseError, UnknownParameter, UnsupportedConstruct
from .model import READ, WRITE, ArrayAccess, LoopInfo, ScheduleVector, Scop, Statement

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d+|\d+)|(?P<id>[A-Za-z_]\w*)"
    r"|(?P<op><=|>=|==|!=|\+\+|--|\+=|-=|\*=|/=|&&|\|\||[-+*/%<>=;,(){}\[\]&|!])"
    r"|(?P<bad>\S))"
)

_COMMENT = re.compile(r"/\*.*?\*/|//[^\n]*", re.S)

_ASSIGN_OPS = {"=", "+=", "-=", "*="}


def _lex(text: str) -> list[tuple[str, str]]:
    text = _COMMENT.sub(" ", text)
    if "#" in text:
        raise UnsupportedConstruct("preprocessor directive inside scop region")
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        if m.lastgroup == "bad":
            raise UnsupportedConstruct(f"unexpected character {m.group()!r}")
        if m.group().strip():
            tokens.append((m.lastgroup, m.group().strip()))
    return tokens


@dataclass
class _Ctx:
    params: dict
    iterators: list  # names currently in scope, outermost first


class _Parser:
    def __init__(self, tokens, params):
        self.toks = tokens
        self.i = 0
        self.params = params

    # --- token helpers ---

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, v = self.next()
        if v != value:
            raise ParseError(f"expected {value!r}, got {v!r}")
        return v

    def at_end(self):
        return self.i >= len(self.toks)

    # --- grammar ---

    def parse_items(self, ctx, stop_at_brace=False) -> list:
        items = []
        while not self.at_end():
            kind, v = self.peek()
            if v == "}":
                if stop_at_brace:
                    return items
                raise ParseError("unbalanced '}'")
            items.append(self.parse_item(ctx))
        if stop_at_brace:
            raise ParseError("missing '}'")
        return items

    def parse_item(self, ctx):
        kind, v = self.peek()
        if v == "for":
            return self.parse_for(ctx)
        if v == "if":
            return self.parse_if(ctx)
        if v in ("while", "do", "switch", "goto", "return", "break", "continue"):
            raise UnsupportedConstruct(v)
        if v in ("int", "double", "float", "long", "char", "unsigned"):
            raise UnsupportedConstruct("declaration inside scop region")
        if kind == "id":
            return self.parse_stmt_or_call(ctx)
        raise UnsupportedConstruct(f"unexpected token {v!r}")

    def parse_body(self, ctx) -> list:
        if self.peek()[1] == "{":
            self.next()
            items = self.parse_items(ctx, stop_at_brace=True)
            self.expect("}")
            return items
        return [self.parse_item(ctx)]

    def parse_for(self, ctx):
        self.expect("for")
        self.expect("(")
        kind, name = self.next()
        if kind == "id" and name == "int":
            kind, name = self.next()
        if kind != "id":
            raise ParseError("loop iterator expected")
        self.expect("=")
        lower = self.affine(ctx)
        self.expect(";")
        kind, cond_var = self.next()
        if kind != "id" or cond_var != name:
            raise UnsupportedConstruct("loop condition must test the iterator")
        _, rel = self.next()
        if rel not in ("<", "<="):
            raise UnsupportedConstruct(f"loop relation {rel!r}")
        bound = self.affine(ctx)
        upper = bound if rel == "<" else bound.plus(1)
        self.expect(";")
        self.parse_increment(name)
        self.expect(")")
        ctx.iterators.append(name)
        body = self.parse_body(ctx)
        ctx.iterators.pop()
        return ("for", name, lower, upper, body)

    def parse_increment(self, name):
        a = self.next()[1]
        b = self.peek()[1]
        if a == "++" and b == name:
            self.next()
            return
        if a == name:
            op = self.next()[1]
            if op == "++":
                return
            if op == "+=" and self.peek()[0] == "num" and self.peek()[1] == "1":
                self.next()
                return
            if op == "=":
                # i = i + 1
                if (
                    self.peek()[1] == name
                    and self.peek(1)[1] == "+"
                    and self.peek(2)[1] == "1"
                ):
                    self.next(), self.next(), self.next()
                    return
        raise UnsupportedConstruct("only unit-step increments are supported")

    def parse_if(self, ctx):
        self.expect("if")
        self.expect("(")
        guards = self.parse_condition(ctx)
        self.expect(")")
        body = self.parse_body(ctx)
        if self.peek()[1] == "else":
            raise UnsupportedConstruct("else branch")
        return ("if", tuple(guards), body)

    def parse_condition(self, ctx) -> list:
        guards = list(self.parse_relation(ctx))
        while self.peek()[1] in ("&&", "&"):
            self.next()
            guards.extend(self.parse_relation(ctx))
        if self.peek()[1] in ("||", "|"):
            raise UnsupportedConstruct("disjunctive condition")
        return guards

    def parse_relation(self, ctx):
        """Yield AffineExpr constraints meaning expr >= 0."""
        left = self.affine(ctx)
        _, rel = self.next()
        right = self.affine(ctx)
        if rel == "<":
            yield right - left - AffineExpr.constant(1)
        elif rel == "<=":
            yield right - left
        elif rel == ">":
            yield left - right - AffineExpr.constant(1)
        elif rel == ">=":
            yield left - right
        elif rel == "==":
            yield left - right
            yield right - left
        else:
            raise UnsupportedConstruct(f"relation {rel!r}")

    def parse_stmt_or_call(self, ctx):
        _, name = self.next()
        if self.peek()[1] == "(":
            self.next()
            depth = 1
            while depth:
                _, v = self.next()
                if v is None:
                    raise ParseError("unterminated call")
                depth += v == "("
                depth -= v == ")"
            self.expect(";")
            return ("call", name)
        rows = []
        while self.peek()[1] == "[":
            self.next()
            rows.append(self.affine(ctx))
            self.expect("]")
        if not rows:
            raise UnsupportedConstruct(f"scalar assignment to {name!r}")
        _, op = self.next()
        if op not in _ASSIGN_OPS:
            raise UnsupportedConstruct(f"assignment operator {op!r}")
        reads: list[ArrayAccess] = []
        if op != "=":
            reads.append(ArrayAccess(name, tuple(rows), READ))
        rhs = self.rhs_expr(ctx, reads)
        self.expect(";")
        write = ArrayAccess(name, tuple(rows), WRITE)
        return ("stmt", write, op, rhs, tuple(reads))

    # --- expressions ---

    def affine(self, ctx) -> AffineExpr:
        """Affine expression over in-scope iterators and global parameters."""
        expr = self._affine_term(ctx)
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            rhs = self._affine_term(ctx)
            expr = expr + rhs if op == "+" else expr - rhs
        return expr

    def _affine_term(self, ctx) -> AffineExpr:
        expr = self._affine_factor(ctx)
        while self.peek()[1] == "*":
            self.next()
            rhs = self._affine_factor(ctx)
            if not expr.is_constant and not rhs.is_constant:
                raise NonAffineBound(f"product of {expr} and {rhs}")
            expr = rhs.scaled(expr.const) if expr.is_constant else expr.scaled(rhs.const)
        if self.peek()[1] in ("/", "%"):
            raise NonAffineBound("division in affine context")
        return expr

    def _affine_factor(self, ctx) -> AffineExpr:
        kind, v = self.next()
        if v == "-":
            return -self._affine_factor(ctx)
        if v == "(":
            inner = self.affine(ctx)
            self.expect(")")
            return inner
        if kind == "num":
            if "." in v:
                raise NonAffineBound("float literal in affine context")
            return AffineExpr.constant(int(v))
        if kind == "id":
            if v in ctx.iterators or v in self.params:
                return AffineExpr.var(v)
            raise UnknownParameter(v)
        raise ParseError(f"unexpected token {v!r} in affine expression")

    def rhs_expr(self, ctx, reads: list) -> tuple:
        node = self.rhs_term(ctx, reads)
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            node = (op, node, self.rhs_term(ctx, reads))
        return node

    def rhs_term(self, ctx, reads: list) -> tuple:
        node = self.rhs_factor(ctx, reads)
        while self.peek()[1] == "*":
            self.next()
            node = ("*", node, self.rhs_factor(ctx, reads))
        if self.peek()[1] in ("/", "%"):
            raise UnsupportedConstruct("division in statement expression")
        return node

    def rhs_factor(self, ctx, reads: list) -> tuple:
        kind, v = self.next()
        if v == "-":
            return ("neg", self.rhs_factor(ctx, reads))
        if v == "(":
            inner = self.rhs_expr(ctx, reads)
            self.expect(")")
            return inner
        if kind == "num":
            return ("num", float(v) if "." in v else int(v))
        if kind == "id":
            if self.peek()[1] == "[":
                rows = []
                while self.peek()[1] == "[":
                    self.next()
                    rows.append(self.affine(ctx))
                    self.expect("]")
                reads.append(ArrayAccess(v, tuple(rows), READ))
                return ("read", len(reads) - 1)
            if self.peek()[1] == "(":
                raise UnsupportedConstruct("function call inside expression")
            if v in self.params:
                return ("param", v)
            if v in ctx.iterators:
                return ("iter", v)
            raise UnknownParameter(v)
        raise ParseError(f"unexpected token {v!r} in expression")


def _flatten(items, guards=()):
    """Splice if-bodies into their parent's position sequence."""
    for item in items:
        if item[0] == "if":
            yield from _flatten(item[2], guards + item[1])
        else:
            yield item, guards


def parse_scop(scop_text: str, global_params: dict, array_sizes: dict | None = None) -> Scop:
    tokens = _lex(scop_text)
    parser = _Parser(tokens, dict(global_params))
    ctx = _Ctx(dict(global_params), [])
    tree = parser.parse_items(ctx)

    statements: list[Statement] = []
    array_dims: dict[str, int] = {}

    def check_dims(access: ArrayAccess):
        seen = array_dims.setdefault(access.array_name, len(access.rows))
        if seen != len(access.rows):
            raise UnsupportedConstruct(
                f"array {access.array_name} used with {len(access.rows)} and {seen} dims"
            )

    def walk(items, consts, loops, guards):
        for pos, (item, item_guards) in enumerate(_flatten(items, guards)):
            if item[0] == "for":
                _, name, lower, upper, body = item
                walk(
                    body,
                    consts + [pos],
                    loops + [LoopInfo(name, lower, upper)],
                    item_guards,
                )
                continue
            entries: list = []
            for c, loop in zip(consts, loops):
                entries.extend([c, loop.name])
            entries.append(pos)
            schedule = ScheduleVector(tuple(entries))
            if item[0] == "call":
                statements.append(
                    Statement(
                        id=len(statements),
                        schedule=schedule,
                        loops=tuple(loops),
                        write=None,
                        reads=(),
                        guards=item_guards,
                        call=item[1],
                    )
                )
                continue
            _, write, op, rhs, reads = item
            check_dims(write)
            for r in reads:
                check_dims(r)
            statements.append(
                Statement(
                    id=len(statements),
                    schedule=schedule,
                    loops=tuple(loops),
                    write=write,
                    reads=reads,
                    op=op,
                    rhs=rhs,
                    guards=item_guards,
                )
            )

    walk(tree, [], [], ())

    arrays = ()
    if array_sizes:
        arrays = tuple(sorted((k, tuple(v)) for k, v in array_sizes.items()))
    return Scop(
        statements=tuple(statements),
        global_params=tuple(sorted(global_params.items())),
        arrays=arrays,
    )
