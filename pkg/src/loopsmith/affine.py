"""Integer affine expressions over iterator and global-parameter names."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class AffineExpr:
    """sum(coeff * name) + const with integer coefficients.

    terms is kept sorted and free of zero coefficients so equality and
    hashing behave as value semantics.
    """

    terms: tuple[tuple[str, int], ...] = ()
    const: int = 0

    @staticmethod
    def constant(value: int) -> "AffineExpr":
        return AffineExpr((), value)

    @staticmethod
    def var(name: str, coeff: int = 1, const: int = 0) -> "AffineExpr":
        if coeff == 0:
            return AffineExpr((), const)
        return AffineExpr(((name, coeff),), const)

    @staticmethod
    def _make(coeffs: dict, const: int) -> "AffineExpr":
        terms = tuple(sorted((n, c) for n, c in coeffs.items() if c != 0))
        return AffineExpr(terms, const)

    def coeffs(self) -> dict:
        return dict(self.terms)

    def coeff(self, name: str) -> int:
        return dict(self.terms).get(name, 0)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.terms)

    @property
    def is_constant(self) -> bool:
        return not self.terms

    def __add__(self, other: "AffineExpr") -> "AffineExpr":
        coeffs = self.coeffs()
        for n, c in other.terms:
            coeffs[n] = coeffs.get(n, 0) + c
        return self._make(coeffs, self.const + other.const)

    def __sub__(self, other: "AffineExpr") -> "AffineExpr":
        return self + other.scaled(-1)

    def __neg__(self) -> "AffineExpr":
        return self.scaled(-1)

    def scaled(self, k: int) -> "AffineExpr":
        return self._make({n: c * k for n, c in self.terms}, self.const * k)

    def plus(self, k: int) -> "AffineExpr":
        return AffineExpr(self.terms, self.const + k)

    def substitute(self, env: dict) -> "AffineExpr":
        """Replace names present in env (ints) and fold them into const."""
        coeffs: dict = {}
        const = self.const
        for n, c in self.terms:
            if n in env:
                const += c * env[n]
            else:
                coeffs[n] = coeffs.get(n, 0) + c
        return self._make(coeffs, const)

    def evaluate(self, env: dict) -> int:
        out = self.const
        for n, c in self.terms:
            out += c * env[n]
        return out

    def render(self) -> str:
        """C-syntax rendering, e.g. 'M - 1', 'i + 1', '2*j', '0'."""
        parts: list[str] = []
        for n, c in self.terms:
            if c == 1:
                frag = n
            elif c == -1:
                frag = f"-{n}"
            else:
                frag = f"{c}*{n}"
            if not parts:
                parts.append(frag)
            elif frag.startswith("-"):
                parts.append(f"- {frag[1:]}")
            else:
                parts.append(f"+ {frag}")
        if self.const or not parts:
            if not parts:
                parts.append(str(self.const))
            elif self.const < 0:
                parts.append(f"- {-self.const}")
            else:
                parts.append(f"+ {self.const}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()
