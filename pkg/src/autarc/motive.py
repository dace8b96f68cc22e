"""Laurent polynomials in the Lefschetz class L, the subring of the localized
Grothendieck ring that every computed class lands in."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Mapping


class MotivicClass:
    """Integer Laurent polynomial in ``L``, stored as ``{exponent: coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean: Dict[int, int] = {}
        for k, c in (terms or {}).items():
            if int(c) != c:
                raise ValueError(f"coefficient {c} is not an integer")
            if c:
                clean[int(k)] = clean.get(int(k), 0) + int(c)
        self.terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def const(cls, c: int) -> "MotivicClass":
        return cls({0: c})

    @classmethod
    def lefschetz_power(cls, k: int) -> "MotivicClass":
        return cls({k: 1})

    # -- ring structure ----------------------------------------------------------

    @staticmethod
    def _lift(other) -> "MotivicClass":
        if isinstance(other, MotivicClass):
            return other
        if isinstance(other, int):
            return MotivicClass.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return MotivicClass(out)

    __radd__ = __add__

    def __neg__(self):
        return MotivicClass({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: Dict[int, int] = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                out[a + b] = out.get(a + b, 0) + c * d
        return MotivicClass(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) == 1:
                (e, c), = self.terms.items()
                if c in (1, -1):
                    return MotivicClass({e * k: c ** abs(k)})
            raise ValueError("only monomials ±L^k are invertible")
        out = MotivicClass.const(1)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "MotivicClass":
        """Multiply by ``L^k``."""
        return MotivicClass({e + k: c for e, c in self.terms.items()})

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ValueError("degree of the zero class is undefined")
        return max(self.terms)

    @property
    def order(self) -> int:
        if not self.terms:
            raise ValueError("order of the zero class is undefined")
        return min(self.terms)

    def evaluate_at(self, q: int) -> Fraction:
        """Point-count realization ``L -> q``."""
        if q == 0 and any(k < 0 for k in self.terms):
            raise ZeroDivisionError("negative powers of L at q = 0")
        return sum((Fraction(q) ** k * c for k, c in self.terms.items()), Fraction(0))

    # -- text -------------------------------------------------------------------

    def _format(self, power, times="*") -> str:
        if not self.terms:
            return "0"
        pieces = []
        for i, k in enumerate(sorted(self.terms, reverse=True)):
            c = self.terms[k]
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = power(k)
                body = mono if a == 1 else f"{a}{times}{mono}"
            if i == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __str__(self):
        return self._format(lambda k: "L" if k == 1 else f"L^{k}")

    def __repr__(self):
        return f"MotivicClass({str(self)!r})"

    def latex(self) -> str:
        return self._format(lambda k: r"\mathbb{L}" if k == 1 else rf"\mathbb{{L}}^{{{k}}}", times="")

    @classmethod
    def parse(cls, text: str) -> "MotivicClass":
        """Parse ``"2*L^10 - L^9 + 3 + L^-1"`` style text (sums of c*L^k)."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty class string")
        if s[0] not in "+-":
            s = "+" + s
        out: Dict[int, int] = {}
        pos = 0
        term = re.compile(r"([+-])(?:(\d+)(?:\*L(?:\^(-?\d+))?)?|L(?:\^(-?\d+))?)")
        while pos < len(s):
            m = term.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse class {text!r} near position {pos}")
            sign = -1 if m.group(1) == "-" else 1
            if m.group(2) is not None:
                c = int(m.group(2))
                has_l = "L" in m.group(0)
                k = int(m.group(3)) if m.group(3) is not None else (1 if has_l else 0)
            else:
                c = 1
                k = int(m.group(4)) if m.group(4) is not None else 1
            out[k] = out.get(k, 0) + sign * c
            pos = m.end()
        return cls(out)


L = MotivicClass({1: 1})
ONE = MotivicClass({0: 1})
ZERO = MotivicClass()


def gl_class(d: int) -> MotivicClass:
    """Class of GL_d: the product of (L^d - L^i) for i < d."""
    out = ONE
    for i in range(d):
        out = out * (MotivicClass({d: 1}) - MotivicClass({i: 1}))
    return out


def evaluate_at(c: MotivicClass, q: int) -> Fraction:
    return c.evaluate_at(q)
