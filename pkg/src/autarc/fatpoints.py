"""Fat points: m-adic truncations of plane curve germs and monomial fat points."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Optional, Sequence, Tuple

from .motive import ONE, L, MotivicClass, gl_class
from .polyring import QQ, Polynomial, parse_poly, substitute
from .quotient import ArtinAlgebra, artin_algebra, buchberger, normal_form


class NotAtOrigin(ValueError):
    pass


@dataclass(frozen=True)
class FatPoint:
    algebra: ArtinAlgebra
    level: int
    origin: str

    @property
    def rank(self) -> int:
        return self.algebra.rank


def degree_monomials(nvars: int, degree: int):
    """All exponent vectors of the given total degree."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def power_of_maximal_ideal(vars: Sequence[str], n: int):
    return [Polynomial.monomial(e, vars, QQ) for e in degree_monomials(len(vars), n)]


def germ_truncation(f: Polynomial, level: int) -> FatPoint:
    """``Q[x,y]/((f) + (x,y)^(level+1))``, the level-th neighbourhood of the origin on V(f)."""
    if f.nvars != 2:
        raise ValueError("germ systems take plane curves (two variables)")
    if level < 0:
        raise ValueError("level must be non-negative")
    if f.constant_term() != 0:
        raise NotAtOrigin(f"{f} does not vanish at the origin")
    gens = [f] + power_of_maximal_ideal(f.vars, level + 1)
    alg = artin_algebra(buchberger(gens))
    return FatPoint(alg, level, f"germ {f}")


def monomial_fatpoint(d: int, n: int) -> FatPoint:
    """``Q[x_1..x_d]/(x_1..x_d)^n``; the single-variable case uses the name ``x``."""
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    vars = ("x",) if d == 1 else tuple(f"x{i}" for i in range(1, d + 1))
    alg = artin_algebra(buchberger(power_of_maximal_ideal(vars, n)))
    return FatPoint(alg, n - 1, f"monomial({d},{n})")


def translate_germ(f: Polynomial, point: Sequence) -> Polynomial:
    """Move ``point`` to the origin: returns ``f(x + a, y + b)``."""
    images = {}
    for name, a in zip(f.vars, point):
        images[name] = Polynomial.variable(name, f.vars, f.domain) + a
    return substitute(f, images)


def lemma_classes(d: int, n: int) -> Tuple[MotivicClass, MotivicClass]:
    """Closed-form classes of reduced End and Aut of ``k[x_1..x_d]/m^n``.

    With ``l = binomial(n-1+d, d)`` and ``r = d(l-1)``: End is ``L^r`` and Aut
    is ``[GL_d] L^(r - d^2)``.  For ``n = 1`` both are a point.
    """
    if n == 1:
        return ONE, ONE
    rank = comb(n - 1 + d, d)
    r = d * (rank - 1)
    return L ** r, gl_class(d).shift(r - d * d)


@dataclass
class AdmissibleSystem:
    """Chain of fat points ``X_0 -> X_1 -> ...`` produced lazily per level.

    Either a plane germ ``germ`` (levels are ``(f) + m^(i+1)``) or a monomial
    system of dimension ``monomial_dim`` (levels are ``m^(i+1)``, so ``d = 1``
    gives the jet system ``k[t]/t^(i+1)``).
    """

    germ: Optional[Polynomial] = None
    monomial_dim: Optional[int] = None
    _cache: Dict[int, FatPoint] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if (self.germ is None) == (self.monomial_dim is None):
            raise ValueError("give exactly one of germ / monomial_dim")
        if self.germ is not None and self.germ.constant_term() != 0:
            raise NotAtOrigin(f"{self.germ} does not vanish at the origin")

    @classmethod
    def from_germ(cls, text: str, vars: Sequence[str] = ("x", "y")) -> "AdmissibleSystem":
        return cls(germ=parse_poly(text, vars))

    @classmethod
    def jets(cls) -> "AdmissibleSystem":
        return cls(monomial_dim=1)

    def level(self, i: int) -> FatPoint:
        if i not in self._cache:
            if self.germ is not None:
                self._cache[i] = germ_truncation(self.germ, i)
            else:
                self._cache[i] = monomial_fatpoint(self.monomial_dim, i + 1)
        return self._cache[i]

    def describe(self) -> str:
        if self.germ is not None:
            return f"germ {self.germ}"
        return f"monomial system, d={self.monomial_dim}"

    def transition_ok(self, i: int) -> bool:
        """Check that ``B_(i+1) -> B_i`` is a surjection of quotients.

        The ideal of level ``i+1`` must lie inside the ideal of level ``i``
        and the standard monomials of level ``i`` must embed into level ``i+1``.
        """
        lo, hi = self.level(i).algebra, self.level(i + 1).algebra
        if lo.vars != hi.vars:
            return False
        if any(normal_form(g, lo.groebner).terms for g in hi.groebner.generators):
            return False
        return set(lo.basis) <= set(hi.basis)
