"""Buchberger's algorithm, normal forms and zero-dimensional quotient algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .polyring import QQ, Domain, DomainMismatch, Exponent, Polynomial, grevlex_key


class NotZeroDimensional(ValueError):
    pass


class EmptyAlgebra(ValueError):
    """The ideal is the unit ideal, so the quotient is the zero ring."""


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"
    priority: Optional[Tuple[int, ...]] = None  # most significant variable first

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, e: Exponent):
        if self.priority is not None:
            e = tuple(e[i] for i in self.priority)
        if self.kind == "lex":
            return e
        return grevlex_key(e)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


# Internal working polynomials are plain dicts; coefficient arithmetic is
# delegated to a small ring helper so QQ and GF(p) share the reduction loop.

class _Ring:
    def __init__(self, domain: Domain, order: MonomialOrder):
        self.domain = domain
        self.order = order
        self.p = domain.p if domain.kind == "GF" else 0

    def lead(self, f: Dict[Exponent, int]) -> Exponent:
        return max(f, key=self.order.key)

    def normalize(self, f):
        """Primitive integer form over QQ, monic over GF(p)."""
        if not f:
            return f
        lm = self.lead(f)
        if self.p:
            inv = pow(f[lm], -1, self.p)
            return {e: c * inv % self.p for e, c in f.items()}
        g = 0
        for c in f.values():
            g = gcd(g, c)
        if f[lm] < 0:
            g = -g
        return {e: c // g for e, c in f.items()}

    def add_multiple(self, f, a, g, b, shift):
        """Return a*f - b*x^shift*g."""
        out = {e: a * c for e, c in f.items()} if a != 1 else dict(f)
        for e, c in g.items():
            m = tuple(x + y for x, y in zip(e, shift))
            v = out.get(m, 0) - b * c
            if self.p:
                v %= self.p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        if self.p and a != 1:
            out = {e: c % self.p for e, c in out.items() if c % self.p}
        return out

    def reduce(self, f, basis: Sequence[Tuple[Exponent, dict]]):
        """Fully reduce f by basis [(lm, g)]; g primitive (QQ) or monic (GF)."""
        f = dict(f)
        rem: Dict[Exponent, int] = {}
        key = self.order.key
        while f:
            e = max(f, key=key)
            hit = next(((lm, g) for lm, g in basis if _divides(lm, e)), None)
            if hit is None:
                rem[e] = f.pop(e)
                continue
            lm, g = hit
            c = f[e]
            shift = _sub(e, lm)
            if self.p:
                f = self.add_multiple(f, 1, g, c, shift)
                continue
            lc = g[lm]
            d = gcd(c, lc)
            a, b = lc // d, c // d
            f = self.add_multiple(f, a, g, b, shift)
            if a != 1:
                rem = {k: a * v for k, v in rem.items()}
            cont = 0
            for v in f.values():
                cont = gcd(cont, v)
            for v in rem.values():
                cont = gcd(cont, v)
            if cont > 1:
                f = {k: v // cont for k, v in f.items()}
                rem = {k: v // cont for k, v in rem.items()}
        return rem

    def spoly(self, f, g):
        lf, lg = self.lead(f), self.lead(g)
        m = _lcm(lf, lg)
        if self.p:
            return self.add_multiple(_shift(f, _sub(m, lf)), 1, g, f[lf] * pow(g[lg], -1, self.p), _sub(m, lg))
        cf, cg = f[lf], g[lg]
        d = gcd(cf, cg)
        return self.add_multiple(_shift(f, _sub(m, lf)), cg // d, g, cf // d, _sub(m, lg))


def _shift(f, s):
    return {tuple(x + y for x, y in zip(e, s)): c for e, c in f.items()}


def _to_internal(p: Polynomial, ring: _Ring):
    if ring.p:
        return dict(p.terms)
    den = 1
    for c in p.terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    return {e: int(c * den) for e, c in p.terms.items()}


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[Polynomial, ...]
    order: MonomialOrder = GREVLEX
    reduced: bool = True

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.generators[0].vars

    @property
    def domain(self) -> Domain:
        return self.generators[0].domain

    @cached_property
    def leading_monomials(self) -> Tuple[Exponent, ...]:
        return tuple(max(g.terms, key=self.order.key) for g in self.generators)

    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self.leading_monomials)

    def _internal(self):
        ring = _Ring(self.domain, self.order)
        return ring, [(lm, _to_internal(g, ring)) for lm, g in zip(self.leading_monomials, self.generators)]

    def satisfies_buchberger_criterion(self) -> bool:
        ring, basis = self._internal()
        gens = [g for _, g in basis]
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if ring.reduce(ring.spoly(gens[i], gens[j]), basis):
                    return False
        return True


def buchberger(generators: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal spanned by ``generators``.

    Pairs are processed by the normal strategy (smallest lcm first) and pruned
    with the coprime-leading-monomial and chain criteria.  Over QQ the working
    polynomials are kept as primitive integer polynomials.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    vars, domain = generators[0].vars, generators[0].domain
    for g in generators:
        if g.vars != vars or g.domain != domain:
            raise DomainMismatch("generators must share variables and domain")
    if not domain.is_field:
        domain = QQ
        generators = [Polynomial(g.terms, vars, QQ) for g in generators]
    ring = _Ring(domain, order)

    G: List[dict] = []
    lms: List[Exponent] = []
    pairs: set = set()

    def add(h):
        h = ring.normalize(h)
        k = len(G)
        G.append(h)
        lms.append(ring.lead(h))
        for i in range(k):
            if G[i] is not None:
                pairs.add((i, k))

    for g in generators:
        h = ring.reduce(_to_internal(g, ring), [(lms[i], G[i]) for i in range(len(G)) if G[i] is not None])
        if h:
            add(h)

    def lcm_key(pair):
        i, j = pair
        m = _lcm(lms[i], lms[j])
        return (sum(m), order.key(m), j, i)

    while pairs:
        pair = min(pairs, key=lcm_key)
        pairs.discard(pair)
        i, j = pair
        if G[i] is None or G[j] is None:
            continue
        li, lj = lms[i], lms[j]
        m = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        chain = False
        for k in range(len(G)):
            if k in (i, j) or G[k] is None:
                continue
            if _divides(lms[k], m) and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        active = [(lms[k], G[k]) for k in range(len(G)) if G[k] is not None]
        h = ring.reduce(ring.spoly(G[i], G[j]), active)
        if h:
            add(h)
            if not any(ring.lead(h)):
                break

    return GroebnerBasis(tuple(_reduce_basis(ring, G, lms, vars)), order, True)


def _reduce_basis(ring: _Ring, G, lms, vars) -> List[Polynomial]:
    idx = [k for k in range(len(G)) if G[k] is not None]
    # minimal: drop generators whose lm is divisible by another's
    minimal = []
    for k in idx:
        if any(m != k and _divides(lms[m], lms[k]) and (lms[m] != lms[k] or m < k) for m in idx):
            continue
        minimal.append(k)
    basis = [(lms[k], G[k]) for k in minimal]
    out = []
    for t, (lm, g) in enumerate(basis):
        others = [b for s, b in enumerate(basis) if s != t]
        h = ring.reduce(g, others)
        lc = h[lm]
        if ring.p:
            inv = pow(lc, -1, ring.p)
            out.append(Polynomial({e: c * inv for e, c in h.items()}, vars, ring.domain))
        else:
            out.append(Polynomial({e: Fraction(c, lc) for e, c in h.items()}, vars, QQ))
    out.sort(key=lambda p: ring.order.key(max(p.terms, key=ring.order.key)))
    return out


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Unique remainder of ``p`` modulo the ideal, supported on standard monomials."""
    if p.vars != gb.vars:
        raise DomainMismatch("polynomial and basis live in different rings")
    dom = gb.domain
    if p.domain != dom:
        if p.domain.kind in ("ZZ", "QQ"):
            p = Polynomial(p.terms, p.vars, dom)
        else:
            raise DomainMismatch(f"{p.domain} vs {dom}")
    if not p.terms:
        return p
    key = gb.order.key
    lms = gb.leading_monomials
    basis = list(zip(lms, (g.terms for g in gb.generators)))
    f = dict(p.terms)
    rem: Dict[Exponent, object] = {}
    pm = dom.p if dom.kind == "GF" else 0
    while f:
        e = max(f, key=key)
        c = f.pop(e)
        for lm, g in basis:
            if _divides(lm, e):
                s = _sub(e, lm)
                for ge, gc in g.items():
                    if ge == lm:
                        continue
                    m = tuple(x + y for x, y in zip(ge, s))
                    v = f.get(m, 0) - c * gc
                    if pm:
                        v %= pm
                    if v:
                        f[m] = v
                    else:
                        f.pop(m, None)
                break
        else:
            rem[e] = c
    return Polynomial(rem, p.vars, dom)


def standard_monomials(gb: GroebnerBasis) -> List[Exponent]:
    """Monomials outside the leading-term ideal, ascending in the basis order."""
    lms = gb.leading_monomials
    n = len(gb.vars)
    if gb.is_unit():
        return []
    for i in range(n):
        if not any(lm[i] > 0 and sum(lm) == lm[i] for lm in lms):
            raise NotZeroDimensional(f"no pure power of {gb.vars[i]} among leading monomials")
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for e in frontier:
            for i in range(n):
                m = e[:i] + (e[i] + 1,) + e[i + 1:]
                if m in seen or any(_divides(lm, m) for lm in lms):
                    continue
                seen.add(m)
                nxt.append(m)
        frontier = nxt
    return sorted(seen, key=gb.order.key)


@dataclass(frozen=True)
class ArtinAlgebra:
    """Finite-dimensional quotient ``k[x]/I`` with its standard-monomial basis."""

    groebner: GroebnerBasis
    basis: Tuple[Exponent, ...]
    local: bool = field(default=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.groebner.vars

    @property
    def ngens(self) -> int:
        return len(self.vars)

    @property
    def domain(self) -> Domain:
        return self.groebner.domain

    @cached_property
    def index(self) -> Dict[Exponent, int]:
        return {m: i for i, m in enumerate(self.basis)}

    def coords(self, p: Polynomial) -> List:
        """Coordinates of NF(p) in the standard basis."""
        nf = normal_form(p, self.groebner)
        out = [0] * self.rank
        for e, c in nf.terms.items():
            out[self.index[e]] = c
        return out

    def monomial_coords(self, e: Exponent) -> List:
        return self.coords(Polynomial.monomial(e, self.vars, self.domain))

    @cached_property
    def table(self) -> Tuple[Tuple[Tuple[Tuple[int, object], ...], ...], ...]:
        """``table[i][j]`` lists ``(k, c)`` with ``b_i * b_j = sum c * b_k``."""
        rows = []
        for a in self.basis:
            row = []
            for b in self.basis:
                v = self.monomial_coords(tuple(x + y for x, y in zip(a, b)))
                row.append(tuple((k, c) for k, c in enumerate(v) if c))
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def generator_coords(self) -> Tuple[Tuple, ...]:
        """Coordinates of each ambient variable x_g in B."""
        n = self.ngens
        return tuple(tuple(self.monomial_coords(tuple(int(i == g) for i in range(n)))) for g in range(n))

    def mul(self, u: Sequence, v: Sequence, zero=0) -> List:
        """Product of two coordinate vectors; entries may be any ring elements."""
        out = [zero] * self.rank
        table = self.table
        for i, ui in enumerate(u):
            if _is_zero(ui):
                continue
            row = table[i]
            for j, vj in enumerate(v):
                if _is_zero(vj):
                    continue
                prod = ui * vj
                for k, c in row[j]:
                    out[k] = out[k] + prod * c
        return out

    def one(self, one=1, zero=0) -> List:
        v = [zero] * self.rank
        v[self.index[(0,) * self.ngens]] = one
        return v

    def evaluate(self, f: Polynomial, images: Sequence[Sequence], one=1, zero=0) -> List:
        """Coordinates of ``f(images)`` where ``images[g]`` is a vector in B."""
        if f.vars != self.vars and len(f.vars) != len(images):
            raise DomainMismatch("one image per variable of f is required")
        powers: Dict[Tuple[int, int], List] = {}

        def power(g, k):
            if (g, k) not in powers:
                powers[(g, k)] = list(images[g]) if k == 1 else self.mul(power(g, k - 1), images[g], zero)
            return powers[(g, k)]

        out = [zero] * self.rank
        for e, c in f.terms.items():
            term = None
            for g, k in enumerate(e):
                if k:
                    term = power(g, k) if term is None else self.mul(term, power(g, k), zero)
            if term is None:
                term = self.one(one, zero)
            out = [o + t * c for o, t in zip(out, term)]
        return out

    def is_nilpotent(self, v: Sequence) -> bool:
        w = list(v)
        for _ in range(self.rank):
            if all(_is_zero(x) for x in w):
                return True
            w = self.mul(w, v)
        return all(_is_zero(x) for x in w)

    def compute_local(self) -> bool:
        return all(self.is_nilpotent(v) for v in self.generator_coords)

    def degree_one_positions(self) -> List[int]:
        return [i for i, m in enumerate(self.basis) if sum(m) == 1]


def _is_zero(x) -> bool:
    if isinstance(x, Polynomial):
        return not x.terms
    return x == 0


def artin_algebra(gb: GroebnerBasis) -> ArtinAlgebra:
    basis = standard_monomials(gb)
    if not basis:
        raise EmptyAlgebra("the ideal is the unit ideal")
    alg = ArtinAlgebra(gb, tuple(basis))
    object.__setattr__(alg, "local", alg.compute_local())
    return alg


def quotient_algebra(generators: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> ArtinAlgebra:
    return artin_algebra(buchberger(generators, order))
