"""Scheme presentations of End, Aut, Hom, jet spaces and trivial-deformation
auto-arc spaces, built from the coefficient-equation recipe.

An algebra map out of ``B = k[x]/I`` is fixed by the images ``P_g`` of the
generators; writing ``P_g = sum_m a_{g,m} m`` over the standard basis, the map
is well defined exactly when every ideal generator ``f`` satisfies
``NF(f(P)) = 0``.  Each basis coordinate of that normal form is one equation
in the ``a`` variables.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .polyring import QQ, GF, Polynomial, format_monomial, parse_poly, reduce_mod_p
from .quotient import ArtinAlgebra, quotient_algebra


class UnsupportedEmbedding(ValueError):
    """The linear part of an endomorphism is not read off the standard basis."""


class NotASolution(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    label: str  # provenance, e.g. "a[x, x^2]" for generator x and basis monomial x^2


@dataclass(frozen=True)
class SchemePresentation:
    variables: Tuple[Variable, ...]
    equations: Tuple[Polynomial, ...]
    meta: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        names = self.names
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for eq in self.equations:
            if eq.vars != names:
                raise ValueError("equation ring does not match declared variables")

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def satisfied_by(self, point: Sequence, prime: Optional[int] = None) -> bool:
        for eq in self.equations:
            e = reduce_mod_p(eq, prime) if prime else eq
            if e.evaluate(point) != 0:
                return False
        return True

    def permuted(self, perm: Sequence[int]) -> "SchemePresentation":
        """Same scheme with variables listed in the order ``perm``."""
        variables = tuple(self.variables[i] for i in perm)
        names = tuple(v.name for v in variables)
        return SchemePresentation(variables, tuple(eq.embed(names) for eq in self.equations), dict(self.meta))

    def with_equations(self, extra: Sequence[Polynomial]) -> "SchemePresentation":
        return SchemePresentation(self.variables, self.equations + tuple(extra), dict(self.meta))

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "variables": [{"name": v.name, "label": v.label} for v in self.variables],
            "equations": [str(eq) for eq in self.equations],
            "meta": dict(self.meta),
        }

    def canonical_text(self) -> str:
        """Digest input: variables and equations only, metadata excluded."""
        body = {"variables": [[v.name, v.label] for v in self.variables],
                "equations": [str(eq) for eq in self.equations]}
        return json.dumps(body, sort_keys=True, separators=(",", ":"))

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    @classmethod
    def from_json(cls, data: Mapping) -> "SchemePresentation":
        variables = tuple(Variable(v["name"], v.get("label", v["name"])) if isinstance(v, Mapping)
                          else Variable(v, v) for v in data["variables"])
        names = tuple(v.name for v in variables)
        eqs = tuple(parse_poly(t, names, QQ) for t in data["equations"])
        return cls(variables, eqs, dict(data.get("meta", {})))


def disjoint_product(p1: SchemePresentation, p2: SchemePresentation, tag: str = "product") -> SchemePresentation:
    variables = p1.variables + p2.variables
    names = tuple(v.name for v in variables)
    eqs = tuple(e.embed(names) for e in p1.equations) + tuple(e.embed(names) for e in p2.equations)
    return SchemePresentation(variables, eqs, {"construction": tag, "factors": [dict(p1.meta), dict(p2.meta)]})


# -- the coefficient recipe ------------------------------------------------------

def _mono_label(alg: ArtinAlgebra, m) -> str:
    return format_monomial(m, alg.vars)


def _variable_order(alg: ArtinAlgebra, ngens: int) -> List[Tuple[int, int]]:
    """Pairs (generator, basis index): constants first, then linear, then the rest."""
    def stratum(m):
        return min(sum(m), 2)

    pairs = []
    for s in (0, 1, 2):
        for g in range(ngens):
            for k, m in enumerate(alg.basis):
                if stratum(m) == s:
                    pairs.append((g, k))
    return pairs


def _generic_images(alg: ArtinAlgebra, coord_names: Sequence[str], prefix: str, name_of):
    pairs = _variable_order(alg, len(coord_names))
    variables = []
    for g, k in pairs:
        variables.append(Variable(name_of(g, k), f"{prefix}[{coord_names[g]}, {_mono_label(alg, alg.basis[k])}]"))
    names = tuple(v.name for v in variables)
    zero = Polynomial.zero(names, QQ)
    images = [[zero] * alg.rank for _ in coord_names]
    for (g, k), v in zip(pairs, variables):
        images[g][k] = Polynomial.variable(v.name, names, QQ)
    return variables, names, images


def _equations(alg: ArtinAlgebra, targets: Sequence[Polynomial], images, names) -> List[Polynomial]:
    zero = Polynomial.zero(names, QQ)
    one = Polynomial.constant(1, names, QQ)
    eqs = []
    for f in targets:
        for coord in alg.evaluate(f, images, one=one, zero=zero):
            if not coord.is_zero():
                eqs.append(coord)
    return eqs


def endo_presentation(alg: ArtinAlgebra) -> SchemePresentation:
    """Presentation of End(B): variables ``a<g>_<k>`` for generator g and basis index k."""
    variables, names, images = _generic_images(alg, alg.vars, "a", lambda g, k: f"a{g}_{k}")
    eqs = _equations(alg, alg.groebner.generators, images, names)
    meta = {"construction": "endo", "algebra": algebra_summary(alg)}
    return SchemePresentation(tuple(variables), tuple(eqs), meta)


def hom_presentation(alg: ArtinAlgebra, target: Sequence[Polynomial], target_vars: Optional[Sequence[str]] = None,
                     name_of=None) -> SchemePresentation:
    """Presentation of Hom(Spec B, Y) for ``Y = V(target)`` in affine space.

    Variables are ``c_<t>_<k>``: coefficient of basis monomial k in the image
    of target coordinate t, listed coordinate-major.
    """
    if target_vars is None:
        if not target:
            raise ValueError("target_vars is required when there are no equations")
        target_vars = target[0].vars
    target_vars = tuple(target_vars)
    for t in target:
        if t.vars != target_vars:
            raise ValueError("target equations must share target_vars")
    name_of = name_of or (lambda t, k: f"c_{target_vars[t]}_{k}")
    variables = []
    for t in range(len(target_vars)):
        for k, m in enumerate(alg.basis):
            variables.append(Variable(name_of(t, k), f"c[{target_vars[t]}, {_mono_label(alg, m)}]"))
    names = tuple(v.name for v in variables)
    zero = Polynomial.zero(names, QQ)
    images = [[zero] * alg.rank for _ in target_vars]
    idx = 0
    for t in range(len(target_vars)):
        for k in range(alg.rank):
            images[t][k] = Polynomial.variable(variables[idx].name, names, QQ)
            idx += 1
    eqs = _equations(alg, target, images, names)
    meta = {"construction": "hom", "algebra": algebra_summary(alg),
            "target": [str(t) for t in target], "target_vars": list(target_vars)}
    return SchemePresentation(tuple(variables), tuple(eqs), meta)


def jet_algebra(m: int) -> ArtinAlgebra:
    return quotient_algebra([parse_poly(f"t^{m + 1}", ["t"])])


def jet_presentation(f: Polynomial, m: int) -> SchemePresentation:
    """Jets of order m of ``V(f)``: variables ``x0..xm, y0..ym`` (one block per coordinate)."""
    alg = jet_algebra(m)
    exps = [e[0] for e in alg.basis]
    pres = hom_presentation(alg, [f], f.vars, name_of=lambda t, k: f"{f.vars[t]}{exps[k]}")
    meta = dict(pres.meta)
    meta.update({"construction": "jet", "order": m, "poly": str(f)})
    return SchemePresentation(pres.variables, pres.equations, meta)


def _det(matrix: List[List[Polynomial]], names) -> Polynomial:
    n = len(matrix)
    total = Polynomial.zero(names, QQ)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Polynomial.constant(-1 if inv % 2 else 1, names, QQ)
        for i, j in enumerate(perm):
            term = term * matrix[i][j]
        total = total + term
    return total


def _linear_positions(alg: ArtinAlgebra) -> List[int]:
    """Basis index of each generator x_g; requires the ideal inside m^2."""
    n = alg.ngens
    for g in alg.groebner.generators:
        if any(sum(e) < 2 for e in g.terms):
            raise UnsupportedEmbedding("ideal is not contained in the square of the maximal ideal")
    pos = []
    for g in range(n):
        e = tuple(int(i == g) for i in range(n))
        if e not in alg.index:
            raise UnsupportedEmbedding(f"{alg.vars[g]} is not a standard monomial")
        pos.append(alg.index[e])
    return pos


def aut_presentation(alg: ArtinAlgebra) -> SchemePresentation:
    """End(B) plus ``z * det(M) - 1`` with M the linear-part coefficient matrix."""
    lin = _linear_positions(alg)
    endo = endo_presentation(alg)
    variables = endo.variables + (Variable("z", "inverse of det"),)
    names = tuple(v.name for v in variables)
    matrix = [[Polynomial.variable(f"a{g}_{lin[h]}", names, QQ) for h in range(alg.ngens)]
              for g in range(alg.ngens)]
    det = _det(matrix, names)
    eqs = tuple(e.embed(names) for e in endo.equations)
    eqs += (Polynomial.variable("z", names, QQ) * det - 1,)
    meta = {"construction": "aut", "algebra": algebra_summary(alg)}
    return SchemePresentation(variables, eqs, meta)


def trivial_deformation_autoarc(alg: ArtinAlgebra, target: Sequence[Polynomial],
                                target_vars: Optional[Sequence[str]] = None) -> SchemePresentation:
    """Hom(Spec B, Y) x End(B) on disjoint variables."""
    hom = hom_presentation(alg, target, target_vars)
    endo = endo_presentation(alg)
    pres = disjoint_product(hom, endo, "trivial-deformation")
    meta = dict(pres.meta)
    meta.update({"algebra": algebra_summary(alg), "target": hom.meta["target"],
                 "target_vars": hom.meta["target_vars"]})
    return SchemePresentation(pres.variables, pres.equations, meta)


def algebra_summary(alg: ArtinAlgebra) -> dict:
    return {
        "vars": list(alg.vars),
        "generators": [str(g) for g in alg.groebner.generators],
        "basis": [format_monomial(m, alg.vars) for m in alg.basis],
        "rank": alg.rank,
    }


# -- endomorphism points --------------------------------------------------------

@dataclass(frozen=True)
class EndoPoint:
    """Images of the generators as coordinate vectors in B over GF(prime)."""

    images: Tuple[Tuple[int, ...], ...]
    prime: int

    @classmethod
    def identity(cls, alg: ArtinAlgebra, prime: int) -> "EndoPoint":
        dom = GF(prime)
        return cls(tuple(tuple(dom.convert(c) for c in v) for v in alg.generator_coords), prime)

    @classmethod
    def from_assignment(cls, alg: ArtinAlgebra, pres: SchemePresentation, point: Sequence[int],
                        prime: int) -> "EndoPoint":
        images = [[0] * alg.rank for _ in range(alg.ngens)]
        for v, val in zip(pres.names, point):
            if v.startswith("a"):
                g, k = map(int, v[1:].split("_"))
                images[g][k] = val % prime
        return cls(tuple(tuple(r) for r in images), prime)

    def assignment(self, pres: SchemePresentation) -> List[int]:
        out = []
        for v in pres.names:
            g, k = map(int, v[1:].split("_"))
            out.append(self.images[g][k])
        return out


def _mul_mod(alg: ArtinAlgebra, u, v, p):
    dom = GF(p)
    out = [0] * alg.rank
    for i, ui in enumerate(u):
        if not ui:
            continue
        row = alg.table[i]
        for j, vj in enumerate(v):
            if not vj:
                continue
            prod = ui * vj
            for k, c in row[j]:
                out[k] = (out[k] + prod * dom.convert(c)) % p
    return out


def _apply(alg: ArtinAlgebra, vec: Sequence[int], images: Sequence[Sequence[int]], p: int) -> List[int]:
    """Evaluate the element ``vec`` of B with each x_g replaced by ``images[g]``."""
    cache: Dict = {}

    def mono(e):
        if e in cache:
            return cache[e]
        if not any(e):
            r = alg.one()
        else:
            g = next(i for i, x in enumerate(e) if x)
            rest = e[:g] + (e[g] - 1,) + e[g + 1:]
            r = _mul_mod(alg, mono(rest), images[g], p)
        cache[e] = r
        return r

    out = [0] * alg.rank
    for k, c in enumerate(vec):
        if c:
            m = mono(alg.basis[k])
            out = [(o + c * x) % p for o, x in zip(out, m)]
    return out


def is_endomorphism(alg: ArtinAlgebra, e: EndoPoint) -> bool:
    p = e.prime
    for f in alg.groebner.generators:
        fp = reduce_mod_p(f, p)
        acc = [0] * alg.rank
        for exp, c in fp.terms.items():
            term = alg.one()
            for g, k in enumerate(exp):
                for _ in range(k):
                    term = _mul_mod(alg, term, e.images[g], p)
            acc = [(a + c * t) % p for a, t in zip(acc, term)]
        if any(acc):
            return False
    return True


def compose_endos(alg: ArtinAlgebra, e1: EndoPoint, e2: EndoPoint, check: bool = True) -> EndoPoint:
    """Composite ``g -> e1(g)`` evaluated under ``e2``, i.e. the map ``e2 o e1`` on B."""
    if e1.prime != e2.prime:
        raise ValueError("endomorphisms over different fields")
    if check and not (is_endomorphism(alg, e1) and is_endomorphism(alg, e2)):
        raise NotASolution("inputs must satisfy the endomorphism presentation")
    p = e1.prime
    return EndoPoint(tuple(tuple(_apply(alg, img, e2.images, p)) for img in e1.images), p)
