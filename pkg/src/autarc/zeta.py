"""Motivic generating series: assembly, rational closed forms, fitting, and the
smooth-fiber and classical (jet) series."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

from .autoarc import endo_presentation, jet_presentation
from .count import DEFAULT_BUDGET, certify, count_points, first_primes, interpolate_presentation
from .fatpoints import AdmissibleSystem
from .motive import ONE, ZERO, MotivicClass
from .polyring import Polynomial


class TruncationMismatch(ValueError):
    pass


class NoFit(ValueError):
    pass


class CertificationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class MotivicSeries:
    coefficients: Tuple[MotivicClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients:
            raise ValueError("a series needs at least the constant coefficient")

    @property
    def truncation(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, i):
        return self.coefficients[i]

    def __len__(self):
        return len(self.coefficients)

    def _check(self, other: "MotivicSeries"):
        if self.truncation != other.truncation:
            raise TruncationMismatch(f"truncations {self.truncation} and {other.truncation} differ")

    def __add__(self, other: "MotivicSeries") -> "MotivicSeries":
        self._check(other)
        return MotivicSeries(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __mul__(self, other):
        if isinstance(other, (MotivicClass, int)):
            return MotivicSeries(tuple(c * other for c in self.coefficients))
        self._check(other)
        return MotivicSeries(tuple(_poly_mul(self.coefficients, other.coefficients, self.truncation)))

    def __eq__(self, other):
        if not isinstance(other, MotivicSeries):
            return NotImplemented
        return self.coefficients == other.coefficients

    def to_json(self) -> dict:
        return {"truncation": self.truncation, "coefficients": [str(c) for c in self.coefficients]}

    @classmethod
    def from_json(cls, data: Mapping) -> "MotivicSeries":
        coeffs = tuple(MotivicClass.parse(c) for c in data["coefficients"])
        if "truncation" in data and data["truncation"] != len(coeffs) - 1:
            raise TruncationMismatch("truncation field disagrees with coefficient count")
        return cls(coeffs)

    def latex(self) -> str:
        return _latex_poly(self.coefficients) + rf" + O(t^{{{self.truncation + 1}}})"


def _poly_mul(a: Sequence[MotivicClass], b: Sequence[MotivicClass], upto: int) -> List[MotivicClass]:
    out = [ZERO] * (upto + 1)
    for i, x in enumerate(a):
        if i > upto or not x:
            continue
        for j, y in enumerate(b):
            if i + j > upto:
                break
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _trim(coeffs: Sequence[MotivicClass]) -> Tuple[MotivicClass, ...]:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def _latex_term(c: MotivicClass, i: int) -> str:
    t = "" if i == 0 else ("t" if i == 1 else f"t^{{{i}}}")
    body = c.latex()
    if not t:
        return body
    if body == "1":
        return t
    if body == "-1":
        return "-" + t
    if len(c.terms) > 1:
        return f"({body}){t}"
    return body + t


def _latex_poly(coeffs: Sequence[MotivicClass]) -> str:
    parts = [_latex_term(c, i) for i, c in enumerate(coeffs) if c]
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


@dataclass(frozen=True)
class RationalForm:
    """``polynomial_part + numerator / prod (1 - L^a t^b)``."""

    numerator: Tuple[MotivicClass, ...]
    factors: Tuple[Tuple[int, int], ...] = ()
    polynomial_part: Tuple[MotivicClass, ...] = ()

    def __post_init__(self):
        if any(b < 1 for _, b in self.factors):
            raise ValueError("factor exponents b must be positive")
        object.__setattr__(self, "numerator", _trim(self.numerator))
        object.__setattr__(self, "polynomial_part", _trim(self.polynomial_part))
        factors = sorted(((int(a), int(b)) for a, b in self.factors), key=lambda f: (f[1], f[0]))
        object.__setattr__(self, "factors", tuple(factors))

    def denominator(self) -> Tuple[MotivicClass, ...]:
        den: List[MotivicClass] = [ONE]
        for a, b in self.factors:
            nxt = [ZERO] * (len(den) + b)
            for i, c in enumerate(den):
                nxt[i] = nxt[i] + c
                nxt[i + b] = nxt[i + b] - c.shift(a)
            den = nxt
        return tuple(den)

    def expand(self, order: int) -> MotivicSeries:
        series = list(self.numerator[:order + 1]) + [ZERO] * max(0, order + 1 - len(self.numerator))
        for a, b in self.factors:
            geo = [ZERO] * (order + 1)
            for k in range(0, order // b + 1):
                geo[k * b] = MotivicClass({a * k: 1})
            series = _poly_mul(series, geo, order)
        for i, c in enumerate(self.polynomial_part[:order + 1]):
            series[i] = series[i] + c
        return MotivicSeries(tuple(series))

    def to_json(self) -> dict:
        out = {"numerator": [str(c) for c in self.numerator], "factors": [[a, b] for a, b in self.factors]}
        if self.polynomial_part:
            out["polynomial_part"] = [str(c) for c in self.polynomial_part]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "RationalForm":
        return cls(tuple(MotivicClass.parse(c) for c in data["numerator"]),
                   tuple((a, b) for a, b in data.get("factors", [])),
                   tuple(MotivicClass.parse(c) for c in data.get("polynomial_part", [])))

    def latex(self) -> str:
        num = _latex_poly(self.numerator)
        den = "".join(
            "(1-" + _latex_term(MotivicClass({a: 1}), b) + ")" for a, b in self.factors)
        frac = rf"\frac{{{num}}}{{{den}}}" if den else num
        if self.polynomial_part:
            return _latex_poly(self.polynomial_part) + " + " + frac
        return frac


def cusp_closed_form() -> RationalForm:
    """The cuspidal cubic's auto-Igusa series as printed in closed form."""
    L = MotivicClass({1: 1})
    num = (ZERO, ZERO, ZERO, L ** 7 - L ** 6, L ** 7, ZERO, ZERO, L ** 7)
    poly = (MotivicClass({-1: 1}), L, L ** 2)
    return RationalForm(num, ((1, 3), (0, 1)), poly)


def _candidates(max_a: int, max_b: int, max_factors: int):
    singles = sorted(((a, b) for b in range(1, max_b + 1) for a in range(-max_a, max_a + 1)),
                     key=lambda f: (f[1], f[0]))
    for k in range(max_factors + 1):
        yield from combinations_with_replacement(singles, k)


def fit_rational(series: MotivicSeries, max_a: int = 8, max_b: int = 4, max_factors: int = 2,
                 max_num_degree: int = 8) -> RationalForm:
    """Smallest ``p(t) / prod(1 - L^a t^b)`` reproducing every coefficient of ``series``.

    Candidates run by number of factors, then lexicographically by sorted
    ``(b, a)``.  The numerator is ``series * denominator`` truncated at
    ``D = min(max_num_degree, T - 2 - sum b)``; the candidate is accepted when
    the coefficients ``D+1..T`` of that product vanish.
    """
    T = series.truncation
    coeffs = series.coefficients
    for cand in _candidates(max_a, max_b, max_factors):
        d = min(max_num_degree, T - 2 - sum(b for _, b in cand))
        if d < 0:
            continue
        form = RationalForm((), cand)
        prod = _poly_mul(coeffs, form.denominator(), T)
        if any(prod[d + 1:]):
            continue
        fit = RationalForm(tuple(prod[:d + 1]), cand)
        if fit.expand(T) == series:
            return fit
    raise NoFit(f"no rational form within |a|<={max_a}, b<={max_b}, {max_factors} factors, "
                f"numerator degree <= {max_num_degree}")


# -- normalization ----------------------------------------------------------------

@dataclass(frozen=True)
class NormalizationPolicy:
    """How the L-power ``n_i`` dividing the i-th class is chosen.

    ``raw``: ``n_i = 0``.  ``degree``: ``n_i`` is the L-degree of the class.
    ``explicit``: ``n_i = n[i]``.  ``paper``: ``n_i = (dim + e[i]) * (rank_i - 1)``.
    """

    kind: str = "degree"
    n: Tuple[int, ...] = ()
    e: Tuple[int, ...] = ()
    dim: int = 0

    def __post_init__(self):
        if self.kind not in ("raw", "degree", "explicit", "paper"):
            raise ValueError(f"unknown normalization policy {self.kind!r}")

    def exponents(self, classes: Sequence[MotivicClass], ranks: Optional[Sequence[int]] = None) -> List[int]:
        T = len(classes)
        if self.kind == "raw":
            return [0] * T
        if self.kind == "degree":
            out = []
            for i, c in enumerate(classes):
                if not c:
                    raise ValueError(f"degree normalization undefined for the zero class at i={i}")
                out.append(c.degree)
            return out
        if self.kind == "explicit":
            if len(self.n) < T:
                raise ValueError(f"explicit exponents cover {len(self.n)} levels, need {T}")
            return list(self.n[:T])
        if ranks is None or len(ranks) < T:
            raise ValueError("paper normalization needs the rank of every level")
        if len(self.e) < T:
            raise ValueError(f"paper normalization needs e_i for {T} levels")
        return [(self.dim + self.e[i]) * (ranks[i] - 1) for i in range(T)]

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": list(self.n), "e": list(self.e), "dim": self.dim}

    @classmethod
    def from_json(cls, data) -> "NormalizationPolicy":
        if isinstance(data, str):
            return cls(data)
        return cls(data.get("kind", "degree"), tuple(data.get("n", ())), tuple(data.get("e", ())),
                   data.get("dim", 0))


def assemble_zeta(classes: Sequence[MotivicClass], policy: NormalizationPolicy = NormalizationPolicy(),
                  ranks: Optional[Sequence[int]] = None) -> MotivicSeries:
    ns = policy.exponents(classes, ranks)
    return MotivicSeries(tuple(c.shift(-n) for c, n in zip(classes, ns)))


# -- class extraction and the two geometric series ----------------------------------

def presentation_class(pres, primes: Optional[Sequence[int]] = None, claimed: Optional[MotivicClass] = None,
                       degree_bound: Optional[int] = None, budget: int = DEFAULT_BUDGET,
                       counter: Optional[Callable] = None) -> MotivicClass:
    """Certify ``claimed`` at ``primes`` or interpolate blind."""
    counter = counter or (lambda p, q: count_points(p, q, budget))
    if claimed is not None:
        cert = certify(pres, claimed, primes or [2, 3], counter=counter)
        if not cert.passed:
            raise CertificationFailed(f"claimed {claimed} fails: {cert.verdicts}")
        return claimed
    d = pres.nvars if degree_bound is None else degree_bound
    primes = list(primes) if primes else first_primes(d + 2)
    return interpolate_presentation(pres, primes, d, counter=counter).cls


def smooth_fiber_series(y0_class: MotivicClass, d: int, system: AdmissibleSystem, levels: int,
                        policy: NormalizationPolicy = NormalizationPolicy(), mode: str = "auto",
                        primes: Optional[Sequence[int]] = None,
                        claimed: Optional[Mapping[int, MotivicClass]] = None,
                        degree_bound: Optional[int] = None, budget: int = DEFAULT_BUDGET,
                        counter: Optional[Callable] = None) -> MotivicSeries:
    """Series with coefficient ``[Y_0] [End(X_i)] L^(d (rank_i - 1))``, normalized by ``policy``.

    ``mode="classical"`` drops the End factor and divides by ``L^(d i)``,
    giving the jet-space normalization.
    """
    if mode not in ("auto", "classical"):
        raise ValueError(f"unknown mode {mode!r}")
    if not y0_class:
        return MotivicSeries((ZERO,) * (levels + 1))
    ranks = [system.level(i).rank for i in range(levels + 1)]
    if mode == "classical":
        return MotivicSeries(tuple(y0_class.shift(d * (ranks[i] - 1) - d * i) for i in range(levels + 1)))
    claimed = claimed or {}
    classes = []
    for i in range(levels + 1):
        pres = endo_presentation(system.level(i).algebra)
        end = presentation_class(pres, primes, claimed.get(i), degree_bound, budget, counter)
        classes.append(y0_class * end.shift(d * (ranks[i] - 1)))
    return assemble_zeta(classes, policy, ranks)


def classical_igusa_series(f: Polynomial, d: int, levels: int, primes: Optional[Sequence[int]] = None,
                           claimed: Optional[Mapping[int, MotivicClass]] = None,
                           degree_bound: Optional[int] = None, budget: int = DEFAULT_BUDGET,
                           counter: Optional[Callable] = None) -> MotivicSeries:
    """Coefficient i is ``[L_i(V(f))] L^(-d i)``."""
    claimed = claimed or {}
    out = []
    for i in range(levels + 1):
        pres = jet_presentation(f, i)
        cls = presentation_class(pres, primes, claimed.get(i), degree_bound, budget, counter)
        out.append(cls.shift(-d * i))
    return MotivicSeries(tuple(out))
