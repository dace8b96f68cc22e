"""Exact F_p point counts of presentations, and interpolation of counts to classes.

Counting is a depth-first assignment of variables in declared order.  After
each assignment the equations are partially evaluated; a branch dies as soon
as some equation becomes a nonzero constant.  Three exact shortcuts keep the
tree small without changing the count:

* variables that no longer occur in any equation contribute a factor ``q``;
* a variable entering some equation only as ``c*v`` with ``c`` a nonzero
  constant is determined by the others: it is solved for, substituted into
  the remaining equations, and it and its equation drop;
* variable-disjoint groups of equations are counted separately and multiplied.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .autoarc import SchemePresentation
from .motive import MotivicClass
from .polyring import is_prime, reduce_mod_p

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 9

Mono = Tuple[Tuple[int, int], ...]
Eq = Dict[Mono, int]


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"node budget {budget} exceeded")
        self.budget = budget


class InsufficientSamples(ValueError):
    pass


class NonPolynomialOrInsufficient(ValueError):
    """Counts do not follow a single integer polynomial in q within the bound."""


def compile_equations(pres: SchemePresentation, q: int) -> List[Eq]:
    """Reduce the equations mod q into ``{((var, exp), ...): coeff}`` dicts."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime (only prime fields are supported)")
    out = []
    for eq in pres.equations:
        ep = reduce_mod_p(eq, q)
        d: Eq = {}
        for e, c in ep.terms.items():
            d[tuple((i, x) for i, x in enumerate(e) if x)] = c
        if d:
            out.append(d)
    return out


def _eq_vars(eq: Eq) -> frozenset:
    return frozenset(v for mono in eq for v, _ in mono)


def _assign(eq: Eq, v: int, val: int, p: int) -> Eq:
    out: Eq = {}
    for mono, c in eq.items():
        for idx, (w, x) in enumerate(mono):
            if w == v:
                c = c * pow(val, x, p) % p if val else 0
                mono = mono[:idx] + mono[idx + 1:]
                break
        if c:
            s = (out.get(mono, 0) + c) % p
            if s:
                out[mono] = s
            else:
                del out[mono]
    return out


def _solvable_for(eq: Eq, v: int) -> bool:
    """True when v enters eq only through a single term ``c*v``."""
    hit = None
    for mono in eq:
        for w, _ in mono:
            if w == v:
                if hit is not None:
                    return False
                hit = mono
                break
    return hit == ((v, 1),)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, x in b:
        d[v] = d.get(v, 0) + x
    return tuple(sorted(d.items()))


def _poly_mul(a: Eq, b: Eq, p: int) -> Eq:
    out: Eq = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _mono_mul(m1, m2)
            out[m] = (out.get(m, 0) + c1 * c2) % p
    return {m: c for m, c in out.items() if c}


def _substitute(eq: Eq, v: int, expr: Eq, p: int) -> Eq:
    """Replace v by the polynomial expr."""
    powers = {1: expr}
    out: Eq = {}
    for mono, c in eq.items():
        x = next((x for w, x in mono if w == v), 0)
        if not x:
            out[mono] = (out.get(mono, 0) + c) % p
            continue
        rest = tuple(t for t in mono if t[0] != v)
        if x not in powers:
            acc = powers[1]
            for _ in range(x - 1):
                acc = _poly_mul(acc, expr, p)
            powers[x] = acc
        for m, d in powers[x].items():
            mm = _mono_mul(rest, m)
            out[mm] = (out.get(mm, 0) + c * d) % p
    return {m: c for m, c in out.items() if c}


def _components(eqs):
    parent = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for _, vs in eqs:
        for v in vs:
            parent.setdefault(v, v)
        vs = list(vs)
        for w in vs[1:]:
            a, b = find(vs[0]), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: Dict[int, list] = {}
    for item in eqs:
        root = find(next(iter(item[1])))
        groups.setdefault(root, []).append(item)
    return [groups[k] for k in sorted(groups)]


class _Counter:
    def __init__(self, p: int, budget: int, shortcuts: bool = True):
        self.p = p
        self.budget = budget
        self.nodes = 0
        self.shortcuts = shortcuts
        self.max_sub_terms = 6

    def eliminate(self, live, nfree):
        """Solve linear occurrences ``c*v + rest = 0`` for v and substitute."""
        p = self.p
        while True:
            occ: Dict[int, int] = {}
            for _, vs in live:
                for v in vs:
                    occ[v] = occ.get(v, 0) + 1
            pick = None
            for k, (eq, vs) in enumerate(live):
                for v in sorted(vs, key=lambda w: (occ[w], w)):
                    if _solvable_for(eq, v):
                        cand = (occ[v], len(eq), k, v)
                        if pick is None or cand < pick:
                            pick = cand
                        break
            if pick is None or (pick[0] > 1 and pick[1] > self.max_sub_terms):
                return live, nfree, False
            _, _, k, v = pick
            before = set()
            for _, ws in live:
                before |= ws
            eq, vs = live.pop(k)
            inv = pow(eq[((v, 1),)], -1, p)
            expr = {m: (-c * inv) % p for m, c in eq.items() if m != ((v, 1),)}
            nxt = []
            for e, ws in live:
                if v in ws:
                    e = _substitute(e, v, expr, p)
                    ws = _eq_vars(e)
                    if e and not ws:
                        return live, nfree, True
                nxt.append((e, ws))
            live = [(e, ws) for e, ws in nxt if e]
            after = set()
            for _, ws in live:
                after |= ws
            # variables that dropped out entirely are free
            nfree += len(before - after - {v})

    def solve(self, eqs: List[Tuple[Eq, frozenset]], nfree: int) -> int:
        """Count solutions of ``eqs`` times ``p**nfree``; variables are those used by eqs."""
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget)
        p = self.p
        live = []
        for eq, vs in eqs:
            if not eq:
                continue
            if not vs:
                return 0
            live.append((eq, vs))

        if self.shortcuts:
            live, nfree, dead = self.eliminate(live, nfree)
            if dead:
                return 0

        if not live:
            return p ** nfree
        factor = p ** nfree

        if self.shortcuts:
            comps = _components(live)
            if len(comps) > 1:
                total = 1
                for comp in comps:
                    total *= self.solve(comp, 0)
                    if not total:
                        return 0
                return factor * total

        used = set()
        for _, vs in live:
            used |= vs
        v = min(used)
        total = 0
        for val in range(p):
            branch = []
            dead = False
            for eq, vs in live:
                if v in vs:
                    ne = _assign(eq, v, val, p)
                    nvs = _eq_vars(ne)
                    if ne and not nvs:
                        dead = True
                        break
                    branch.append((ne, nvs))
                else:
                    branch.append((eq, vs))
            if dead:
                continue
            remaining = set()
            for _, vs in branch:
                remaining |= vs
            total += self.solve(branch, len(used) - 1 - len(remaining))
        return factor * total


def _count_compiled(eqs: List[Eq], nvars: int, p: int, budget: int, shortcuts: bool) -> Tuple[int, int]:
    items = [(e, _eq_vars(e)) for e in eqs]
    used = set()
    for _, vs in items:
        used |= vs
    counter = _Counter(p, budget, shortcuts)
    n = counter.solve(items, nvars - len(used))
    return n, counter.nodes


def _worker(args):
    return _count_compiled(*args)


def count_points(pres: SchemePresentation, q: int, budget: int = DEFAULT_BUDGET,
                 jobs: int = 1, shortcuts: bool = True) -> int:
    """Number of solutions of ``pres`` in ``GF(q)^nvars``.

    Raises BudgetExceeded once more than ``budget`` search nodes are visited;
    a wrong count is never returned.  With ``jobs > 1`` the tree is split at
    the first declared variable and subcounts are summed in value order.
    """
    eqs = compile_equations(pres, q)
    n = pres.nvars
    if jobs <= 1 or n == 0:
        return _count_compiled(eqs, n, q, budget, shortcuts)[0]
    tasks = []
    for val in range(q):
        sub = []
        for e in eqs:
            ne = _assign(e, 0, val, q)
            if ne:
                sub.append(ne)
        # the root variable is now fixed; shift the remaining count by one variable
        tasks.append((sub, n, q, budget, shortcuts))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_worker, tasks))
    nodes = sum(r[1] for r in results)
    if nodes > budget:
        raise BudgetExceeded(budget)
    # each subcount treated variable 0 as free (factor q); undo that
    return sum(r[0] for r in results) // q


def solutions(pres: SchemePresentation, q: int) -> Iterator[Tuple[int, ...]]:
    """Enumerate all GF(q) points by plain pruned backtracking in declared order."""
    eqs = compile_equations(pres, q)
    n = pres.nvars
    if any(not _eq_vars(e) for e in eqs):
        return
    point = [0] * n

    def rec(i, live):
        if i == n:
            yield tuple(point)
            return
        for val in range(q):
            nxt = []
            for e in live:
                ne = _assign(e, i, val, q)
                if not ne:
                    continue
                if not _eq_vars(ne):
                    break
                nxt.append(ne)
            else:
                point[i] = val
                yield from rec(i + 1, nxt)

    yield from rec(0, eqs)


# -- samples, interpolation and certification -----------------------------------

@dataclass(frozen=True)
class CountSample:
    q: int
    count: int
    digest: str = ""


@dataclass
class InterpolationResult:
    cls: MotivicClass
    used: List[CountSample]
    holdout: List[Tuple[int, int, int, bool]] = field(default_factory=list)  # (q, count, predicted, ok)

    @property
    def ok(self) -> bool:
        return all(h[3] for h in self.holdout)


def _lagrange(points: Sequence[Tuple[int, int]]) -> List[Fraction]:
    """Coefficients (ascending) of the interpolating polynomial."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += yi * basis[k] / denom
    return coeffs


def interpolate_class(samples: Sequence[CountSample], degree_bound: int) -> InterpolationResult:
    """Fit counts by an integer polynomial in q of degree at most ``degree_bound``.

    The first ``degree_bound + 1`` samples determine the polynomial; every
    further sample is a hold-out that must be reproduced exactly.
    """
    qs = [s.q for s in samples]
    if len(set(qs)) != len(qs):
        raise ValueError("duplicate primes in samples")
    if len(samples) < degree_bound + 2:
        raise InsufficientSamples(f"need {degree_bound + 2} samples (incl. one hold-out), got {len(samples)}")
    used, rest = list(samples[:degree_bound + 1]), list(samples[degree_bound + 1:])
    coeffs = _lagrange([(s.q, s.count) for s in used])
    if any(c.denominator != 1 for c in coeffs):
        raise NonPolynomialOrInsufficient(f"non-integer interpolation coefficients {coeffs}")
    cls = MotivicClass({k: int(c) for k, c in enumerate(coeffs)})
    holdout = []
    for s in rest:
        pred = cls.evaluate_at(s.q)
        holdout.append((s.q, s.count, int(pred), pred == s.count))
    result = InterpolationResult(cls, used, holdout)
    if not result.ok:
        bad = [h for h in holdout if not h[3]]
        raise NonPolynomialOrInsufficient(f"hold-out mismatch {bad} for class {cls}")
    return result


@dataclass
class Certification:
    claimed: MotivicClass
    verdicts: List[Tuple[int, int, Fraction, bool]]  # (q, counted, expected, ok)

    @property
    def passed(self) -> bool:
        return all(v[3] for v in self.verdicts)


def certify(pres: SchemePresentation, claimed: MotivicClass, primes: Sequence[int],
            budget: int = DEFAULT_BUDGET, counter=None) -> Certification:
    """Compare counts with ``claimed`` evaluated at each prime."""
    if any(k < 0 for k in claimed.terms):
        raise ValueError("claimed class must have non-negative exponents")
    counter = counter or (lambda p, q: count_points(p, q, budget))
    verdicts = []
    for q in primes:
        n = counter(pres, q)
        exp = claimed.evaluate_at(q)
        verdicts.append((q, n, exp, n == exp))
    return Certification(claimed, verdicts)


def interpolate_presentation(pres: SchemePresentation, primes: Sequence[int],
                             degree_bound: Optional[int] = None, budget: int = DEFAULT_BUDGET,
                             counter=None) -> InterpolationResult:
    """Count at each prime and interpolate; the default bound is the number of variables."""
    counter = counter or (lambda p, q: count_points(p, q, budget))
    d = pres.nvars if degree_bound is None else degree_bound
    if len(primes) < d + 2:
        raise InsufficientSamples(f"degree bound {d} needs {d + 2} primes, got {len(primes)}")
    samples = [CountSample(q, counter(pres, q), pres.digest) for q in primes]
    return interpolate_class(samples, d)


def first_primes(n: int, start: int = 2) -> List[int]:
    out = []
    k = start
    while len(out) < n:
        if is_prime(k):
            out.append(k)
        k += 1
    return out
