"""Exact sparse multivariate polynomials over ZZ, QQ and prime fields.

A polynomial stores a dict ``exponent tuple -> coefficient`` together with the
ambient variable names and a coefficient domain.  Variables are positional:
two polynomials are compatible when they share the same name tuple and domain.

Coefficients are Python ints (ZZ and GF(p), the latter reduced into
``[0, p)``) or ``fractions.Fraction`` (QQ), so nothing can overflow.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Coeff = Union[int, Fraction]


class DomainMismatch(ValueError):
    """Operands live in different rings."""


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownIdentifier(ParseError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Domain:
    """Coefficient domain tag: ``"ZZ"``, ``"QQ"`` or ``"GF"`` with characteristic ``p``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "GF"):
            raise ValueError(f"unknown domain {self.kind!r}")
        if self.kind == "GF" and not is_prime(self.p):
            raise ValueError(f"GF modulus {self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.kind != "ZZ"

    def convert(self, c) -> Coeff:
        if self.kind == "QQ":
            c = Fraction(c)
            return c.numerator if c.denominator == 1 else c
        if self.kind == "ZZ":
            c = Fraction(c)
            if c.denominator != 1:
                raise DomainMismatch(f"{c} is not an integer")
            return c.numerator
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator {c.denominator} not invertible mod {self.p}")
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def inverse(self, c: Coeff) -> Coeff:
        if self.kind == "GF":
            return pow(c, -1, self.p)
        if self.kind == "QQ":
            return self.convert(Fraction(1) / c)
        if c in (1, -1):
            return c
        raise DomainMismatch(f"{c} is not a unit in ZZ")

    def __str__(self):
        return f"GF({self.p})" if self.kind == "GF" else self.kind


ZZ = Domain("ZZ")
QQ = Domain("QQ")


def GF(p: int) -> Domain:
    return Domain("GF", p)


def grevlex_key(e: Exponent):
    return (sum(e), tuple(-x for x in reversed(e)))


class Polynomial:
    """Immutable sparse polynomial; see the module docstring for the layout."""

    __slots__ = ("terms", "vars", "domain", "_hash")

    def __init__(self, terms: Mapping[Exponent, Coeff], vars: Sequence[str], domain: Domain = QQ):
        self.vars = tuple(vars)
        self.domain = domain
        n = len(self.vars)
        clean: Dict[Exponent, Coeff] = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            c = domain.convert(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        if domain.kind == "GF":
            clean = {e: c % domain.p for e, c in clean.items()}
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Coeff], vars: Tuple[str, ...], domain: Domain) -> "Polynomial":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.vars = vars
        obj.domain = domain
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, vars: Sequence[str], domain: Domain = QQ) -> "Polynomial":
        return cls._raw({}, tuple(vars), domain)

    @classmethod
    def constant(cls, c, vars: Sequence[str], domain: Domain = QQ) -> "Polynomial":
        return cls({(0,) * len(vars): c}, vars, domain)

    @classmethod
    def variable(cls, name: str, vars: Sequence[str], domain: Domain = QQ) -> "Polynomial":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls._raw({tuple(e): 1}, vars, domain)

    @classmethod
    def monomial(cls, e: Exponent, vars: Sequence[str], domain: Domain = QQ, coeff=1) -> "Polynomial":
        return cls({tuple(e): coeff}, vars, domain)

    # -- inspection --------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Coeff:
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def used_vars(self) -> Tuple[int, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return tuple(sorted(used))

    def sorted_terms(self):
        """Terms in descending graded reverse lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.domain == other.domain and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.vars, self.domain)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, self.domain, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.vars != other.vars:
            raise DomainMismatch(f"variable lists differ: {self.vars} vs {other.vars}")
        if self.domain != other.domain:
            raise DomainMismatch(f"domains differ: {self.domain} vs {other.domain}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.vars, self.domain)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def _finish(self, terms: Dict[Exponent, Coeff]) -> "Polynomial":
        if self.domain.kind == "GF":
            p = self.domain.p
            terms = {e: c % p for e, c in terms.items() if c % p}
        else:
            terms = {e: c for e, c in terms.items() if c}
            if self.domain.kind == "QQ":
                terms = {e: (c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c)
                         for e, c in terms.items()}
        return Polynomial._raw(terms, self.vars, self.domain)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._finish(out)

    __radd__ = __add__

    def __neg__(self):
        return self._finish({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.domain.convert(other)
            return self._finish({e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: Dict[Exponent, Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._finish(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.vars, self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        return self * c

    # -- ring changes --------------------------------------------------------

    def embed(self, vars: Sequence[str]) -> "Polynomial":
        """Re-express in a larger (or reordered) variable list by name."""
        vars = tuple(vars)
        pos = []
        for name in self.vars:
            if name not in vars:
                raise DomainMismatch(f"variable {name} missing from target ring")
            pos.append(vars.index(name))
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i, x in enumerate(e):
                ne[pos[i]] = x
            terms[tuple(ne)] = c
        return Polynomial._raw(terms, vars, self.domain)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return Polynomial._raw(dict(self.terms), tuple(mapping.get(v, v) for v in self.vars), self.domain)

    def evaluate(self, values: Sequence) -> Coeff:
        """Evaluate at a point given positionally; arithmetic in the polynomial's domain."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, x in zip(values, e):
                if x:
                    t = t * v ** x
            total += t
        if self.domain.kind == "GF":
            return total % self.domain.p
        return self.domain.convert(total)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, vars={list(self.vars)}, domain={self.domain})"


# -- substitution and reduction ------------------------------------------------

def substitute(p: Polynomial, images: Mapping[Union[str, int], Polynomial]) -> Polynomial:
    """Ring-homomorphic image of ``p`` under ``x_i -> images[x_i]``.

    ``images`` may be keyed by variable name or position.  Only variables
    actually used by ``p`` need an image.
    """
    by_pos: Dict[int, Polynomial] = {}
    for k, v in images.items():
        idx = p.vars.index(k) if isinstance(k, str) else k
        by_pos[idx] = v
    used = p.used_vars()
    missing = [p.vars[i] for i in used if i not in by_pos]
    if missing:
        raise KeyError(f"no image for variable(s) {missing}")
    targets = [by_pos[i] for i in used]
    if not targets:
        if images:
            first = next(iter(images.values()))
            return Polynomial.constant(p.constant_term(), first.vars, first.domain) if p.terms \
                else Polynomial.zero(first.vars, first.domain)
        return p
    ring_vars, ring_dom = targets[0].vars, targets[0].domain
    for t in targets[1:]:
        if t.vars != ring_vars or t.domain != ring_dom:
            raise DomainMismatch("images must share one ambient ring")
    if ring_dom != p.domain and not (p.domain.kind in ("ZZ", "QQ") and ring_dom.kind == "QQ"):
        raise DomainMismatch(f"cannot substitute {p.domain} polynomial into {ring_dom} ring")

    powers: Dict[Tuple[int, int], Polynomial] = {}

    def power(i: int, k: int) -> Polynomial:
        key = (i, k)
        if key not in powers:
            powers[key] = by_pos[i] if k == 1 else power(i, k - 1) * by_pos[i]
        return powers[key]

    result = Polynomial.zero(ring_vars, ring_dom)
    for e, c in p.terms.items():
        term = Polynomial.constant(c, ring_vars, ring_dom)
        for i in used:
            if e[i]:
                term = term * power(i, e[i])
        result = result + term
    return result


def reduce_mod_p(p: Polynomial, prime: int) -> Polynomial:
    """Coefficientwise reduction of a ZZ/QQ polynomial into GF(prime)."""
    if not is_prime(prime):
        raise ValueError(f"{prime} is not prime")
    dom = GF(prime)
    if p.domain == dom:
        return p
    if p.domain.kind == "GF":
        raise DomainMismatch(f"cannot reduce {p.domain} polynomial mod {prime}")
    return Polynomial({e: dom.convert(c) for e, c in p.terms.items()}, p.vars, dom)


def lift_to_qq(p: Polynomial) -> Polynomial:
    if p.domain == QQ:
        return p
    if p.domain.kind == "GF":
        raise DomainMismatch("cannot lift a prime-field polynomial")
    return Polynomial(p.terms, p.vars, QQ)


# -- printing ----------------------------------------------------------------------

def format_monomial(e: Exponent, vars: Sequence[str]) -> str:
    parts = []
    for name, x in zip(vars, e):
        if x == 1:
            parts.append(name)
        elif x > 1:
            parts.append(f"{name}^{x}")
    return "*".join(parts) if parts else "1"


def format_poly(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (e, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(e, p.vars)
        if mono == "1":
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# -- parsing -----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<id>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vars: Sequence[str], domain: Domain):
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars = tuple(vars)
        self.domain = domain

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])

    def parse(self) -> Polynomial:
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return result

    def expr(self) -> Polynomial:
        neg = False
        if self.peek()[1] == "-":
            self.take()
            neg = True
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            f = self.factor()
            if op == "*":
                acc = acc * f
            else:
                if not f.is_constant() or f.is_zero():
                    raise ParseError("division only by a nonzero constant", pos)
                acc = acc * self.domain.inverse(f.constant_term())
        return acc

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer literal", pos)
            base = base ** int(val)
        return base

    def base(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            return Polynomial.constant(int(val), self.vars, self.domain)
        if kind == "id":
            if val not in self.vars:
                raise UnknownIdentifier(f"unknown identifier {val!r}", pos)
            return Polynomial.variable(val, self.vars, self.domain)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val or 'end of input'!r}", pos)


def parse_poly(text: str, vars: Sequence[str], domain: Domain = QQ) -> Polynomial:
    """Parse an ASCII polynomial expression into canonical expanded form.

    Grammar: ``expr := ['-'] term (('+'|'-') term)*``,
    ``term := factor (('*'|'/') factor)*``, ``factor := base ('^' uint)?``,
    ``base := identifier | integer | '(' expr ')'``.  Division is accepted only
    by nonzero constants so printed rational coefficients read back.
    """
    return _Parser(text, vars, domain).parse()


def parse_many(texts: Iterable[str], vars: Sequence[str], domain: Domain = QQ):
    return [parse_poly(t, vars, domain) for t in texts]
