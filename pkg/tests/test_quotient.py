import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from autarc.fatpoints import monomial_fatpoint, power_of_maximal_ideal
from autarc.polyring import GF, QQ, Polynomial, format_monomial, parse_poly
from autarc.quotient import (GREVLEX, LEX, EmptyAlgebra, MonomialOrder, NotZeroDimensional,
                             artin_algebra, buchberger, normal_form, quotient_algebra,
                             standard_monomials)

XY = ("x", "y")


def P(text, vars=XY, domain=QQ):
    return parse_poly(text, vars, domain)


def cusp_ideal(n):
    return [P("y^2 - x^3")] + power_of_maximal_ideal(XY, n)


def names(alg):
    return {format_monomial(m, alg.vars) for m in alg.basis}


def test_single_generator_is_its_own_basis():
    gb = buchberger([P("x^3", ("x",))])
    assert list(gb.generators) == [P("x^3", ("x",))]


def test_cusp_truncation_basis():
    gb = buchberger(cusp_ideal(4))
    assert gb.satisfies_buchberger_criterion()
    alg = artin_algebra(gb)
    assert alg.rank == 7
    assert names(alg) == {"1", "x", "y", "x^2", "x*y", "y^2", "x^2*y"}
    assert alg.compute_local()


def test_standard_monomials_against_linear_algebra():
    # brute-force oracle: the rank of the ideal's span inside the monomials of degree <= 4
    # (everything of degree >= 4 lies in m^4), i.e. the rank of B = 15 - dim(I / m^4 part)
    monos = [(a, b) for a in range(4) for b in range(4) if a + b < 4]
    rows = []
    f = P("y^2 - x^3")
    for m in monos:
        g = f * Polynomial.monomial(m, XY)
        rows.append([g.terms.get(e, 0) for e in monos])
    assert len(monos) - _rank(rows) == len(standard_monomials(buchberger(cusp_ideal(4))))


def _rank(rows):
    rows = [[Fraction(c) for c in r] for r in rows]
    rank = 0
    for col in range(len(rows[0])):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_unit_ideal():
    gb = buchberger([P("x*y - 1"), P("x^2")])
    assert gb.is_unit()
    with pytest.raises(EmptyAlgebra):
        artin_algebra(gb)


def test_normal_forms():
    gb = buchberger([P("x^3", ("x",))])
    assert normal_form(P("x^3", ("x",)), gb).is_zero()
    gb = buchberger(cusp_ideal(4))
    # under grevlex with x > y the cusp relation is oriented x^3 -> y^2
    assert normal_form(P("x^3"), gb) == P("y^2")
    assert normal_form(P("y^2"), gb) == P("y^2")
    lex = buchberger(cusp_ideal(4), MonomialOrder("lex", (1, 0)))
    assert normal_form(P("y^2"), lex) == P("x^3")


def test_standard_monomial_examples():
    assert len(standard_monomials(buchberger([P("x^3", ("x",))]))) == 3
    assert names(quotient_algebra(power_of_maximal_ideal(XY, 2))) == {"1", "x", "y"}
    # oracle for (y^2 - x^3) + m^5: the monomials x^a y^b with b <= 1 and a + b <= 4
    oracle = [(a, b) for a in range(5) for b in range(2) if a + b <= 4]
    assert quotient_algebra(cusp_ideal(5)).rank == len(oracle) == 9


def test_not_zero_dimensional():
    with pytest.raises(NotZeroDimensional):
        standard_monomials(buchberger([P("x^2")]))


def test_locality():
    assert quotient_algebra([P("x^3", ("x",))]).compute_local()
    two_points = quotient_algebra([P("x^2 - 1", ("x",))])
    assert two_points.rank == 2 and not two_points.compute_local()


def test_prime_field_bases():
    gb = buchberger([P("x^2 + y", domain=GF(3)), P("y^2", domain=GF(3))])
    assert gb.satisfies_buchberger_criterion()
    assert artin_algebra(gb).rank == 4


def test_basis_closed_under_division():
    alg = quotient_algebra(cusp_ideal(6))
    basis = set(alg.basis)
    for m in basis:
        for i in range(len(m)):
            if m[i]:
                assert m[:i] + (m[i] - 1,) + m[i + 1:] in basis


def test_multiplication_table_is_associative():
    alg = quotient_algebra(cusp_ideal(5))
    n = alg.rank
    units = [[int(i == k) for i in range(n)] for k in range(n)]
    for a, b, c in itertools.product(units, repeat=3):
        assert alg.mul(alg.mul(a, b), c) == alg.mul(a, alg.mul(b, c))


@pytest.mark.parametrize("d,n", [(1, 1), (1, 4), (2, 2), (2, 3), (3, 2), (2, 4)])
def test_monomial_rank_binomial(d, n):
    assert monomial_fatpoint(d, n).rank == comb(n - 1 + d, d)


# random zero-dimensional ideals: a random polynomial plus a power of the maximal ideal
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
small = st.dictionaries(exps, st.integers(-3, 3), min_size=1, max_size=4).map(lambda d: Polynomial(d, XY))


@given(st.lists(small, min_size=1, max_size=3), st.integers(2, 4))
def test_buchberger_criterion_and_order_independent_rank(extra, n):
    gens = extra + power_of_maximal_ideal(XY, n)
    ranks = set()
    for order in (GREVLEX, LEX, MonomialOrder("lex", (1, 0))):
        gb = buchberger(gens, order)
        assert gb.satisfies_buchberger_criterion()
        ranks.add(len(standard_monomials(gb)) if not gb.is_unit() else 0)
    assert len(ranks) == 1


@given(small, small, st.integers(2, 4))
def test_normal_form_idempotent_and_linear(p, q, n):
    gb = buchberger([P("y^2 - x^3")] + power_of_maximal_ideal(XY, n))
    assert normal_form(normal_form(p, gb), gb) == normal_form(p, gb)
    assert normal_form(p + q, gb) == normal_form(p, gb) + normal_form(q, gb)
    assert normal_form(p * q, gb) == normal_form(normal_form(p, gb) * normal_form(q, gb), gb)
