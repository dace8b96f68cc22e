import pytest
from hypothesis import given, strategies as st

from autarc.autoarc import (SchemePresentation, Variable, aut_presentation, disjoint_product,
                            endo_presentation)
from autarc.count import (BudgetExceeded, CountSample, InsufficientSamples, NonPolynomialOrInsufficient,
                          certify, count_points, first_primes, interpolate_class, interpolate_presentation,
                          solutions)
from autarc.fatpoints import AdmissibleSystem, monomial_fatpoint
from autarc.motive import L, ZERO, MotivicClass, gl_class
from autarc.polyring import Polynomial, parse_poly

from oracles import brute_count


def presentation(texts, names):
    names = tuple(names)
    return SchemePresentation(tuple(Variable(n, n) for n in names),
                              tuple(parse_poly(t, names) for t in texts))


def test_count_examples():
    pres = presentation(["a0^2", "2*a0*a1"], ["a0", "a1"])
    assert [count_points(pres, q) for q in (2, 3, 5)] == [2, 3, 5]
    assert count_points(presentation([], ["a", "b", "c"]), 5) == 125
    assert count_points(presentation(["1"], ["a"]), 3) == 0
    assert count_points(presentation(["0*a"], ["a"]), 3) == 3


def test_count_rejects_non_primes_and_bad_denominators():
    with pytest.raises(ValueError):
        count_points(presentation(["a"], ["a"]), 4)
    with pytest.raises(ZeroDivisionError):
        count_points(presentation(["1/3*a - 1"], ["a"]), 3)


def test_budget_is_enforced():
    pres = endo_presentation(AdmissibleSystem.from_germ("y^2 - x^3").level(4).algebra)
    with pytest.raises(BudgetExceeded):
        count_points(pres, 3, budget=10)
    with pytest.raises(BudgetExceeded):
        count_points(pres, 3, budget=10, jobs=2)


def test_parallel_partition_agrees():
    pres = endo_presentation(monomial_fatpoint(1, 4).algebra)
    assert count_points(pres, 5, jobs=2) == count_points(pres, 5) == 125


def test_solutions_enumerate_the_count():
    pres = aut_presentation(monomial_fatpoint(1, 3).algebra)
    pts = list(solutions(pres, 3))
    assert len(pts) == 6 == len(set(pts))
    assert all(pres.satisfied_by(p, 3) for p in pts)


# -- random presentations against brute force ------------------------------------------

NAMES = ("u", "v", "w", "s")
monos = st.tuples(*[st.integers(0, 2)] * 4)
eq = st.dictionaries(monos, st.integers(-3, 3), min_size=1, max_size=4).map(lambda d: Polynomial(d, NAMES))
systems = st.lists(eq, min_size=1, max_size=4).map(
    lambda eqs: SchemePresentation(tuple(Variable(n, n) for n in NAMES), tuple(eqs)))
primes = st.sampled_from([2, 3, 5])


@given(systems, primes)
def test_count_matches_brute_force(pres, q):
    assert count_points(pres, q) == brute_count(pres, q)
    assert count_points(pres, q, shortcuts=False) == brute_count(pres, q)


@given(systems, primes, st.permutations(range(4)))
def test_count_is_order_independent(pres, q, perm):
    assert count_points(pres.permuted(perm), q) == count_points(pres, q)


@given(systems, primes, st.data())
def test_count_ignores_nilpotents(pres, q, data):
    k = data.draw(st.integers(0, len(pres.equations) - 1))
    squared = pres.with_equations([pres.equations[k] ** 2])
    assert count_points(squared, q) == count_points(pres, q)


@given(systems, systems, st.sampled_from([2, 3]))
def test_product_law(p1, p2, q):
    mapping = {n: n + "2" for n in NAMES}
    p2 = SchemePresentation(tuple(Variable(mapping[v.name], v.label) for v in p2.variables),
                            tuple(e.rename(mapping) for e in p2.equations))
    assert count_points(disjoint_product(p1, p2), q) == count_points(p1, q) * count_points(p2, q)


# -- interpolation and certification ---------------------------------------------------

def test_interpolation_examples():
    res = interpolate_class([CountSample(2, 2), CountSample(3, 3), CountSample(5, 5)], 1)
    assert res.cls == L and res.ok and res.holdout == [(5, 5, 5, True)]
    gl = [CountSample(q, int(gl_class(2).evaluate_at(q))) for q in (2, 3, 5, 7, 11, 13)]
    assert [s.count for s in gl[:5]] == [6, 48, 480, 2016, 13200]
    assert interpolate_class(gl, 4).cls == MotivicClass.parse("L^4 - L^3 - L^2 + L")
    assert interpolate_class([CountSample(q, 0) for q in (2, 3, 5)], 1).cls == ZERO


def test_interpolation_failures():
    with pytest.raises(NonPolynomialOrInsufficient):
        interpolate_class([CountSample(2, 2), CountSample(3, 3), CountSample(5, 6)], 1)
    with pytest.raises(NonPolynomialOrInsufficient):
        interpolate_class([CountSample(2, 0), CountSample(5, 1), CountSample(7, 3)], 1)
    with pytest.raises(InsufficientSamples):
        interpolate_class([CountSample(2, 2), CountSample(3, 3)], 1)
    with pytest.raises(ValueError):
        interpolate_class([CountSample(2, 2), CountSample(2, 2), CountSample(3, 3)], 1)


coeff_lists = st.lists(st.integers(-5, 5), min_size=1, max_size=5)


@given(coeff_lists)
def test_interpolation_reproduces_samples_and_holdouts(coeffs):
    cls = MotivicClass(dict(enumerate(coeffs)))
    qs = first_primes(len(coeffs) + 2)
    samples = [CountSample(q, int(cls.evaluate_at(q))) for q in qs]
    res = interpolate_class(samples, len(coeffs) - 1)
    assert res.cls == cls
    assert all(res.cls.evaluate_at(s.q) == s.count for s in samples)


def test_certification_examples():
    alg = monomial_fatpoint(1, 3).algebra
    assert certify(endo_presentation(alg), L ** 2, [2, 3, 5]).passed
    assert certify(aut_presentation(alg), (L - 1) * L, [2, 3]).passed
    bad = certify(endo_presentation(alg), L ** 3, [2, 3, 5])
    assert not bad.passed and bad.verdicts[0] == (2, 4, 8, False)


def test_blind_interpolation_of_a_presentation():
    pres = endo_presentation(monomial_fatpoint(1, 3).algebra)
    assert interpolate_presentation(pres, first_primes(5)).cls == L ** 2
    with pytest.raises(InsufficientSamples):
        interpolate_presentation(pres, [2, 3, 5])


def test_counter_hook_is_used():
    calls = []

    def counter(pres, q):
        calls.append(q)
        return q ** 2

    pres = endo_presentation(monomial_fatpoint(1, 3).algebra)
    assert certify(pres, L ** 2, [2, 3], counter=counter).passed and calls == [2, 3]
