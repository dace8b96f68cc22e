import pytest
from hypothesis import given, strategies as st

from autarc.autoarc import endo_presentation, jet_presentation
from autarc.count import count_points
from autarc.fatpoints import AdmissibleSystem
from autarc.motive import L, ONE, ZERO, MotivicClass
from autarc.polyring import parse_poly
from autarc.zeta import (CertificationFailed, MotivicSeries, NoFit, NormalizationPolicy, RationalForm,
                         TruncationMismatch, assemble_zeta, classical_igusa_series, cusp_closed_form,
                         fit_rational, smooth_fiber_series)

XY = ("x", "y")
CUSP_CLASSES = [ONE, L ** 4, L ** 7]


def series(*texts):
    return MotivicSeries(tuple(MotivicClass.parse(t) for t in texts))


def test_assemble_policies():
    assert assemble_zeta(CUSP_CLASSES, NormalizationPolicy("degree")) == series("1", "1", "1")
    explicit = NormalizationPolicy("explicit", (1, 3, 5))
    assert assemble_zeta(CUSP_CLASSES, explicit) == series("L^-1", "L", "L^2")
    assert assemble_zeta(CUSP_CLASSES, NormalizationPolicy("raw")).coefficients == tuple(CUSP_CLASSES)
    paper = NormalizationPolicy("paper", e=(0, 0, 0), dim=1)
    assert assemble_zeta(CUSP_CLASSES, paper, ranks=[1, 3, 5]) == series("1", "L^2", "L^3")


def test_policy_errors():
    with pytest.raises(ValueError):
        assemble_zeta([ONE, ZERO], NormalizationPolicy("degree"))
    with pytest.raises(ValueError):
        assemble_zeta(CUSP_CLASSES, NormalizationPolicy("explicit", (1, 3)))
    with pytest.raises(ValueError):
        NormalizationPolicy("auto")
    pol = NormalizationPolicy("explicit", (1, 3, 5))
    assert NormalizationPolicy.from_json(pol.to_json()) == pol


@given(st.lists(st.integers(0, 6), min_size=3, max_size=3), st.integers(-3, 3))
def test_raw_policy_commutes_with_shifts(exps, k):
    classes = [MotivicClass({e: 1, 0: -1}) for e in exps]
    shifted = [c.shift(k) for c in classes]
    assert assemble_zeta(shifted, NormalizationPolicy("explicit", (k,) * 3)) == \
        assemble_zeta(classes, NormalizationPolicy("raw"))


def test_expansion_examples():
    assert RationalForm((ONE,), ((1, 1),)).expand(3) == series("1", "L", "L^2", "L^3")
    form = cusp_closed_form()
    s = form.expand(6)
    assert s[3] == MotivicClass.parse("L^7 - L^6") and s[4] == MotivicClass.parse("2*L^7 - L^6")
    assert s[0] == MotivicClass.parse("L^-1") and s[1] == L and s[2] == L ** 2
    assert RationalForm((ONE, L)).expand(3) == series("1", "L", "0", "0")


def test_cusp_expansion_against_direct_multiplication():
    # oracle: multiply the series by the denominator by hand and compare with the numerator
    s = cusp_closed_form().expand(14)
    rest = [c - p for c, p in zip(s.coefficients, (MotivicClass.parse("L^-1"), L, L ** 2) + (ZERO,) * 12)]
    den = {0: ONE, 1: -ONE, 3: -L, 4: L}
    prod = [sum((den[j] * rest[i - j] for j in den if i - j >= 0), ZERO) for i in range(15)]
    num = [ZERO, ZERO, ZERO, L ** 7 - L ** 6, L ** 7, ZERO, ZERO, L ** 7] + [ZERO] * 7
    assert prod == num


def test_fit_examples():
    geo = series(*["L^%d" % i for i in range(9)])
    fit = fit_rational(geo)
    assert fit.factors == ((1, 1),) and fit.numerator == (ONE,)
    one = series("1", *["0"] * 8)
    fit = fit_rational(one)
    assert fit.factors == () and fit.numerator == (ONE,)
    with pytest.raises(NoFit):
        fit_rational(geo, max_a=0)


def test_cusp_round_trip():
    target = cusp_closed_form().expand(14)
    fit = fit_rational(target, max_a=8, max_b=4, max_factors=2, max_num_degree=8)
    assert fit.factors == ((0, 1), (1, 3))
    assert fit.expand(14) == target


forms = st.builds(
    lambda num, den: RationalForm(tuple(MotivicClass(d) for d in num), tuple(den)),
    st.lists(st.dictionaries(st.integers(-2, 2), st.integers(-2, 2), max_size=2), min_size=1, max_size=3),
    st.lists(st.tuples(st.integers(-2, 2), st.integers(1, 2)), max_size=2))


@given(forms)
def test_expand_fit_round_trip(form):
    s = form.expand(12)
    fit = fit_rational(s, max_a=2, max_b=2, max_factors=2, max_num_degree=4)
    assert fit.expand(12) == s
    assert len(fit.factors) <= len(form.factors)


def test_series_arithmetic_and_json():
    a, b = series("1", "L"), series("L", "1")
    assert a + b == series("L + 1", "L + 1")
    assert a * b == series("L", "L^2 + 1")
    with pytest.raises(TruncationMismatch):
        a + series("1")
    assert MotivicSeries.from_json(a.to_json()) == a
    form = cusp_closed_form()
    assert RationalForm.from_json(form.to_json()) == form
    assert form.factors == ((0, 1), (1, 3))
    assert r"\mathbb{L}" in form.latex() and "(1-t)" in form.latex()


def test_smooth_fiber_series():
    jets = AdmissibleSystem.jets()
    raw = smooth_fiber_series(L, 1, jets, 3, NormalizationPolicy("raw"),
                              claimed={i: L ** i for i in range(4)})
    assert raw == series("L", "L^3", "L^5", "L^7")
    assert smooth_fiber_series(L, 1, jets, 3, NormalizationPolicy("degree"),
                               claimed={i: L ** i for i in range(4)}) == series("1", "1", "1", "1")
    assert smooth_fiber_series(L, 1, jets, 3, mode="classical") == series("L", "L", "L", "L")
    assert smooth_fiber_series(ZERO, 1, jets, 2) == series("0", "0", "0")
    cusp = AdmissibleSystem.from_germ("y^2 - x^3")
    pt = smooth_fiber_series(ONE, 0, cusp, 2, NormalizationPolicy("raw"),
                             claimed=dict(enumerate(CUSP_CLASSES)))
    assert pt.coefficients == tuple(CUSP_CLASSES)


def test_smooth_fiber_series_interpolates_blind():
    cusp = AdmissibleSystem.from_germ("y^2 - x^3")
    s = smooth_fiber_series(ONE, 0, cusp, 1, NormalizationPolicy("raw"))
    assert s.coefficients == (ONE, L ** 4)


def test_wrong_claim_is_reported():
    cusp = AdmissibleSystem.from_germ("y^2 - x^3")
    with pytest.raises(CertificationFailed):
        smooth_fiber_series(ONE, 0, cusp, 1, claimed={1: L ** 5})


def test_classical_series():
    smooth = classical_igusa_series(parse_poly("y - x^2", XY), 1, 3)
    assert smooth == series("L", "L", "L", "L")
    cusp = classical_igusa_series(parse_poly("y^2 - x^3", XY), 1, 2)
    assert cusp == series("L", "2*L - 1", "2*L - 1")


@pytest.mark.parametrize("i,q", [(4, 2), (4, 3), (5, 2)])
def test_cusp_end_counts_factor_through_odd_jets(i, q):
    # the counts obey #End(X_i) = q^7 #L_(2i-5)(cusp); see the cusp-factorization suite
    cusp = AdmissibleSystem.from_germ("y^2 - x^3")
    end = count_points(endo_presentation(cusp.level(i).algebra), q)
    jets = count_points(jet_presentation(parse_poly("y^2 - x^3", XY), 2 * i - 5), q)
    assert end == q ** 7 * jets
