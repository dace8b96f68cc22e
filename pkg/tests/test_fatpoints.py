import pytest

from autarc.fatpoints import (AdmissibleSystem, NotAtOrigin, germ_truncation, lemma_classes,
                              monomial_fatpoint, translate_germ)
from autarc.motive import L, ONE, gl_class
from autarc.polyring import format_monomial, parse_poly

XY = ("x", "y")


def test_germ_truncation_examples():
    f = parse_poly("y^2 - x^3", XY)
    assert germ_truncation(f, 0).rank == 1
    assert germ_truncation(f, 3).rank == 7
    assert germ_truncation(parse_poly("y - x^2", XY), 4).rank == 5
    with pytest.raises(NotAtOrigin):
        germ_truncation(parse_poly("y^2 - x^3 + 1", XY), 2)


def test_monomial_examples():
    assert monomial_fatpoint(1, 3).rank == 3
    fp = monomial_fatpoint(2, 2)
    assert fp.rank == 3
    assert {format_monomial(m, fp.algebra.vars) for m in fp.algebra.basis} == {"1", "x1", "x2"}
    assert monomial_fatpoint(2, 3).rank == 6


def test_lemma_classes():
    assert lemma_classes(1, 3) == (L ** 2, (L - 1) * L)
    assert lemma_classes(1, 2) == (L, L - 1)
    assert lemma_classes(2, 2) == (L ** 4, (L ** 2 - 1) * (L ** 2 - L))
    assert lemma_classes(3, 1) == (ONE, ONE)
    end, aut = lemma_classes(2, 3)
    assert end.degree == 2 * (6 - 1) and aut == gl_class(2).shift(6)


def test_cusp_ranks_grow_by_two():
    system = AdmissibleSystem.from_germ("y^2 - x^3")
    assert system.level(0).rank == 1
    for i in range(1, 7):
        assert system.level(i).rank == 2 * i + 1
        assert system.level(i).rank <= (i + 2) * (i + 1) // 2


@pytest.mark.parametrize("germ", ["y^2 - x^3", "y - x^2", "y^2 - x^2 - x^3", "x*y"])
def test_transitions_are_surjections(germ):
    system = AdmissibleSystem.from_germ(germ)
    ranks = [system.level(i).rank for i in range(5)]
    assert ranks == sorted(ranks)
    assert all(system.transition_ok(i) for i in range(4))


def test_jet_system_is_monomial():
    jets = AdmissibleSystem.jets()
    assert [jets.level(i).rank for i in range(4)] == [1, 2, 3, 4]


def test_system_validation():
    with pytest.raises(ValueError):
        AdmissibleSystem()
    with pytest.raises(NotAtOrigin):
        AdmissibleSystem.from_germ("y - 1")


def test_translation_moves_point_to_origin():
    f = parse_poly("(y - 1)^2 - (x - 2)^3", XY)
    g = translate_germ(f, [2, 1])
    assert g == parse_poly("y^2 - x^3", XY)
    assert germ_truncation(g, 3).rank == 7
