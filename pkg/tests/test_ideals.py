from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okounkov_lab.ideals import (
    IdealError,
    MonomialIdeal,
    MonomialValuation,
    Refused,
    asymptotic_multiplier_ideal,
    base_ideal,
    check_star,
    integral_closure,
    is_finitely_generated,
    multiplier_ideal,
    mu_equals_ain_check,
    reduced_volume,
    star_sum_check,
    subadditivity_check,
    valuation_checks,
)
from okounkov_lab.series import GeneratedSeries, RuleSeries, floor_ratio_series, projective_space

from oracles import brute_integral_closure, multiplier_generators

SQUARES = GeneratedSeries([((0,), 1), ((2,), 1)], dim=1)

ideals2 = st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=4)
ideals3 = st.lists(st.tuples(*[st.integers(0, 4)] * 3), min_size=1, max_size=4)
coeffs = st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)])


def test_howald_examples():
    assert multiplier_ideal(MonomialIdeal([(2, 0), (0, 3)], 2), 1).generators == ((0, 1), (1, 0))
    assert multiplier_ideal(MonomialIdeal([(1, 0), (0, 1)], 2), 1).is_unit
    assert multiplier_ideal(MonomialIdeal.unit(2), 5).is_unit
    assert multiplier_ideal(MonomialIdeal([(2, 0), (0, 2)], 2), 2).generators == ((0, 3), (1, 2), (2, 1), (3, 0))


def test_integral_closure_examples():
    assert integral_closure(MonomialIdeal([(2, 0), (0, 2)], 2)).generators == ((0, 2), (1, 1), (2, 0))
    principal = MonomialIdeal([(1, 3)], 2)
    assert integral_closure(principal) == principal


@settings(max_examples=60, deadline=None)
@given(ideals2, coeffs)
def test_multiplier_ideal_oracle_2vars(gens, c):
    assert set(multiplier_ideal(MonomialIdeal(gens, 2), c).generators) == multiplier_generators(gens, 2, c)


@settings(max_examples=30, deadline=None)
@given(ideals3, coeffs)
def test_multiplier_ideal_oracle_3vars(gens, c):
    assert set(multiplier_ideal(MonomialIdeal(gens, 3), c).generators) == multiplier_generators(gens, 3, c)


@settings(max_examples=40, deadline=None)
@given(ideals2)
def test_closure_oracle(gens):
    assert set(integral_closure(MonomialIdeal(gens, 2)).generators) == brute_integral_closure(gens, 2)


@settings(max_examples=40, deadline=None)
@given(ideals2)
def test_ideal_inside_closure_inside_multiplier(gens):
    ideal = MonomialIdeal(gens, 2)
    closure = integral_closure(ideal)
    assert closure.contains_ideal(ideal)
    assert multiplier_ideal(ideal, 1).contains_ideal(closure)


@settings(max_examples=40, deadline=None)
@given(ideals2, ideals2)
def test_ideal_operations(a, b):
    i, j = MonomialIdeal(a, 2), MonomialIdeal(b, 2)
    s, p, x = i + j, i.product(j), i.intersection(j)
    assert s.contains_ideal(i) and s.contains_ideal(j)
    assert i.contains_ideal(x) and j.contains_ideal(x)
    assert x.contains_ideal(p)


def test_saturation():
    m = MonomialIdeal([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    assert m.saturate().is_unit
    assert m.sheaf_equal(MonomialIdeal.unit(3))


def test_base_ideals():
    assert base_ideal(projective_space(2), 1).saturate().is_unit
    assert base_ideal(SQUARES, 1).generators == ((0, 2), (2, 0))
    assert base_ideal(RuleSeries("periodic", 1, 1, period=2), 1).is_zero


def test_asymptotic_ideal_squares():
    asym = asymptotic_multiplier_ideal(SQUARES, 1)
    assert asym.ideal.generators == ((0, 1), (1, 0))
    assert asym.stabilized_at == 1


@pytest.mark.parametrize("series", [SQUARES, projective_space(2),
                                    GeneratedSeries([((0, 0), 1), ((2, 0), 1), ((0, 2), 1)], dim=2)])
def test_star_witness(series):
    rep = check_star(series, p_max=8)
    assert rep.witness is not None
    assert rep.stabilized
    assert rep.verified
    for p, asym in rep.asymptotic_ideals.items():
        assert asym.ideal.contains_ideal(base_ideal(series, p))


def test_star_report_on_mixed_degrees():
    mixed = GeneratedSeries([((1,), 2), ((0,), 1)], dim=1)
    rep = check_star(mixed, p_max=10)
    assert rep.witness is not None


def test_finitely_generated():
    assert is_finitely_generated(SQUARES) == 1
    assert is_finitely_generated(floor_ratio_series(5, 7)) == 7


@pytest.mark.parametrize("series", [SQUARES, projective_space(2), floor_ratio_series(5, 7)])
def test_subadditivity(series):
    assert subadditivity_check(series, 2, 2) is not False


def test_star_of_sum():
    assert star_sum_check(SQUARES, SQUARES).holds


def test_reduced_volume_plane():
    mu = reduced_volume(projective_space(3, 2), [3], m_max=20, degrees=[20])
    assert mu.value_at(20) == Fraction(2 * 861, 400)


def test_mu_refuses_non_gf_restriction():
    with pytest.raises(Refused, match="generically finite"):
        mu_equals_ain_check(RuleSeries("trivial", 2, 1), [2], m_max=10)


def test_valuation_weights():
    assert MonomialValuation((3, 1)).normalized == (2, 0)
    with pytest.raises(IdealError):
        MonomialValuation((2, 4))
    with pytest.raises(IdealError):
        MonomialValuation((0, 0))


def test_valuation_checks_squares():
    checks = valuation_checks(SQUARES, MonomialValuation((1, 0)), p_max=10)
    assert checks.infimum == 0
    assert checks.v_bounded_ok
    assert checks.sup_ratio_ok
