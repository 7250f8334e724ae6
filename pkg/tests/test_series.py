from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okounkov_lab.series import (
    CapExceeded,
    ExplicitSeries,
    Flag,
    GeneratedSeries,
    InvalidFlag,
    MultiplicativityError,
    ProductMultiSeries,
    RuleSeries,
    SeriesError,
    audit,
    exponent,
    floor_ratio_series,
    gamma,
    gf_report,
    homogenize,
    iitaka_dim,
    projective_space,
    restrict,
    sum_series,
    valuation,
    veronese,
)

from oracles import floor_ratio_count, simplex_count

SQUARES = GeneratedSeries([((0,), 1), ((2,), 1)], dim=1)


def test_projective_space_counts():
    p2 = projective_space(2)
    for m in (1, 5, 17):
        assert p2.count(m) == simplex_count(2, m)
    assert projective_space(3, 2).count(4) == simplex_count(3, 8)


def test_squares_gamma():
    assert gamma(SQUARES, 3) == {(0,), (2,), (4,), (6,)}
    assert SQUARES.count(10) == 11


@pytest.mark.parametrize("m", [1, 6, 7, 13, 40])
def test_floor_ratio_closed_form(m):
    s = floor_ratio_series(5, 7)
    assert s.count(m) == floor_ratio_count(m, 5, 7)
    assert s.count(m) == len(s.sections(m))


def test_floor_ratio_limit_body():
    body = floor_ratio_series(5, 7).limit_body()
    assert body.volume() == Fraction(45, 98)


def test_exponent():
    assert exponent(SQUARES, 10) == 1
    assert exponent(RuleSeries("periodic", 1, 1, period=2), 10) == 2


def test_veronese():
    v = veronese(SQUARES, 2)
    assert v.sections(1) == SQUARES.sections(2)


def test_restrict_complete_to_hyperplane():
    r = restrict(projective_space(3, 2), [3])
    assert r.dim == 2
    for m in (1, 2, 5):
        assert r.count(m) == simplex_count(2, 2 * m)


def test_restrict_too_many_coordinates():
    with pytest.raises(SeriesError):
        restrict(projective_space(1), [0, 1])


def test_sum_series_of_hyperplanes():
    s = sum_series(projective_space(2), projective_space(2))
    assert s.count(3) == projective_space(2, 2).count(3)


def test_gf_report_squares():
    rep = gf_report(SQUARES, 6)
    assert rep.is_gf
    assert rep.degree == 2


def test_line_rule_not_gf():
    line = RuleSeries("line", 2, 1)
    assert not gf_report(line, 6).is_gf
    assert iitaka_dim(line, 6) == 1
    assert iitaka_dim(RuleSeries("trivial", 2, 1), 6) == 0


@settings(deadline=None, max_examples=20)
@given(st.integers(1, 3))
def test_veronese_keeps_map_degree(h):
    assert gf_report(veronese(SQUARES, h), 6).degree == gf_report(SQUARES, 6).degree


def test_explicit_cap():
    s = ExplicitSeries({1: [(0,), (1,)], 2: [(0,), (1,), (2,)]}, 1, 1)
    assert s.count(2) == 3
    with pytest.raises(CapExceeded):
        s.sections(3)


def test_audit_reports_triple():
    bad = ExplicitSeries({1: [(1,)], 2: [(0,)]}, 1, 1)
    with pytest.raises(MultiplicativityError) as info:
        audit(bad, 2)
    assert (info.value.k, info.value.l, info.value.exponent) == (1, 1, (2,))


def test_audit_passes_on_generated():
    audit(SQUARES, 6)
    audit(floor_ratio_series(5, 7), 6)


def test_homogenize_and_valuation():
    assert homogenize((1, 2), 3, 1) == (0, 1, 2)
    assert valuation((1, 2), 3) == (1, 2)


def test_flag_permutation():
    f = Flag(0, (2, 1))
    assert valuation((1, 2), 3, f) == (2, 1)
    assert valuation((1, 2), 3, Flag(1)) == (0, 2)


def test_bad_flag():
    with pytest.raises(InvalidFlag):
        valuation((1, 2), 3, Flag(0, (1, 1)))


def test_product_series_sections():
    pair = ProductMultiSeries([projective_space(1), projective_space(1, 2)])
    assert pair.sections((1, 1)) == {(0,), (1,), (2,), (3,)}
    assert pair.induced((1, 1)).sections(2) == pair.sections((2, 2))
