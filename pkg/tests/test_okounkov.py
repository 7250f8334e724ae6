from fractions import Fraction

import pytest

from okounkov_lab.geometry import hull
from okounkov_lab.okounkov import (
    UndefinedInvariant,
    asymptotic_intersection,
    certified_root_inequality,
    check_fujita_identity,
    finite_difference_volume,
    homogeneity_check,
    log_concavity_check,
    okounkov_body,
    restricted_volume,
    root_interval,
    sample_degrees,
    volume_report,
    volume_table,
)
from okounkov_lab.series import (
    GeneratedSeries,
    RuleSeries,
    SeriesError,
    floor_ratio_series,
    projective_space,
)

SQUARES = GeneratedSeries([((0,), 1), ((2,), 1)], dim=1)


def test_sample_degrees():
    assert sample_degrees(1, 30) == list(range(1, 13)) + [20, 30]
    assert sample_degrees(2, 25) == list(range(2, 25, 2))
    assert sample_degrees(5, 3) == []


def test_simplex_body():
    body = okounkov_body(projective_space(2))
    assert body.exact
    assert body.body == hull([(0, 0), (1, 0), (0, 1)])
    assert body.lattice_index == 1


def test_count_estimate_closed_form():
    rep = volume_report(projective_space(2), m_max=50)
    assert rep.count_estimates.value_at(50) == Fraction(51 * 52, 50 ** 2)
    assert rep.normalized_target == 1


def test_squares_lattice_index():
    rep = volume_report(SQUARES, m_max=40)
    assert rep.lattice_index == 2
    assert rep.normalized_target == 1
    assert rep.hull_estimates.last == 2


def test_difference_volume_is_exact_on_quasi_polynomials():
    assert volume_table(SQUARES, 20).last == 1
    assert volume_table(projective_space(2, 3), 20).last == 9
    assert finite_difference_volume(floor_ratio_series(5, 7), 70, 7) == Fraction(45, 49)


def test_fujita_identity_squares():
    ident = check_fujita_identity(SQUARES, m_max=30)
    assert ident.delta == 2
    assert ident.residual == 0
    assert all(r == 0 for _, r in ident.residuals)


def test_restricted_volume_plane():
    rep = restricted_volume(projective_space(3, 2), [3], m_max=30)
    assert rep.normalized_target == 4


def test_restricted_to_point_is_refused():
    with pytest.raises(SeriesError, match="dimension-zero"):
        restricted_volume(projective_space(1), [1])


def test_ain_needs_gf():
    with pytest.raises(UndefinedInvariant):
        asymptotic_intersection(RuleSeries("line", 2, 1), m_max=10)


@pytest.mark.parametrize("h", [1, 2, 3])
def test_homogeneity(h):
    assert homogeneity_check(projective_space(2), h=h)
    assert homogeneity_check(SQUARES, h=h)


def test_root_interval_brackets():
    lo, hi = root_interval(Fraction(2), 2, 40)
    assert lo * lo <= 2 <= hi * hi
    assert hi - lo < Fraction(1, 10 ** 10)
    assert root_interval(Fraction(9, 4), 2, 10) == (Fraction(3, 2), Fraction(3, 2))


def test_certified_inequality_exact_tie():
    # (1/2) sqrt(1) + (1/2) sqrt(9) = 2 = sqrt(4): equality, settled exactly
    verdict, method = certified_root_inequality([(1, Fraction(4))], [(Fraction(1, 2), 1), (Fraction(1, 2), 9)], 2)
    assert verdict is True
    assert method == "exact"


def test_log_concavity_p2():
    res = log_concavity_check(projective_space(2), projective_space(2, 2), m_max=12)
    assert res.vol_sum == 9
    assert res.holds
