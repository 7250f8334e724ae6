import itertools
from functools import lru_cache

import pytest

from okounkov_lab.fujita import (
    OutOfSupport,
    PreconditionError,
    SubSeries,
    fiber_body,
    fiber_volume_scan,
    fujita_report,
    fujita_row,
    global_body,
    tkp,
)
from okounkov_lab.geometry import minkowski_sum
from okounkov_lab.okounkov import okounkov_body
from okounkov_lab.series import (
    GeneratedSeries,
    ProductMultiSeries,
    RuleSeries,
    floor_ratio_series,
    projective_space,
)

SQUARES = GeneratedSeries([((0,), 1), ((2,), 1)], dim=1)
LINEAR = ProductMultiSeries([projective_space(1), projective_space(1, 2)])


def _kfold(points, k):
    acc = frozenset(points)
    for _ in range(k - 1):
        acc = minkowski_sum(acc, points)
    return acc


def test_tkp_is_kfold_sum():
    f = floor_ratio_series(5, 7)
    for k, p in [(2, 3), (3, 2), (2, 5)]:
        assert tkp(f, k, p) == _kfold(f.sections(p), k)


def test_tkp_strictly_smaller():
    f = floor_ratio_series(5, 7)
    assert len(tkp(f, 2, 5)) == 56
    assert f.count(10) == 60


def test_complete_series_has_ratio_one():
    rep = fujita_report(projective_space(2, 2), p_cap=3, k_cap=6)
    assert rep.p0 == 1
    assert all(v == 1 for v in rep.ratios.values)


def test_squares_report():
    rep = fujita_report(SQUARES, p_cap=4, k_cap=8)
    assert rep.p0 == 1


def test_fujita_rows_for_floor():
    f = floor_ratio_series(5, 7)
    assert all(v == 1 for v in fujita_row(f, 7, 4).values)
    row = fujita_row(f, 3, 8)
    assert row.value_at(6) == 1
    assert row.value_at(7) < 1


def test_unknown_criterion():
    with pytest.raises(ValueError):
        fujita_report(SQUARES, criterion="other")


@pytest.mark.parametrize("a, interval", [((1, 1), (0, 3)), ((1, 2), (0, 5)), ((2, 1), (0, 4))])
def test_linear_family_fibers(a, interval):
    gb = global_body(LINEAR)
    assert fiber_body(gb, a).vertices == ((interval[0],), (interval[1],))


def test_fiber_matches_direct_body():
    gb = global_body(LINEAR)
    for a in [(1, 1), (1, 2), (3, 1)]:
        direct = okounkov_body(LINEAR.induced(a), m_max=6).body
        # the induced series is graded by k with W_k = W_{k a}
        assert fiber_body(gb, a) == direct


def test_boundary_direction_refused():
    gb = global_body(LINEAR)
    with pytest.raises(OutOfSupport):
        fiber_body(gb, (1, 0))


def test_gf_prime_precondition():
    flat = ProductMultiSeries([RuleSeries("trivial", 1, 1), RuleSeries("trivial", 1, 1)])
    with pytest.raises(PreconditionError):
        global_body(flat)


def test_fiber_scan_homogeneous_and_log_concave():
    scan = fiber_volume_scan(global_body(LINEAR), [(1, 1), (1, 2), (2, 1)])
    assert scan.homogeneity_ok
    assert scan.log_concave_ok


@lru_cache(maxsize=None)
def _w_p_oracle(m, p):
    """Union over decompositions m = n + rest with |n| = p of W_n + W^(p)_rest."""
    if not any(m):
        return frozenset({(0,)})
    out = set()
    for n in itertools.product(*[range(x + 1) for x in m]):
        if sum(n) != p:
            continue
        rest = tuple(x - y for x, y in zip(m, n))
        tail = _w_p_oracle(rest, p)
        if tail:
            out |= minkowski_sum(LINEAR.sections(n), tail)
    return frozenset(out)


def test_subseries_matches_recursive_oracle():
    sub = SubSeries(LINEAR, 2)
    for m in [(1, 1), (2, 2), (3, 1), (1, 3), (2, 1)]:
        assert sub.sections(m) == _w_p_oracle(m, 2)


def test_subseries_contains_symmetric_powers():
    for p in (2, 3):
        sub = SubSeries(LINEAR, p)
        for n in itertools.product(range(p + 1), repeat=2):
            if sum(n) != p:
                continue
            for k in (1, 2, 3):
                kn = tuple(k * x for x in n)
                assert _kfold(LINEAR.sections(n), k) <= sub.sections(kn)
                assert sub.sections(kn) <= LINEAR.sections(kn)


def test_subseries_is_multiplicative():
    sub = SubSeries(LINEAR, 2)
    for m, n in [((1, 1), (2, 0)), ((1, 1), (1, 1)), ((0, 2), (3, 1))]:
        total = tuple(x + y for x, y in zip(m, n))
        assert minkowski_sum(sub.sections(m), sub.sections(n)) <= sub.sections(total)
