"""Acceptance suite: one test per criterion, each reported as PASS/FAIL in the terminal summary.

Tolerances and runtime limits are fixed here and must not be relaxed.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from okounkov_lab.fujita import (
    OutOfSupport,
    fiber_body,
    fiber_volume_scan,
    fujita_report,
    global_body,
    multigraded_fujita_check,
)
from okounkov_lab.geometry import hull
from okounkov_lab.ideals import (
    MonomialIdeal,
    MonomialValuation,
    asymptotic_order,
    base_ideal,
    base_order,
    check_star,
    multiplier_ideal,
    mu_equals_ain_check,
    subadditivity_check,
    valuation_checks,
)
from okounkov_lab.okounkov import (
    check_fujita_identity,
    homogeneity_check,
    log_concavity_check,
    okounkov_body,
    volume_report,
    volume_table,
)
from okounkov_lab.series import (
    CompleteSeries,
    ExplicitSeries,
    GeneratedSeries,
    ProductMultiSeries,
    floor_ratio_series,
    projective_space,
    semigroup_lattice,
    IDENTITY_FLAG,
)
from okounkov_lab.specfile import build_series, parse_spec

from oracles import lattice_index, multiplier_generators, shoelace_area

SPECS = Path(__file__).resolve().parent.parent / "specs"
SQUARES = GeneratedSeries([((0,), 1), ((2,), 1)], dim=1)
FLOOR57 = floor_ratio_series(5, 7)
FLOOR_TARGET = Fraction(45, 49)
PAIR = ProductMultiSeries([projective_space(2), FLOOR57])
LINEAR = ProductMultiSeries([projective_space(1), projective_space(1, 2)])
K_GRID = [(1, 3), (1, 2), (1, 1), (2, 1), (3, 1)]


def _specs():
    out = {}
    for path in sorted(SPECS.glob("*.toml")):
        out[path.stem] = build_series(parse_spec(path))
    return out


def _timed(fn, *args, **kwargs):
    start = time.perf_counter()
    value = fn(*args, **kwargs)
    return value, time.perf_counter() - start


def _rel(x, y):
    return abs(Fraction(x) - Fraction(y)) / abs(Fraction(y))


@pytest.mark.criterion(1, "normalized volume law on P^2, O(1)")
def test_criterion_01_simplex():
    start = time.perf_counter()
    p2 = projective_space(2)
    rep = volume_report(p2, m_max=200)
    m = 200
    assert rep.count_estimates.value_at(m) == Fraction((m + 1) * (m + 2), m * m)
    assert _rel(rep.count_estimates.value_at(m), 1) <= Fraction(2, 100)
    body = okounkov_body(p2)
    assert body.body == hull([(0, 0), (1, 0), (0, 1)])
    assert body.volume == Fraction(1, 2) == shoelace_area(body.body.vertices)
    assert time.perf_counter() - start < 5


@pytest.mark.criterion(2, "lattice normalization on the squares series")
def test_criterion_02_squares_lattice():
    rep = volume_report(SQUARES, m_max=40)
    assert rep.lattice_index == 2
    lattice, index = semigroup_lattice(SQUARES, IDENTITY_FLAG, 12)
    assert index == 2
    # sections exist in every degree, so the degree-zero slice has the same index as group(Gamma)
    gamma_points = [(a[0], m) for m in range(1, 4) for a in SQUARES.sections(m)]
    assert lattice_index(gamma_points, 2) == 2
    body = okounkov_body(SQUARES)
    assert body.body == hull([(0,), (2,)])
    for m, v in rep.count_estimates.rows:
        assert v == Fraction(m + 1, m)
    vol = volume_table(SQUARES, 40).last
    assert vol == 1
    assert rep.lattice_index * vol == body.volume == 2


@pytest.mark.criterion(3, "delta * vol = ain for squares (exact) and floor 5/7 (2% at m = 140)")
def test_criterion_03_fujita_identity():
    start = time.perf_counter()
    sq = check_fujita_identity(SQUARES, m_max=140)
    assert sq.delta == 2
    assert all(v == 1 for v in sq.vol.values)
    assert all(v == 2 for v in sq.ain.values)
    assert all(r == 0 for _, r in sq.residuals)
    fl = check_fujita_identity(FLOOR57, m_max=140)
    assert fl.delta == 1
    assert _rel(fl.vol.value_at(140), FLOOR_TARGET) <= Fraction(2, 100)
    assert _rel(fl.ain.value_at(140), FLOOR_TARGET) <= Fraction(2, 100)
    assert fl.residual <= Fraction(2, 100) * FLOOR_TARGET
    assert 2 * (Fraction(1, 2) - Fraction(2, 7) ** 2 / 2) == FLOOR_TARGET
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(4, "homogeneity for h = 1, 2, 3 on exact-mode examples")
def test_criterion_04_homogeneity():
    examples = [s for s in _specs().values() if isinstance(s, (CompleteSeries, GeneratedSeries))]
    assert len(examples) >= 5
    for s in examples:
        for h in (1, 2, 3):
            assert homogeneity_check(s, h=h), (s, h)


@pytest.mark.criterion(5, "Fujita p0: stabilization degree on exact examples, finite for floor 5/7")
def test_criterion_05_fujita():
    start = time.perf_counter()
    for name, s in _specs().items():
        if isinstance(s, CompleteSeries):
            expected = 1
        elif isinstance(s, GeneratedSeries):
            expected = s.stabilization_degree
        else:
            continue
        p_cap, k_cap = (2, 8) if s.dim >= 3 else (4, 12)
        rep = fujita_report(s, p_cap=p_cap, k_cap=k_cap)
        assert rep.p0 == expected, name
        assert all(v == 1 for v in rep.ratios.values), name
    rep = fujita_report(FLOOR57, epsilon=Fraction(1, 100), p_cap=14, k_cap=20)
    assert rep.p0 is not None and rep.p0 <= 14
    assert rep.p0 == 7
    assert rep.ratios.is_monotone_nondecreasing()
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(6, "fiber bodies of the linear family equal the induced bodies")
def test_criterion_06_fibers():
    gb = global_body(LINEAR)
    expected = {(1, 0): (0, 1), (1, 1): (0, 3), (1, 2): (0, 5)}
    for a, (lo, hi) in expected.items():
        if gb.support.in_interior(a):
            fiber = fiber_body(gb, a)
        else:
            # (1, 0) lies on the boundary of the support cone
            with pytest.raises(OutOfSupport):
                fiber_body(gb, a)
            fiber = fiber_body(gb, a, allow_boundary=True)
        assert fiber == hull([(lo,), (hi,)])
        assert fiber == okounkov_body(LINEAR.induced(a), m_max=8).body


@pytest.mark.criterion(7, "log-concavity and homogeneity with certified rounding on a 10-point grid")
def test_criterion_07_log_concavity():
    grid = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2), (1, 4), (4, 1), (2, 5)]
    scan = fiber_volume_scan(global_body(PAIR), grid)
    assert len(scan.volumes) == 10
    assert scan.homogeneity_ok
    for a, b, verdict, method in scan.log_concavity:
        assert verdict is True, (a, b, method)
        assert method in ("float", "exact")
    single = log_concavity_check(projective_space(2), FLOOR57)
    assert single.holds


@pytest.mark.criterion(8, "uniform multigraded Fujita p0 on K, per-direction values below it")
def test_criterion_08_multigraded():
    start = time.perf_counter()
    rep = multigraded_fujita_check(PAIR, K_GRID, epsilon=Fraction(1, 10), p_cap=14)
    assert rep.p0 is not None and rep.p0 <= 14
    for a in K_GRID:
        assert rep.per_direction_p0[a] is not None
        assert rep.per_direction_p0[a] <= rep.p0
    assert time.perf_counter() - start < 600


@pytest.mark.criterion(9, "Howald construction equals the interiority oracle on 200 random ideals")
def test_criterion_09_howald_oracle():
    start = time.perf_counter()
    rng = random.Random(20240601)
    mismatches = []
    for _ in range(200):
        nvars = rng.randint(1, 3)
        gens = [tuple(rng.randint(0, 6) for _ in range(nvars)) for _ in range(rng.randint(1, 5))]
        c = rng.choice([Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2)])
        ours = set(multiplier_ideal(MonomialIdeal(gens, nvars), c).generators)
        if ours != multiplier_generators(gens, nvars, c):
            mismatches.append((gens, c))
    assert mismatches == []
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(10, "(*) witnesses, base ideal inside asymptotic ideal, subadditivity")
def test_criterion_10_star():
    for name, s in _specs().items():
        if isinstance(s, (ProductMultiSeries, ExplicitSeries)):
            continue
        p_max = 6 if s.dim >= 3 else 10
        rep = check_star(s, p_max=p_max)
        for p, asym in rep.asymptotic_ideals.items():
            assert asym.ideal.contains_ideal(base_ideal(s, p)), (name, p)
        if isinstance(s, (CompleteSeries, GeneratedSeries)):
            assert rep.witness is not None and rep.stabilized and rep.verified, name
        if rep.stabilized:
            for p in range(1, p_max + 1):
                for k in range(2, p_max // p + 1):
                    assert subadditivity_check(s, p, k) is not False, (name, p, k)


@pytest.mark.criterion(11, "mu, ain and delta * vol agree within 3% at m = 100; mu >= ain row-wise")
def test_criterion_11_mu():
    chain = mu_equals_ain_check(projective_space(3, 2), [3], m_max=100)
    for table in (chain.mu, chain.ain, chain.delta_vol):
        assert _rel(table.value_at(100), 4) <= Fraction(3, 100)
    assert all(r <= Fraction(3, 100) for r in chain.residuals.values())
    assert chain.mu_dominates
    others = [
        (GeneratedSeries([((0, 0), 1), ((2, 0), 1), ((0, 2), 1)], dim=2), [2]),
        (FLOOR57, [1]),
        (projective_space(2, 2), [2]),
    ]
    for ambient, vanish in others:
        assert mu_equals_ain_check(ambient, vanish, m_max=40).mu_dominates


@pytest.mark.criterion(12, "valuation suite on the squares series with v = (1, 0)")
def test_criterion_12_valuation():
    v = MonomialValuation((1, 0))
    order = asymptotic_order(SQUARES, v, p_max=20)
    assert order.infimum == 0
    checks = valuation_checks(SQUARES, v, p_max=20)
    assert checks.v_bounded_ok
    assert all(base_order(SQUARES, v, p) <= checks.bound for p in range(1, 21))
    assert abs(checks.supremum - checks.infimum) <= checks.slack
    assert checks.sup_ratio_ok


DETERMINISM_RUNS = [
    ["volume", "p2_o1.toml", "--mmax", "60"],
    ["body", "floor57.toml", "--mmax", "14"],
    ["restrict", "p3_o2.toml", "--mmax", "20"],
    ["fujita", "floor57.toml", "--pcap", "8", "--kcap", "8"],
    ["multigraded", "pair_o1_floor57.toml", "--grid", "1,1;1,2;2,1", "--pcap", "3", "--truncation", "24"],
    ["star", "squares.toml", "--pmax", "8"],
    ["mu", "p3_o2.toml", "--mmax", "20"],
    ["valuation", "squares.toml", "--weights", "1,0", "--pmax", "10"],
    ["audit", "floor57.toml", "--degree", "5"],
]


def _run_cli(argv, out_dir, hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    cmd = [sys.executable, "-m", "okounkov_lab.cli", argv[0], str(SPECS / argv[1]), *argv[2:], "--out", str(out_dir)]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
    assert proc.returncode in (0, 2), proc.stderr
    return {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}


@pytest.mark.criterion(13, "byte-identical CSV across repeated runs of every subcommand")
def test_criterion_13_determinism(tmp_path):
    for argv in DETERMINISM_RUNS:
        first = _run_cli(argv, tmp_path / f"{argv[0]}_a", 1)
        second = _run_cli(argv, tmp_path / f"{argv[0]}_b", 2)
        assert any(name.endswith(".csv") for name in first), argv
        assert first.keys() == second.keys()
        for name in first:
            assert first[name] == second[name], (argv, name)
