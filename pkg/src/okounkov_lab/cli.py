"""okounkov-lab command line.

Every subcommand reads one series file, runs a family of checks and writes
CSV tables (and SVG drawings for planar bodies and two-variable ideals).
Exit codes: 0 ok, 2 a certified check failed, 3 a degree cap of the input
was exceeded (partial output), 4 the series file is invalid.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .fujita import (
    OutOfSupport,
    PreconditionError,
    fiber_body,
    fiber_volume_scan,
    fujita_report,
    global_body,
    multigraded_fujita_check,
)
from .ideals import (
    MonomialValuation,
    Refused,
    asymptotic_order,
    base_ideal,
    check_star,
    mu_equals_ain_check,
    subadditivity_check,
    valuation_checks,
)
from .okounkov import (
    UndefinedInvariant,
    homogeneity_check,
    okounkov_body,
    restricted_volume,
    volume_report,
    volume_table,
)
from .render import CsvTable, RunManifest, convergence_csv, decimal_text, index_text, polygon_svg, rational_columns, staircase_svg
from .series import (
    CapExceeded,
    ExplicitSeries,
    GradedSeries,
    MultiGradedSeries,
    MultiplicativityError,
    SeriesError,
    audit,
    exponent,
    gf_report,
    nonempty_degrees,
)
from .specfile import SpecError, build_flag, build_series, parse_spec
from .tables import format_rational

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_CAP_EXCEEDED = 3
EXIT_SPEC_ERROR = 4

DEFAULT_GRID = "1,3;1,2;1,1;2,1;3,1"

# a failed check outranks a partial run
_SEVERITY = {EXIT_OK: 0, EXIT_CAP_EXCEEDED: 1, EXIT_CHECK_FAILED: 2}


@dataclass
class Outcome:
    tables: list[CsvTable] = field(default_factory=list)
    svgs: dict = field(default_factory=dict)
    status: int = EXIT_OK
    messages: list[str] = field(default_factory=list)
    caps: dict = field(default_factory=dict)

    def escalate(self, status: int):
        if _SEVERITY[status] > _SEVERITY[self.status]:
            self.status = status

    def fail(self, message: str):
        self.messages.append(message)
        self.escalate(EXIT_CHECK_FAILED)


def _vector(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(";", ",").split(",") if x.strip())


def _grid(text: str) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]


def _cap(args, spec, name, default):
    value = getattr(args, name, None)
    if value is None:
        value = spec.caps.get(name, default)
    return value


def _cap_limit(series) -> int | None:
    return series.max_degree if isinstance(series, ExplicitSeries) else None


def _clamp(series, value: int, out: Outcome, name: str) -> int:
    limit = _cap_limit(series)
    if limit is not None and value > limit:
        out.messages.append(f"{name}={value} exceeds the data of the series (degree {limit}); output is partial")
        out.escalate(EXIT_CAP_EXCEEDED)
        return limit
    return value


def _single(series, command) -> GradedSeries:
    if not isinstance(series, GradedSeries):
        raise SpecError([(None, f"{command} needs a single-graded series")])
    return series


def _vertex_table(name: str, body) -> CsvTable:
    table = CsvTable(name, ["vertex"] + [f"x{i + 1}" for i in range(body.dim)] + [f"x{i + 1}_decimal" for i in range(body.dim)])
    for n, v in enumerate(body.vertices):
        table.rows.append([str(n)] + [format_rational(x) for x in v] + [decimal_text(Fraction(x)) for x in v])
    return table


def _summary(name: str, items) -> CsvTable:
    table = CsvTable(name, ["quantity", "value", "decimal"])
    for key, value in items:
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            table.rows.append([key, format_rational(Fraction(value)), decimal_text(Fraction(value))])
        else:
            table.rows.append([key, index_text(value) if value is not None else "", ""])
    return table


# ---------------------------------------------------------------------------
# subcommands


def cmd_volume(args, spec, series, out: Outcome):
    series = _single(series, "volume")
    mmax = _clamp(series, _cap(args, spec, "mmax", 100), out, "mmax")
    out.caps.update(mmax=mmax, tol=args.tol)
    rep = volume_report(series, build_flag(spec), mmax)
    out.tables.append(convergence_csv(rep.count_estimates, name="count"))
    out.tables.append(convergence_csv(rep.hull_estimates, name="hull"))
    out.tables.append(convergence_csv(volume_table(series, mmax), name="difference"))
    out.tables.append(_summary("summary", [("exponent", rep.exponent), ("lattice_index", rep.lattice_index),
                                           ("normalized_target", rep.normalized_target)]))
    if args.tol is not None and rep.normalized_target is not None:
        if not rep.count_estimates.within(args.tol):
            out.fail(f"count estimate {rep.count_estimates.last} is not within {args.tol} of {rep.normalized_target}")


def cmd_body(args, spec, series, out: Outcome):
    series = _single(series, "body")
    mmax = _clamp(series, _cap(args, spec, "mmax", 20), out, "mmax")
    out.caps.update(mmax=mmax)
    flag = build_flag(spec)
    body = okounkov_body(series, flag, mmax)
    out.tables.append(_vertex_table("vertices", body.body))
    hom = {h: homogeneity_check(series, flag, h, min(mmax, 12)) for h in (1, 2, 3)}
    out.tables.append(_summary("summary", [("volume", body.volume), ("exact", str(body.exact).lower()),
                                           ("lattice_index", body.lattice_index)]
                               + [(f"homogeneity_h{h}", str(ok).lower()) for h, ok in hom.items()]))
    if body.body.dim == 2:
        out.svgs["body"] = polygon_svg(body.body, f"{spec.name} body")
    for h, ok in hom.items():
        if not ok:
            out.fail(f"homogeneity fails at h={h}")


def cmd_restrict(args, spec, series, out: Outcome):
    series = _single(series, "restrict")
    mmax = _clamp(series, _cap(args, spec, "mmax", 100), out, "mmax")
    vanish = _vector(args.vanish) if args.vanish else tuple(spec.caps.get("vanish", ()))
    if not vanish:
        raise SpecError([(None, "restrict needs --vanish or caps.vanish")])
    out.caps.update(mmax=mmax, vanish=vanish)
    rep = restricted_volume(series, vanish, build_flag(spec), mmax)
    out.tables.append(convergence_csv(rep.count_estimates, name="count"))
    out.tables.append(convergence_csv(rep.hull_estimates, name="hull"))


def cmd_fujita(args, spec, series, out: Outcome):
    series = _single(series, "fujita")
    eps = args.eps if args.eps is not None else Fraction(spec.caps.get("eps", "1/100"))
    pcap = _cap(args, spec, "pcap", 14)
    kcap = _cap(args, spec, "kcap", 20)
    out.caps.update(eps=eps, pcap=pcap, kcap=kcap, criterion=args.criterion)
    rep = fujita_report(series, eps, pcap, kcap, args.criterion)
    grid = CsvTable("ratios", ["p;k", "value", "decimal", "target", "residual"])
    for p, row in rep.grid.items():
        for k, v in row.rows:
            grid.rows.append([index_text((p, k))] + rational_columns(v, row.target))
    out.tables.append(grid)
    per_p = CsvTable("per_p", ["p", "estimate", "estimate_decimal", "gap", "gap_decimal", "rising"])
    for p in rep.grid:
        per_p.rows.append([str(p), format_rational(rep.estimates[p]), decimal_text(rep.estimates[p]),
                           format_rational(rep.gaps[p]), decimal_text(rep.gaps[p]), str(rep.rising[p]).lower()])
    out.tables.append(per_p)
    out.tables.append(_summary("summary", [("p0", rep.p0), ("limit_estimate", rep.limit_estimate),
                                           ("achieved_epsilon", rep.achieved_epsilon)]))
    if not rep.reached:
        out.fail(f"no p <= {pcap} reaches epsilon {eps}")


def cmd_multigraded(args, spec, series, out: Outcome):
    if not isinstance(series, MultiGradedSeries):
        raise SpecError([(None, "multigraded needs a product-mode series")])
    grid = _grid(args.grid or spec.caps.get("grid", DEFAULT_GRID))
    eps = args.eps if args.eps is not None else Fraction(spec.caps.get("eps", "1/10"))
    pcap = _cap(args, spec, "pcap", 14)
    truncation = _cap(args, spec, "truncation", 140)
    box = _cap(args, spec, "box", 7)
    out.caps.update(grid=[index_text(a) for a in grid], eps=eps, pcap=pcap, truncation=truncation, box=box)
    flag = build_flag(spec)
    gb = global_body(series, flag, box)
    scan = fiber_volume_scan(gb, grid)
    fibers = CsvTable("fibers", ["a", "volume", "decimal"])
    for a, v in scan.volumes:
        fibers.rows.append([index_text(a), format_rational(v), decimal_text(v)])
    out.tables.append(fibers)
    lc = CsvTable("log_concavity", ["a", "b", "holds", "method"])
    for a, b, verdict, method in scan.log_concavity:
        lc.rows.append([index_text(a), index_text(b), str(verdict).lower(), method])
    out.tables.append(lc)
    if series.dim == 2:
        for a in grid:
            out.svgs[f"fiber_{'_'.join(map(str, a))}"] = polygon_svg(fiber_body(gb, a), f"{spec.name} fiber {a}")
    if not scan.homogeneity_ok:
        out.fail("fiber volumes are not homogeneous")
    if not scan.log_concave_ok:
        out.fail("log-concavity fails on the grid")
    rep = multigraded_fujita_check(series, grid, eps, pcap, truncation, box)
    table = CsvTable("uniform", ["p;a;h", "value", "decimal", "target", "residual"])
    for p, a, h, ratio in rep.table:
        table.rows.append([index_text((p, a, h))] + rational_columns(ratio, Fraction(1)))
    out.tables.append(table)
    per = CsvTable("per_direction", ["a", "p0", "induced_p0"])
    for a in grid:
        per.rows.append([index_text(a), index_text(rep.per_direction_p0[a] or ""),
                         index_text(rep.induced_fujita_p0[a] or "")])
    out.tables.append(per)
    out.tables.append(_summary("summary", [("p0", rep.p0)]))
    if rep.p0 is None:
        out.fail(f"no uniform p <= {pcap} on the grid")


def cmd_star(args, spec, series, out: Outcome):
    series = _single(series, "star")
    pmax = _clamp(series, _cap(args, spec, "pmax", 10), out, "pmax")
    kcap = _cap(args, spec, "kcap", 8)
    out.caps.update(pmax=pmax, kcap=kcap)
    rep = check_star(series, pmax, kcap)
    table = CsvTable("shifts", ["p", "shift", "base_generators", "asymptotic_generators", "stabilized_at",
                                "base_inside_asymptotic", "subadditive_k2"])
    for p, asym in rep.asymptotic_ideals.items():
        bp = base_ideal(series, p)
        inside = asym.ideal.contains_ideal(bp)
        sub = subadditivity_check(series, p, 2, kcap) if 2 * p <= pmax else None
        table.rows.append([str(p), index_text(rep.per_p_shifts.get(p, "")),
                           " ".join(index_text(g) for g in bp.generators),
                           " ".join(index_text(g) for g in asym.ideal.generators),
                           str(asym.stabilized_at), str(inside).lower(), "" if sub is None else str(sub).lower()])
        if not inside:
            out.fail(f"b_{p} is not inside the asymptotic multiplier ideal")
        if sub is False:
            out.fail(f"subadditivity fails at p={p}, k=2")
    out.tables.append(table)
    out.tables.append(_summary("summary", [("witness", rep.witness), ("stabilized", str(rep.stabilized).lower()),
                                           ("verified", str(rep.verified).lower()),
                                           ("obstructions", rep.obstructions)]))
    if series.dim == 1 and rep.asymptotic_ideals:
        p = max(rep.asymptotic_ideals)
        out.svgs["staircase"] = staircase_svg(
            [(f"b_{p}", base_ideal(series, p).generators), (f"J_{p}", rep.asymptotic_ideals[p].ideal.generators)],
            f"{spec.name} staircases at p={p}")
    if rep.witness is None:
        out.fail("no witness in the tested range")


def cmd_mu(args, spec, series, out: Outcome):
    series = _single(series, "mu")
    mmax = _clamp(series, _cap(args, spec, "mmax", 100), out, "mmax")
    vanish = _vector(args.vanish) if args.vanish else tuple(spec.caps.get("vanish", ()))
    if not vanish:
        raise SpecError([(None, "mu needs --vanish or caps.vanish")])
    pmax = _cap(args, spec, "pmax", 4)
    kcap = _cap(args, spec, "kcap", 2)
    tol = args.tol if args.tol is not None else Fraction(3, 100)
    out.caps.update(mmax=mmax, vanish=vanish, pmax=pmax, kcap=kcap, tol=tol)
    try:
        rep = mu_equals_ain_check(series, vanish, mmax, pmax, kcap)
    except Refused as exc:
        out.fail(f"refused: {exc}")
        return
    target = rep.delta_vol.target
    for name, table in (("mu", rep.mu), ("ain", rep.ain), ("delta_vol", rep.delta_vol)):
        csv_table = CsvTable(name, ["m", "value", "decimal", "target", "residual"])
        for m, v in table.rows:
            csv_table.rows.append([str(m)] + rational_columns(v, target))
        out.tables.append(csv_table)
    out.tables.append(_summary("summary", [("delta", rep.delta), ("mu_dominates", str(rep.mu_dominates).lower())]
                               + [(f"residual_{k}", v) for k, v in rep.residuals.items()]))
    for key, value in rep.residuals.items():
        if value > tol:
            out.fail(f"relative residual {key} = {decimal_text(value, 6)} exceeds {tol}")
    if not rep.mu_dominates:
        out.fail("mu falls below the asymptotic intersection")


def cmd_valuation(args, spec, series, out: Outcome):
    series = _single(series, "valuation")
    weights = _vector(args.weights) if args.weights else tuple(spec.caps.get("weights", ()))
    if len(weights) != series.dim + 1:
        raise SpecError([(None, f"valuation needs {series.dim + 1} weights")])
    pmax = _clamp(series, _cap(args, spec, "pmax", 20), out, "pmax")
    kcap = _cap(args, spec, "kcap", 8)
    out.caps.update(weights=weights, pmax=pmax, kcap=kcap)
    v = MonomialValuation(weights)
    order = asymptotic_order(series, v, pmax)
    out.tables.append(convergence_csv(order.per_p, "p", name="order"))
    try:
        checks = valuation_checks(series, v, pmax, kcap)
    except Refused as exc:
        out.fail(f"refused: {exc}")
        return
    bounded = "" if checks.v_bounded_ok is None else str(checks.v_bounded_ok).lower()
    out.tables.append(_summary("summary", [("infimum", checks.infimum), ("supremum", checks.supremum),
                                           ("slack", checks.slack), ("bound", checks.bound),
                                           ("v_bounded_ok", bounded),
                                           ("sup_ratio_ok", str(checks.sup_ratio_ok).lower())]))
    if checks.v_bounded_ok is False:
        out.fail("v(b_p) is not bounded by the witness")
    if not checks.sup_ratio_ok:
        out.fail("sup of v(J_p)/p differs from inf of v(b_p)/p beyond the slack")


def cmd_audit(args, spec, series, out: Outcome):
    degree = _cap(args, spec, "degree", 6)
    parts = list(series.factors) if isinstance(series, MultiGradedSeries) else [series]
    out.caps.update(degree=degree)
    for n, s in enumerate(parts):
        deg = _clamp(s, degree, out, "degree")
        label = "" if len(parts) == 1 else f"part{n + 1}_"
        table = CsvTable(f"{label}degrees", ["m", "count", "rank", "lattice_index"])
        ranks = {m: (r, i) for m, r, i in gf_report(s, max(deg, 1)).per_degree} if nonempty_degrees(s, max(deg, 1)) else {}
        for m in range(1, deg + 1):
            rank, index = ranks.get(m, ("", ""))
            table.rows.append([str(m), str(s.count(m)), str(rank), "" if index is None else str(index)])
        out.tables.append(table)
        try:
            audit(s, deg)
        except MultiplicativityError as exc:
            out.fail(f"multiplicativity fails: (k, l, exponent) = ({exc.k}, {exc.l}, {exc.exponent})")
        else:
            out.tables.append(_summary(f"{label}summary", [("exponent", exponent(s, max(deg, 1)))]))


COMMANDS = {
    "volume": cmd_volume,
    "body": cmd_body,
    "restrict": cmd_restrict,
    "fujita": cmd_fujita,
    "multigraded": cmd_multigraded,
    "star": cmd_star,
    "mu": cmd_mu,
    "valuation": cmd_valuation,
    "audit": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="okounkov-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", type=Path, help="series definition file (TOML)")
        p.add_argument("--out", type=Path, help="directory for CSV/SVG files (default: CSV to stdout)")
        p.add_argument("--seed", type=int, default=0, help="recorded in the manifest")
        return p

    p = add("volume", "count, hull and difference volume tables")
    p.add_argument("--mmax", type=int)
    p.add_argument("--tol", type=Fraction, help="fail when the last count estimate is farther from the target")
    p = add("body", "Okounkov body vertices, homogeneity, SVG")
    p.add_argument("--mmax", type=int)
    p = add("restrict", "volume tables of the restriction to a coordinate subspace")
    p.add_argument("--mmax", type=int)
    p.add_argument("--vanish", help="comma-separated homogeneous coordinates that vanish")
    p = add("fujita", "Fujita approximation scan")
    p.add_argument("--eps", type=Fraction)
    p.add_argument("--pcap", type=int)
    p.add_argument("--kcap", type=int)
    p.add_argument("--criterion", choices=("volume", "ratio"), default="volume")
    p = add("multigraded", "fiber bodies and the uniform multigraded Fujita scan")
    p.add_argument("--grid", help=f"semicolon-separated integral directions (default {DEFAULT_GRID})")
    p.add_argument("--eps", type=Fraction)
    p.add_argument("--pcap", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--box", type=int)
    p = add("star", "search for a (*) witness")
    p.add_argument("--pmax", type=int)
    p.add_argument("--kcap", type=int)
    p = add("mu", "reduced volume against the asymptotic intersection")
    p.add_argument("--mmax", type=int)
    p.add_argument("--vanish")
    p.add_argument("--pmax", type=int)
    p.add_argument("--kcap", type=int)
    p.add_argument("--tol", type=Fraction)
    p = add("valuation", "asymptotic orders along a monomial valuation")
    p.add_argument("--weights", help="comma-separated nonnegative weights, one per homogeneous coordinate")
    p.add_argument("--pmax", type=int)
    p.add_argument("--kcap", type=int)
    p = add("audit", "multiplicativity audit and per-degree summary")
    p.add_argument("--degree", type=int)
    return parser


def _write(out: Outcome, args, manifest: RunManifest):
    if args.out is None:
        sys.stdout.write("\n".join(t.render(manifest) for t in out.tables))
        return
    args.out.mkdir(parents=True, exist_ok=True)
    for t in out.tables:
        (args.out / f"{args.command}_{t.name}.csv").write_text(t.render(manifest))
    for name, text in out.svgs.items():
        (args.out / f"{args.command}_{name}.svg").write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse_spec(args.spec, audit_degree=0 if args.command == "audit" else None)
        series = build_series(spec)
    except SpecError as exc:
        for line, msg in exc.errors:
            where = f"{args.spec}:{line}" if line else str(args.spec)
            print(f"{where}: {msg}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except OSError as exc:
        print(f"{args.spec}: {exc}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    out = Outcome()
    try:
        COMMANDS[args.command](args, spec, series, out)
    except SpecError as exc:
        for _, msg in exc.errors:
            print(f"{args.spec}: {msg}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except CapExceeded as exc:
        out.messages.append(f"cap exceeded: {exc}; output is partial")
        out.escalate(EXIT_CAP_EXCEEDED)
    except (UndefinedInvariant, PreconditionError, OutOfSupport, Refused) as exc:
        out.fail(str(exc))
    except SeriesError as exc:
        out.fail(f"error: {exc}")
    manifest = RunManifest(args.command, spec.source_sha256, out.caps, args.seed)
    _write(out, args, manifest)
    for msg in out.messages:
        print(msg, file=sys.stderr)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
