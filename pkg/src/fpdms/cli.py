"""Command-line front end.

Exit codes::

    0  success (closed-form mismatches are report content, not failures)
    1  usage error, empty t grid
    2  unreadable or malformed input
    3  not positive definite / not a valid similarity embedding / not a metric
    4  magnitude routes disagree beyond --tol
    5  exact GH budget exceeded
    6  family parameter constraint violated
    7  coefficient fit failed
    8  space not clustered at the requested epsilon
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import families as fam
from .core import FiniteMetricSpace, load, magnitude_linalg, random_fpdms, zeta, is_positive_definite
from .embedding import (
    PointConfig,
    circumsphere,
    embed,
    magnitude_from_radius,
    magnitude_from_volumes,
    recover_metric,
    validate_embedding,
)
from .errors import (
    AffinelyDependentError,
    BudgetExceededError,
    ConstraintError,
    DomainError,
    ExtrapolationError,
    FitError,
    FPDMSError,
    MetricError,
    NotClusteredError,
    NotPositiveDefiniteError,
    ParseError,
    RadiusError,
    TriSimilarityError,
)
from .gh import DEFAULT_MAX_SIZE, cluster_partition, cluster_type, gh_distance_exact

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVALID, EXIT_DISAGREE = 0, 1, 2, 3, 4
EXIT_BUDGET, EXIT_CONSTRAINT, EXIT_FIT, EXIT_NOT_CLUSTERED = 5, 6, 7, 8

_EXIT_FOR = (
    (ParseError, EXIT_PARSE),
    (BudgetExceededError, EXIT_BUDGET),
    (ConstraintError, EXIT_CONSTRAINT),
    (FitError, EXIT_FIT),
    (NotClusteredError, EXIT_NOT_CLUSTERED),
    (
        (
            MetricError,
            NotPositiveDefiniteError,
            TriSimilarityError,
            RadiusError,
            AffinelyDependentError,
            DomainError,
        ),
        EXIT_INVALID,
    ),
    (ExtrapolationError, EXIT_INVALID),
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


# input ------------------------------------------------------------------------


def _read(path):
    try:
        return load(path)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _as_space(obj) -> FiniteMetricSpace:
    if isinstance(obj, PointConfig):
        return recover_metric(validate_embedding(obj))
    return obj


# subcommands ------------------------------------------------------------------


def cmd_magnitude(args):
    if args.random is not None:
        obj = random_fpdms(args.random, seed=args.seed)
    elif args.path:
        obj = _read(args.path)
    else:
        raise UsageError("magnitude needs a PATH or --random N")
    if isinstance(obj, PointConfig):
        Y = validate_embedding(obj)
        X = recover_metric(Y)
    else:
        X = obj
        Y = None
    lin = magnitude_linalg(X)
    Ye = embed(X)
    vol = magnitude_from_volumes(Ye)
    Yr = Y if Y is not None else Ye
    rad = magnitude_from_radius(Yr)
    rho = circumsphere(Yr).radius
    values = {"inverse-sum": lin.value, "volume-ratio": vol.value, "circumradius": rad.value}
    names = list(values)
    deltas = {}
    worst = 0.0
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            rel = abs(values[a] - values[b]) / max(abs(values[a]), abs(values[b]))
            deltas[f"{a} vs {b}"] = rel
            worst = max(worst, rel)
    report = {
        "n": X.n,
        "magnitude": values,
        "relative_deltas": deltas,
        "circumradius": rho,
        "min_eigenvalue": lin.conditioning,
        "near_pd_threshold": lin.near_threshold,
        "tolerance": args.tol,
        "agree": worst <= args.tol,
    }
    if args.format == "json":
        out = json.dumps(report, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["route", "value"])
        for k, v in values.items():
            w.writerow([k, repr(v)])
        out = buf.getvalue()
    else:
        lines = [f"points            {X.n}"]
        lines += [f"{k:<17} {v:.15g}" for k, v in values.items()]
        lines += [f"delta {k:<30} {v:.3e}" for k, v in deltas.items()]
        lines += [f"circumradius      {rho:.15g}", f"min eigenvalue    {lin.conditioning:.6e}"]
        if lin.near_threshold:
            lines.append("warning: smallest eigenvalue within 10x of the positive-definiteness threshold")
        lines.append("routes agree" if worst <= args.tol else f"routes DISAGREE beyond tol {args.tol:g}")
        out = "\n".join(lines) + "\n"
    return out, (EXIT_OK if worst <= args.tol else EXIT_DISAGREE)


def cmd_gh(args):
    X = _as_space(_read(args.a))
    Xp = _as_space(_read(args.b))
    value, pair = gh_distance_exact(X, Xp, max_size=args.max_size)
    report = {"gh_distance": value, "distortion": pair.distortion, "f": list(pair.f), "g": list(pair.g)}
    if args.format == "text":
        out = f"gh distance {value:.15g}\nf {list(pair.f)}\ng {list(pair.g)}\n"
    else:
        out = json.dumps(report) + "\n"
    return out, EXIT_OK


def _spec_from_args(args) -> fam.FamilySpec:
    family = args.family
    if args.preset == "certified":
        base = fam.FamilySpec.certified(family)
    else:
        base = fam.FamilySpec.default(family)
    if args.variant == "repaired" and family == "T4" and args.s is None:
        base = fam.FamilySpec.certified("T4")
    rho = base.rho if args.rho is None else args.rho
    if args.cos_s is not None:
        if family != "T30":
            raise UsageError("--cos-s applies to T30 only")
        if not -1 <= args.cos_s <= 1:
            raise ConstraintError("cos s must lie in [-1, 1]")
        s = math.acos(args.cos_s)
    else:
        s = base.s if args.s is None else args.s
    variant = args.variant or base.variant
    return fam.FamilySpec(family, rho, s, variant)


def _t_grid(text):
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        a, b = text.split(":")
        return fam.default_t_grid(int(a), int(b))
    return [float(x) for x in text.split(",") if x.strip()]


def cmd_sweep(args):
    spec = _spec_from_args(args)
    try:
        ts = _t_grid(args.t_grid)
    except ValueError as exc:
        raise UsageError(f"bad --t-grid: {exc}") from exc
    if not ts:
        raise UsageError("empty t grid")
    try:
        rows = fam.family_sweep(spec, ts)
    except ValueError as exc:
        if isinstance(exc, FPDMSError):
            raise
        raise UsageError(str(exc)) from exc
    limit = fam.family_limit_radius(spec)
    summary = {
        **spec.describe(),
        "limit_solver_extrapolated": limit.audited_value,
        "limit_printed": limit.printed_value,
        "limit_corrected": limit.corrected_value,
        "limit_config_radius": limit.limit_config_radius,
        "verdict": limit.verdict,
        "valid_rows": sum(r.valid_embedding for r in rows),
        "rows": len(rows),
    }
    csv_text = fam.sweep_to_csv(spec, rows)
    if args.format == "csv":
        out = csv_text
    elif args.format == "json":
        recs = [
            {
                "t": r.t,
                "radius_solver": _num(r.radius_solver),
                "radius_closed_form": _num(r.radius_closed_form),
                "magnitude": _num(r.magnitude),
                "worst_tri_margin": _num(r.worst_tri_margin),
                "valid_embedding": r.valid_embedding,
                "error": r.error,
            }
            for r in rows
        ]
        out = json.dumps({"summary": summary, "rows": recs}, indent=2) + "\n"
    else:
        out = csv_text + _summary_line(summary) + "\n"
    return out, EXIT_OK


def _summary_line(s):
    return (
        f"# {s['family']} limit: solver (extrapolated) {s['limit_solver_extrapolated']:.10f}, "
        f"printed {s['limit_printed']:.10f}, corrected {s['limit_corrected']:.10f}, "
        f"limit config {s['limit_config_radius']:.10f}, verdict {s['verdict']}, "
        f"valid rows {s['valid_rows']}/{s['rows']}"
    )


def cmd_audit(args):
    spec = _spec_from_args(args)
    app = fam.expansion_audit(spec)
    t_cf = args.t if args.t is not None else 1e-3
    cf = fam.closed_form_audit(spec, t_cf)
    report = {
        **spec.describe(),
        "distances": [
            {"pair": c.pair, "printed": c.printed, "solver": c.computed, "rel_error": c.rel_error, "ok": c.ok}
            for c in app.distances
        ],
        "coefficients": [
            {
                "expression": c.expression,
                "printed_power": c.printed_power,
                "detected_power": c.detected_power,
                "printed": c.printed_coefficient,
                "fitted": c.fitted_coefficient,
                "rel_error": c.rel_error,
                "ok": c.ok,
            }
            for c in app.coefficients
        ],
        "closed_form": {
            "t": cf.t,
            "verdict": cf.verdict,
            "components": [
                {"name": c.name, "printed": c.printed, "solver": c.solver, "abs_error": c.abs_error, "verdict": c.verdict}
                for c in cf.components
            ],
        },
        "expansions_ok": app.ok,
    }
    if args.format == "json":
        return json.dumps(report, indent=2) + "\n", EXIT_OK
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "item", "printed", "computed", "error", "status"])
        for c in app.distances:
            w.writerow(["distance", c.pair, repr(c.printed), repr(c.computed), repr(c.rel_error), "ok" if c.ok else "mismatch"])
        for c in app.coefficients:
            w.writerow(
                [
                    f"coefficient t^{c.printed_power} (detected t^{c.detected_power})",
                    c.expression,
                    repr(c.printed_coefficient),
                    repr(c.fitted_coefficient),
                    repr(c.rel_error),
                    "ok" if c.ok else "mismatch",
                ]
            )
        for c in cf.components:
            w.writerow(["closed-form", c.name, repr(c.printed), repr(c.solver), repr(c.abs_error), c.verdict])
        return buf.getvalue(), EXIT_OK
    lines = [f"audit {json.dumps(spec.describe())}", "squared distances at t=1e-3 (printed vs solver):"]
    for c in app.distances:
        lines.append(f"  {c.pair:<3} printed {c.printed:.12g} solver {c.computed:.12g} rel {c.rel_error:.2e} {'ok' if c.ok else 'MISMATCH'}")
    lines.append("leading tri-similarity coefficients (printed vs fitted):")
    for c in app.coefficients:
        lines.append(
            f"  {c.expression:<36} t^{c.printed_power} printed {c.printed_coefficient:+.8f} "
            f"fitted {c.fitted_coefficient:+.8f} (leading power {c.detected_power}) {'ok' if c.ok else 'MISMATCH'}"
        )
    lines.append(f"closed forms at t={cf.t:g}: verdict {cf.verdict}")
    for c in cf.components:
        lines.append(f"  {c.name:<5} printed {c.printed:+.12g} solver {c.solver:+.12g} err {c.abs_error:.2e} {c.verdict}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_cluster(args):
    obj = _read(args.path)
    ref = _read(args.reference) if args.reference else None
    if args.epsilon is None and ref is None:
        raise UsageError("cluster needs --epsilon or --reference")
    if isinstance(obj, PointConfig) and isinstance(ref, PointConfig):
        dim = max(obj.dim, ref.dim)
        obj, ref = obj.padded(dim), ref.padded(dim)
    part = cluster_partition(obj, args.epsilon, ref)
    ctype = cluster_type(part)
    report = {
        "blocks": [list(b) for b in part.blocks],
        "epsilon": part.epsilon,
        "delta0": part.delta0,
        "cluster_type": list(ctype.r),
        "norm1": ctype.norm1,
    }
    if args.format == "text":
        out = f"type {ctype} (norm1 {ctype.norm1}) at epsilon {part.epsilon:g}\nblocks {report['blocks']}\n"
    else:
        out = json.dumps(report) + "\n"
    return out, EXIT_OK


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8, help="relative tolerance for route agreement (default 1e-8)")
    common.add_argument("--seed", type=int, default=0, help="seed for generated inputs (default 0)")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")

    p = _Parser(prog="fpdms", description="Magnitude of finite positive definite metric spaces.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    m = sub.add_parser("magnitude", parents=[common], help="magnitude by three routes")
    m.add_argument("path", nargs="?", help="space or point-config JSON")
    m.add_argument("--random", type=int, metavar="N", help="use a random N-point space (seeded by --seed)")
    m.set_defaults(func=cmd_magnitude)

    g = sub.add_parser("gh", parents=[common], help="exact Gromov-Hausdorff distance")
    g.add_argument("--a", required=True)
    g.add_argument("--b", required=True)
    g.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE)
    g.set_defaults(func=cmd_gh)

    for name, func, helptext in (
        ("sweep", cmd_sweep, "radius sweep of a counterexample family"),
        ("audit", cmd_audit, "audit printed closed forms and expansions"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--family", required=True, choices=fam.FAMILIES)
        s.add_argument("--rho", type=float)
        s.add_argument("--s", type=float)
        s.add_argument("--cos-s", type=float, help="T30 only: give cos s instead of s")
        s.add_argument("--variant", choices=("literal", "repaired"), help="T4 only")
        s.add_argument("--preset", choices=("default", "certified"), default="default")
        if name == "sweep":
            s.add_argument("--t-grid", default="4:20", help="'jmin:jmax' for t=2^-j, or comma-separated t values")
        else:
            s.add_argument("--t", type=float, help="t for the closed-form audit (default 1e-3)")
        s.set_defaults(func=func)

    c = sub.add_parser("cluster", parents=[common], help="cluster partition and type")
    c.add_argument("path")
    c.add_argument("--epsilon", type=float)
    c.add_argument("--reference", help="limit space; epsilon defaults to a quarter of its smallest distance")
    c.set_defaults(func=cmd_cluster)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if args.tol <= 0:
        print("fpdms: error: --tol must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        out, code = args.func(args)
    except UsageError as exc:
        print(f"fpdms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FPDMSError as exc:
        for kind, code in _EXIT_FOR:
            if isinstance(exc, kind):
                break
        else:
            code = EXIT_INVALID
        print(f"fpdms: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
