"""Command line front end.  Every command prints one JSON report (or a plain table)."""
from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import click

from . import __version__
from .algebra import TruncationError, cartan_matrix, loewy_length, mesh_algebra, socle_and_dual_basis
from .covering import (GradedStructure, GradingError, based_isomorphism_violations, canonical_matching,
                       covering_grading, graph_matching, half_grading, lift_nakayama, named_grading,
                       power_quotient_quiver, dual_lift_check, regular_lift_check, smash_product)
from .fields import FieldError, FieldSpec
from .oracle import OracleError, cy_mfold, parse_rfs_type, verdict
from .orbit import (OrbitError, orbit_presentation, parse_functor, presentation_for_type, solve_cy,
                    solve_sigma_period)
from .quiver import (QuiverError, QuotientSpec, build_dynkin, build_quotient_quiver, cover_quotient_spec,
                     export_dot, parse_quiver_spec, parse_type, arrow_label, vertex_label)
from .resolution import (ResolutionError, arrow_signs, build_resolution_start, graded_syzygy_shift,
                         is_inner, min_cy_exponent_direct, omega3_twist, verify_twist_recursion,
                         xi_generators, xi_rank_report)

SCHEMA = "mesharc.report/1"

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class Mismatch(Exception):
    pass


def _max_len() -> int | None:
    raw = os.environ.get("MESHARC_MAXLEN")
    if raw is None or raw == "":
        return None
    try:
        v = int(raw)
    except ValueError:
        raise click.UsageError(f"MESHARC_MAXLEN must be an integer, got {raw!r}")
    if v < 1:
        raise click.UsageError("MESHARC_MAXLEN must be positive")
    return v


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        raise TypeError("floats are not allowed in reports")
    return x


def _table(rows: list) -> str:
    if not rows:
        return "(empty)"
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    cells = [[json.dumps(_jsonable(r.get(c)), ensure_ascii=False) if not isinstance(r.get(c), str)
              else r.get(c) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def emit(ctx, command: str, inputs: dict, result, provenance, started=None):
    fmt = ctx.obj.get("format", "json")
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "input": inputs,
        "result": result,
        "provenance": provenance,
    }
    if ctx.obj.get("timing") and started is not None:
        report["timing_ms"] = int((time.perf_counter() - started) * 1000)
    report = _jsonable(report)
    if fmt == "table":
        rows = result.get("rows") if isinstance(result, dict) else None
        if rows is not None:
            click.echo(_table(rows))
        else:
            for k in sorted(result):
                click.echo(f"{k}: {json.dumps(report['result'][k], ensure_ascii=False, sort_keys=True)}")
    else:
        click.echo(json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True))


def _field(char: int) -> FieldSpec:
    try:
        return FieldSpec(char)
    except FieldError as exc:
        raise click.BadParameter(str(exc), param_hint="--char")


def _int_list(text: str, name: str) -> list:
    if text.strip() == "":
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected comma separated integers, got {text!r}", param_hint=name)


def _default_grading(q, m: int) -> GradedStructure | None:
    if q.meta.get("family") is not None and q.meta.get("family") != "L":
        return named_grading(q, m)
    if "rho_kind" in q.meta:
        return covering_grading(q, m)
    return None


def _format_option(f):
    """Let --format also follow the subcommand name."""
    def cb(ctx, param, value):
        if value is not None:
            ctx.ensure_object(dict)
            ctx.obj["format"] = value
        return value
    return click.option("--format", "sub_fmt", type=click.Choice(["json", "table"]), default=None,
                        expose_value=False, callback=cb, help="Output format.")(f)


@click.group()
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
@click.option("--timing", is_flag=True, help="Add wall-clock timing (makes output nondeterministic).")
@click.version_option(__version__, prog_name="mesharc")
@click.pass_context
def cli(ctx, fmt, timing):
    """Mesh algebras, bimodule periodicity and Calabi-Yau dimensions."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt
    ctx.obj["timing"] = timing


@cli.command()
@_format_option
@click.argument("spec")
@click.option("--char", default=0, show_default=True, type=int)
@click.option("--dot", "dot_path", type=click.Path(dir_okay=False), default=None, help="Write the quiver as DOT.")
@click.option("--dump", is_flag=True, help="Include basis and structure constants.")
@click.pass_context
def build(ctx, spec, char, dot_path, dump):
    """Build a quiver and its mesh algebra, e.g. "quotient G2 m=1"."""
    t0 = time.perf_counter()
    q = parse_quiver_spec(spec)
    A = mesh_algebra(q, _field(char), _max_len())
    if dot_path:
        with open(dot_path, "w", encoding="utf-8") as fh:
            fh.write(export_dot(q))
    res = {
        "quiver": q.label,
        "vertices": len(q.vertices),
        "arrows": len(q.arrows),
        "dimension": A.dim,
        "projective_dimensions": [len(A.by_source[v]) for v in q.vertices],
        "cartan": cartan_matrix(A),
        "loewy_length": loewy_length(A),
        "dot": dot_path,
    }
    if dump:
        res["algebra"] = A.to_dict()
    emit(ctx, "build", {"spec": spec, "char": char}, res, "direct-computation", t0)
    return EXIT_OK


@cli.command()
@_format_option
@click.option("--type", "typ", required=True, help="Tree class, e.g. D6.")
@click.option("--f", "freq", required=True, help="Frequency, e.g. 1/3.")
@click.option("--t", "tors", required=True, type=int, help="Torsion order 1, 2 or 3.")
@click.option("--char", default=0, show_default=True, type=int)
@click.pass_context
def oracle(ctx, typ, freq, tors, char):
    """Closed-form CY dimension and period of the type (Δ, f, t)."""
    t0 = time.perf_counter()
    _field(char)
    T = parse_rfs_type(typ, freq, tors, char)
    v = verdict(T)
    emit(ctx, "oracle", {"type": typ, "f": T.f, "t": tors, "char": char}, v.to_dict(), v.clause, t0)
    return EXIT_OK


@cli.command()
@_format_option
@click.argument("spec")
@click.option("--char", default=0, show_default=True, type=int)
@click.option("--d-max", default=None, type=int)
@click.option("--recursion", default=0, show_default=True, type=int,
              help="Check the twist recursion up to this syzygy (0 skips it).")
@click.pass_context
def resolve(ctx, spec, char, d_max, recursion):
    """Bimodule resolution start, the Ω³ twist and the direct CY exponent."""
    t0 = time.perf_counter()
    q = parse_quiver_spec(spec)
    A = mesh_algebra(q, _field(char), _max_len())
    D = socle_and_dual_basis(A)
    res = build_resolution_start(A, check=True)
    xis = xi_generators(A, D, res, check=True)
    mu = omega3_twist(A, D, xis, check=True)
    direct = min_cy_exponent_direct(A, D, d_max, mu)
    signs = arrow_signs(mu)
    out = {
        "dimension": A.dim,
        "ranks": res.ranks,
        "nakayama_permutation": {vertex_label(v): vertex_label(w) for v, w in D.pi.items()},
        "pairing_identity": D.pairing_matrix_is_identity(),
        "mu": mu.describe(),
        "mu_arrow_signs": {arrow_label(a): None if s is None else [arrow_label(s[0]), A.field.fmt(s[1])]
                           for a, s in signs.items()},
        "mu_inner": is_inner(A, mu).status,
        "xi_ranks": {vertex_label(v): r for v, r in xi_rank_report(A, D, xis).items()},
        "direct_cy": direct.to_dict(),
    }
    g = _default_grading(q, 1)
    if g is not None:
        try:
            out["graded"] = graded_syzygy_shift(A, g.lift, D, xis, mu)
        except ResolutionError as exc:
            out["graded"] = {"error": str(exc)}
    if recursion:
        out["twist_recursion"] = verify_twist_recursion(A, recursion, mu)
    emit(ctx, "resolve", {"spec": spec, "char": char, "d_max": d_max}, out, "direct-computation", t0)
    if recursion and not all(r["match"] for r in out["twist_recursion"]):
        return EXIT_MISMATCH
    return EXIT_OK


def _load_grading(q, m, grading):
    if grading == "auto":
        g = _default_grading(q, m)
        if g is None:
            raise click.UsageError("no default grading for this quiver; pass --grading FILE")
        return g
    if grading == "half":
        return half_grading(q, m)
    if grading == "covering":
        return covering_grading(q, m)
    if grading == "named":
        return named_grading(q, m)
    with open(grading, encoding="utf-8") as fh:
        raw = json.load(fh)
    by_label = {arrow_label(a.name): a.name for a in q.arrows}
    if set(raw) != set(by_label):
        raise click.UsageError("grading file must list every arrow exactly once")
    g = GradedStructure(q, m, {by_label[k]: int(v) for k, v in raw.items()})
    g.mesh_degrees()
    return g


@cli.command()
@_format_option
@click.argument("spec")
@click.option("--m", "m", required=True, type=int)
@click.option("--grading", default="auto", show_default=True,
              help="auto, half, covering, named, or a JSON file mapping arrow labels to degrees.")
@click.option("--char", default=0, show_default=True, type=int)
@click.option("--dump", is_flag=True, help="Include the smash product algebra.")
@click.pass_context
def cover(ctx, spec, m, grading, char, dump):
    """Smash product with Z/m and the checks that come with it."""
    t0 = time.perf_counter()
    if m < 1:
        raise click.BadParameter("m must be positive", param_hint="--m")
    q = parse_quiver_spec(spec)
    A = mesh_algebra(q, _field(char), _max_len())
    g = _load_grading(q, m, grading)
    S = smash_product(A, g)
    B = S.algebra
    out = {
        "grading": g.to_dict(),
        "half_grading": g.is_half_grading(),
        "dimension_A": A.dim,
        "dimension_B": B.dim,
        "associativity_violations": len(B.associativity_violations()),
        "mesh_relations_vanish": all(not B.mesh_relation(v) for v in B.vertices),
        "dual_lift": dual_lift_check(S),
        "regular_lift": regular_lift_check(S),
    }
    ok = out["dual_lift"]["violations"] == 0 and out["dual_lift"]["bijective"]
    if "rho_kind" in q.meta:
        vm, am, M = canonical_matching(S)
        viol = based_isomorphism_violations(B, M, vm, am)
        out["quotient"] = {"label": M.quiver.label, "matching": "canonical", "violations": len(viol)}
        ok = ok and not viol
    elif q.meta.get("family") is not None:
        Q, _ = power_quotient_quiver(build_quotient_quiver(cover_quotient_spec(q.meta["family"], q.meta["rank"])), m)
        mt = graph_matching(S, Q)
        if mt is None:
            out["quotient"] = {"label": Q.label, "matching": "graph", "violations": None}
            ok = False
        else:
            viol = based_isomorphism_violations(B, mesh_algebra(Q, A.field), *mt)
            out["quotient"] = {"label": Q.label, "matching": "graph", "violations": len(viol)}
            ok = ok and not viol
    try:
        out["nakayama_lift"] = lift_nakayama(S).to_dict()
    except GradingError as exc:
        out["nakayama_lift"] = {"error": str(exc)}
    if dump:
        out["algebra"] = B.to_dict()
    emit(ctx, "cover", {"spec": spec, "m": m, "grading": grading, "char": char}, out, "direct-computation", t0)
    return EXIT_OK if ok else EXIT_MISMATCH


@cli.command()
@_format_option
@click.option("--delta", required=True, help="Simply laced Dynkin type, e.g. D6.")
@click.option("--F", "functor", required=True, help='Orbit generator, e.g. "S^0 Sigma^3".')
@click.option("--char", default=0, show_default=True, type=int)
@click.pass_context
def orbit(ctx, delta, functor, char):
    """Sign calculus in D^b(kΔ)/F."""
    t0 = time.perf_counter()
    _field(char)
    fam, rank = parse_type(delta)
    m, d = parse_functor(functor)
    p = orbit_presentation(build_dynkin(fam, rank), m, d)
    out = p.to_dict()
    out["cy_d"] = solve_cy(p, char).to_dict()
    out["sigma_period"] = solve_sigma_period(p, char).to_dict()
    emit(ctx, "orbit", {"delta": delta, "F": functor, "char": char}, out, "orbit-sign-calculus", t0)
    return EXIT_OK


def _crosscheck_cell(delta_name, m, char, d_max):
    fam, rank = parse_type(delta_name)
    delta = build_dynkin(fam, rank)
    F = FieldSpec(char)
    A = mesh_algebra(build_quotient_quiver(QuotientSpec(delta, m)), F, _max_len())
    dm = d_max if d_max is not None else 6 * len(A.vertices)
    r = min_cy_exponent_direct(A, None, dm)
    o = cy_mfold(delta, m, char)
    pred = o.d
    if r.d == pred:
        status = "match"
    elif r.status == "inconclusive" or (r.d is None and pred is not None and pred > dm):
        status = "inconclusive"
    else:
        status = "mismatch"
    return {"delta": delta_name, "m": m, "char": char, "predicted": pred, "clause": o.clause,
            "computed": r.d, "d_max": dm, "status": status}


@cli.command()
@_format_option
@click.option("--delta", "deltas", default="A2,A3,D4", show_default=True)
@click.option("--m", "ms", default="1,2,3,4", show_default=True)
@click.option("--char", "chars", default="0,2,3", show_default=True)
@click.option("--d-max", default=None, type=int, help="Defaults to 6 times the number of vertices.")
@click.option("--jobs", default=4, show_default=True, type=int)
@click.pass_context
def crosscheck(ctx, deltas, ms, chars, d_max, jobs):
    """Direct CY exponents against the closed form over a (Δ, m, char) grid."""
    t0 = time.perf_counter()
    dl = [x for x in deltas.split(",") if x.strip()]
    for x in dl:
        parse_type(x)
    cells = [(x, m, c) for x in dl for m in _int_list(ms, "--m") for c in _int_list(chars, "--char")]
    for _, m, c in cells:
        if m < 1:
            raise click.BadParameter("m must be positive", param_hint="--m")
        _field(c)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as ex:
        rows = list(ex.map(lambda cell: _crosscheck_cell(*cell, d_max), cells))
    counts = {s: sum(r["status"] == s for r in rows) for s in ("match", "mismatch", "inconclusive")}
    emit(ctx, "crosscheck", {"delta": deltas, "m": ms, "char": chars, "d_max": d_max},
         {"rows": rows, "counts": counts}, "direct-computation vs mfold closed form", t0)
    if counts["inconclusive"]:
        click.echo(f"warning: {counts['inconclusive']} inconclusive cells", err=True)
    return EXIT_MISMATCH if counts["mismatch"] else EXIT_OK


_SWEEP_KINDS = ("t2A", "t2D", "t2E6", "t1")


@cli.command()
@_format_option
@click.option("--kind", type=click.Choice(_SWEEP_KINDS), required=True)
@click.option("--nmax", default=9, show_default=True, type=int)
@click.option("--smax", default=9, show_default=True, type=int)
@click.option("--char", default=0, show_default=True, type=int)
@click.pass_context
def sweep(ctx, kind, nmax, smax, char):
    """Closed-form verdicts against the orbit sign calculus over a parameter range."""
    t0 = time.perf_counter()
    _field(char)
    rows = []
    for delta, f, t in _sweep_types(kind, nmax, smax):
        T = parse_rfs_type(delta.name, str(f), t, char)
        v = verdict(T)
        p = presentation_for_type(delta, f, t)
        cy = solve_cy(p, char).value
        per = solve_sigma_period(p, char).value
        ok_d = cy == v.d
        # the algebra period is compared where the closed form gives one
        ok_p = v.period is None or v.period == per
        rows.append({"delta": delta.name, "f": f, "t": t, "oracle_d": v.d, "orbit_d": cy,
                     "oracle_period": v.period, "sigma_period": per, "clause": v.clause,
                     "status": "match" if ok_d and ok_p else "mismatch"})
    bad = sum(r["status"] == "mismatch" for r in rows)
    emit(ctx, "sweep", {"kind": kind, "nmax": nmax, "smax": smax, "char": char},
         {"rows": rows, "mismatches": bad}, "closed form vs orbit-sign-calculus", t0)
    return EXIT_MISMATCH if bad else EXIT_OK


def _sweep_types(kind, nmax, smax):
    if kind == "t2A":
        for n in range(1, nmax + 1):
            for s in range(1, smax + 1):
                yield build_dynkin("A", 2 * n + 1), Fraction(s), 2
    elif kind == "t2D":
        for n in range(5, nmax + 1, 2):
            for s in range(1, smax + 1):
                yield build_dynkin("D", n), Fraction(s), 2
    elif kind == "t2E6":
        for s in range(1, smax + 1):
            yield build_dynkin("E", 6), Fraction(s), 2
    else:
        for fam, lo in (("A", 1), ("D", 4)):
            for r in range(lo, nmax + 1):
                d = build_dynkin(fam, r)
                for M in range(1, smax + 1):
                    yield d, Fraction(M, d.m_delta), 1


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="mesharc", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE if exc.exit_code == 2 or isinstance(exc, click.UsageError) else exc.exit_code
    except click.exceptions.Abort:
        return EXIT_USAGE
    except TruncationError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_LIMIT
    except (ResolutionError, Mismatch) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_MISMATCH
    except (QuiverError, OracleError, OrbitError, GradingError, FieldError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    if isinstance(rv, int):
        return rv
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
