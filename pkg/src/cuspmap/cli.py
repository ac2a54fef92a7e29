"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 I/O failure.
Results go to ``--out`` (or stdout) as JSON, curves as CSV.
"""
from __future__ import annotations

import functools
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import asymptote, cuspgeom, logpow, oracle, slitmap

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

# Base tolerances, multiplied by --tol-scale.
TOL_SERIES = 1e-3
TOL_ORACLE = 1e-2


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _Fail as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.code)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO)
        except (ValueError, KeyError, TypeError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except FileNotFoundError as exc:
        raise _Fail(EXIT_INPUT, f"no such file: {path}") from exc


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load_series(path: str) -> logpow.LogSeriesCoefficients:
    try:
        return logpow.LogSeriesCoefficients.from_json(_read(path))
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_INPUT, f"malformed JSON in {path}: {exc}") from exc


def _load_config(ctx, _param, value):
    if value is None:
        return None
    try:
        doc = json.loads(Path(value).read_text())
    except OSError as exc:
        ctx.fail(f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        ctx.fail(f"malformed config: {exc}")
    if not isinstance(doc, dict):
        ctx.fail("config must be a JSON object")
    ctx.default_map = {**(ctx.default_map or {}), **doc}
    return value


def _positive(ctx, param, value):
    if value is not None and not (math.isfinite(value) and value > 0):
        raise click.BadParameter("must be a positive finite number")
    return value


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", type=click.Path(dir_okay=False), callback=_load_config,
              is_eager=True, expose_value=False,
              help="JSON file of option defaults; subcommand options go under the subcommand name.")
@click.option("--tol-scale", type=float, default=1.0, show_default=True, callback=_positive,
              help="Multiplier applied to every acceptance tolerance.")
@click.pass_context
def main(ctx, tol_scale):
    """Boundary-cusp conformal map toolkit."""
    ctx.obj = {"tol_scale": tol_scale}


@main.command("expand-circular")
@click.option("--alpha", type=float, required=True, help="Prevertex parameter of the circular slit map.")
@click.option("--nmax", type=int, default=logpow.DEFAULT_N_MAX, show_default=True, help="Number of 1/log z orders.")
@click.option("--kmax", type=int, default=logpow.DEFAULT_K_MAX, show_default=True, help="Highest power of z per order.")
@click.option("--out", type=str, default=None, help="Output JSON path (stdout if omitted).")
@_guarded
def expand_circular(alpha, nmax, kmax, out):
    """Write the log-power coefficients of the circular-arc slit map."""
    if nmax < 1 or kmax < 0:
        raise _Fail(EXIT_INPUT, "need nmax >= 1 and kmax >= 0")
    s = slitmap.chr_expand(alpha, nmax, kmax)
    _write(s.to_json(indent=2) + "\n", out)


@main.command("check-admissible")
@click.argument("series_path", type=str)
@click.option("--radius", type=float, default=logpow.DEFAULT_RADIUS, show_default=True,
              help="Radius of the sampled half-disk.")
@click.option("--out", type=str, default=None, help="Report JSON path (stdout if omitted).")
@_guarded
def check_admissible(series_path, radius, out):
    """Check the four admissibility conditions of a series file."""
    report = logpow.check_admissibility(_load_series(series_path), radius)
    _write(_dump(report.to_dict()), out)
    if not report.passed:
        click.echo("failed: " + ", ".join(report.failed_conditions()), err=True)
        sys.exit(EXIT_CHECK)


@main.command("gen-curve")
@click.option("--series", "series_path", type=str, required=True, help="Series JSON file.")
@click.option("--side", type=click.Choice(["neg", "pos"]), default="neg", show_default=True)
@click.option("--xmin", type=float, default=cuspgeom.DEFAULT_WINDOW[0], show_default=True, callback=_positive)
@click.option("--xmax", type=float, default=cuspgeom.DEFAULT_WINDOW[1], show_default=True, callback=_positive)
@click.option("--n", "n", type=int, default=cuspgeom.DEFAULT_SAMPLES, show_default=True)
@click.option("--power-d", type=float, default=1.0, show_default=True, callback=_positive,
              help="Emit the trace of the boundary raised to 1/d.")
@click.option("--out", type=str, default=None, help="CSV path (stdout if omitted).")
@_guarded
def gen_curve(series_path, side, xmin, xmax, n, power_d, out):
    """Sample the boundary trace near the cusp as x,u,v CSV."""
    s = _load_series(series_path)
    xs = cuspgeom.log_window(xmin, xmax, n, cuspgeom.Side(side))
    curve = cuspgeom.power_curve(s, power_d, xs)
    _write(curve.to_csv(), out)


def _oracle_from_csv(path: str):
    m = oracle.oracle_from_curve(cuspgeom.CuspCurve.from_csv(_read(path)))
    return lambda z: oracle.eval_geodesic(m, z)


@main.command("verify-asymptotics")
@click.option("--map", "map_spec", type=(click.Choice(["series", "circular", "oracle"]), str), required=True,
              help="series <file.json> | circular <alpha> | oracle <curve.csv>.")
@click.option("--theorem", type=click.Choice(["1", "2", "kaiser"]), default="1", show_default=True)
@click.option("--d", "d", type=float, default=1.0, show_default=True, callback=_positive,
              help="Tangency order; the map is composed as f(z**d)**(1/d) for --theorem 2.")
@click.option("--a", "a", type=float, default=1.0, show_default=True, callback=_positive,
              help="Curvature constant (Kaiser's convention for --theorem kaiser).")
@click.option("--path", "path_spec", type=str, default="vertical", show_default=True,
              help="vertical or ray:<theta>.")
@click.option("--tmin", type=float, default=None, callback=_positive,
              help="Smallest |z| sampled [default: 1e-16, or 1e-8 for the oracle].")
@click.option("--tmax", type=float, default=1e-4, show_default=True, callback=_positive)
@click.option("--nt", type=int, default=48, show_default=True, help="Number of path samples.")
@click.option("--degree", type=int, default=asymptote.DEFAULT_DEGREE, show_default=True)
@click.option("--out", type=str, default=None, help="Output JSON path (stdout if omitted).")
@click.pass_context
@_guarded
def verify_asymptotics(ctx, map_spec, theorem, d, a, path_spec, tmin, tmax, nt, degree, out):
    """Extrapolate the normalized ratio along a path into the cusp and compare with 1."""
    kind, arg = map_spec
    if kind == "series":
        s = _load_series(arg)
        f = lambda z: logpow.f_eval(s, z)  # noqa: E731
    elif kind == "circular":
        p = slitmap.CircularArcParams(float(arg))
        f = lambda z: slitmap.chr_eval(p, z)  # noqa: E731
    else:
        f = _oracle_from_csv(arg)
    if tmin is None:
        tmin = 1e-8 if kind == "oracle" else 1e-16
    if not tmin < tmax or nt < degree + 2:
        raise _Fail(EXIT_INPUT, "need tmin < tmax and nt >= degree + 2")
    path = asymptote.ApproachPath.parse(path_spec, np.geomspace(tmax, tmin, nt))
    if theorem == "1":
        if d != 1.0:
            raise _Fail(EXIT_INPUT, "--d applies only to --theorem 2 or kaiser")
        est = asymptote.ratio_theorem1(f, a, path, degree)
    elif theorem == "2":
        est = asymptote.ratio_theorem2(asymptote.power_map(f, d), a, d, path, degree)
    else:
        est = asymptote.kaiser_ratio(f, a, d, path, degree)
    tol = (TOL_ORACLE if kind == "oracle" else TOL_SERIES) * ctx.obj["tol_scale"]
    doc = est.to_dict()
    doc["tolerance"] = tol
    doc["passed"] = bool(abs(est.extrapolated - 1) <= tol)
    _write(_dump(doc), out)
    if not doc["passed"]:
        sys.exit(EXIT_CHECK)


@main.command("oracle-compare")
@click.option("--alpha", type=float, required=True, callback=_positive)
@click.option("--vertices", type=int, default=oracle.DEFAULT_VERTICES, show_default=True)
@click.option("--out", type=str, default=None, help="Output JSON path (stdout if omitted).")
@click.pass_context
@_guarded
def oracle_compare(ctx, alpha, vertices, out):
    """Compare the geodesic-algorithm map with the explicit circular slit map."""
    if vertices < 2:
        raise _Fail(EXIT_INPUT, "need at least 2 vertices")
    err = oracle.compare_with_explicit(alpha, vertices)
    tol = TOL_ORACLE * ctx.obj["tol_scale"]
    doc = {"alpha": alpha, "vertices": vertices, "max_rel_error": err,
           "tolerance": tol, "passed": bool(err <= tol)}
    _write(_dump(doc), out)
    if not doc["passed"]:
        sys.exit(EXIT_CHECK)


if __name__ == "__main__":  # pragma: no cover
    main()
