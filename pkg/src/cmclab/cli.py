"""cmclab command line: generating curves, verification suites, Moebius and
pair classification, and the exact polynomial check."""

from __future__ import annotations

import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Optional

import click
import numpy as np

from . import compat, diffgeo, moebius as mb, pairs, polyverify
from .catalog import (ArlSurface, HelicoidH2R, ParabolicPsl2, ScrewMotionPsl2,
                      VerticalCylinder, screw_profile, screw_type)
from .errors import CmclabError, DomainError, ParameterError, ZeroQError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SURFACES = ("helicoid", "arl", "parabolic", "screw", "cylinder")

DEFAULT_TOLS = {
    "H": 1e-6, "K": 1e-6, "M": 1e-7, "M-fd": 1e-4, "K-const": 1e-7,
    "Bochner": 1e-7, "log-q": 1e-4, "nu^2": 1e-12, "q": 1e-9,
}

DEFAULT_RANGES = {
    "helicoid": ((-2.0, 2.0), (-2.0, 2.0)),
    "arl": ((-2.0, 2.0), (0.5, 2.0)),
    "parabolic": ((-2.0, 2.0), (0.1, 0.9)),
    "screw": ((0.5, 2.5), (-1.0, 1.0)),
    "cylinder": ((-2.0, 2.0), (-2.0, 2.0)),
}

LOG_Q_FLOOR = 1e-6


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def thread_count() -> int:
    raw = os.environ.get("CMCLAB_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def parallel_map(fn: Callable, items: list) -> list:
    """Map over items on a thread pool; results come back in input order."""
    n = min(thread_count(), len(items)) or 1
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise click.BadParameter(f"expected a:b, got {text!r}")
    if not lo < hi:
        raise click.BadParameter(f"empty range {text!r}")
    return lo, hi


def linspace_grid(ranges, counts) -> list:
    xs = np.linspace(ranges[0][0], ranges[0][1], counts[0])
    ys = np.linspace(ranges[1][0], ranges[1][1], counts[1])
    return [(float(x), float(y)) for x in xs for y in ys]


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a rational number: {text!r}")


def parse_element(text: str, orientation: Optional[str] = None) -> mb.MoebiusElement:
    """Named element (id, eta, xi, zeta, m(s)) or four rationals a,b,c,d.

    With orientation '-' the matrix acts by (a conj z + b)/(c conj z + d) and
    must have negative determinant.
    """
    t = text.strip().lower()
    named = {"id": mb.IDENTITY, "eta": mb.ETA, "xi": mb.XI, "zeta": mb.ZETA}
    if t in named:
        f = named[t]
    elif t.startswith("m(") and t.endswith(")"):
        f = mb.m(parse_fraction(t[2:-1]))
    else:
        parts = t.split(",")
        if len(parts) != 4:
            raise click.BadParameter(f"expected four entries a,b,c,d, got {text!r}")
        a, b, c, d = (parse_fraction(v) for v in parts)
        if a * d - b * c == 0:
            raise click.BadParameter("singular matrix")
        f = mb.MoebiusElement.from_matrix(a, b, c, d)
    if orientation is not None:
        want = 1 if orientation == "+" else -1
        if f.orientation != want:
            raise click.BadParameter(
                f"{text!r} is orientation {'+' if f.orientation > 0 else '-'}, "
                f"not {orientation}; a reversing matrix has negative determinant")
    return f


def parse_class(text: str) -> pairs.CmcClass:
    """family:matrix[:orientation], cyl:k or slice."""
    parts = text.strip().split(":")
    fam = parts[0].lower()
    if fam == "cyl":
        if len(parts) != 2:
            raise click.BadParameter(f"expected cyl:k, got {text!r}")
        return pairs.CmcClass.cylinder(parse_fraction(parts[1]))
    if fam == "slice":
        return pairs.CmcClass(pairs.SLICE)
    if fam not in (pairs.ARL, pairs.HEL) or len(parts) not in (2, 3):
        raise click.BadParameter(f"expected arl|hel:matrix:orientation, got {text!r}")
    orient = parts[2] if len(parts) == 3 else None
    if orient not in (None, "+", "-"):
        raise click.BadParameter(f"orientation must be + or -, got {orient!r}")
    return pairs.CmcClass(fam, parse_element(parts[1], orient))


@click.group()
def main():
    """Numerical and exact tools for CMC surfaces and PMC pairs."""


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

@main.command()
@click.option("--tau", type=float, required=True)
@click.option("--eps", type=click.Choice(["1", "-1"]), required=True)
@click.option("--H", "H", type=float, required=True)
@click.option("--range", "range_", default="-5:5", show_default=True)
@click.option("--samples", type=click.IntRange(min=2), default=400, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt_", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def curves(tau, eps, H, range_, samples, output, fmt_):
    """Sample the generating curve of a screw-motion surface."""
    lo, hi = parse_range(range_)
    eps = int(eps)
    try:
        tag = screw_type(H, tau, eps)
        sigmas = np.linspace(lo, hi, samples)
        rows = parallel_map(lambda s: (float(s),) + screw_profile(H, tau, eps, float(s))[:2], list(sigmas))
    except (CmclabError, ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(str(exc))
    if fmt_ == "csv":
        lines = ["sigma,f,u,type"] + [f"{fmt(s)},{fmt(f)},{fmt(u)},{tag}" for s, f, u in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([{"sigma": s, "f": f, "u": u, "type": tag} for s, f, u in rows], indent=1) + "\n"
    _emit(text, output)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _report(name: str, tol: float, values: list) -> dict:
    finite = [abs(v) for v in values]
    m = math.inf if any(math.isnan(v) for v in finite) else max(finite, default=0.0)
    return {"name": name, "max_abs": m, "tol": tol, "pass": bool(m < tol)}


def _immersion_checks(spec, H_target: float, K_target: float, points: list, tols: dict) -> list:
    metric = diffgeo.induced_metric_field(spec)

    def at(p):
        _, Hn, _ = diffgeo.second_form_and_curvatures(spec, p)
        return Hn - H_target, diffgeo.gauss_curvature(metric, p) - K_target

    out = parallel_map(at, points)
    return [_report("H", tols["H"], [o[0] for o in out]),
            _report("K", tols["K"], [o[1] for o in out])]


def _residual_checks(sd, points: list, tols: dict, fd_only: bool, q_zero: bool,
                     extremal_K: bool = True) -> list:
    """``extremal_K`` adds the identities that hold only when K = 4H^2 + c."""
    if fd_only:
        sd = sd.without_derivatives()
    m_tol = tols["M-fd"] if fd_only else tols["M"]
    ms = parallel_map(lambda p: compat.residual_M(sd, p), points)
    checks = [_report(k, m_tol, [m[k] for m in ms]) for k in ("M1", "M2", "M3", "M4")]
    if extremal_K:
        kc = parallel_map(lambda p: compat.residual_constant_K(sd, p), points)
        checks.append(_report("K-const", tols["K-const"], [v for d in kc for v in d.values()]))
    checks.append(_report("Bochner", tols["Bochner"],
                          parallel_map(lambda p: compat.residual_bochner(sd, p), points)))
    if q_zero:
        checks.append(_report("q", tols["q"], parallel_map(lambda p: compat.q_value(sd, p), points)))
    else:
        kept = [p for p in points if abs(compat.q_value(sd, p)) > LOG_Q_FLOOR]

        def logq(p):
            try:
                return compat.residual_log_q(sd, p)
            except ZeroQError:
                return 0.0

        checks.append(_report("log-q", tols["log-q"], parallel_map(logq, kept)))
    return checks


def run_verify(surface: str, H: float = 0.25, K: Optional[float] = None, tau: float = 0.5,
               eps: int = 1, k: float = 1.0, c: float = -1.0, counts=(10, 10), ranges=None,
               tols: Optional[dict] = None, fd_only: bool = False) -> dict:
    """Run the suite for one surface and return the JSON-ready report."""
    if surface not in SURFACES:
        raise ParameterError(f"unknown surface {surface!r}")
    if min(counts) < 2:
        raise ParameterError("grid counts must be at least 2")
    tol = dict(DEFAULT_TOLS)
    tol.update(tols or {})
    ranges = ranges or DEFAULT_RANGES[surface]
    points = linspace_grid(ranges, counts)
    checks = []
    desc: dict = {"name": surface}

    if surface == "helicoid":
        desc.update(H=H, K=4 * H * H - 1 if K is None else K)
        checks += _immersion_checks(HelicoidH2R(H), H, desc["K"], points, tol)
        checks += _residual_checks(compat.helicoid_surface_data(H, K), points, tol, fd_only, False)
    elif surface == "arl":
        if K is not None and K != 4 * H * H - 1:
            raise ParameterError("the ARL surface has K = 4H^2 - 1")
        spec = ArlSurface(H)
        desc.update(H=H, K=spec.K)
        if min(r[0] for r in ranges[1:]) <= 0:
            raise DomainError("the ARL coordinate needs y > 0")
        nus = [spec.nu_closed(p) ** 2 - (1 - 4 * H * H) for p in points]
        checks.append(_report("nu^2", tol["nu^2"], nus))
        checks += _residual_checks(compat.arl_surface_data(H), points, tol, fd_only, True)
    elif surface == "parabolic":
        spec = ParabolicPsl2(tau)
        desc.update(tau=tau, H=0.0, K=-1.0)
        checks += _immersion_checks(spec, 0.0, -1.0, points, tol)
    elif surface == "screw":
        spec = ScrewMotionPsl2(H, tau, eps)
        desc.update(H=H, tau=tau, eps=eps, K=spec.K, type=spec.type)
        checks += _immersion_checks(spec, H, spec.K, points, tol)
    else:
        spec = VerticalCylinder(c, k)
        desc.update(c=c, k=k, H=spec.H, K=0.0)
        checks += _immersion_checks(spec, spec.H, 0.0, points, tol)
        checks += _residual_checks(compat.cylinder_surface_data(c, k), points, tol, fd_only, False,
                                   extremal_K=False)
    return {"surface": desc, "checks": checks, "pass": all(ch["pass"] for ch in checks)}


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(cfg, dict):
        raise click.UsageError("config must be a JSON object")
    return cfg


@main.command()
@click.option("--surface", type=click.Choice(SURFACES), default=None)
@click.option("--H", "H", type=float, default=0.25, show_default=True)
@click.option("--K", "K", type=float, default=None, help="Override K (helicoid only).")
@click.option("--tau", type=float, default=0.5, show_default=True)
@click.option("--eps", type=click.Choice(["1", "-1"]), default="1", show_default=True)
@click.option("--k", "k", type=float, default=1.0, show_default=True)
@click.option("--c", "c", type=float, default=-1.0, show_default=True)
@click.option("--grid", default="10,10", show_default=True, help="Counts per axis, n or n1,n2.")
@click.option("--range1", default=None, help="a:b for the first coordinate.")
@click.option("--range2", default=None, help="a:b for the second coordinate.")
@click.option("--tol", "tol_items", multiple=True, help="NAME=VALUE tolerance override.")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.option("--fd-only", is_flag=True, help="Differentiate the closed forms numerically.")
@click.pass_context
def verify(ctx, surface, H, K, tau, eps, k, c, grid, range1, range2, tol_items, config_path,
           output, fd_only):
    """Run the verification suite for a catalog surface; writes a JSON report."""
    cfg = _load_config(config_path)
    given = {name for name in ctx.params
             if ctx.get_parameter_source(name) == click.core.ParameterSource.COMMANDLINE}

    def pick(name, value):
        return value if name in given or name not in cfg else cfg[name]

    surface = pick("surface", surface)
    if surface is None:
        raise click.UsageError("--surface is required (flag or config)")
    try:
        counts = [int(v) for v in str(pick("grid", grid)).split(",")]
        counts = counts * 2 if len(counts) == 1 else counts
        if len(counts) != 2 or min(counts) < 2:
            raise ValueError
    except ValueError:
        raise click.UsageError("grid must be n or n1,n2 with counts >= 2")
    r1, r2 = pick("range1", range1), pick("range2", range2)
    dflt = DEFAULT_RANGES.get(surface, ((0, 1), (0, 1)))
    ranges = (parse_range(r1) if r1 else dflt[0], parse_range(r2) if r2 else dflt[1])
    tols = dict(cfg.get("tol", {}))
    for item in tol_items:
        name, _, val = item.partition("=")
        try:
            tols[name] = float(val)
        except ValueError:
            raise click.UsageError(f"bad tolerance {item!r}")
    try:
        report = run_verify(surface, H=float(pick("H", H)), K=pick("K", K), tau=float(pick("tau", tau)),
                            eps=int(pick("eps", eps)), k=float(pick("k", k)), c=float(pick("c", c)),
                            counts=tuple(counts), ranges=ranges, tols=tols,
                            fd_only=bool(pick("fd_only", fd_only)))
    except (CmclabError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_USAGE)
    _emit(json.dumps(report, indent=2) + "\n", pick("output", output))
    ctx.exit(EXIT_PASS if report["pass"] else EXIT_FAIL)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@main.command("classify-moebius")
@click.option("--matrix", required=True, help="a,b,c,d (rationals p/q) or id, eta, xi, zeta, m(s).")
@click.option("--orientation", type=click.Choice(["+", "-"]), default=None)
def classify_moebius(matrix, orientation):
    """Classes of an isometry of the half-plane under ~ and under the G_Y double cosets."""
    f = parse_element(matrix, orientation)
    cls = mb.class_xy(f)
    rep = mb.canonical_yy(f)
    r = mb.rho(f)
    click.echo(f"element: {f}")
    click.echo(f"rho: {'inf' if r == mb.INFINITY else r}")
    click.echo(f"class_xy: {cls}")
    click.echo(f"canonical_yy: {rep}")
    click.echo(f"stabilizer A: {mb.stabilizer_A(cls)}")
    click.echo(f"stabilizer B: {mb.stabilizer_B(rep)}")


@main.command("classify-pair")
@click.option("--first", required=True, help="family:matrix:orientation, cyl:k or slice.")
@click.option("--second", required=True)
@click.option("--c", "c", type=click.Choice(["-1", "1"]), default="-1", show_default=True)
@click.pass_context
def classify_pair(ctx, first, second, c):
    """Bucket of the PMC surface built from two CMC classes."""
    a, b = parse_class(first), parse_class(second)
    try:
        bucket = pairs.classify_pair(int(c), a, b)
    except CmclabError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_USAGE)
    click.echo(f"bucket: {bucket.label}")
    stab = bucket.stabilizer()
    if stab is not None:
        click.echo(f"stabilizer: {stab}")
    if bucket.H is not None:
        click.echo(f"H: {fmt(bucket.H)}")


@main.command()
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@click.pass_context
def polycheck(ctx, as_json):
    """Exact check of the leading coefficients of the degree argument."""
    rep = polyverify.verify_lemma(strict=False)
    if as_json:
        click.echo(json.dumps(rep.to_json(), indent=2))
    else:
        click.echo(polyverify.format_report(rep))
    ctx.exit(EXIT_PASS if rep.passed else EXIT_FAIL)


if __name__ == "__main__":
    sys.exit(main())
