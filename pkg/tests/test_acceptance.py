"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the summary alone.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from cmclab import compat, diffgeo, moebius as mb, pairs, polyverify
from cmclab.catalog import ArlSurface, HelicoidH2R, ParabolicPsl2, ScrewMotionPsl2
from cmclab.errors import UnreachableBucket

from helpers import rand_D, rand_element, rand_fraction, rand_GX, rand_GY, rand_pair

H0 = 0.25
K0 = 4 * H0 * H0 - 1


def grid(xr, yr, n=10):
    return [(float(x), float(y)) for x in np.linspace(*xr, n) for y in np.linspace(*yr, n)]


HEL_GRID = grid((-2, 2), (-2, 2))
ARL_GRID = grid((-2, 2), (0.5, 2))


@pytest.fixture
def verdict(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {title}  {detail}")
        assert ok, f"criterion {n} failed: {detail}"
    return emit


def test_c01_exact_m6_coefficients(verdict):
    t0 = time.perf_counter()
    rep = polyverify.verify_lemma(strict=False)
    elapsed = time.perf_counter() - t0
    names = {n: ok for n, _, _, ok in rep.checks}
    want = ["p4", "p6", "r0", "r2", "(r|grad nu|^2)4", "(r|grad nu|^2)6",
            "(M6)20", "(M6)18", "(M6)18 at K = 4H^2 + c"]
    ok = rep.passed and all(names.get(w) for w in want) and elapsed < 1.0
    verdict(1, "exact (M6) leading coefficients", ok, f"{elapsed:.2f}s")


def test_c02_helicoid_curvatures(verdict):
    t0 = time.perf_counter()
    spec = HelicoidH2R(H0)
    metric = diffgeo.induced_metric_field(spec)
    dH = max(abs(abs(diffgeo.second_form_and_curvatures(spec, p)[1]) - H0) for p in HEL_GRID)
    dK = max(abs(diffgeo.gauss_curvature(metric, p) - K0) for p in HEL_GRID)
    elapsed = time.perf_counter() - t0
    verdict(2, "helicoid H and K on 10x10 grid", dH < 1e-6 and dK < 1e-6 and elapsed < 5,
            f"|dH|={dH:.1e} |dK|={dK:.1e} {elapsed:.2f}s")


def _max_M(sd, points):
    return max(abs(v) for p in points for v in compat.residual_M(sd, p).values())


def test_c03_M_residuals(verdict):
    hel, arl = compat.helicoid_surface_data(H0), compat.arl_surface_data(H0)
    closed = max(_max_M(hel, HEL_GRID), _max_M(arl, ARL_GRID))
    fd = max(_max_M(hel.without_derivatives(), HEL_GRID), _max_M(arl.without_derivatives(), ARL_GRID))
    verdict(3, "(M1)-(M4) on helicoid and ARL", closed < 1e-7 and fd < 1e-4,
            f"closed={closed:.1e} fd={fd:.1e}")


def test_c04_arl_angle_and_q(verdict):
    spec, sd = ArlSurface(H0), compat.arl_surface_data(H0)
    nu_err = max(abs(spec.nu_closed(p) ** 2 - 0.75) for p in ARL_GRID)
    q_max = max(abs(compat.q_value(sd, p)) for p in ARL_GRID)
    verdict(4, "ARL nu^2 = 3/4 and q = 0", nu_err < 1e-12 and q_max < 1e-9,
            f"nu2={nu_err:.1e} q={q_max:.1e}")


def test_c05_parabolic(verdict):
    spec = ParabolicPsl2(0.5)
    metric = diffgeo.induced_metric_field(spec)
    pts = grid((-1, 1), (0.1, 0.9))
    dH = max(abs(diffgeo.second_form_and_curvatures(spec, p)[1]) for p in pts)
    dK = max(abs(diffgeo.gauss_curvature(metric, p) + 1) for p in pts)
    verdict(5, "parabolic PSL2 surface minimal with K = -1", dH < 1e-6 and dK < 1e-6,
            f"|H|={dH:.1e} |dK|={dK:.1e}")


SCREW_CASES = [(1, 0.25, "I"), (-1, 0.25, "II"), (-1, math.sqrt(math.sqrt(2) - 1) / 2, "III")]


def test_c06_screw_twins(verdict):
    pts = grid((0.5, 2.5), (-1, 1))
    worst, tags = 0.0, []
    for eps, H, tag in SCREW_CASES:
        spec = ScrewMotionPsl2(H, 0.5, eps)
        metric = diffgeo.induced_metric_field(spec)
        dH = max(abs(diffgeo.second_form_and_curvatures(spec, p)[1] - H) for p in pts)
        dK = max(abs(diffgeo.gauss_curvature(metric, p) - (4 * H * H - 1)) for p in pts)
        worst = max(worst, dH, dK)
        tags.append(spec.type == tag)
    verdict(6, "screw-motion twins H, K and type tags", worst < 1e-6 and all(tags),
            f"max={worst:.1e} tags={tags}")


def test_c07_log_q(verdict):
    sd = compat.helicoid_surface_data(H0)
    worst, used = 0.0, 0
    for p in HEL_GRID:
        q = compat.q_value(sd, p)
        if abs(q) <= 1e-6:
            continue
        used += 1
        # residual_log_q returns q^2 (4K - Delta log q)
        worst = max(worst, abs(compat.residual_log_q(sd, p)) / (q * q))
    verdict(7, "Delta log q = 4K on the helicoid", worst < 1e-4 and used > 0,
            f"max={worst:.1e} on {used} points")


def test_c08_bochner(verdict):
    cases = [(compat.helicoid_surface_data(H0), HEL_GRID), (compat.arl_surface_data(H0), ARL_GRID),
             (compat.cylinder_surface_data(-1.0, 0.5), HEL_GRID),
             (compat.cylinder_surface_data(1.0, 0.7), HEL_GRID),
             (compat.slice_surface_data(-1.0), grid((-0.6, 0.6), (-0.6, 0.6))),
             (compat.slice_surface_data(1.0), HEL_GRID)]
    worst = max(abs(compat.residual_bochner(sd, p)) for sd, pts in cases for p in pts)
    verdict(8, "Bochner identity with grad K = 0", worst < 1e-7, f"max={worst:.1e}")


def test_c09_sister(verdict):
    rng = random.Random(9)
    exact = all(compat.sister_invariant_holds(rand_fraction(rng), rand_fraction(rng), rand_fraction(rng))
                for _ in range(1000))
    nrng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(1000):
        A = nrng.normal(size=(2, 2))
        S = A + A.T
        H = 0.5 * np.trace(S)
        tau = nrng.normal()
        sp = compat.sister_params(H, tau)
        Sb, _ = compat.sister_rotate(S, nrng.normal(size=2), sp.theta, H, sp.Hbar)
        worst = max(worst, abs(np.trace(Sb) - 2 * sp.Hbar))
    verdict(9, "sister map invariants", exact and worst < 1e-12, f"exact={exact} trace={worst:.1e}")


def _rho_inv(r):
    if r == mb.INFINITY:
        return Fraction(0)
    return mb.INFINITY if r == 0 else 1 / r


def test_c10_moebius_properties(verdict):
    rng = random.Random(10)
    yy = True
    for _ in range(1000):
        f = rand_element(rng)
        g = mb.compose(mb.compose(rand_GY(rng), f), rand_GY(rng))
        yy &= mb.canonical_yy(g) == mb.canonical_yy(f)
    pairing = True
    for _ in range(1000):
        s = rand_fraction(rng, num=20)
        if s == Fraction(1, 2):
            continue
        same = mb.canonical_yy(mb.m(s)) == mb.canonical_yy(mb.m(1 - s))
        pairing &= same == (not 0 <= s <= 1)
    rho_ok = True
    for _ in range(1000):
        f = rand_element(rng, orientation=1)
        if mb.in_GY(f):
            continue
        d = rand_D(rng)
        rho_ok &= mb.rho(mb.compose(d, f)) == mb.rho(f) == mb.rho(mb.compose(f, d))
        rho_ok &= mb.rho(mb.compose(mb.compose(d, mb.XI), f)) == _rho_inv(mb.rho(f))
    xy = True
    for _ in range(1000):
        f = rand_element(rng)
        xy &= mb.class_xy(mb.compose(mb.compose(rand_GX(rng), f), rand_GY(rng))) == mb.class_xy(f)
    verdict(10, "Moebius double-coset properties", yy and pairing and rho_ok and xy,
            f"yy={yy} m_s={pairing} rho={rho_ok} xy={xy}")


EXPECTED_BUCKETS = {pairs.PRODUCT_OF_CURVES, pairs.SLICE_ARL, pairs.SLICE_HEL, pairs.TORRALBO_URBANO,
                    pairs.A_ID, pairs.A_ZETA, pairs.B_ETA, pairs.B_M, pairs.B_ETAM}


def _stabilizers_ok() -> bool:
    rng = random.Random(11)
    table = [(pairs.A_ID, None, "FullD"), (pairs.A_ZETA, None, "Trivial"),
             (pairs.B_ETA, None, "FullGY"), (pairs.B_M, Fraction(2), "Trivial"),
             (pairs.B_M, Fraction(0), "Trivial"), (pairs.B_ETAM, Fraction(3), "Trivial")]
    ok = all(pairs.PmcBucket(t, s).stabilizer().kind == k for t, s, k in table)
    for _ in range(200):
        s = Fraction(rng.randint(1, 99), 100)
        for tag in (pairs.B_M, pairs.B_ETAM):
            st = pairs.PmcBucket(tag, s).stabilizer()
            ok &= st.kind == "OrderTwo" and st.mu_sq == (1 - s) / s
        ok &= mb.verify_order_two(s)
    return ok


def test_c11_pair_classifier(verdict):
    rng = random.Random(11)
    seen, unreachable = set(), 0
    for _ in range(10_000):
        first, second = rand_pair(rng)
        try:
            seen.add(pairs.classify_pair(-1, first, second).tag)
        except UnreachableBucket:
            unreachable += 1
    H = pairs.classify_pair(1, pairs.CmcClass.cylinder(1), pairs.CmcClass.cylinder(1)).H
    ok = seen == EXPECTED_BUCKETS and abs(H - math.sqrt(2) / 2) < 1e-15 and _stabilizers_ok()
    verdict(11, "PMC pair classifier", ok,
            f"buckets={len(seen)}/{len(EXPECTED_BUCKETS)} unreachable={unreachable} H={H:.15f}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
