import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmclab import compat
from cmclab.catalog import HelicoidH2R, VerticalCylinder
from cmclab.errors import ZeroQError

HEL = compat.helicoid_surface_data(0.25)
ARL = compat.arl_surface_data(0.25)
PTS = [(-1.5, 0.3), (0.0, 0.0), (0.8, -1.1), (1.9, 1.9)]
ARL_PTS = [(-1.0, 0.6), (0.0, 1.0), (1.5, 1.8)]


@pytest.mark.parametrize("sd, pts", [(HEL, PTS), (ARL, ARL_PTS),
                                     (compat.cylinder_surface_data(-1.0, 0.5), PTS),
                                     (compat.cylinder_surface_data(1.0, 2.0), PTS)])
def test_M_system_closed_and_fd(sd, pts):
    for p in pts:
        assert max(abs(v) for v in compat.residual_M(sd, p).values()) < 1e-12
        assert max(abs(v) for v in compat.residual_M(sd.without_derivatives(), p).values()) < 1e-6


def test_wrong_H_fails_M1():
    bad = compat.helicoid_surface_data(0.3, K=-0.75)
    rep = compat.run_residuals("M", 1e-7, lambda p: compat.residual_M(bad, p), PTS)
    assert not rep.passed
    m1 = max(abs(v) for _, eq, v in rep.residuals if eq == "M1")
    assert m1 > 1e-3


def test_q_values():
    assert compat.q_value(HEL, (0.0, 0.0)) == pytest.approx(9 / 64, abs=1e-14)
    assert compat.q_value(ARL, (0.2, 1.3)) == pytest.approx(0.0, abs=1e-14)
    # on a cylinder q = (2H^2 + c/2)^2
    cyl = compat.cylinder_surface_data(-1.0, 0.5)
    assert compat.q_value(cyl, (0.1, 0.2)) == pytest.approx((2 * 0.25**2 - 0.5) ** 2)


def test_log_q_zero_raises():
    with pytest.raises(ZeroQError):
        compat.residual_log_q(ARL, (0.0, 1.0))


def test_log_q_helicoid():
    for p in PTS:
        q = compat.q_value(HEL, p)
        assert abs(compat.residual_log_q(HEL, p)) / q**2 < 1e-5


def test_constant_K_identities():
    for sd, pts in ((HEL, PTS), (ARL, ARL_PTS)):
        for p in pts:
            assert max(abs(v) for v in compat.residual_constant_K(sd, p).values()) < 1e-12


def test_bochner_detects_wrong_K():
    bad = compat.helicoid_surface_data(0.3, K=-0.75)
    assert max(abs(compat.residual_bochner(bad, p)) for p in PTS) > 1e-3


def test_gauss_codazzi_from_immersion():
    for spec in (HelicoidH2R(0.25), VerticalCylinder(-1.0, 0.5)):
        gc = compat.gauss_codazzi_from_immersion(spec, (0.4, 0.2))
        res = compat.residual_C(gc)
        assert max(abs(v) for v in res.values()) < 1e-6


def test_sister_theta_minimal_case():
    # i Hbar = e^{i theta} tau with H = 0 gives theta = pi/2
    assert compat.sister_params(0.0, 0.5).theta == pytest.approx(math.pi / 2)


def test_sister_invariant_exact():
    rng = random.Random(3)
    for _ in range(200):
        H, tau, k = (Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(3))
        sp = compat.sister_params(H, tau)
        assert isinstance(sp.Hbar_sq, Fraction)
        assert compat.sister_invariant_holds(H, tau, k)


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.01, 2), st.floats(-2, 2))
def test_sister_rotation_preserves_traceless_norm(a, b, d, H, tau):
    S = np.array([[a, b], [b, d]])
    H = 0.5 * (a + d)
    sp = compat.sister_params(H, tau)
    Sb, Tb = compat.sister_rotate(S, np.array([1.0, 0.0]), sp.theta, H, sp.Hbar)
    assert np.trace(Sb) == pytest.approx(2 * sp.Hbar, abs=1e-12)
    A, Ab = S - H * np.eye(2), Sb - sp.Hbar * np.eye(2)
    assert np.linalg.norm(Ab) == pytest.approx(np.linalg.norm(A), abs=1e-12)
    assert np.linalg.norm(Tb) == pytest.approx(1.0)


def test_metric_rotation_squares_to_minus_one():
    g = np.array([[2.0, 0.3], [0.3, 1.5]])
    J = compat.metric_rotation(g)
    assert np.allclose(J @ J, -np.eye(2))


def test_report_nan_is_failure():
    rep = compat.ResidualReport("x", 1.0)
    rep.add((0.0, 0.0), "x", float("nan"))
    assert rep.max_abs == math.inf and not rep.passed
    assert rep.summary()["pass"] is False
