import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cmclab import catalog as cat
from cmclab.diffgeo import (MetricField, ScalarField, fd_gradient, fd_hessian, gauss_curvature,
                            induced_metric, induced_metric_field, intrinsic_gradient_sq,
                            intrinsic_laplacian, second_form_and_curvatures, orientation_sign,
                            angle_height)
from cmclab.errors import ConditioningError, DegeneracyError, StencilError, DomainError

u, v = sp.symbols("u v", real=True)


def sympy_gauss(E, F, G):
    """Curvature from the Christoffel symbols, independently of Brioschi."""
    g = sp.Matrix([[E, F], [F, G]])
    gi = g.inv()
    X = (u, v)
    Gam = [[[sum(gi[k, l] * (sp.diff(g[l, i], X[j]) + sp.diff(g[l, j], X[i]) - sp.diff(g[i, j], X[l]))
                 for l in range(2)) / 2 for j in range(2)] for i in range(2)] for k in range(2)]
    # R^e_{101} = d_0 Gam^e_11 - d_1 Gam^e_01 + Gam^e_0f Gam^f_11 - Gam^e_1f Gam^f_01
    R = [sp.diff(Gam[e][1][1], u) - sp.diff(Gam[e][0][1], v)
         + sum(Gam[e][0][f] * Gam[f][1][1] - Gam[e][1][f] * Gam[f][0][1] for f in range(2))
         for e in range(2)]
    K = sum(g[0, e] * R[e] for e in range(2)) / g.det()
    return sp.lambdify((u, v), sp.simplify(K), "math")


def metric_field_from(E, F, G, varies=(0, 1)):
    f = sp.lambdify((u, v), sp.Matrix([[E, F], [F, G]]), "numpy")
    return MetricField(lambda p: np.array(f(p[0], p[1]), dtype=float), varies=varies)


CASES = [
    (sp.Integer(1), sp.Integer(0), sp.cosh(u) ** 2, (0,)),  # hyperbolic plane, K = -1
    (sp.Integer(1), sp.Integer(0), sp.sin(u) ** 2, (0,)),  # round sphere, K = 1
    (1 / v**2, sp.Integer(0), 1 / v**2, (1,)),  # half-plane
    (1 + u**2, u * v / 3, 2 + v**2, (0, 1)),  # generic
    (sp.exp(u + v / 2), sp.Integer(0), sp.exp(u + v / 2), (0, 1)),  # flat conformal
    (2 + sp.sin(v), sp.Rational(1, 5) * sp.cos(v), 1 + v**2, (1,)),  # one variable with F
]


@pytest.mark.parametrize("E, F, G, varies", CASES)
def test_gauss_curvature_matches_sympy(E, F, G, varies):
    want = sympy_gauss(E, F, G)
    mf = metric_field_from(E, F, G, varies)
    for p in [(0.7, 0.4), (1.1, 1.3)]:
        k = want(*p)
        assert gauss_curvature(mf, p, method="brioschi") == pytest.approx(k, abs=1e-7)
        assert gauss_curvature(mf, p) == pytest.approx(k, abs=1e-7)
        if len(varies) == 1:
            assert gauss_curvature(mf, p, method="one-variable") == pytest.approx(k, abs=1e-7)


def test_one_variable_requires_declaration():
    mf = metric_field_from(*CASES[3][:3])
    with pytest.raises(ValueError):
        gauss_curvature(mf, (0.5, 0.5), method="one-variable")


def test_degenerate_metric():
    mf = MetricField(lambda p: np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(ConditioningError):
        gauss_curvature(mf, (0.0, 0.0))


@settings(max_examples=40, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_fd_derivatives_of_cubic(a, b):
    f = lambda p: p[0] ** 3 - 2 * p[0] * p[1] ** 2 + 0.5 * p[1]
    g = fd_gradient(f, (a, b))
    assert g[0] == pytest.approx(3 * a * a - 2 * b * b, abs=1e-9)
    assert g[1] == pytest.approx(-4 * a * b + 0.5, abs=1e-9)
    hs = fd_hessian(f, (a, b))
    assert np.allclose(hs, [[6 * a, -4 * b], [-4 * b, -4 * a]], atol=1e-6)


def test_stencil_error_wraps_domain_error():
    def f(p):
        if p[1] <= 0:
            raise DomainError("y <= 0")
        return math.log(p[1])

    with pytest.raises(StencilError):
        fd_gradient(f, (0.0, 1e-4), step=1e-3)


def test_hyperbolic_laplacian():
    # On the half-plane, Delta y^s = s(s-1) y^s
    mf = MetricField(lambda p: np.eye(2) / p[1] ** 2, varies=(1,))
    s = 2.5
    f = ScalarField(lambda p: p[1] ** s)
    p = (0.3, 1.7)
    assert intrinsic_laplacian(mf, f, p) == pytest.approx(s * (s - 1) * p[1] ** s, rel=1e-7)
    assert intrinsic_gradient_sq(mf, f, p) == pytest.approx((s * p[1] ** s) ** 2, rel=1e-8)


def test_helicoid_extrinsic_curvature():
    spec = cat.HelicoidH2R(0.25)
    forms, H, Kext = second_form_and_curvatures(spec, (0.4, -0.3))
    assert H == pytest.approx(0.25, abs=1e-7)
    S = forms.shape_operator
    assert np.trace(S) / 2 == pytest.approx(H)
    # Gauss equation in H2 x R: K = Kext - nu^2 (with c = -1)
    nu, _ = angle_height(spec, (0.4, -0.3))
    K = gauss_curvature(induced_metric_field(spec), (0.4, -0.3))
    assert K == pytest.approx(Kext - nu * nu, abs=1e-6)


def test_orientation_convention():
    assert orientation_sign(cat.HelicoidH2R(0.25)) in (1, -1)
    nu, _ = angle_height(cat.HelicoidH2R(0.25), cat.HelicoidH2R.reference_point)
    assert nu >= 0


def test_singular_immersion_detected():
    class Flat(cat.HelicoidH2R):
        def immersion(self, p):
            return np.array([0.1 * p[0], 0.0, 0.0])

    with pytest.raises(DegeneracyError):
        induced_metric(Flat(0.25), (0.1, 0.1))
