"""Numerical extrinsic and intrinsic geometry of immersed surfaces.

Immersion derivatives and metric derivatives are central differences with one
Richardson level. Closed-form derivatives are used whenever a field carries
them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .ambient import ambient_christoffels, christoffels_from_metric, vertical_field
from .catalog import ImmersionSpec
from .errors import ConditioningError, DegeneracyError, DomainError, StencilError

DET_FLOOR = 1e-14
IMMERSION_STEP = 1e-3


@dataclass(frozen=True)
class FundamentalForms:
    I: np.ndarray
    II: np.ndarray
    N: np.ndarray
    point: tuple

    @property
    def shape_operator(self) -> np.ndarray:
        return np.linalg.solve(self.I, self.II)


def _steps(p, step, scale: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if step is None:
        return scale * (1.0 + np.abs(p))
    return np.broadcast_to(np.asarray(step, dtype=float), p.shape).copy()


def _richardson(d_h, d_half):
    return (4.0 * d_half - d_h) / 3.0


def _eval(fn, p):
    try:
        return np.asarray(fn(p), dtype=float)
    except DomainError as exc:
        raise StencilError(f"difference stencil at {tuple(p)} leaves the domain") from exc


def fd_gradient(fn: Callable, p, step=None, scale: float = 1e-3) -> np.ndarray:
    """Coordinate partials of fn (scalar- or array-valued), stacked on axis 0."""
    p = np.asarray(p, dtype=float)
    h = _steps(p, step, scale)
    out = []
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = h[i]

        def central(s, e=e):
            return (_eval(fn, p + s * e) - _eval(fn, p - s * e)) / (2 * s * h[i])

        out.append(_richardson(central(1.0), central(0.5)))
    return np.stack(out)


def fd_hessian(fn: Callable, p, step=None, scale: float = 1e-3) -> np.ndarray:
    """Second coordinate partials of fn, shape (n, n, *value_shape)."""
    p = np.asarray(p, dtype=float)
    n = p.size
    h = _steps(p, step, scale)
    f0 = _eval(fn, p)
    out = np.empty((n, n) + f0.shape)

    def second(i, j, s):
        ei = np.zeros(n)
        ej = np.zeros(n)
        ei[i] = s * h[i]
        ej[j] = s * h[j]
        if i == j:
            return (_eval(fn, p + ei) - 2 * f0 + _eval(fn, p - ei)) / (s * h[i]) ** 2
        return (_eval(fn, p + ei + ej) - _eval(fn, p + ei - ej)
                - _eval(fn, p - ei + ej) + _eval(fn, p - ei - ej)) / (4 * s * s * h[i] * h[j])

    for i in range(n):
        for j in range(i, n):
            out[i, j] = _richardson(second(i, j, 1.0), second(i, j, 0.5))
            out[j, i] = out[i, j]
    return out


# ---------------------------------------------------------------------------
# Extrinsic geometry
# ---------------------------------------------------------------------------

def immersion_jet(spec: ImmersionSpec, p, step=None):
    """(X, dX[i, a], ddX[i, j, a]) at the parameter point p."""
    p = np.asarray(p, dtype=float)
    X = _eval(spec.immersion, p)
    return X, fd_gradient(spec.immersion, p, step, IMMERSION_STEP), \
        fd_hessian(spec.immersion, p, step, IMMERSION_STEP)


def _pullback(g: np.ndarray, dX: np.ndarray) -> np.ndarray:
    I = dX @ g @ dX.T
    return 0.5 * (I + I.T)


def induced_metric(spec: ImmersionSpec, p, step=None, space=None) -> np.ndarray:
    space = spec.space if space is None else space
    p = np.asarray(p, dtype=float)
    X = _eval(spec.immersion, p)
    dX = fd_gradient(spec.immersion, p, step, IMMERSION_STEP)
    I = _pullback(space.g(X), dX)
    if np.linalg.matrix_rank(dX, tol=1e-10 * max(1.0, np.abs(dX).max())) < 2:
        raise DegeneracyError(f"immersion is singular at {tuple(p)}")
    return I


def _raw_normal(g: np.ndarray, dX: np.ndarray) -> np.ndarray:
    """g-unit normal from the metric volume-form cross product."""
    lower = np.cross(dX[0], dX[1])  # eps_{abc} X_u^b X_v^c up to sqrt(det g)
    N = np.linalg.solve(g, lower)
    norm2 = N @ g @ N
    if not norm2 > 0:
        raise DegeneracyError("tangent vectors are linearly dependent")
    return N / np.sqrt(norm2)


def _normal_data(spec, space, p, step):
    X, dX, ddX = immersion_jet(spec, p, step)
    if np.linalg.matrix_rank(dX, tol=1e-10 * max(1.0, np.abs(dX).max())) < 2:
        raise DegeneracyError(f"immersion is singular at {tuple(p)}")
    g = space.g(X)
    return X, dX, ddX, g, _raw_normal(g, dX)


def _second_form(space, X, dX, ddX, g, N):
    gam = ambient_christoffels(space, X)
    acc = ddX + np.einsum("kab,ia,jb->ijk", gam, dX, dX)
    II = np.einsum("ijk,kl,l->ij", acc, g, N)
    return 0.5 * (II + II.T)


@lru_cache(maxsize=256)
def orientation_sign(spec: ImmersionSpec) -> int:
    """+1 or -1 so that nu >= 0 at the family's reference point.

    Where nu vanishes there (vertical cylinders) the mean curvature is made
    nonnegative instead.
    """
    space = spec.space
    X, dX, ddX, g, N = _normal_data(spec, space, spec.reference_point, None)
    nu = float(vertical_field(space, X) @ g @ N)
    if abs(nu) > 1e-9:
        return 1 if nu > 0 else -1
    I = _pullback(g, dX)
    H = 0.5 * np.trace(np.linalg.solve(I, _second_form(space, X, dX, ddX, g, N)))
    return 1 if H >= 0 else -1


def second_form_and_curvatures(spec: ImmersionSpec, p, step=None, space=None):
    """(FundamentalForms, H_num, K_ext) with K_ext = det of the shape operator."""
    space = spec.space if space is None else space
    X, dX, ddX, g, N = _normal_data(spec, space, p, step)
    N = orientation_sign(spec) * N
    I = _pullback(g, dX)
    II = _second_form(space, X, dX, ddX, g, N)
    forms = FundamentalForms(I, II, N, tuple(float(v) for v in p))
    S = forms.shape_operator
    return forms, 0.5 * float(np.trace(S)), float(np.linalg.det(S))


def angle_height(spec: ImmersionSpec, p, step=None, space=None) -> tuple[float, float]:
    """(nu, h): the angle function g(xi, N) and the t-coordinate."""
    space = spec.space if space is None else space
    X, _, _, g, N = _normal_data(spec, space, p, step)
    N = orientation_sign(spec) * N
    return float(vertical_field(space, X) @ g @ N), float(X[2])


# ---------------------------------------------------------------------------
# Intrinsic geometry of a 2D metric field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricField:
    """A 2x2 metric on a coordinate domain.

    ``dg`` (optional) returns dg[k, i, j] = d_k g_ij. ``varies`` lists the
    coordinates the metric depends on; with exactly one entry the
    one-variable curvature formula is used.
    """

    g: Callable
    dg: Optional[Callable] = None
    varies: tuple = (0, 1)
    step: float = 1e-3

    def __call__(self, p) -> np.ndarray:
        return np.asarray(self.g(p), dtype=float)

    def derivatives(self, p) -> np.ndarray:
        if self.dg is not None:
            return np.asarray(self.dg(p), dtype=float)
        return fd_gradient(self.g, p, scale=self.step)

    def christoffels(self, p) -> np.ndarray:
        return christoffels_from_metric(self(p), self.derivatives(p))

    def without_derivatives(self) -> "MetricField":
        return replace(self, dg=None)


@dataclass(frozen=True)
class ScalarField:
    value: Callable
    grad: Optional[Callable] = None
    hess: Optional[Callable] = None
    step: float = 1e-3

    def __call__(self, p) -> float:
        return float(self.value(p))

    def gradient(self, p) -> np.ndarray:
        if self.grad is not None:
            return np.asarray(self.grad(p), dtype=float)
        return fd_gradient(self.value, p, scale=self.step)

    def hessian(self, p) -> np.ndarray:
        if self.hess is not None:
            return np.asarray(self.hess(p), dtype=float)
        return fd_hessian(self.value, p, scale=self.step)

    def without_derivatives(self) -> "ScalarField":
        return replace(self, grad=None, hess=None)


def constant_field(value: float) -> ScalarField:
    return ScalarField(lambda p: value, lambda p: np.zeros(2), lambda p: np.zeros((2, 2)))


def _inverse(g: np.ndarray) -> np.ndarray:
    det = float(np.linalg.det(g))
    if det < DET_FLOOR:
        raise ConditioningError(f"metric determinant {det:.3e} below {DET_FLOOR}")
    return np.linalg.inv(g)


def intrinsic_inner(metric: MetricField, f: ScalarField, k: ScalarField, p) -> float:
    return float(f.gradient(p) @ _inverse(metric(p)) @ k.gradient(p))


def intrinsic_gradient_sq(metric: MetricField, f: ScalarField, p) -> float:
    return intrinsic_inner(metric, f, f, p)


def intrinsic_laplacian(metric: MetricField, f: ScalarField, p) -> float:
    """g^ij (d_ij f - Gamma^k_ij d_k f)."""
    ginv = _inverse(metric(p))
    gam = metric.christoffels(p)
    hess = f.hessian(p) - np.einsum("kij,k->ij", gam, f.gradient(p))
    return float(np.sum(ginv * hess))


@dataclass(frozen=True)
class SurfaceData:
    """Intrinsic data (metric, nu, h) of a CMC surface together with H, K, c."""

    metric: MetricField
    nu: ScalarField
    h: ScalarField
    H: float
    K: float
    c: float

    def without_derivatives(self) -> "SurfaceData":
        return replace(self, metric=self.metric.without_derivatives(),
                       nu=self.nu.without_derivatives(), h=self.h.without_derivatives())


def _efg_jets(metric: MetricField, p, step):
    """Values, first and second partials of (E, F, G)."""
    def efg(q):
        g = metric(q)
        return np.array([g[0, 0], g[0, 1], g[1, 1]])

    v = efg(p)
    d = fd_gradient(efg, p, step, metric.step)
    dd = fd_hessian(efg, p, step, metric.step)
    return v, d, dd


def _one_variable_curvature(v, d, dd, axis: int) -> float:
    E, F, G = v
    det = E * G - F * F
    if axis == 0:
        # metric depends on u only: K = (1/2 det_u G_u - det G_uu) / (2 det^2)
        Eu, Fu, Gu = d[0]
        Guu = dd[0, 0, 2]
        det_u = Eu * G + E * Gu - 2 * F * Fu
        return (0.5 * det_u * Gu - det * Guu) / (2 * det * det)
    Ev, Fv, Gv = d[1]
    Evv = dd[1, 1, 0]
    egv = Ev * G + E * Gv
    return (Ev * egv - 2 * det * Evv - 2 * F * Ev * Fv) / (4 * det * det)


def brioschi(v, d, dd) -> float:
    E, F, G = v
    (Eu, Fu, Gu), (Ev, Fv, Gv) = d
    Evv = dd[1, 1, 0]
    Fuv = dd[0, 1, 1]
    Guu = dd[0, 0, 2]
    det = E * G - F * F
    m1 = np.array([
        [-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev],
        [Fv - 0.5 * Gu, E, F],
        [0.5 * Gv, F, G],
    ])
    m2 = np.array([
        [0.0, 0.5 * Ev, 0.5 * Gu],
        [0.5 * Ev, E, F],
        [0.5 * Gu, F, G],
    ])
    return float((np.linalg.det(m1) - np.linalg.det(m2)) / det**2)


def gauss_curvature(metric: MetricField, p, step=None, method: str = "auto") -> float:
    """Intrinsic curvature of the metric field at p.

    ``method`` is "auto" (one-variable formula when the field declares it,
    Brioschi otherwise), "brioschi" or "one-variable".
    """
    g = metric(p)
    det = float(np.linalg.det(g))
    if det < DET_FLOOR:
        raise ConditioningError(f"metric determinant {det:.3e} below {DET_FLOOR}")
    if len(metric.varies) == 0 and method == "auto":
        return 0.0
    v, d, dd = _efg_jets(metric, p, step)
    one_var = len(metric.varies) == 1
    if method == "one-variable" or (method == "auto" and one_var):
        if not one_var:
            raise ValueError("metric does not declare one-variable dependence")
        return float(_one_variable_curvature(v, d, dd, metric.varies[0]))
    return brioschi(v, d, dd)


def induced_metric_field(spec: ImmersionSpec, step: float = 2e-3) -> MetricField:
    """The numerically induced metric of ``spec`` as a field.

    The default differencing step is wider than for closed-form fields because
    the values themselves carry difference error.
    """
    return MetricField(lambda p: induced_metric(spec, p), varies=spec.metric_varies, step=step)


def closed_metric_field(spec: ImmersionSpec) -> MetricField:
    return MetricField(spec.metric_closed, varies=spec.metric_varies)
