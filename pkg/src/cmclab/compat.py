"""Residuals of the compatibility equations for CMC surfaces in M^2_c x R.

Each ``residual_*`` function returns LHS - RHS of the identities, so a
correct surface gives values at round-off or truncation level. The surface
builders at the bottom package the catalog's closed forms as ``SurfaceData``
with exact first and second derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .diffgeo import (
    MetricField,
    ScalarField,
    SurfaceData,
    angle_height,
    constant_field,
    fd_gradient,
    gauss_curvature,
    induced_metric_field,
    intrinsic_gradient_sq,
    intrinsic_inner,
    intrinsic_laplacian,
    second_form_and_curvatures,
)
from .catalog import ImmersionSpec, _check_h_range
from .errors import ZeroQError

ZERO_Q = 1e-10
Q_STEP = 1e-2


@dataclass
class ResidualReport:
    name: str
    tol: float
    residuals: list = field(default_factory=list)

    def add(self, point, eq_id: str, value: float) -> None:
        self.residuals.append((tuple(float(v) for v in point), eq_id, float(value)))

    def extend(self, point, values: dict) -> None:
        for eq_id, value in values.items():
            self.add(point, eq_id, value)

    @property
    def max_abs(self) -> float:
        vals = [abs(v) for _, _, v in self.residuals]
        if any(math.isnan(v) for v in vals):
            return math.inf
        return max(vals, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_abs < self.tol

    def summary(self) -> dict:
        return {"name": self.name, "max_abs": self.max_abs, "tol": self.tol, "pass": self.passed}


# ---------------------------------------------------------------------------
# Algebraic Gauss-Codazzi data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussCodazziPoint:
    """Pointwise data in coordinates: S is the shape operator matrix S^i_j
    (self-adjoint for ``metric``), T and grad_nu are tangent vectors."""

    S: np.ndarray
    T: np.ndarray
    nu: float
    metric: np.ndarray
    K: float
    c: float
    grad_nu: np.ndarray


def residual_C(gc: GaussCodazziPoint) -> dict:
    """Residuals of K = det S + c nu^2, grad nu + S T = 0 and |T|^2 + nu^2 = 1."""
    g = np.asarray(gc.metric, dtype=float)
    S = np.asarray(gc.S, dtype=float)
    T = np.asarray(gc.T, dtype=float)
    v = np.asarray(gc.grad_nu, dtype=float) + S @ T
    return {
        "C1": gc.K - np.linalg.det(S) - gc.c * gc.nu**2,
        "C4": math.sqrt(max(float(v @ g @ v), 0.0)),
        "C5": float(T @ g @ T) + gc.nu**2 - 1.0,
    }


def gauss_codazzi_from_immersion(spec: ImmersionSpec, p) -> GaussCodazziPoint:
    """Numerical (S, T, nu, grad nu) of an explicit immersion in a product space."""
    forms, _, _ = second_form_and_curvatures(spec, p)
    nu, _ = angle_height(spec, p)
    I = forms.I
    # T is the tangential part of d/dt: I T = (dX^T g xi)_i, and dX^T g xi = dh
    dh = fd_gradient(lambda q: spec.immersion(q)[2], p)
    T = np.linalg.solve(I, dh)
    dnu = fd_gradient(lambda q: angle_height(spec, q)[0], p)
    K = gauss_curvature(induced_metric_field(spec), p)
    return GaussCodazziPoint(forms.shape_operator, T, nu, I, K, spec.c, np.linalg.solve(I, dnu))


# ---------------------------------------------------------------------------
# Angle and height system
# ---------------------------------------------------------------------------

def residual_M(sd: SurfaceData, p) -> dict:
    g = sd.metric
    nu = sd.nu(p)
    H, K, c = sd.H, sd.K, sd.c
    grad_phi = ScalarField(lambda q: sd.nu(q) + H * sd.h(q),
                           lambda q: sd.nu.gradient(q) + H * sd.h.gradient(q))
    return {
        "M1": intrinsic_gradient_sq(g, grad_phi, p) - (H * H - K + c * nu * nu) * (1 - nu * nu),
        "M2": intrinsic_laplacian(g, sd.nu, p) - (2 * K - c * (1 + nu * nu) - 4 * H * H) * nu,
        "M3": intrinsic_gradient_sq(g, sd.h, p) - (1 - nu * nu),
        "M4": intrinsic_laplacian(g, sd.h, p) - 2 * H * nu,
    }


def q_value(sd: SurfaceData, p) -> float:
    nu = sd.nu(p)
    H, K, c = sd.H, sd.K, sd.c
    w = 1 - nu * nu
    return (2 * H * c * intrinsic_inner(sd.metric, sd.nu, sd.h, p)
            + 4 * H * H * (H * H - K + c * nu * nu)
            + 2 * H * H * c * w + c * c / 4 * w * w)


def q_field(sd: SurfaceData, step: float = Q_STEP) -> ScalarField:
    return ScalarField(lambda p: q_value(sd, p), step=step)


def residual_log_q(sd: SurfaceData, p, step: float = Q_STEP) -> float:
    """4K q^2 - (q Delta q - |grad q|^2), the polynomial form of Delta log q = 4K."""
    q = q_field(sd, step)
    q0 = q(p)
    if abs(q0) < ZERO_Q:
        raise ZeroQError(f"q = {q0:.3e} vanishes at {tuple(p)}")
    return 4 * sd.K * q0 * q0 - (q0 * intrinsic_laplacian(sd.metric, q, p)
                                 - intrinsic_gradient_sq(sd.metric, q, p))


def residual_bochner(sd: SurfaceData, p, grad_K=(0.0, 0.0), delta_K: float = 0.0) -> float:
    """Residual of the first-order identity satisfied by K on a CMC surface.

    ``grad_K`` holds the coordinate partials of K.
    """
    g = sd.metric(p)
    ginv = np.linalg.inv(g)
    dK = np.asarray(grad_K, dtype=float)
    dnu = sd.nu.gradient(p)
    dh = sd.h.gradient(p)
    nu = sd.nu(p)
    H, K, c = sd.H, sd.K, sd.c
    a = H * H - K + c * nu * nu
    return (a * delta_K + dK @ ginv @ dK
            - 6 * c * nu * (dK @ ginv @ dnu)
            - 2 * H * c * nu * (dK @ ginv @ dh)
            + 6 * H * c * (H * H - K - c * nu * nu) * (dnu @ ginv @ dh)
            + 4 * H * H * c * nu * nu * (H * H - K - 2 * c + 3 * c * nu * nu)
            - 4 * a * (K - c - H * H) * (K + 2 * c * nu * nu))


def residual_constant_K(sd: SurfaceData, p) -> dict:
    """Residuals of the first- and second-order identities forced by K = 4H^2 + c."""
    nu = sd.nu(p)
    H, c = sd.H, sd.c
    b = 4 * H * H + c - c * nu * nu
    return {
        "gradnu.gradh": c * intrinsic_inner(sd.metric, sd.nu, sd.h, p) - 2 * H * b,
        "|gradnu|^2": intrinsic_gradient_sq(sd.metric, sd.nu, p) + b * b / c,
        "laplacian nu": intrinsic_laplacian(sd.metric, sd.nu, p) - b * nu,
    }


def run_residuals(name: str, tol: float, fn, points: Iterable) -> ResidualReport:
    """Evaluate ``fn(p)`` (dict or scalar) at each point into a report."""
    rep = ResidualReport(name, tol)
    for p in points:
        out = fn(p)
        if isinstance(out, dict):
            rep.extend(p, out)
        else:
            rep.add(p, name, out)
    return rep


# ---------------------------------------------------------------------------
# Sister correspondence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SisterParams:
    Hbar_sq: object
    kappa_shift: object
    theta: float

    @property
    def Hbar(self) -> float:
        return math.sqrt(self.Hbar_sq)


def sister_params(H, tau) -> SisterParams:
    """Parameters of the sister surface: Hbar^2 = H^2 + tau^2, kappa shift -4tau^2
    and the angle theta with i Hbar = e^{i theta}(tau + i H).

    Exact (Fraction) inputs give exact squares.
    """
    Hbar_sq = H * H + tau * tau
    Hbar = math.sqrt(Hbar_sq)
    w = 1j * Hbar / complex(float(tau), float(H)) if Hbar_sq else 1.0
    return SisterParams(Hbar_sq, -4 * tau * tau, math.atan2(w.imag, w.real))


def sister_invariant_holds(H, tau, kappa) -> bool:
    """Exact check of 4 Hbar^2 + kappabar = 4 H^2 + kappa."""
    sp = sister_params(Fraction(H), Fraction(tau))
    return 4 * sp.Hbar_sq + (Fraction(kappa) + sp.kappa_shift) == 4 * Fraction(H) ** 2 + Fraction(kappa)


def metric_rotation(metric=None) -> np.ndarray:
    """Matrix of the rotation J by pi/2 in coordinates, for a 2x2 metric."""
    g = np.eye(2) if metric is None else np.asarray(metric, dtype=float)
    return np.array([[-g[0, 1], -g[1, 1]], [g[0, 0], g[0, 1]]]) / math.sqrt(np.linalg.det(g))


def sister_rotate(S, T, theta: float, H: float, Hbar: float, metric=None):
    """(Sbar, Tbar) = (e^{theta J}(S - H I) + Hbar I, e^{theta J} T)."""
    J = metric_rotation(metric)
    R = math.cos(theta) * np.eye(2) + math.sin(theta) * J
    S = np.asarray(S, dtype=float)
    return R @ (S - H * np.eye(2)) + Hbar * np.eye(2), R @ np.asarray(T, dtype=float)


# ---------------------------------------------------------------------------
# SurfaceData builders
# ---------------------------------------------------------------------------

def helicoid_surface_data(H: float, K: Optional[float] = None) -> SurfaceData:
    """Helicoid data in (sigma, tau). ``K`` defaults to 4H^2 - 1; passing an
    inconsistent pair builds the metric and nu from K and the height from H."""
    _check_h_range(H)
    K = 4 * H * H - 1 if K is None else K
    if not K < 0:
        raise ValueError("the helicoid needs K < 0")
    a = math.sqrt(-K)

    def metric(p):
        return np.diag([1.0, math.cosh(a * p[0]) ** 2])

    def dmetric(p):
        d = np.zeros((2, 2, 2))
        d[0, 1, 1] = 2 * a * math.cosh(a * p[0]) * math.sinh(a * p[0])
        return d

    def nu_grad(p):
        return np.array([a * a / math.cosh(a * p[0]) ** 2, 0.0])

    def nu_hess(p):
        s = a * p[0]
        return np.array([[-2 * a**3 * math.tanh(s) / math.cosh(s) ** 2, 0.0], [0.0, 0.0]])

    return SurfaceData(
        MetricField(metric, dmetric, varies=(0,)),
        ScalarField(lambda p: a * math.tanh(a * p[0]), nu_grad, nu_hess),
        ScalarField(lambda p: 2 * H * p[0] + a * p[1],
                    lambda p: np.array([2 * H, a]), lambda p: np.zeros((2, 2))),
        H, K, -1.0)


def arl_surface_data(H: float) -> SurfaceData:
    """Data in the half-plane coordinate z = x + iy."""
    _check_h_range(H)
    a = math.sqrt(1 - 4 * H * H)

    def metric(p):
        return np.eye(2) / (a * a * p[1] ** 2)

    def dmetric(p):
        d = np.zeros((2, 2, 2))
        d[1] = -2 / (a * a * p[1] ** 3) * np.eye(2)
        return d

    return SurfaceData(
        MetricField(metric, dmetric, varies=(1,)),
        constant_field(a),
        ScalarField(lambda p: -(2 * H / a) * math.log(a * p[1]),
                    lambda p: np.array([0.0, -2 * H / (a * p[1])]),
                    lambda p: np.array([[0.0, 0.0], [0.0, 2 * H / (a * p[1] ** 2)]])),
        H, -a * a, -1.0)


def cylinder_surface_data(c: float, k: float) -> SurfaceData:
    """Vertical cylinder in arclength and height coordinates (s, t)."""
    flat = MetricField(lambda p: np.eye(2), lambda p: np.zeros((2, 2, 2)), varies=())
    return SurfaceData(flat, constant_field(0.0),
                       ScalarField(lambda p: p[1], lambda p: np.array([0.0, 1.0]),
                                   lambda p: np.zeros((2, 2))),
                       abs(k) / 2, 0.0, c)


def slice_surface_data(c: float) -> SurfaceData:
    """Horizontal slice M^2_c x {0} in disk coordinates."""
    def metric(p):
        return (2 / (1 + c * (p[0] ** 2 + p[1] ** 2))) ** 2 * np.eye(2)

    return SurfaceData(MetricField(metric), constant_field(1.0), constant_field(0.0), 0.0, c, c)
