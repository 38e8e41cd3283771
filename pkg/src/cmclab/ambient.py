"""Ambient three-dimensional models: metric tensors, the vertical Killing field
and finite-difference connection coefficients.

Coordinates are always (x, y, t). The product spaces M^2_c x R live in the
conformal disk model, the homogeneous spaces E(-1, tau) in either the upper
half-plane model or the disk model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StencilError

PRODUCT_DISK = "ProductDisk"
EKT_HALFPLANE = "EktHalfPlane"
EKT_DISK = "EktDisk"

_KINDS = (PRODUCT_DISK, EKT_HALFPLANE, EKT_DISK)


@dataclass(frozen=True)
class AmbientSpace:
    """One of the three ambient models.

    ``param`` is the curvature c for ``ProductDisk`` and the bundle curvature
    tau for the two E(-1, tau) models.
    """

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown ambient kind {self.kind!r}")
        if self.param == 0:
            name = "c" if self.kind == PRODUCT_DISK else "tau"
            raise ValueError(f"{self.kind} requires {name} != 0")

    @classmethod
    def product(cls, c: float) -> "AmbientSpace":
        return cls(PRODUCT_DISK, c)

    @classmethod
    def halfplane(cls, tau: float) -> "AmbientSpace":
        return cls(EKT_HALFPLANE, tau)

    @classmethod
    def disk(cls, tau: float) -> "AmbientSpace":
        return cls(EKT_DISK, tau)

    @property
    def c(self) -> float:
        """Curvature of the base surface (always -1 for the E(-1, tau) models)."""
        return self.param if self.kind == PRODUCT_DISK else -1.0

    @property
    def tau(self) -> float:
        return 0.0 if self.kind == PRODUCT_DISK else self.param

    def contains(self, p) -> bool:
        x, y = float(p[0]), float(p[1])
        if self.kind == PRODUCT_DISK:
            return 1.0 + self.param * (x * x + y * y) > 0.0
        if self.kind == EKT_HALFPLANE:
            return y > 0.0
        return x * x + y * y < 1.0

    def metric(self, p) -> "MetricAtPoint":
        if self.kind == PRODUCT_DISK:
            return product_metric(self.param, p)
        if self.kind == EKT_HALFPLANE:
            return ekt_halfplane_metric(self.param, p)
        return ekt_disk_metric(self.param, p)

    def g(self, p) -> np.ndarray:
        return self.metric(p).g


@dataclass(frozen=True)
class MetricAtPoint:
    g: np.ndarray
    point: tuple


def _point(p) -> tuple:
    if len(p) != 3:
        raise ValueError("points are (x, y, t) triples")
    return tuple(float(v) for v in p)


def product_metric(c: float, p) -> MetricAtPoint:
    """Product metric lambda^2 (dx^2 + dy^2) + dt^2, lambda = 2 / (1 + c r^2)."""
    if c == 0:
        raise ValueError("c must be nonzero")
    x, y, t = _point(p)
    w = 1.0 + c * (x * x + y * y)
    if w <= 0.0:
        raise DomainError(f"point {(x, y)} lies outside the disk model for c={c}")
    lam2 = (2.0 / w) ** 2
    return MetricAtPoint(np.diag([lam2, lam2, 1.0]), (x, y, t))


def ekt_halfplane_metric(tau: float, p) -> MetricAtPoint:
    """Metric (dx^2 + dy^2)/y^2 + (dt - 2 tau dx / y)^2 of E(-1, tau)."""
    if tau == 0:
        raise ValueError("tau must be nonzero")
    x, y, t = _point(p)
    if y <= 0.0:
        raise DomainError(f"y={y} is not in the upper half-plane")
    a = -2.0 * tau / y
    g = np.array([
        [1.0 / y**2 + a * a, 0.0, a],
        [0.0, 1.0 / y**2, 0.0],
        [a, 0.0, 1.0],
    ])
    return MetricAtPoint(g, (x, y, t))


def ekt_disk_metric(tau: float, p) -> MetricAtPoint:
    """Disk model of E(-1, tau):
    lambda^2 (dx^2 + dy^2) + (2 tau (l_y/l) dx - 2 tau (l_x/l) dy + dt)^2."""
    if tau == 0:
        raise ValueError("tau must be nonzero")
    x, y, t = _point(p)
    w = 1.0 - (x * x + y * y)
    if w <= 0.0:
        raise DomainError(f"point {(x, y)} lies outside the unit disk")
    lam = 2.0 / w
    lam_x = 4.0 * x / w**2
    lam_y = 4.0 * y / w**2
    a = 2.0 * tau * lam_y / lam
    b = -2.0 * tau * lam_x / lam
    g = np.array([
        [lam * lam + a * a, a * b, a],
        [a * b, lam * lam + b * b, b],
        [a, b, 1.0],
    ])
    return MetricAtPoint(g, (x, y, t))


def vertical_field(space: AmbientSpace, p) -> np.ndarray:
    """The unit Killing field d/dt (the same coordinate vector in every model)."""
    if not space.contains(p):
        raise DomainError(f"point {tuple(p)} outside the {space.kind} model")
    return np.array([0.0, 0.0, 1.0])


def default_step(p) -> np.ndarray:
    return 1e-5 * (1.0 + np.abs(np.asarray(p, dtype=float)))


def metric_derivatives(space: AmbientSpace, p, step=None) -> np.ndarray:
    """dg[k, i, j] = d g_ij / d x^k by central differences plus one Richardson level."""
    p = np.asarray(p, dtype=float)
    h = default_step(p) if step is None else np.broadcast_to(np.asarray(step, dtype=float), (3,))
    if np.any(h <= 0):
        raise ValueError("step must be positive")
    dg = np.empty((3, 3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h[k]
        try:
            d1 = (space.g(p + e) - space.g(p - e)) / (2 * h[k])
            d2 = (space.g(p + e / 2) - space.g(p - e / 2)) / h[k]
        except DomainError as exc:
            raise StencilError(f"difference stencil at {tuple(p)} leaves the model") from exc
        dg[k] = (4.0 * d2 - d1) / 3.0
    return dg


def christoffels_from_metric(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma[k, i, j] from g_ij and dg[l, i, j] = d_l g_ij (any dimension)."""
    ginv = np.linalg.inv(g)
    # lower[l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    lower = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    gam = np.einsum("kl,lij->kij", ginv, lower)
    return 0.5 * (gam + np.swapaxes(gam, 1, 2))


def ambient_christoffels(space: AmbientSpace, p, step=None) -> np.ndarray:
    """Christoffel symbols Gamma[k, i, j] of the ambient metric at p."""
    if not space.contains(p):
        raise DomainError(f"point {tuple(p)} outside the {space.kind} model")
    return christoffels_from_metric(space.g(p), metric_derivatives(space, p, step))
