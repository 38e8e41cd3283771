"""Closed-form evaluators for the explicit CMC surfaces.

Every family is described by an ``ImmersionSpec`` subclass carrying its real
parameters, the ambient model it lives in, and (where one exists) the explicit
immersion map. The free functions below evaluate the closed-form metric
coefficients, angle function and height function that the numerical engine in
``diffgeo`` is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

from .ambient import AmbientSpace
from .errors import DomainError, ParameterError

TYPE_I = "I"
TYPE_II = "II"
TYPE_III = "III"

BOUNDARY_RTOL = 1e-12


def _check_h_range(H: float) -> None:
    if not (0.0 < 4.0 * H * H < 1.0):
        raise ParameterError(f"need 0 < 4H^2 < 1, got H={H}")


def _check_eps(eps: int) -> None:
    if eps not in (1, -1):
        raise ParameterError(f"eps must be +1 or -1, got {eps}")


# ---------------------------------------------------------------------------
# Helicoid in H^2 x R (c = -1)
# ---------------------------------------------------------------------------

def _helicoid_a(H: float) -> float:
    _check_h_range(H)
    return math.sqrt(1.0 - 4.0 * H * H)


def helicoid_parts(H: float, sigma: float, tau: float) -> tuple[float, float, float]:
    """(rho, lambda, phi) of the screw-motion helicoid."""
    a = _helicoid_a(H)
    K = -a * a
    rho = math.acosh(math.cosh(a * sigma) / a)
    at = math.atan((math.exp(2.0 * a * sigma) + 2.0 * K + 1.0) / (4.0 * H * a))
    return rho, 2.0 * H * sigma + at, a * tau - at


def helicoid_immersion(H: float, p) -> np.ndarray:
    """Point of the helicoid X(sigma, tau) in the disk model of H^2 x R."""
    sigma, tau = float(p[0]), float(p[1])
    rho, lam, phi = helicoid_parts(H, sigma, tau)
    r = math.tanh(rho / 2.0)
    return np.array([r * math.cos(phi), r * math.sin(phi), lam + phi])


def helicoid_closed_forms(H: float, p) -> tuple[float, float, float, float, float]:
    """(E, F, G, nu, h) of the helicoid at (sigma, tau)."""
    a = _helicoid_a(H)
    sigma, tau = float(p[0]), float(p[1])
    return (1.0, 0.0, math.cosh(a * sigma) ** 2, a * math.tanh(a * sigma),
            2.0 * H * sigma + a * tau)


def helicoid_to_conformal(H: float, p) -> complex:
    """The diffeomorphism (sigma, tau) -> z = e^{-a tau}(tanh(a sigma) + i sech(a sigma))."""
    a = _helicoid_a(H)
    sigma, tau = float(p[0]), float(p[1])
    return math.exp(-a * tau) * complex(math.tanh(a * sigma), 1.0 / math.cosh(a * sigma))


def _check_upper(z: complex) -> None:
    if not z.imag > 0.0:
        raise DomainError(f"z={z} is not in the upper half-plane")


def helicoid_conformal(H: float, z: complex) -> tuple[float, float, float]:
    """(conformal factor, nu, h) of the helicoid in the half-plane coordinate z.

    The metric is factor * |dz|^2 with factor = 4 / (K (z - zbar)^2).
    """
    a = _helicoid_a(H)
    _check_upper(z)
    K = -a * a
    factor = 1.0 / (-K * z.imag ** 2)
    nu = a * z.real / abs(z)
    h = (2.0 * H / a) * math.asinh(z.real / z.imag) - math.log(abs(z))
    return factor, nu, h


# ---------------------------------------------------------------------------
# Surface with vanishing Abresch-Rosenberg differential (c = -1)
# ---------------------------------------------------------------------------

def arl_conformal(H: float, z: complex) -> tuple[float, float, float]:
    """(conformal factor, nu, h); nu takes the positive root of (4H^2 + c)/c."""
    _check_h_range(H)
    _check_upper(z)
    a = math.sqrt(1.0 - 4.0 * H * H)
    factor = 1.0 / (a * a * z.imag ** 2)
    h = -(2.0 * H / a) * math.log(a * z.imag)
    return factor, a, h


# ---------------------------------------------------------------------------
# Minimal parabolic surface in E(-1, tau), half-plane model
# ---------------------------------------------------------------------------

def _check_y(y: float) -> None:
    if not 0.0 < y < 1.0:
        raise DomainError(f"y={y} outside (0, 1)")


def parabolic_immersion(tau: float, p) -> np.ndarray:
    if tau == 0:
        raise ParameterError("tau must be nonzero")
    x, y = float(p[0]), float(p[1])
    _check_y(y)
    return np.array([x, y, math.sqrt(4 * tau * tau + 1) * math.asin(y)])


def parabolic_closed_forms(tau: float, p) -> tuple[float, float, float, float]:
    """(E, F, G, nu) of the parabolic surface at (x, y).

    The metric is E dx^2 + 2F dx dy + G dy^2, so F is half the displayed
    cross-term coefficient -4 tau sqrt(4tau^2+1) / (y sqrt(1-y^2)).
    """
    if tau == 0:
        raise ParameterError("tau must be nonzero")
    y = float(p[1])
    _check_y(y)
    b = 4 * tau * tau + 1
    s = math.sqrt(1 - y * y)
    E = b / y**2
    F = -2 * tau * math.sqrt(b) / (y * s)
    G = (4 * tau * tau * y * y + 1) / (y * y * (1 - y * y))
    return E, F, G, s / math.sqrt(b)


# ---------------------------------------------------------------------------
# Screw-motion twins in E(-1, tau), disk model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScrewConstants:
    A: float
    B: float
    C: float
    l: float
    d: float


def _check_screw(H: float, tau: float, eps: int) -> None:
    if not H > 0:
        raise ParameterError(f"need H > 0, got {H}")
    _check_h_range(H)
    if tau == 0:
        raise ParameterError("tau must be nonzero")
    _check_eps(eps)


def screw_constants(H: float, tau: float, eps: int) -> ScrewConstants:
    _check_screw(H, tau, eps)
    m = math.sqrt(1 - 4 * H * H)
    S = math.hypot(H, tau)
    q = math.sqrt(4 * tau * tau + 1)
    A = H * m / S * (q - 2 * eps * tau)
    B = -H * m / S * (q + 2 * eps * tau)
    C = -eps * tau * m / (2 * H * S)
    l = -2 * tau + eps * q
    d = eps * tau * (1 - 4 * H * H) / (H * q)
    return ScrewConstants(A, B, C, l, d)


def on_type_boundary(H: float, tau: float) -> bool:
    """Whether tau^2 (1 - 8H^2) = 4H^4 up to the relative tolerance."""
    gap = tau * tau * (1 - 8 * H * H) - 4 * H**4
    return abs(gap) < BOUNDARY_RTOL * (tau * tau + H**4)


def screw_type(H: float, tau: float, eps: int) -> str:
    _check_screw(H, tau, eps)
    if eps * tau > 0:
        return TYPE_I
    if on_type_boundary(H, tau):
        return TYPE_III
    gap = tau * tau * (1 - 8 * H * H) - 4 * H**4
    return TYPE_I if gap < 0 else TYPE_II


def _resolve_boundary(H: float, tau: float, boundary: Optional[bool]) -> bool:
    return on_type_boundary(H, tau) if boundary is None else bool(boundary)


def screw_profile(H: float, tau: float, eps: int, sigma: float,
                  boundary: Optional[bool] = None) -> tuple[float, float, float]:
    """(f, u, u') of the generating curve at sigma.

    ``boundary`` forces (True) or forbids (False) the branch for
    tau^2 (1 - 8H^2) = 4H^4; by default it is detected with a relative tolerance.
    """
    k = screw_constants(H, tau, eps)
    on_bd = _resolve_boundary(H, tau, boundary)
    m2 = 1 - 4 * H * H
    S = math.hypot(H, tau)
    q = math.sqrt(4 * tau * tau + 1)
    ch = math.cosh(sigma)
    th = math.tanh(sigma / 2)
    et = eps * tau

    if et < 0 and on_bd:
        f = th / math.sqrt(4 * H * H * th * th + m2)
    else:
        f = math.sqrt(ch - k.A) / math.sqrt(ch - k.B)

    if not on_bd:
        u = 2 * H * q / math.sqrt(m2) * sigma + 2 * S / m2 * (
            k.A * (k.A - k.C) / math.sqrt(1 - k.A**2)
            * math.atan(math.sqrt((1 + k.A) / (1 - k.A)) * th)
            - k.B * (k.B - k.C) / math.sqrt(1 - k.B**2)
            * math.atan(math.sqrt((1 + k.B) / (1 - k.B)) * th))
    else:
        r8 = math.sqrt(1 - 8 * H * H)
        lin = 2 * H * math.sqrt(m2) / r8 * sigma
        if et > 0:
            u = lin + r8 * math.atan(math.sqrt(m2) / (2 * H) * th)
        else:
            u = lin - r8 * math.atan(2 * H / math.sqrt(m2) * th)

    lead = 2 * H * q / math.sqrt(m2)
    if et < 0 and on_bd:
        # A = C = 1 here, so the factor (cosh - C)/(cosh - A) cancels
        du = lead * ch / (ch - k.B)
    else:
        du = lead * (ch - k.C) * ch / ((ch - k.A) * (ch - k.B))
    return f, u, du


def screw_rho_prime(H: float, tau: float, eps: int, sigma: float,
                    boundary: Optional[bool] = None) -> float:
    """Derivative of rho = 2 artanh(f)."""
    k = screw_constants(H, tau, eps)
    if eps * tau < 0 and _resolve_boundary(H, tau, boundary):
        th = math.tanh(sigma / 2)
        return 1.0 / math.sqrt(4 * H * H * th * th + 1 - 4 * H * H)
    ch = math.cosh(sigma)
    return math.sinh(sigma) / math.sqrt((ch - k.A) * (ch - k.B))


def screw_immersion(H: float, tau: float, eps: int, p,
                    boundary: Optional[bool] = None) -> np.ndarray:
    sigma, theta = float(p[0]), float(p[1])
    f, u, _ = screw_profile(H, tau, eps, sigma, boundary)
    l = screw_constants(H, tau, eps).l
    return np.array([f * math.cos(theta), f * math.sin(theta), u + l * theta])


def screw_metric_coeffs(H: float, tau: float, eps: int, sigma: float,
                        boundary: Optional[bool] = None) -> tuple[float, float, float]:
    """(E, F, G) of the induced metric; they depend on sigma only."""
    _, _, du = screw_profile(H, tau, eps, sigma, boundary)
    rp = screw_rho_prime(H, tau, eps, sigma, boundary)
    m = math.sqrt(1 - 4 * H * H)
    S = math.hypot(H, tau)
    q = math.sqrt(4 * tau * tau + 1)
    ch = math.cosh(sigma)
    E = rp * rp + du * du
    F = du / (H * m * q) * (eps * H * m - 2 * tau * S * ch)
    G = S * S / (H * H * m * m) * ch * ch
    return E, F, G


def screw_metric_det(H: float, tau: float, sigma: float) -> float:
    """EG - F^2 in closed form."""
    return (H * H + tau * tau) / (H * H * (1 - 4 * H * H) ** 2) * math.cosh(sigma) ** 2


# ---------------------------------------------------------------------------
# Vertical cylinders and products of curves
# ---------------------------------------------------------------------------

def _unit_curve_point(sign: int, k: float, s: float) -> tuple[float, float]:
    """Arclength point of a curve of geodesic curvature k >= 0 in the unit disk
    model of curvature sign (+1 sphere, -1 hyperbolic plane)."""
    if sign > 0:
        R = math.atan2(1.0, k)  # cot R = k
        r = math.tan(R / 2)
        phi = s / math.sin(R)
        return r * math.cos(phi), r * math.sin(phi)
    if k > 1:
        R = math.atanh(1.0 / k)  # coth R = k
        r = math.tanh(R / 2)
        phi = s / math.sinh(R)
        return r * math.cos(phi), r * math.sin(phi)
    if k == 1:
        z = complex(s, 1.0)  # horocycle Im z = 1 in the half-plane
    else:
        th0 = math.acos(k)  # hypercycle: ray at angle th0 from the real axis
        z = math.exp(s * math.sin(th0)) * complex(math.cos(th0), math.sin(th0))
    w = (z - 1j) / (z + 1j)
    return w.real, w.imag


def cylinder_immersion(c: float, k: float, p) -> np.ndarray:
    """Vertical cylinder over an arclength curve of geodesic curvature |k| in M^2_c."""
    if c == 0:
        raise ParameterError("c must be nonzero")
    s, t = float(p[0]), float(p[1])
    sc = math.sqrt(abs(c))
    x, y = _unit_curve_point(1 if c > 0 else -1, abs(k) / sc, s * sc)
    return np.array([x / sc, y / sc, t])


def cylinder_eval(c: float, k: float, p) -> tuple[np.ndarray, float, float]:
    """(metric, nu, h): flat metric ds^2 + dt^2, nu = 0, h = t."""
    if c == 0:
        raise ParameterError("c must be nonzero")
    return np.eye(2), 0.0, float(p[1])


def curveproduct_eval(k1: float, k2: float, p) -> tuple[np.ndarray, float]:
    """(flat metric, |mean curvature vector|) of a product of curves."""
    if k1 == 0 and k2 == 0:
        raise ParameterError("(k1, k2) must not both vanish")
    return np.eye(2), math.hypot(k1, k2) / 2.0


# ---------------------------------------------------------------------------
# Tagged descriptors
# ---------------------------------------------------------------------------

class ImmersionSpec:
    """Base class for the catalog families.

    Subclasses set ``family`` and provide ``space``, ``H`` and ``K``; those
    with an explicit immersion implement ``immersion`` and ``reference_point``.
    ``metric_closed`` returns the closed-form first fundamental form and
    ``metric_varies`` lists the coordinate indices it depends on.
    """

    family: ClassVar[str] = ""
    reference_point: ClassVar[tuple] = (0.0, 0.0)
    metric_varies: ClassVar[tuple] = (0, 1)

    def immersion(self, p) -> np.ndarray:
        raise NotImplementedError(f"{self.family} has no explicit immersion")

    def metric_closed(self, p) -> np.ndarray:
        raise NotImplementedError

    def nu_closed(self, p) -> float:
        raise NotImplementedError

    def height_closed(self, p) -> float:
        raise NotImplementedError

    @property
    def has_immersion(self) -> bool:
        return type(self).immersion is not ImmersionSpec.immersion


@dataclass(frozen=True)
class HelicoidH2R(ImmersionSpec):
    H: float
    family: ClassVar[str] = "HelicoidH2R"
    c: ClassVar[float] = -1.0
    reference_point: ClassVar[tuple] = (1.0, 0.0)
    metric_varies: ClassVar[tuple] = (0,)

    def __post_init__(self):
        _check_h_range(self.H)

    @property
    def space(self) -> AmbientSpace:
        return AmbientSpace.product(-1.0)

    @property
    def K(self) -> float:
        return 4 * self.H**2 - 1

    def immersion(self, p):
        return helicoid_immersion(self.H, p)

    def metric_closed(self, p):
        E, F, G, _, _ = helicoid_closed_forms(self.H, p)
        return np.array([[E, F], [F, G]])

    def nu_closed(self, p):
        return helicoid_closed_forms(self.H, p)[3]

    def height_closed(self, p):
        return helicoid_closed_forms(self.H, p)[4]


@dataclass(frozen=True)
class ArlSurface(ImmersionSpec):
    """Known through its conformal data only, in the coordinate z = x + iy."""

    H: float
    family: ClassVar[str] = "ArlSurface"
    c: ClassVar[float] = -1.0
    reference_point: ClassVar[tuple] = (0.0, 1.0)
    metric_varies: ClassVar[tuple] = (1,)

    def __post_init__(self):
        _check_h_range(self.H)

    @property
    def space(self) -> AmbientSpace:
        return AmbientSpace.product(-1.0)

    @property
    def K(self) -> float:
        return 4 * self.H**2 - 1

    def metric_closed(self, p):
        factor = arl_conformal(self.H, complex(p[0], p[1]))[0]
        return factor * np.eye(2)

    def nu_closed(self, p):
        return arl_conformal(self.H, complex(p[0], p[1]))[1]

    def height_closed(self, p):
        return arl_conformal(self.H, complex(p[0], p[1]))[2]


@dataclass(frozen=True)
class ParabolicPsl2(ImmersionSpec):
    tau: float
    family: ClassVar[str] = "ParabolicPsl2"
    c: ClassVar[float] = -1.0
    reference_point: ClassVar[tuple] = (0.0, 0.5)
    metric_varies: ClassVar[tuple] = (1,)

    def __post_init__(self):
        if self.tau == 0:
            raise ParameterError("tau must be nonzero")

    @property
    def space(self) -> AmbientSpace:
        return AmbientSpace.halfplane(self.tau)

    H: ClassVar[float] = 0.0
    K: ClassVar[float] = -1.0

    def immersion(self, p):
        return parabolic_immersion(self.tau, p)

    def metric_closed(self, p):
        E, F, G, _ = parabolic_closed_forms(self.tau, p)
        return np.array([[E, F], [F, G]])

    def nu_closed(self, p):
        return parabolic_closed_forms(self.tau, p)[3]

    def height_closed(self, p):
        return float(self.immersion(p)[2])


@dataclass(frozen=True)
class ScrewMotionPsl2(ImmersionSpec):
    H: float
    tau: float
    eps: int
    boundary: Optional[bool] = None
    family: ClassVar[str] = "ScrewMotionPsl2"
    c: ClassVar[float] = -1.0
    reference_point: ClassVar[tuple] = (1.0, 0.0)
    metric_varies: ClassVar[tuple] = (0,)

    def __post_init__(self):
        _check_screw(self.H, self.tau, self.eps)

    @property
    def space(self) -> AmbientSpace:
        return AmbientSpace.disk(self.tau)

    @property
    def K(self) -> float:
        return 4 * self.H**2 - 1

    @property
    def constants(self) -> ScrewConstants:
        return screw_constants(self.H, self.tau, self.eps)

    @property
    def type(self) -> str:
        if self.boundary is not None and self.eps * self.tau < 0:
            if self.boundary:
                return TYPE_III
        return screw_type(self.H, self.tau, self.eps)

    def immersion(self, p):
        return screw_immersion(self.H, self.tau, self.eps, p, self.boundary)

    def metric_closed(self, p):
        E, F, G = screw_metric_coeffs(self.H, self.tau, self.eps, float(p[0]), self.boundary)
        return np.array([[E, F], [F, G]])


@dataclass(frozen=True)
class VerticalCylinder(ImmersionSpec):
    c: float
    k: float
    family: ClassVar[str] = "VerticalCylinder"
    reference_point: ClassVar[tuple] = (0.0, 0.0)
    metric_varies: ClassVar[tuple] = ()
    K: ClassVar[float] = 0.0

    def __post_init__(self):
        if self.c == 0:
            raise ParameterError("c must be nonzero")

    @property
    def space(self) -> AmbientSpace:
        return AmbientSpace.product(self.c)

    @property
    def H(self) -> float:
        return abs(self.k) / 2.0

    def immersion(self, p):
        return cylinder_immersion(self.c, self.k, p)

    def metric_closed(self, p):
        return cylinder_eval(self.c, self.k, p)[0]

    def nu_closed(self, p):
        return 0.0

    def height_closed(self, p):
        return float(p[1])


@dataclass(frozen=True)
class CurveProduct(ImmersionSpec):
    """Product of two curves of geodesic curvatures k1, k2; it lives in a
    four-dimensional product, so only its closed forms are available."""

    k1: float
    k2: float
    family: ClassVar[str] = "CurveProduct"
    metric_varies: ClassVar[tuple] = ()
    K: ClassVar[float] = 0.0

    def __post_init__(self):
        if self.k1 == 0 and self.k2 == 0:
            raise ParameterError("(k1, k2) must not both vanish")

    @property
    def space(self):
        raise NotImplementedError("a product of curves has codimension two")

    @property
    def H(self) -> float:
        return curveproduct_eval(self.k1, self.k2, (0.0, 0.0))[1]

    def metric_closed(self, p):
        return np.eye(2)
