"""Bookkeeping for PMC surfaces in M_c x M_c built from pairs of CMC classes.

An H-PMC surface corresponds to an unordered pair of congruence classes of
H-CMC immersions into M_c x R. With constant curvature K each class is a
vertical cylinder (K = 0), or, for c = -1 and K = 4H^2 - 1, the ARL surface X
or the helicoid Y precomposed with an isometry of the half-plane.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from . import moebius as mb
from .catalog import arl_conformal, helicoid_conformal
from .errors import DomainError, UnreachableBucket
from .moebius import IDENTITY, MoebiusElement

ARL = "arl"
HEL = "hel"
CYL = "cyl"
SLICE = "slice"
FAMILIES = (ARL, HEL, CYL, SLICE)

PRODUCT_OF_CURVES = "ProductOfCurves"
SLICE_ARL = "CmcInSlice(Arl)"
SLICE_HEL = "CmcInSlice(Helicoid)"
TORRALBO_URBANO = "TorralboUrbano"
A_ID = "A_Id"
A_ZETA = "A_Zeta"
B_ETA = "B_Eta"
B_M = "B_M"
B_ETAM = "B_EtaM"

BUCKETS_HH = (PRODUCT_OF_CURVES, SLICE_ARL, SLICE_HEL, TORRALBO_URBANO,
              A_ID, A_ZETA, B_ETA, B_M, B_ETAM)
BUCKETS_SS = (PRODUCT_OF_CURVES,)


@dataclass(frozen=True)
class CmcClass:
    """[X o f], [Y o f], a vertical cylinder over a curve of curvature k, or a
    horizontal slice. ``precompose`` only matters for arl and hel."""
    family: str
    precompose: MoebiusElement = IDENTITY
    k: Optional[Fraction] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == CYL and self.k is None:
            raise ValueError("a cylinder needs its curve curvature k")
        if self.family not in (ARL, HEL) and self.precompose != IDENTITY:
            raise ValueError(f"{self.family} classes take no precomposition")

    @classmethod
    def cylinder(cls, k) -> "CmcClass":
        return cls(CYL, IDENTITY, Fraction(k))

    def then(self, g: MoebiusElement) -> "CmcClass":
        """The class of the immersion precomposed with g."""
        if self.family not in (ARL, HEL):
            return self
        return replace(self, precompose=mb.compose(self.precompose, g))

    def same_class(self, other: "CmcClass") -> bool:
        if self.family != other.family:
            return False
        if self.family == CYL:
            return abs(self.k) == abs(other.k)
        if self.family == SLICE:
            return True
        r = mb.compose(other.precompose, mb.inverse(self.precompose))
        return mb.in_GX(r) if self.family == ARL else mb.in_GY(r)

    def __str__(self):
        if self.family == CYL:
            return f"cyl:{self.k}"
        if self.family == SLICE:
            return "slice"
        return f"{self.family}:{self.precompose}"


@dataclass(frozen=True)
class PmcBucket:
    tag: str
    s: Optional[Fraction] = None
    H: Optional[float] = None
    residual: Optional[MoebiusElement] = field(default=None, compare=False)

    @property
    def label(self) -> str:
        return self.tag if self.s is None else f"{self.tag}({self.s})"

    def stabilizer(self) -> Optional[mb.Stabilizer]:
        if self.tag in (A_ID, A_ZETA):
            return mb.stabilizer_A(mb.ID_CLASS if self.tag == A_ID else mb.ZETA_CLASS)
        if self.tag == B_ETA:
            return mb.stabilizer_B(mb.CanonicalRep("Eta"))
        if self.tag in (B_M, B_ETAM):
            return mb.stabilizer_B(mb.CanonicalRep(self.tag[2:], self.s))
        return None

    def __str__(self):
        return self.label


def _hh_bucket(f: MoebiusElement) -> PmcBucket:
    if mb.in_GY(f):
        return PmcBucket(SLICE_HEL, residual=f)
    # B_f and B_{f^-1} differ by swapping the factors; keep the smaller label
    reps = sorted((mb.canonical_yy(f), mb.canonical_yy(mb.inverse(f))),
                  key=lambda r: (r.tag, r.s if r.s is not None else -1))
    rep = reps[0]
    if rep.tag == "Eta":
        return PmcBucket(B_ETA, residual=f)
    return PmcBucket("B_" + rep.tag, rep.s, residual=f)


def classify_pair(c: int, first: CmcClass, second: CmcClass) -> PmcBucket:
    if c not in (1, -1):
        raise DomainError("c must be +1 or -1")
    fams = (first.family, second.family)
    if SLICE in fams:
        raise UnreachableBucket("slices are minimal, not H-CMC with H > 0")
    if fams == (CYL, CYL):
        return PmcBucket(PRODUCT_OF_CURVES,
                         H=math.hypot(float(first.k), float(second.k)) / 2.0)
    if CYL in fams:
        raise UnreachableBucket("a cylinder (K = 0) cannot share a metric with K = 4H^2 - 1 < 0")
    if c == 1:
        raise UnreachableBucket("only products of curves occur in S2 x S2")
    if fams == (ARL, ARL):
        f = mb.compose(second.precompose, mb.inverse(first.precompose))
        return PmcBucket(SLICE_ARL if mb.in_GX(f) else TORRALBO_URBANO, residual=f)
    if fams == (HEL, HEL):
        return _hh_bucket(mb.compose(second.precompose, mb.inverse(first.precompose)))
    hel, arl = (first, second) if first.family == HEL else (second, first)
    f = mb.compose(arl.precompose, mb.inverse(hel.precompose))
    return PmcBucket(A_ID if mb.class_xy(f) == mb.ID_CLASS else A_ZETA, residual=f)


def normal_curvature(nu1: float, nu2: float) -> float:
    if abs(nu1) > 1.0 + 1e-12 or abs(nu2) > 1.0 + 1e-12:
        raise DomainError("angle functions lie in [-1, 1]")
    return 0.5 * (nu2 * nu2 - nu1 * nu1)


def class_nu(cls: CmcClass, H: float, z: complex) -> float:
    """Angle function of the class representative at z in the half-plane."""
    if cls.family in (CYL,):
        return 0.0
    if cls.family == SLICE:
        return 1.0
    w = mb.apply(cls.precompose, z)
    nu = (arl_conformal if cls.family == ARL else helicoid_conformal)(H, w)[1]
    return cls.precompose.orientation * nu


def normal_curvature_at(first: CmcClass, second: CmcClass, H: float, z: complex) -> float:
    return normal_curvature(class_nu(first, H, z), class_nu(second, H, z))


@dataclass(frozen=True)
class DataQuadruple:
    """Signs attached to (nu_1, dh_1, nu_2, dh_2) over an ordered base pair."""
    nu1: int
    dh1: int
    nu2: int
    dh2: int
    base: tuple

    def __post_init__(self):
        for v in (self.nu1, self.dh1, self.nu2, self.dh2):
            if v not in (1, -1):
                raise ValueError("signs are +1 or -1")


def act_G1(q: DataQuadruple) -> DataQuadruple:
    return DataQuadruple(-q.nu2, -q.dh2, -q.nu1, -q.dh1, (q.base[1], q.base[0]))


def act_G2(q: DataQuadruple) -> DataQuadruple:
    return DataQuadruple(q.nu2, q.dh2, q.nu1, q.dh1, (q.base[1], q.base[0]))


def act_G3(q: DataQuadruple) -> DataQuadruple:
    return DataQuadruple(q.nu1, q.dh1, -q.nu2, -q.dh2, q.base)


def flip_first(q: DataQuadruple) -> DataQuadruple:
    """pi-rotation of the first factor: (nu, dh) -> (-nu, -dh)."""
    return DataQuadruple(-q.nu1, -q.dh1, q.nu2, q.dh2, q.base)


def flip_second(q: DataQuadruple) -> DataQuadruple:
    return DataQuadruple(q.nu1, q.dh1, -q.nu2, -q.dh2, q.base)


GENERATORS = (act_G1, act_G2, act_G3, flip_first, flip_second)


def _same(a: DataQuadruple, b: DataQuadruple) -> bool:
    return ((a.nu1, a.dh1, a.nu2, a.dh2) == (b.nu1, b.dh1, b.nu2, b.dh2)
            and a.base[0].same_class(b.base[0]) and a.base[1].same_class(b.base[1]))


def orbit(q: DataQuadruple) -> list:
    seen = [q]
    todo = deque([q])
    while todo:
        cur = todo.popleft()
        for g in GENERATORS:
            nxt = g(cur)
            if nxt not in seen:
                seen.append(nxt)
                todo.append(nxt)
    return seen


def unordered_equal(a: DataQuadruple, b: DataQuadruple) -> bool:
    return any(_same(x, b) for x in orbit(a))
