"""Exact isometries of the upper half-plane and the double-coset
classifications used to sort PMC surfaces.

An element is stored as a primitive integer matrix M with det M > 0 and an
orientation flag. Orientation-preserving elements act by z -> M.z, reversing
ones by z -> M.(-conj z), i.e. as M composed with eta(z) = -conj(z). A
reversing element written the usual way, z -> (a conj z + b)/(c conj z + d)
with ad - bc < 0, has stored matrix ((-a, b), (-c, d)); see ``from_matrix``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional, Union

Rational = Union[int, Fraction, str]

INFINITY = math.inf
ID_CLASS = "IdClass"
ZETA_CLASS = "ZetaClass"


def _primitive(entries) -> tuple:
    fr = [Fraction(e) for e in entries]
    lcm = reduce(lambda x, y: x * y // math.gcd(x, y), (f.denominator for f in fr), 1)
    ints = [int(f * lcm) for f in fr]
    g = reduce(math.gcd, (abs(i) for i in ints), 0)
    ints = [i // g for i in ints]
    first = next(i for i in ints if i != 0)
    if first < 0:
        ints = [-i for i in ints]
    return tuple(ints)


@dataclass(frozen=True)
class MoebiusElement:
    a: int
    b: int
    c: int
    d: int
    orientation: int = 1

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation is +1 or -1")
        if self.a * self.d - self.b * self.c <= 0:
            raise ValueError("stored matrix must have positive determinant")
        if (self.a, self.b, self.c, self.d) != _primitive((self.a, self.b, self.c, self.d)):
            raise ValueError("entries must be primitive integers, first nonzero positive; use make()")

    @classmethod
    def make(cls, a: Rational, b: Rational, c: Rational, d: Rational,
             orientation: int = 1) -> "MoebiusElement":
        """Normalize rational entries of a positive-determinant matrix."""
        if Fraction(a) * Fraction(d) - Fraction(b) * Fraction(c) <= 0:
            raise ValueError("matrix must have positive determinant")
        return cls(*_primitive((a, b, c, d)), orientation)

    @classmethod
    def from_matrix(cls, a: Rational, b: Rational, c: Rational, d: Rational) -> "MoebiusElement":
        """Element acting by (az+b)/(cz+d) if ad - bc > 0, and by
        (a conj z + b)/(c conj z + d) if ad - bc < 0."""
        det = Fraction(a) * Fraction(d) - Fraction(b) * Fraction(c)
        if det == 0:
            raise ValueError("singular matrix")
        if det > 0:
            return cls.make(a, b, c, d, 1)
        return cls.make(-Fraction(a), b, -Fraction(c), d, -1)

    @property
    def entries(self) -> tuple:
        return self.a, self.b, self.c, self.d

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def as_matrix(self) -> tuple:
        """Conventional matrix: positive determinant iff orientation preserving."""
        if self.orientation > 0:
            return self.entries
        return -self.a, self.b, -self.c, self.d

    def __str__(self):
        a, b, c, d = self.as_matrix()
        return f"(({a},{b}),({c},{d})){'+' if self.orientation > 0 else '-'}"


IDENTITY = MoebiusElement(1, 0, 0, 1)
ETA = MoebiusElement(1, 0, 0, 1, -1)
XI = MoebiusElement(0, 1, -1, 0)
ZETA = MoebiusElement(0, 1, -1, 1)


def m(s: Rational) -> MoebiusElement:
    """The double-coset representative m_s = ((s, 1-s), (-1, 1))."""
    s = Fraction(s)
    return MoebiusElement.make(s, 1 - s, -1, 1)


def diag(lam: Rational) -> MoebiusElement:
    lam = Fraction(lam)
    return MoebiusElement.make(lam, 0, 0, 1 / lam)


def diag_xi(lam: Rational) -> MoebiusElement:
    """diag(lam) composed with xi: z -> -lam^2 / z."""
    return compose(diag(lam), XI)


def translation(b: Rational, lam: Rational = 1) -> MoebiusElement:
    """z -> lam^2 z + lam b, an element of T."""
    lam = Fraction(lam)
    return MoebiusElement.make(lam, Fraction(b), 0, 1 / lam)


def _conj_eta(e: tuple) -> tuple:
    a, b, c, d = e
    return a, -b, -c, d


def _mul(x: tuple, y: tuple) -> tuple:
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2


def compose(f: MoebiusElement, g: MoebiusElement) -> MoebiusElement:
    """f o g."""
    right = g.entries if f.orientation > 0 else _conj_eta(g.entries)
    return MoebiusElement.make(*_mul(f.entries, right), f.orientation * g.orientation)


def inverse(f: MoebiusElement) -> MoebiusElement:
    a, b, c, d = f.entries
    adj = (d, -b, -c, a)
    if f.orientation < 0:
        adj = _conj_eta(adj)
    return MoebiusElement.make(*adj, f.orientation)


def apply(f: MoebiusElement, z: complex) -> complex:
    w = z if f.orientation > 0 else -z.conjugate()
    return (f.a * w + f.b) / (f.c * w + f.d)


def rho(f: MoebiusElement):
    """beta gamma / (alpha delta), or INFINITY when alpha delta = 0."""
    ad = f.a * f.d
    if ad == 0:
        assert f.b * f.c != 0
        return INFINITY
    return Fraction(f.b * f.c, ad)


def in_T(f: MoebiusElement) -> bool:
    return f.orientation > 0 and f.c == 0


def in_D(f: MoebiusElement) -> bool:
    return f.orientation > 0 and f.b == 0 and f.c == 0


def in_GX(f: MoebiusElement) -> bool:
    return f.c == 0


def in_GY(f: MoebiusElement) -> bool:
    if f.orientation < 0:
        return False
    return (f.b == 0 and f.c == 0) or (f.a == 0 and f.d == 0)


def class_xy(f: MoebiusElement) -> str:
    """Class of f under f ~ k o f o g (k in G_X, g in G_Y)."""
    return ID_CLASS if f.c == 0 or f.d == 0 else ZETA_CLASS


@dataclass(frozen=True, order=True)
class CanonicalRep:
    tag: str
    s: Optional[Fraction] = None

    def __post_init__(self):
        if self.tag not in ("Id", "Eta", "M", "EtaM"):
            raise ValueError(f"unknown tag {self.tag}")
        if self.tag in ("M", "EtaM") and (self.s is None or self.s < 0):
            raise ValueError("M and EtaM need s >= 0")

    @property
    def element(self) -> MoebiusElement:
        if self.tag == "Id":
            return IDENTITY
        if self.tag == "Eta":
            return ETA
        if self.tag == "M":
            return m(self.s)
        return compose(ETA, m(self.s))

    def __str__(self):
        return self.tag if self.s is None else f"{self.tag}({self.s})"


def _s_parameter(f: MoebiusElement) -> Fraction:
    a, b, c, d = f.entries
    if c * d == 0:
        return _s_parameter(compose(XI, f))
    D = f.det
    s0 = Fraction(-b * c, D) if c * d > 0 else Fraction(a * d, D)
    return s0 if s0 >= 0 else 1 - s0


def canonical_yy(f: MoebiusElement) -> CanonicalRep:
    """Representative of the double coset G_Y f G_Y."""
    if in_GY(f):
        return CanonicalRep("Id")
    if f.orientation < 0:
        g = compose(ETA, f)
        if in_GY(g):
            return CanonicalRep("Eta")
        return CanonicalRep("EtaM", _s_parameter(g))
    return CanonicalRep("M", _s_parameter(f))


@dataclass(frozen=True)
class Stabilizer:
    kind: str
    mu_sq: Optional[Fraction] = None

    @property
    def element(self) -> Optional[MoebiusElement]:
        """For OrderTwo, the involution ((0, mu), (-1/mu, 0)) scaled by mu."""
        if self.kind != "OrderTwo":
            return None
        return MoebiusElement.make(0, self.mu_sq, -1, 0)

    def __str__(self):
        return f"OrderTwo(mu^2={self.mu_sq})" if self.kind == "OrderTwo" else self.kind


def stabilizer_A(cls: str) -> Stabilizer:
    if cls == ID_CLASS:
        return Stabilizer("FullD")
    if cls == ZETA_CLASS:
        return Stabilizer("Trivial")
    raise ValueError(f"unknown class {cls}")


def stabilizer_B(rep: CanonicalRep) -> Stabilizer:
    if rep.tag in ("Id", "Eta"):
        return Stabilizer("FullGY")
    if 0 < rep.s < 1:
        return Stabilizer("OrderTwo", (1 - rep.s) / rep.s)
    return Stabilizer("Trivial")


def stabilizer(kind: str, arg) -> Stabilizer:
    """kind "A" takes a class_xy value, kind "B" a CanonicalRep."""
    if kind == "A":
        return stabilizer_A(arg)
    if kind == "B":
        return stabilizer_B(arg)
    raise ValueError("kind is 'A' or 'B'")


def verify_order_two(s: Rational) -> bool:
    """Exact check that the OrderTwo element g is an involution in G_Y with
    m_s g m_s^-1 in G_Y."""
    s = Fraction(s)
    g = stabilizer_B(CanonicalRep("M", s)).element
    if g is None:
        return False
    ms = m(s)
    return (in_GY(g) and compose(g, g) == IDENTITY and g != IDENTITY
            and in_GY(compose(compose(ms, g), inverse(ms))))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())
