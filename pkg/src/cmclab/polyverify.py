"""Exact polynomial identities behind the constant-curvature classification.

Polynomials live in the variables (nu, H, K, c) with ``Fraction``
coefficients. The quantity r |grad nu|^2 contains W/c, so the variable c may
carry negative exponents (the ring is Laurent in c); every identity that is
asserted only involves nonnegative powers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import IdentityMismatch, ShapeError

VARS = ("nu", "H", "K", "c")
MAX_EXP = 64
_IDX = {v: i for i, v in enumerate(VARS)}
_SUPER = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")

Number = Union[int, Fraction]


class RationalPoly:
    """Sparse polynomial: a dict from exponent 4-tuples to nonzero Fractions."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        clean = {}
        for exps, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef == 0:
                continue
            exps = tuple(int(e) for e in exps)
            if len(exps) != 4 or any(abs(e) > MAX_EXP for e in exps):
                raise ValueError(f"bad exponent tuple {exps}")
            clean[exps] = clean.get(exps, Fraction(0)) + coef
        self.terms = {k: v for k, v in clean.items() if v != 0}

    @classmethod
    def const(cls, value: Number) -> "RationalPoly":
        return cls({(0, 0, 0, 0): value})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "RationalPoly":
        exps = [0, 0, 0, 0]
        exps[_IDX[name]] = power
        return cls({tuple(exps): 1})

    @staticmethod
    def _lift(other) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return RationalPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2], k1[3] + k2[3])
                out[k] = out.get(k, Fraction(0)) + v1 * v2
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = RationalPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, var: str = "nu") -> int:
        i = _IDX[var]
        return max((k[i] for k in self.terms), default=-1)

    def min_degree(self, var: str) -> int:
        i = _IDX[var]
        return min((k[i] for k in self.terms), default=0)

    def coeff(self, var: str, n: int) -> "RationalPoly":
        """Coefficient of var^n, as a polynomial in the remaining variables."""
        i = _IDX[var]
        out = {}
        for k, v in self.terms.items():
            if k[i] == n:
                kk = list(k)
                kk[i] = 0
                out[tuple(kk)] = v
        return RationalPoly(out)

    def coefficients(self, var: str = "nu") -> dict:
        i = _IDX[var]
        return {n: self.coeff(var, n) for n in sorted({k[i] for k in self.terms})}

    def is_even(self, var: str = "nu") -> bool:
        i = _IDX[var]
        return all(k[i] % 2 == 0 for k in self.terms)

    def substitute(self, var: str, value) -> "RationalPoly":
        """Replace var by a polynomial (nonnegative powers of var only)."""
        i = _IDX[var]
        value = self._lift(value)
        out = RationalPoly()
        cache: dict = {}
        for k, v in self.terms.items():
            e = k[i]
            if e < 0:
                raise ValueError(f"cannot substitute into negative power of {var}")
            if e not in cache:
                cache[e] = value ** e
            kk = list(k)
            kk[i] = 0
            out = out + RationalPoly({tuple(kk): v}) * cache[e]
        return out

    def evaluate(self, **values) -> float:
        """Floating-point value; every variable present must be supplied."""
        total = 0.0
        x = [float(values.get(v, 0.0)) for v in VARS]
        for k, v in self.terms.items():
            term = float(v)
            for xi, e in zip(x, k):
                if e:
                    term *= xi ** e
            total += term
        return total

    def evaluate_exact(self, **values) -> Fraction:
        x = [Fraction(values.get(v, 0)) for v in VARS]
        total = Fraction(0)
        for k, v in self.terms.items():
            term = v
            for xi, e in zip(x, k):
                if e:
                    term *= xi ** e
            total += term
        return total

    def __repr__(self):
        return f"RationalPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            v = self.terms[k]
            mono = " ".join(
                name if e == 1 else f"{name}{str(e).translate(_SUPER)}"
                for name, e in zip(("ν", "H", "K", "c"), k) if e)
            mag = abs(v)
            if mono and mag == 1:
                body = mono
            else:
                body = f"{mag}" + (f" {mono}" if mono else "")
            sign = "-" if v < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


nu = RationalPoly.var("nu")
H = RationalPoly.var("H")
K = RationalPoly.var("K")
c = RationalPoly.var("c")
ONE = RationalPoly.const(1)


def poly_r() -> RationalPoly:
    return 3 * (H**2 - K - c * nu**2)


def poly_W() -> RationalPoly:
    return (4 * H**2 * c * nu**2 * (H**2 - K - 2 * c + 3 * c * nu**2)
            - 4 * (H**2 - K + c * nu**2) * (K - c - H**2) * (K + 2 * c * nu**2))


def poly_p() -> RationalPoly:
    r = poly_r()
    w = ONE - nu**2
    return -poly_W() + r * (4 * H**2 * (H**2 - K + c * nu**2) + 2 * H**2 * c * w
                            + Fraction(1, 4) * c**2 * w**2)


def poly_nu_delta_nu() -> RationalPoly:
    """nu * Laplacian(nu) on a surface with K = const."""
    return (2 * K - 4 * H**2 - c) * nu**2 - c * nu**4


def poly_r_gradnu_sq() -> RationalPoly:
    """r * |grad nu|^2; contains W / c."""
    return (poly_r() * (-K + c * nu**2) * (ONE - nu**2)
            + poly_W() * RationalPoly.var("c", -1))


def _even_coeffs(f: RationalPoly) -> tuple:
    if not f.is_even("nu"):
        raise ShapeError("polynomial must be even in nu")
    if f.degree("nu") > 6:
        raise ShapeError(f"nu-degree {f.degree('nu')} exceeds 6")
    return f.coeff("nu", 2), f.coeff("nu", 4), f.coeff("nu", 6)


def poly_r_grad_sq_of(f: RationalPoly) -> RationalPoly:
    """r |grad f|^2 for an even f(nu) of nu-degree at most 6."""
    f2, f4, f6 = _even_coeffs(f)
    d = 2 * f2 + 4 * f4 * nu**2 + 6 * f6 * nu**4
    return nu**2 * d * d * poly_r_gradnu_sq()


def poly_r_delta_of(f: RationalPoly) -> RationalPoly:
    """r Laplacian(f) for an even f(nu) of nu-degree at most 6."""
    f2, f4, f6 = _even_coeffs(f)
    first = 2 * f2 + 4 * f4 * nu**2 + 6 * f6 * nu**4
    second = 2 * f2 + 12 * f4 * nu**2 + 30 * f6 * nu**4
    return first * poly_r() * poly_nu_delta_nu() + second * poly_r_gradnu_sq()


def build_M6(p: Optional[RationalPoly] = None, r: Optional[RationalPoly] = None) -> RationalPoly:
    """4K p^2 r^3 - p r^2 (r Dp) + r^2 (r |grad p|^2) - p^2 (r |grad r|^2) + p^2 r (r Dr)."""
    p = poly_p() if p is None else p
    r = poly_r() if r is None else r
    p2 = p * p
    r2 = r * r
    return (4 * K * p2 * r2 * r - p * r2 * poly_r_delta_of(p)
            + r2 * poly_r_grad_sq_of(p) - p2 * poly_r_grad_sq_of(r)
            + p2 * r * poly_r_delta_of(r))


# ---------------------------------------------------------------------------
# Expected values
# ---------------------------------------------------------------------------

def expected_coefficients() -> dict:
    return {
        "p6": -Fraction(3, 4) * c**3,
        "p4": -Fraction(1, 4) * c**2 * (101 * H**2 - 29 * K + 26 * c),
        "r0": 3 * (H**2 - K),
        "r2": -3 * c,
        "(r|grad nu|^2)4": c * (17 * H**2 - 8 * K + 5 * c),
        "(r|grad nu|^2)6": 3 * c**2,
        "(nu Delta nu)2": 2 * K - 4 * H**2 - c,
        "(nu Delta nu)4": -c,
        "(M6)20": RationalPoly(),
        "(M6)18": -486 * c**9 * (4 * H**2 + c - K),
    }


M6_18_TEXT = "(M6)_18 = −486 c⁹ (4H² + c − K)"


@dataclass
class LemmaReport:
    checks: list = field(default_factory=list)
    m6_coefficients: dict = field(default_factory=dict)
    numeric_max_rel: float = 0.0

    @property
    def passed(self) -> bool:
        return all(ok for _, _, _, ok in self.checks)

    def failures(self) -> list:
        return [(n, e, g) for n, e, g, ok in self.checks if not ok]

    def to_json(self) -> dict:
        return {
            "pass": bool(self.passed),
            "checks": [{"name": n, "expected": str(e), "got": str(g), "pass": bool(ok)}
                       for n, e, g, ok in self.checks],
            "m6_coefficients": {str(k): str(v) for k, v in self.m6_coefficients.items()},
            "numeric_max_rel": float(self.numeric_max_rel),
        }


def _m6_float(nu_v: float, H_v: float, K_v: float, c_v: float,
              p: RationalPoly, r: RationalPoly) -> float:
    """Evaluate (M6) in floating point with the chain rule in nu.

    |grad nu|^2 and Laplacian(nu) are evaluated from their defining
    expressions; p and r are differentiated as numpy polynomials in nu.
    """
    def as_np(f: RationalPoly):
        coefs = [f.coeff("nu", n).evaluate(H=H_v, K=K_v, c=c_v) for n in range(f.degree("nu") + 1)]
        return np.polynomial.Polynomial(coefs)

    P, R = as_np(p), as_np(r)
    W = poly_W().evaluate(nu=nu_v, H=H_v, K=K_v, c=c_v)
    rv = R(nu_v)
    grad2 = (rv * (-K_v + c_v * nu_v**2) * (1 - nu_v**2) + W / c_v) / rv
    lap = (2 * K_v - 4 * H_v**2 - c_v) * nu_v - c_v * nu_v**3
    dP, ddP = P.deriv(1)(nu_v), P.deriv(2)(nu_v)
    dR, ddR = R.deriv(1)(nu_v), R.deriv(2)(nu_v)
    pv = P(nu_v)
    delta_p = ddP * grad2 + dP * lap
    delta_r = ddR * grad2 + dR * lap
    return (4 * K_v * pv**2 * rv**3 - pv * rv**3 * delta_p + rv**3 * dP**2 * grad2
            - pv**2 * rv * dR**2 * grad2 + pv**2 * rv**2 * delta_r)


def verify_lemma(p: Optional[RationalPoly] = None, r: Optional[RationalPoly] = None,
                 strict: bool = True, numeric_points: int = 20, seed: int = 0) -> LemmaReport:
    """Rebuild every coefficient in the degree argument and compare exactly.

    With ``strict`` a mismatch raises ``IdentityMismatch`` naming the first
    offending coefficient; otherwise the report records it.
    """
    p = poly_p() if p is None else p
    r = poly_r() if r is None else r
    exp = expected_coefficients()
    rg = poly_r_gradnu_sq()
    nd = poly_nu_delta_nu()
    m6 = build_M6(p, r)
    got = {
        "p6": p.coeff("nu", 6),
        "p4": p.coeff("nu", 4),
        "r0": r.coeff("nu", 0),
        "r2": r.coeff("nu", 2),
        "(r|grad nu|^2)4": rg.coeff("nu", 4),
        "(r|grad nu|^2)6": rg.coeff("nu", 6),
        "(nu Delta nu)2": nd.coeff("nu", 2),
        "(nu Delta nu)4": nd.coeff("nu", 4),
        "(M6)20": m6.coeff("nu", 20),
        "(M6)18": m6.coeff("nu", 18),
    }
    rep = LemmaReport()
    for name, want in exp.items():
        rep.checks.append((name, want, got[name], got[name] == want))
    rep.checks.append(("(r|grad nu|^2)6 = -c r2", -c * got["r2"], got["(r|grad nu|^2)6"],
                       got["(r|grad nu|^2)6"] == -c * got["r2"]))
    killed = got["(M6)18"].substitute("K", 4 * H**2 + c)
    rep.checks.append(("(M6)18 at K = 4H^2 + c", RationalPoly(), killed, killed.is_zero()))
    rep.checks.append(("p even of nu-degree 6", 6, p.degree("nu"),
                       p.is_even("nu") and p.degree("nu") == 6))
    rep.checks.append(("p of H-degree <= 6", "<= 6", p.degree("H"), p.degree("H") <= 6))
    rep.checks.append(("M6 even in nu", True, m6.is_even("nu"), m6.is_even("nu")))
    rep.m6_coefficients = m6.coefficients("nu")

    if numeric_points:
        rng = random.Random(seed)
        worst = 0.0
        for _ in range(numeric_points):
            vals = dict(nu=rng.uniform(0.1, 0.9), H=rng.uniform(0.1, 1.0),
                        K=rng.uniform(-2.0, 1.0), c=rng.choice((-1, 1)) * rng.uniform(0.5, 2.0))
            exact = m6.evaluate(**vals)
            flt = _m6_float(vals["nu"], vals["H"], vals["K"], vals["c"], p, r)
            worst = max(worst, abs(exact - flt) / max(abs(exact), abs(flt), 1e-300))
        rep.numeric_max_rel = worst
        rep.checks.append(("float assembly agrees (rel)", "< 1e-10", f"{worst:.3e}", worst < 1e-10))

    if strict and not rep.passed:
        name, want, have = rep.failures()[0]
        raise IdentityMismatch(f"{name}: expected {want}, got {have}")
    return rep


def format_report(rep: LemmaReport) -> str:
    lines = []
    for name, want, have, ok in rep.checks:
        lines.append(f"{'ok  ' if ok else 'FAIL'} {name}: {have}")
    lines.append("")
    lines.append("(M6) coefficients in nu:")
    for n in sorted(rep.m6_coefficients, reverse=True):
        coef = rep.m6_coefficients[n]
        lines.append(f"  nu^{n}: {len(coef.terms)} terms" if len(coef.terms) > 6 else f"  nu^{n}: {coef}")
    lines.append("")
    if rep.passed:
        lines.append(M6_18_TEXT)
    return "\n".join(lines)
