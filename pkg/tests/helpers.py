"""Random exact samplers shared by the test modules."""

import random
from fractions import Fraction

from cmclab import moebius as mb
from cmclab import pairs


def rand_fraction(rng: random.Random, num: int = 12, den: int = 7, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-num, num), rng.randint(1, den))
        if q or not nonzero:
            return q


def rand_positive(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 9), rng.randint(1, 9))


def rand_element(rng: random.Random, orientation=None) -> mb.MoebiusElement:
    while True:
        a, b, c, d = (rand_fraction(rng) for _ in range(4))
        if a * d - b * c > 0:
            break
    f = mb.MoebiusElement.make(a, b, c, d)
    o = rng.choice((1, -1)) if orientation is None else orientation
    return f if o > 0 else mb.compose(f, mb.ETA)


def rand_GY(rng: random.Random) -> mb.MoebiusElement:
    g = mb.diag(rand_positive(rng))
    return g if rng.random() < 0.5 else mb.compose(g, mb.XI)


def rand_D(rng: random.Random) -> mb.MoebiusElement:
    return mb.diag(rand_positive(rng))


def rand_GX(rng: random.Random) -> mb.MoebiusElement:
    t = mb.translation(rand_fraction(rng), rand_positive(rng))
    return t if rng.random() < 0.5 else mb.compose(t, mb.ETA)


def rand_precompose(rng: random.Random) -> mb.MoebiusElement:
    """Mixture that hits the special cosets often enough to matter."""
    r = rng.random()
    if r < 0.4:
        return rand_element(rng)
    if r < 0.55:
        return rand_GX(rng)
    if r < 0.7:
        return rand_GY(rng)
    if r < 0.8:
        return mb.compose(mb.ETA, rand_GY(rng))
    s = rand_fraction(rng)
    f = mb.m(s) if rng.random() < 0.5 else mb.compose(mb.ETA, mb.m(s))
    return mb.compose(mb.compose(rand_GY(rng), f), rand_GY(rng))


def rand_class(rng: random.Random, families=(pairs.ARL, pairs.HEL, pairs.CYL)) -> pairs.CmcClass:
    fam = rng.choice(families)
    if fam == pairs.CYL:
        return pairs.CmcClass.cylinder(rand_fraction(rng, nonzero=True))
    if fam == pairs.SLICE:
        return pairs.CmcClass(pairs.SLICE)
    return pairs.CmcClass(fam, rand_precompose(rng))


def rand_pair(rng: random.Random):
    """Random pair; the second class is often built from the first so that
    every bucket is reachable."""
    first = rand_class(rng)
    r = rng.random()
    if first.family == pairs.CYL:
        second = pairs.CmcClass.cylinder(rand_fraction(rng, nonzero=True)) if r < 0.8 else rand_class(rng)
    elif r < 0.3:
        second = rand_class(rng)
    else:
        fam = rng.choice((pairs.ARL, pairs.HEL))
        second = pairs.CmcClass(fam, mb.compose(rand_precompose(rng), first.precompose))
    return first, second
