"""m-gonal forms and their translation into lattice cosets.

An m-gonal form sum a_i * P_m(x_i) with P_m(x) = ((m-2)x^2 - (m-4)x)/2
corresponds, after completing the square, to the coset with Gram
<4(m-2)^2 a_1, ...> and shift -(m-4)/(2(m-2)) * (1, ..., 1): the form
represents k exactly when the coset represents 8(m-2)k + (m-4)^2 sum a_i.
Representation, universality and regularity queries all route through
that correspondence (with a direct bounded search for dimensions other
than three).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import forms, reduction, regularity
from .forms import Coset


@dataclass(frozen=True)
class GonalForm:
    m: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))
        if self.m < 3:
            raise ValueError("polygonal order m must be at least 3")
        if not self.coeffs or any(a < 1 for a in self.coeffs):
            raise ValueError("coefficients must be positive integers")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def is_primitive(self) -> bool:
        g = 0
        for a in self.coeffs:
            g = gcd(g, a)
        return g == 1


def canonicalize(g: GonalForm) -> GonalForm:
    """Sort the coefficients; equivalent m-gonal forms agree after sorting."""
    return GonalForm(g.m, tuple(sorted(g.coeffs)))


def gonal_number(m: int, x: int) -> int:
    """Generalized m-gonal number at integer x."""
    num = (m - 2) * x * x - (m - 4) * x
    if num % 2:
        raise AssertionError("gonal numerator must be even")
    return num // 2


def gonal_conductor(m: int) -> int:
    """Conductor shared by every m-gonal form of a given order."""
    if m % 2 == 1:
        return 2 * (m - 2)
    if m % 4 == 2:
        return m - 2
    return (m - 2) // 2


@dataclass(frozen=True)
class ValueMap:
    """Affine bijection k <-> coset value: value = scale * k + offset."""

    scale: int
    offset: int

    def forward(self, k: int) -> int:
        return self.scale * k + self.offset

    def invert(self, value: int):
        num = value - self.offset
        if num % self.scale:
            return None
        return num // self.scale


def to_coset(g: GonalForm):
    """Coset realizing the m-gonal form, with the value map of the bijection."""
    m = g.m
    gram_diag = [4 * (m - 2) ** 2 * a for a in g.coeffs]
    shift_coord = Fraction(-(m - 4), 2 * (m - 2))
    coset = forms.diagonal_coset(gram_diag, [shift_coord] * g.n)
    vmap = ValueMap(scale=8 * (m - 2), offset=(m - 4) ** 2 * sum(g.coeffs))
    return coset, vmap


def _ceil_sqrt(fr: Fraction) -> int:
    if fr <= 0:
        return 0
    s = isqrt(fr.numerator // fr.denominator)
    while s * s < fr:
        s += 1
    return s


def direct_represents(g: GonalForm, k: int) -> bool:
    """Bounded search for sum a_i P_m(x_i) = k, any number of variables.

    Per-coordinate bound from completing the square:
    |x_i| <= 1 + ceil((m-4)/(2(m-2))) + ceil(sqrt(2k/((m-2)a_i))).
    """
    if k < 0:
        return False
    m = g.m
    base = 1 + max(0, -(-(m - 4) // (2 * (m - 2))))

    def rec(i, remaining):
        if i == g.n:
            return remaining == 0
        a = g.coeffs[i]
        bound = base + _ceil_sqrt(Fraction(2 * remaining, (m - 2) * a))
        for x in range(-bound, bound + 1):
            term = a * gonal_number(m, x)
            if term <= remaining and rec(i + 1, remaining - term):
                return True
        return False

    return rec(0, k)


def gonal_represents(g: GonalForm, k: int) -> bool:
    """Is k a value of the m-gonal form over the integers?"""
    if k < 0:
        return False
    if g.n == 3:
        coset, vmap = to_coset(g)
        return reduction.represents(coset, vmap.forward(k)) is not None
    return direct_represents(g, k)


def first_missing(g: GonalForm, limit: int):
    """Smallest 0 <= k <= limit not represented, or None if all are.

    Stages the enumeration so that forms failing early stay cheap.
    """
    coset, vmap = to_coset(g)
    if g.n != 3:
        for k in range(limit + 1):
            if not direct_represents(g, k):
                return k
        return None
    red = reduction.reduce(coset).coset
    stage = min(limit, 64)
    checked = -1
    while checked < limit:
        values = reduction.represented_values(red, vmap.forward(stage))
        for k in range(checked + 1, stage + 1):
            if vmap.forward(k) not in values:
                return k
        checked = stage
        if stage == limit:
            break
        stage = min(limit, stage * 16)
    return None


def is_universal_up_to(g: GonalForm, limit: int) -> bool:
    """True iff every integer 0 <= k <= limit is represented."""
    return first_missing(g, limit) is None


def is_regular_up_to(g: GonalForm, limit: int):
    """Regularity verdict of the associated coset up to the mapped bound."""
    if g.n != 3:
        raise ValueError("regularity checks are implemented for ternary forms")
    coset, vmap = to_coset(g)
    return regularity.check_regular(coset, vmap.forward(limit))


def universal_scan(m: int, coeff_max: int, limit: int):
    """Primitive nondecreasing triples (a, b, c) universal up to `limit`."""
    out = []
    for a in range(1, coeff_max + 1):
        for b in range(a, coeff_max + 1):
            for c in range(b, coeff_max + 1):
                if gcd(gcd(a, b), c) != 1:
                    continue
                g = GonalForm(m, (a, b, c))
                if is_universal_up_to(g, limit):
                    out.append((a, b, c))
    return out
