"""Quadratic polynomials f(x) = Q(x+v) and their lattice-coset view.

A :class:`Coset` is a lattice given by an exact rational Gram matrix plus a
rational shift vector; a :class:`QuadPolynomial` is the expanded coefficient
view.  The two are interconvertible and all invariants (conductor, norm
ideals, primitivity, discriminant) are computed exactly.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import (
    NotComplete,
    NotPositiveDefinite,
    NotUnimodular,
    SingularGram,
)
from . import linalg
from .linalg import frac, frac_gcd, mat, vec


@dataclass(frozen=True)
class QuadPolynomial:
    """Coefficient view f(x) = sum gram[i][j] x_i x_j + sum linear[i] x_i + constant."""

    gram: tuple
    linear: tuple
    constant: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gram", mat(self.gram))
        object.__setattr__(self, "linear", vec(self.linear))
        object.__setattr__(self, "constant", frac(self.constant))
        if not linalg.is_symmetric(self.gram):
            raise ValueError("gram matrix must be symmetric")
        if len(self.linear) != len(self.gram):
            raise ValueError("linear part has wrong dimension")

    @property
    def n(self) -> int:
        return len(self.gram)

    def quad(self, x):
        x = vec(x)
        return linalg.dot(x, linalg.mat_vec(self.gram, x))

    def evaluate(self, x):
        x = vec(x)
        return self.quad(x) + linalg.dot(self.linear, x) + self.constant

    def f0(self, x):
        """Value with the constant term dropped."""
        return self.evaluate(x) - self.constant

    def is_integral(self) -> bool:
        """True iff f takes integer values on all integer vectors.

        Checked on the finite generating set {0, +-e_i, e_i + e_j}: by the
        parallelogram identity every other value is an integer combination
        of these.
        """
        n = self.n
        points = [tuple(0 for _ in range(n))]
        for i in range(n):
            e = [0] * n
            e[i] = 1
            points.append(tuple(e))
            points.append(tuple(-x for x in e))
        for i in range(n):
            for j in range(i + 1, n):
                e = [0] * n
                e[i] = e[j] = 1
                points.append(tuple(e))
        return all(self.evaluate(pt).denominator == 1 for pt in points)


@dataclass(frozen=True)
class Coset:
    """Lattice coset L + v: Gram matrix of a basis of L and coordinates of v."""

    gram: tuple
    shift: tuple

    def __post_init__(self):
        object.__setattr__(self, "gram", mat(self.gram))
        object.__setattr__(self, "shift", vec(self.shift))
        if not linalg.is_symmetric(self.gram):
            raise ValueError("gram matrix must be symmetric")
        if len(self.shift) != len(self.gram):
            raise ValueError("shift has wrong dimension")

    @property
    def n(self) -> int:
        return len(self.gram)

    def quad(self, x):
        x = vec(x)
        return linalg.dot(x, linalg.mat_vec(self.gram, x))

    def bilinear(self, x, y):
        return linalg.dot(vec(x), linalg.mat_vec(self.gram, vec(y)))

    def evaluate(self, x):
        """f(x) = Q(x + v) for an integer (or rational) vector x."""
        return self.quad(linalg.vec_add(vec(x), self.shift))

    def is_positive_definite(self) -> bool:
        return linalg.is_positive_definite(self.gram)

    def is_integral(self) -> bool:
        return coset_to_polynomial(self).is_integral()


@dataclass(frozen=True)
class NormIdeals:
    """Generators of the three value ideals attached to f = Q(x+v)."""

    n_f: Fraction   # ideal of values of Q on Z^n
    b_f: Fraction   # ideal {2B(v, x) : x in Z^n}
    n0_f: Fraction  # ideal of values of f0 = f - f(0)


def coset_to_polynomial(c: Coset) -> QuadPolynomial:
    """Expand Q(x + v) into coefficient form."""
    two_gv = linalg.vec_scale(2, linalg.mat_vec(c.gram, c.shift))
    return QuadPolynomial(c.gram, two_gv, c.quad(c.shift))


def polynomial_to_coset(f: QuadPolynomial) -> Coset:
    """Solve 2 G v = linear for the unique shift; f must be complete."""
    if linalg.det(f.gram) == 0:
        raise SingularGram("gram determinant is zero")
    v = linalg.solve(f.gram, tuple(x / 2 for x in f.linear))
    c = Coset(f.gram, v)
    if c.quad(v) != f.constant:
        raise NotComplete(
            f"constant term {f.constant} differs from Q(v) = {c.quad(v)}"
        )
    return c


def conductor(c: Coset) -> int:
    """Least positive integer t with t * shift integral."""
    return lcm(*(frac(x).denominator for x in c.shift)) if c.shift else 1


def discriminant(c: Coset) -> Fraction:
    return linalg.det(c.gram)


def _generating_points(n):
    """0, +-e_i, e_i + e_j: the values there generate the value ideal."""
    points = [tuple(0 for _ in range(n))]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        points.append(tuple(e))
        points.append(tuple(-x for x in e))
    for i in range(n):
        for j in range(i + 1, n):
            e = [0] * n
            e[i] = e[j] = 1
            points.append(tuple(e))
    return points


def norm_ideals(c: Coset) -> NormIdeals:
    """Exact generators of the ideals n, b and n0 attached to the coset."""
    n = c.n
    diag = [c.gram[i][i] for i in range(n)]
    cross = [2 * c.gram[i][j] for i in range(n) for j in range(i + 1, n)]
    n_f = frac_gcd(diag + cross)
    two_gv = linalg.vec_scale(2, linalg.mat_vec(c.gram, c.shift))
    b_f = frac_gcd(two_gv)
    f0_vals = []
    poly = coset_to_polynomial(c)
    for pt in _generating_points(n):
        if any(pt):
            f0_vals.append(poly.f0(pt))
    n0_f = frac_gcd(f0_vals)
    return NormIdeals(n_f=n_f, b_f=b_f, n0_f=n0_f)


def value_ideal(c: Coset) -> Fraction:
    """Generator of the ideal spanned by all values f(x), x in Z^n."""
    poly = coset_to_polynomial(c)
    vals = [poly.evaluate(pt) for pt in _generating_points(c.n)]
    # f(x) - f(0) lies in the ideal of the f0 generators, so these suffice.
    return frac_gcd(vals)


def is_primitive(c: Coset) -> bool:
    """True iff the values of f generate the unit ideal.

    The ideal is computed exactly from the finite generating set; the box
    scan over |a1|<=30, |a2|<=21, |a3|<=8 yields the same gcd and is kept
    as a cross-check in the test suite.
    """
    if not c.is_positive_definite():
        raise NotPositiveDefinite("primitivity is defined for positive cosets here")
    return value_ideal(c) == 1


def transform(c: Coset, T, u) -> Coset:
    """Equivalent coset of g(x) = f(x T + u) for unimodular integer T."""
    T = mat(T)
    u = vec(u)
    d = linalg.det(T)
    if d not in (1, -1):
        raise NotUnimodular(f"det T = {d}")
    if any(x.denominator != 1 for row in T for x in row):
        raise NotUnimodular("T must be an integer matrix")
    if any(x.denominator != 1 for x in u):
        raise ValueError("u must be an integer vector")
    gram = linalg.mat_mul(linalg.mat_mul(T, c.gram), linalg.transpose(T))
    shift = linalg.vec_mat(linalg.vec_add(c.shift, u), linalg.inverse(T))
    return Coset(gram, shift)


def frac_to_str(x) -> str:
    x = frac(x)
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def coset_to_record(c: Coset) -> dict:
    return {
        "gram": [[frac_to_str(x) for x in row] for row in c.gram],
        "shift": [frac_to_str(x) for x in c.shift],
    }


def coset_from_record(rec: dict) -> Coset:
    gram = [[frac_from_str(x) for x in row] for row in rec["gram"]]
    shift = [frac_from_str(x) for x in rec["shift"]]
    return Coset(gram, shift)


def diagonal_coset(diag, shift=None) -> Coset:
    """Convenience constructor for diagonal Gram matrices."""
    n = len(diag)
    gram = [[frac(diag[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    return Coset(gram, shift if shift is not None else [0] * n)
