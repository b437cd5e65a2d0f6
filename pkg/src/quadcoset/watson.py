"""Watson transformations and regularity-preserving coset descent.

Lambda_m(L) is the sublattice of x in L with Q(x + z) = Q(z) mod m for all
z; it is computed by filtering the finite quotient L/mL, which is valid
for every m because mL always lies inside.  The Watson map rescales
Lambda_p(L) to restore the norm ideal and strictly divides the
discriminant; `coset_descend` carries the shift along as p^j * v, where j
is the multiplicative order of p modulo the conductor, preserving
conductor and primitivity.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import forms, linalg, padic
from .errors import (
    BehavesWellAtP,
    EvenPrime,
    InternalCheckError,
    NotIntegralLattice,
    NotPrimitive,
    PrimeDividesConductor,
    PrimeDividesNorm,
)
from .forms import Coset
from .linalg import frac, frac_gcd, mat, ord_p


def lattice_norm(gram) -> Fraction:
    """Generator of the ideal spanned by Q on the lattice."""
    n = len(gram)
    vals = [gram[i][i] for i in range(n)]
    vals += [2 * gram[i][j] for i in range(n) for j in range(i + 1, n)]
    return frac_gcd(vals)


def _norm_scale(gram, m: int) -> int:
    """Scaling factor making the congruence conditions integer divisibilities.

    Integral lattices work for every m; lattices with norm ideal inside
    (1/2)Z work for odd m after doubling (2 is a unit mod m, so the
    valuation conditions are unchanged).
    """
    norm = lattice_norm(gram)
    if norm.denominator == 1:
        return 1
    if norm.denominator == 2 and m % 2 == 1:
        return 2
    raise NotIntegralLattice(
        f"norm ideal {norm} not inside Z (nor half-integral with odd modulus)"
    )


def lambda_sublattice(gram, m: int):
    """Basis (rows, in L-coordinates) of Lambda_m(L).

    Filters the quotient L/mL by Q(x) = 0 and 2B(x, e_j) = 0 mod m, which
    is exhaustive because mL always lies inside Lambda_m(L).
    """
    if m < 1:
        raise ValueError("m must be positive")
    s = _norm_scale(gram, m)
    n = len(gram)
    if m == 1:
        return linalg.int_identity(n)
    gens = []
    for x in itertools.product(range(m), repeat=n):
        if not any(x):
            continue
        q = s * sum(gram[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        if q.denominator != 1 or int(q) % m:
            continue
        bad = False
        for j in range(n):
            b = s * 2 * sum(gram[i][j] * x[i] for i in range(n))
            if b.denominator != 1 or int(b) % m:
                bad = True
                break
        if bad:
            continue
        gens.append(x)
    for i in range(n):
        row = [0] * n
        row[i] = m
        gens.append(tuple(row))
    basis = linalg.hnf_rows(gens)
    if len(basis) != n:
        raise InternalCheckError("lambda sublattice has wrong rank")
    return basis


def _watson_full(gram, p: int):
    """(scaled gram, scale exponent i, sublattice basis) of the Watson map."""
    if p == 2:
        raise EvenPrime("the Watson map is defined for odd primes")
    n_l = lattice_norm(gram)
    if ord_p(n_l, p) != 0:
        raise PrimeDividesNorm(f"{p} divides the norm ideal generator {n_l}")
    basis = lambda_sublattice(gram, p)
    g_lambda = linalg.mat_mul(linalg.mat_mul(mat(basis), mat(gram)),
                              linalg.transpose(mat(basis)))
    n_lambda = lattice_norm(g_lambda)
    if n_lambda == p * n_l:
        i = 1
    elif n_lambda == p * p * n_l:
        i = 2
    else:
        raise InternalCheckError(
            f"norm of Lambda_p is {n_lambda}, neither p nor p^2 times {n_l}"
        )
    scaled = tuple(tuple(x / Fraction(p) ** i for x in row) for row in g_lambda)
    if lattice_norm(scaled) != n_l:
        raise InternalCheckError("Watson map failed to restore the norm ideal")
    return scaled, i, basis


def watson_map(gram, p: int):
    """Watson transform of an integral lattice at an odd prime: (Gram, i)."""
    scaled, i, _ = _watson_full(gram, p)
    return scaled, i


@dataclass(frozen=True)
class WatsonStep:
    p: int
    scale_exponent: int   # i in {1, 2}: power of p divided out of the form
    shift_order: int      # j: multiplicative order of p modulo the conductor
    disc_drop: int        # t: d(before) / d(after) = p^t
    before: Coset
    after: Coset

    def to_record(self) -> dict:
        return {
            "p": self.p,
            "i": self.scale_exponent,
            "j": self.shift_order,
            "t": self.disc_drop,
            "gram_before": forms.coset_to_record(self.before)["gram"],
            "shift_before": forms.coset_to_record(self.before)["shift"],
            "gram_after": forms.coset_to_record(self.after)["gram"],
            "shift_after": forms.coset_to_record(self.after)["shift"],
        }


def coset_descend(c: Coset, p: int) -> WatsonStep:
    """One Watson descent step at an odd prime where the coset misbehaves."""
    if p == 2:
        raise EvenPrime("descent is defined for odd primes")
    cond = forms.conductor(c)
    if cond % p == 0:
        raise PrimeDividesConductor(f"{p} divides the conductor {cond}")
    if not forms.is_primitive(c):
        raise NotPrimitive("descent requires a primitive coset")
    if padic.behaves_well(c, p):
        raise BehavesWellAtP(f"unimodular rank at {p} is already >= 2")

    j = linalg.multiplicative_order(p, cond)
    scaled, i, basis = _watson_full(c.gram, p)

    # Shift carried along as p^j * v, re-expressed in the sublattice basis.
    w_l = linalg.vec_scale(Fraction(p) ** j, c.shift)
    w_new = linalg.vec_mat(w_l, linalg.inverse(mat(basis)))

    # Localization checks of the carried shift:
    # at q | c: (p^j - 1) v must be integral, so the coset is unchanged there;
    # at q = p: the new coordinates must be p-integral;
    # at q not dividing pc: the sublattice index must be a power of p.
    if any((frac(x) * (p ** j - 1)).denominator != 1 for x in c.shift):
        raise InternalCheckError("(p^j - 1) v is not integral")
    if any(frac(x).denominator % p == 0 for x in w_new):
        raise InternalCheckError("carried shift not p-integral in the sublattice")
    index = abs(int(linalg.det(basis)))
    reduced_index = index
    while reduced_index % p == 0:
        reduced_index //= p
    if reduced_index != 1:
        raise InternalCheckError("sublattice index is not a power of p")

    out = Coset(scaled, w_new)
    ratio = frac(forms.discriminant(c)) / frac(forms.discriminant(out))
    t = ord_p(ratio, p)
    if ratio != Fraction(p) ** t:
        raise InternalCheckError("discriminant drop is not a power of p")
    if ord_p(forms.discriminant(c), p) >= 2 and t not in (1, 2, 4):
        raise InternalCheckError(f"discriminant drop t = {t} outside {{1,2,4}}")
    if forms.conductor(out) != cond:
        raise InternalCheckError("descent changed the conductor")
    if not forms.is_primitive(out):
        raise InternalCheckError("descent lost primitivity")
    return WatsonStep(
        p=p, scale_exponent=i, shift_order=j, disc_drop=t, before=c, after=out
    )


def descend_chain(c: Coset):
    """Apply descent at misbehaving odd primes (smallest first) to exhaustion.

    Returns the final coset, which behaves well at every odd prime not
    dividing the conductor, together with the step log.
    """
    if not forms.is_primitive(c):
        raise NotPrimitive("descent requires a primitive coset")
    steps = []
    cur = c
    cond = forms.conductor(c)
    while True:
        disc = frac(forms.discriminant(cur))
        candidates = [
            p
            for p in padic.prime_factors(disc.numerator)
            if p != 2 and cond % p != 0 and not padic.behaves_well(cur, p)
        ]
        if not candidates:
            break
        step = coset_descend(cur, min(candidates))
        steps.append(step)
        cur = step.after
    final_ratio = frac(forms.discriminant(c)) / frac(forms.discriminant(cur))
    if final_ratio.denominator != 1:
        raise InternalCheckError("final discriminant does not divide the initial one")
    return cur, steps
