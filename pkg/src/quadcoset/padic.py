"""Local analysis over the p-adic integers.

Three engines live here:

* `jordan_decompose` splits a lattice over Z_p into scaled unimodular
  blocks by valuation-minimal pivoting (1x1 pivots, plus the binary even
  blocks at p = 2), keeping an exact change of basis.

* `LocalRepresenter` decides whether f(x) = a is solvable over Z_p by
  recursive descent: residues mod p with a unit gradient certify a root
  through Hensel lifting, singular residues x0 recurse on x = x0 + p*z
  with the common p-power divided out of the equation.  The recursion
  depth is capped by a bound on the gradient valuation of any solution,
  derived from the critical-value identity u^T H^-1 u = 2(a - min_R f),
  so exhausting the fuel proves insolvability.

* `local_class` produces a residue class r + p^k Z_p of values that the
  coset is guaranteed to represent, with k within the conductor-controlled
  bound.  Certificates come from one-variable sections f(b + t*y): after
  factoring out the common valuation of the section, a base point with
  unit (or, at p = 2, valuation <= 1) derivative certifies a full class.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import forms, linalg
from .errors import (
    DenominatorAtP,
    InternalCheckError,
    NotPrimitive,
    SingularGram,
)
from .forms import Coset
from .linalg import frac, mat, ord_p

_NODE_CAP = 200_000


def prime_factors(n: int):
    """Sorted prime divisors of |n| (trial division; desk-scale inputs)."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Jordan decomposition


@dataclass(frozen=True)
class JordanBlock:
    scale: int       # valuation e of the p^e scaling
    gram: tuple      # unimodular part, exact rationals with p-unit denominators
    rank: int


@dataclass(frozen=True)
class JordanSplitting:
    p: int
    blocks: tuple    # JordanBlock, scales strictly increasing
    basis: tuple     # rows U with U G U^T = block diagonal of p^e * gram

    def unimodular_rank(self) -> int:
        for b in self.blocks:
            if b.scale == 0:
                return b.rank
        return 0


def _val(x, p):
    return None if x == 0 else ord_p(x, p)


def jordan_decompose(c: Coset, p: int) -> JordanSplitting:
    """Jordan splitting of the lattice of `c` over Z_p."""
    gram = c.gram
    n = c.n
    if linalg.det(gram) == 0:
        raise SingularGram("gram determinant is zero")
    for row in gram:
        for x in row:
            if frac(x).denominator % p == 0:
                raise DenominatorAtP(f"gram denominators divisible by {p}; rescale first")

    g = [list(row) for row in gram]
    u = [list(row) for row in linalg.identity(n)]
    active = list(range(n))
    raw_blocks = []  # (scale, index tuple)

    def row_sub(k, i, coeff):
        for col in range(n):
            g[k][col] -= coeff * g[i][col]
            u[k][col] -= coeff * u[i][col]
        for col in range(n):
            g[col][k] -= coeff * g[col][i]

    while active:
        mval, where = None, None
        for ai, i in enumerate(active):
            v = _val(g[i][i], p)
            if v is not None and (mval is None or v < mval):
                mval, where = v, (i,)
        for ai, i in enumerate(active):
            for j in active[ai + 1:]:
                v = _val(g[i][j], p)
                if v is not None and (mval is None or v < mval):
                    mval, where = v, (i, j)
        if mval is None:
            raise SingularGram("degenerate block encountered")
        if len(where) == 2 and p != 2:
            # Odd p: fold the off-diagonal minimum onto the diagonal.
            i, j = where
            for col in range(n):
                g[i][col] += g[j][col]
                u[i][col] += u[j][col]
            for col in range(n):
                g[col][i] += g[col][j]
            where = (i,)
        if len(where) == 1:
            i = where[0]
            piv = g[i][i]
            for k in active:
                if k != i and g[k][i] != 0:
                    row_sub(k, i, g[k][i] / piv)
            raw_blocks.append((mval, (i,)))
            active.remove(i)
        else:
            i, j = where
            b2 = ((g[i][i], g[i][j]), (g[i][j], g[j][j]))
            inv = linalg.inverse(b2)
            for k in active:
                if k in (i, j):
                    continue
                c1 = inv[0][0] * g[k][i] + inv[0][1] * g[k][j]
                c2 = inv[1][0] * g[k][i] + inv[1][1] * g[k][j]
                if c1 != 0:
                    row_sub(k, i, c1)
                if c2 != 0:
                    row_sub(k, j, c2)
            raw_blocks.append((mval, (i, j)))
            active.remove(i)
            active.remove(j)

    # Assemble blocks sorted by scale, merging equal scales.
    raw_blocks.sort(key=lambda t: t[0])
    merged = []
    for scale, idx in raw_blocks:
        if merged and merged[-1][0] == scale:
            merged[-1] = (scale, merged[-1][1] + idx)
        else:
            merged.append((scale, idx))
    order = [i for _, idx in merged for i in idx]
    basis = tuple(tuple(u[i]) for i in order)
    blocks = []
    pe_cache = {}
    for scale, idx in merged:
        pe = pe_cache.setdefault(scale, Fraction(p) ** scale)
        sub = tuple(tuple(g[a][b] / pe for b in idx) for a in idx)
        for row in sub:
            for x in row:
                if x.denominator % p == 0:
                    raise InternalCheckError("non p-integral unimodular block")
        blocks.append(JordanBlock(scale=scale, gram=sub, rank=len(idx)))
    split = JordanSplitting(p=p, blocks=tuple(blocks), basis=basis)
    _verify_splitting(c, split)
    return split


def _verify_splitting(c: Coset, split: JordanSplitting):
    """Exact check: U G U^T equals the block diagonal reconstruction."""
    n = c.n
    recon = [[Fraction(0)] * n for _ in range(n)]
    pos = 0
    for b in split.blocks:
        pe = Fraction(split.p) ** b.scale
        for a in range(b.rank):
            for d in range(b.rank):
                recon[pos + a][pos + d] = b.gram[a][d] * pe
        pos += b.rank
    lhs = linalg.mat_mul(linalg.mat_mul(mat(split.basis), c.gram),
                         linalg.transpose(mat(split.basis)))
    if tuple(tuple(r) for r in recon) != tuple(tuple(r) for r in lhs):
        raise InternalCheckError("jordan reconstruction mismatch")
    if any(split.blocks[i].scale >= split.blocks[i + 1].scale
           for i in range(len(split.blocks) - 1)):
        raise InternalCheckError("jordan scales not strictly increasing")
    if sum(b.rank for b in split.blocks) != n:
        raise InternalCheckError("jordan ranks do not sum to the dimension")


def behaves_well(c: Coset, p: int) -> bool:
    """True iff the scale-zero Jordan block has rank at least 2."""
    return jordan_decompose(c, p).unimodular_rank() >= 2


# ---------------------------------------------------------------------------
# Integer model of s * f


@dataclass(frozen=True)
class IntModel:
    """Integer-coefficient model g = s * f used by all Z_p decisions."""

    s: int
    qd: tuple      # diagonal monomial coefficients s*G_ii
    qo: tuple      # off-diagonal monomial coefficients 2s*G_ij, keyed (i, j), i < j
    b: tuple       # linear coefficients s*(2Gv)_i
    g0: int        # constant s*Q(v)
    h: tuple       # gradient matrix H = 2sG (integer, symmetric)
    det_h: int

    @property
    def n(self):
        return len(self.qd)

    def value(self, x):
        n = self.n
        total = self.g0
        for i in range(n):
            total += self.qd[i] * x[i] * x[i] + self.b[i] * x[i]
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                total += self.qo[k] * x[i] * x[j]
                k += 1
        return total

    def gradient(self, x):
        return tuple(
            sum(self.h[i][j] * x[j] for j in range(self.n)) + self.b[i]
            for i in range(self.n)
        )

    def quad_only(self, x):
        """s * Q(x) without shift or constant."""
        n = self.n
        total = 0
        for i in range(n):
            total += self.qd[i] * x[i] * x[i]
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                total += self.qo[k] * x[i] * x[j]
                k += 1
        return total


def integer_model(c: Coset) -> IntModel:
    poly = forms.coset_to_polynomial(c)
    n = c.n
    coeffs = [poly.gram[i][i] for i in range(n)]
    coeffs += [2 * poly.gram[i][j] for i in range(n) for j in range(i + 1, n)]
    coeffs += list(poly.linear)
    coeffs.append(poly.constant)
    s = linalg.lcm_denominator(coeffs)
    qd = tuple(int(s * poly.gram[i][i]) for i in range(n))
    qo = tuple(int(2 * s * poly.gram[i][j]) for i in range(n) for j in range(i + 1, n))
    b = tuple(int(s * x) for x in poly.linear)
    g0 = int(s * poly.constant)
    h = tuple(tuple(int(2 * s * poly.gram[i][j]) for j in range(n)) for i in range(n))
    det_h = int(linalg.det(h))
    return IntModel(s=s, qd=qd, qo=qo, b=b, g0=g0, h=h, det_h=det_h)


# ---------------------------------------------------------------------------
# Local representability


class LocalRepresenter:
    """Decides f(x) = a over Z_p for one coset and prime, with memoization."""

    def __init__(self, c: Coset, p: int):
        if linalg.det(c.gram) == 0:
            raise SingularGram("gram determinant is zero")
        self.coset = c
        self.p = p
        self.model = integer_model(c)
        if self.model.det_h == 0:
            raise SingularGram("degenerate quadratic part")
        self._adj_h = linalg.adjugate(self.model.h)
        self._memo = {}

    def _beta_adj_beta(self):
        b = self.model.b
        return sum(
            self._adj_h[i][j] * b[i] * b[j]
            for i in range(self.model.n)
            for j in range(self.model.n)
        )

    def _fuel(self, w: int):
        """Depth bound: solutions have gradient valuation at most t_cap,
        so their branch certifies within t_cap + 1 substitutions."""
        p = self.p
        det_h = self.model.det_h
        two_d = Fraction(2 * (w - self.model.g0) * det_h + self._beta_adj_beta(), det_h)
        if two_d == 0:
            # Target equals the real minimum; the vertex is the only
            # candidate up to isotropic perturbations of bounded depth.
            z_integral = all(
                Fraction(
                    -sum(self._adj_h[i][j] * self.model.b[j] for j in range(self.model.n)),
                    det_h,
                ).denominator % p != 0
                for i in range(self.model.n)
            )
            if z_integral:
                return "vertex"
            t_cap = ord_p(det_h, p)
        else:
            t_cap = (ord_p(two_d, p) + ord_p(det_h, p)) // 2
        return max(t_cap, 0) + 3

    def decide(self, a: int) -> bool:
        w = self.model.s * a
        if w in self._memo:
            return self._memo[w]
        fuel = self._fuel(w)
        if fuel == "vertex":
            verdict = True
        else:
            m = self.model
            counter = [0]
            verdict = _solve_descend(
                m.qd, m.qo, m.b, m.g0 - w, self.p, fuel, counter
            )
        self._memo[w] = verdict
        return verdict


def _solve_descend(qd, qo, b, c, p, fuel, counter):
    """Does qd.x^2 + qo.xx + b.x + c = 0 have a root in Z_p^3?

    Branches over residues mod p: a root with unit gradient lifts by
    Hensel; singular roots x0 recurse on x = x0 + p z with the content
    divided out.  A branch whose division step removes only one power of
    p gains a unit constant and dies at the next level, so surviving
    branches strictly grow the gradient-valuation budget and `fuel`
    (from the caller's critical-value bound) caps the depth.
    """
    # Content reduction: dividing the whole equation by p keeps the roots.
    while True:
        nonzero = [v for v in (*qd, *qo, *b, c) if v]
        if not nonzero:
            return True
        if any(v % p for v in nonzero):
            break
        qd = (qd[0] // p, qd[1] // p, qd[2] // p)
        qo = (qo[0] // p, qo[1] // p, qo[2] // p)
        b = (b[0] // p, b[1] // p, b[2] // p)
        c = c // p
    if not any((*qd, *qo, *b)):
        return False  # unit constant and no variables
    if fuel <= 0:
        return False
    counter[0] += 1
    if counter[0] > _NODE_CAP:
        raise InternalCheckError("local descent width exceeded the cap")
    q0, q1, q2 = qd
    q01, q02, q12 = qo
    b0, b1, b2 = b
    for x0 in range(p):
        for x1 in range(p):
            for x2 in range(p):
                val = (
                    q0 * x0 * x0 + q1 * x1 * x1 + q2 * x2 * x2
                    + q01 * x0 * x1 + q02 * x0 * x2 + q12 * x1 * x2
                    + b0 * x0 + b1 * x1 + b2 * x2 + c
                )
                if val % p:
                    continue
                g0 = 2 * q0 * x0 + q01 * x1 + q02 * x2 + b0
                g1 = 2 * q1 * x1 + q01 * x0 + q12 * x2 + b1
                g2 = 2 * q2 * x2 + q02 * x0 + q12 * x1 + b2
                if g0 % p or g1 % p or g2 % p:
                    return True  # Hensel-liftable root
                if _solve_descend(
                    (p * q0, p * q1, p * q2),
                    (p * q01, p * q02, p * q12),
                    (g0, g1, g2),
                    val // p,
                    p,
                    fuel - 1,
                    counter,
                ):
                    return True
    return False


def _min_val(values, p, limit):
    """min ord_p over the entries, or None if all are 0 mod p^limit."""
    best = None
    plim = p ** limit
    for v in values:
        if v % plim == 0:
            continue
        t = 0
        while v % p == 0:
            v //= p
            t += 1
        if best is None or t < best:
            best = t
            if best == 0:
                return 0
    return best


@lru_cache(maxsize=512)
def _representer(c: Coset, p: int) -> LocalRepresenter:
    return LocalRepresenter(c, p)


def local_represents(c: Coset, p: int, a: int) -> bool:
    """True iff Q(x + v) = a has a solution with x in Z_p^n."""
    return _representer(c, p).decide(a)


# ---------------------------------------------------------------------------
# Local classes and the progression they generate


@dataclass(frozen=True)
class LocalClass:
    p: int
    residue: int
    exponent: int


@dataclass(frozen=True)
class ProgressionData:
    a: int
    r: int


def _section_certificates(model: IntModel, p: int, directions, bases):
    """Certified value classes (value, level) of g from one-variable sections.

    For the section g(b + t*y) = gamma + p^w (a' t^2 + b' t) with
    min(ord a', ord b') = 0, a base point t0 with dt = ord(2 a' t0 + b')
    certifies the class g(b + t0 y) + p^(w + 2 dt + 1) Z_p.
    """
    certs = []
    tau_range = range(4) if p == 2 else range(3)
    for y in directions:
        alpha = model.quad_only(y)
        if alpha == 0:
            continue
        for b0 in bases:
            grad = model.gradient(b0)
            beta = sum(g * yi for g, yi in zip(grad, y))
            gamma = model.value(b0)
            va = ord_p(alpha, p)
            vb = ord_p(beta, p) if beta else None
            wv = va if vb is None else min(va, vb)
            pw = p ** wv
            a1, b1 = alpha // pw, beta // pw
            for t0 in tau_range:
                deriv = 2 * a1 * t0 + b1
                if deriv == 0:
                    continue
                dt = ord_p(deriv, p)
                level = wv + 2 * dt + 1
                value = gamma + pw * (a1 * t0 * t0 + b1 * t0)
                certs.append((value, level))
    return certs


def _base_point_certificates(model: IntModel, p: int, depth: int):
    """Hensel certificates (value, 2t+1) from a box of base points."""
    certs = []
    pk = p ** depth
    n = model.n

    def rec(i, cur):
        if i == n:
            x = tuple(cur)
            grad = model.gradient(x)
            t = _min_val(grad, p, depth + 4)
            if t is not None:
                certs.append((model.value(x), 2 * t + 1))
            return
        for y in range(pk):
            cur.append(y)
            rec(i + 1, cur)
            cur.pop()

    rec(0, [])
    return certs


_SECTION_DIRECTIONS = None


def _directions(n):
    """+-e_i and e_i +- e_j sections; enough to reach the n0 valuation."""
    out = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append(tuple(e))
    for i in range(n):
        for j in range(i + 1, n):
            e = [0] * n
            e[i] = e[j] = 1
            out.append(tuple(e))
            e2 = list(e)
            e2[j] = -1
            out.append(tuple(e2))
    out.append(tuple(1 for _ in range(n)))
    return out


def local_class(c: Coset, p: int) -> LocalClass:
    """A residue class r + p^k Z_p of values represented by the coset over Z_p.

    k satisfies k <= 1 + ord_p(n0) + 2*[p == 2]; within that bound the
    smallest certifiable class is returned.
    """
    if not forms.is_primitive(c):
        raise NotPrimitive("local classes are computed for primitive cosets")
    model = integer_model(c)
    ideals = forms.norm_ideals(c)
    kbound = 1 + ord_p(ideals.n0_f, p) + (2 if p == 2 else 0)
    kbound = max(kbound, 0)
    sigma = ord_p(model.s, p) if model.s % p == 0 else 0

    if p == 2:
        base_depth = min(kbound + sigma, 3)
    elif p == 3:
        base_depth = min(kbound + sigma, 2)
    else:
        base_depth = 1
    certs = _base_point_certificates(model, p, base_depth)
    bases = [(0,) * model.n]
    for i in range(model.n):
        e = [0] * model.n
        e[i] = 1
        bases.append(tuple(e))
    certs += _section_certificates(model, p, _directions(model.n), bases)

    # Map certificates from g = s*f back to f.
    f_certs = []
    for value, level in certs:
        if value % model.s:
            raise InternalCheckError("certified g-value not divisible by the scale")
        f_certs.append((value // model.s, level - sigma))

    cover_mod = p ** kbound
    covered = bytearray(cover_mod)
    for value, level in f_certs:
        if level <= kbound:
            pl = p ** max(level, 0)
            base = value % pl
            for r in range(base, cover_mod, pl):
                covered[r] = 1
    for k in range(kbound + 1):
        pk = p ** k
        step = cover_mod // pk
        for r in range(pk):
            if all(covered[r + t * pk] for t in range(step)):
                return LocalClass(p=p, residue=r, exponent=k)
    raise InternalCheckError(
        f"no represented class within the exponent bound {kbound} at p = {p}"
    )


def progression_data(c: Coset) -> ProgressionData:
    """Combined progression r mod a covering the local classes at p | 2c."""
    cond = forms.conductor(c)
    primes = prime_factors(2 * cond)
    classes = [local_class(c, p) for p in primes]
    a = 1
    for cl in classes:
        a *= cl.p ** cl.exponent
    if a == 1:
        return ProgressionData(a=1, r=0)
    r = linalg.crt([cl.residue for cl in classes],
                   [cl.p ** cl.exponent for cl in classes])
    return ProgressionData(a=a, r=r)


def relevant_primes(c: Coset):
    """Primes where local failure is possible; elsewhere every a >= 0 works."""
    disc = frac(forms.discriminant(c))
    cond = forms.conductor(c)
    ps = {2}
    ps.update(prime_factors(cond))
    ps.update(prime_factors(disc.numerator))
    ps.update(prime_factors(disc.denominator))
    return sorted(ps)
