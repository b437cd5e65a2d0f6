"""Small exact linear algebra helpers over Fraction and int matrices.

Matrices are tuples of row tuples; vectors are plain tuples.  Everything
here is dimension-agnostic but only exercised for n <= 3.
"""

from fractions import Fraction
from math import gcd, lcm


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def mat(rows):
    return tuple(tuple(frac(x) for x in row) for row in rows)


def vec(entries):
    return tuple(frac(x) for x in entries)


def int_mat(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def int_identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m))


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v, m):
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def vec_add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v):
    return tuple(c * x for x in v)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def det(m):
    """Determinant by fraction-free-ish cofactor expansion (n <= 4 in practice)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    total = 0
    for j in range(n):
        minor = tuple(row[:j] + row[j + 1:] for row in m[1:])
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def adjugate(m):
    n = len(m)
    if n == 1:
        return ((type(m[0][0])(1),),)
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(r[:j] + r[j + 1:] for k, r in enumerate(m) if k != i)
            row.append((-1) ** (i + j) * det(minor))
        cof.append(tuple(row))
    return transpose(tuple(cof))


def inverse(m):
    d = det(m)
    if d == 0:
        raise ZeroDivisionError("matrix is singular")
    adj = adjugate(m)
    return tuple(tuple(frac(x) / d for x in row) for row in adj)


def solve(m, rhs):
    """Solve m x = rhs exactly (rhs a vector)."""
    return mat_vec(inverse(m), rhs)


def is_symmetric(m):
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def is_positive_definite(m):
    """Sylvester criterion on exact leading principal minors."""
    n = len(m)
    for k in range(1, n + 1):
        if det(tuple(row[:k] for row in m[:k])) <= 0:
            return False
    return True


def lcm_denominator(values) -> int:
    out = 1
    for x in values:
        out = lcm(out, frac(x).denominator)
    return out


def frac_gcd(values) -> Fraction:
    """Nonnegative generator of the fractional ideal spanned by `values`."""
    num, den = 0, 1
    for x in values:
        x = frac(x)
        num = gcd(num * x.denominator, x.numerator * den)
        den = den * x.denominator
        g = gcd(num, den)
        num //= g
        den //= g
    return Fraction(num, den)


def ord_p(x, p: int) -> int:
    """p-adic valuation of a rational; raises on x == 0."""
    x = frac(x)
    if x == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def xgcd(a: int, b: int):
    """Return (g, x, y) with g = gcd(a, b) = a x + b y."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def hnf_rows(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns the nonzero rows; used to extract a basis of the row span
    over Z from a redundant generating set.
    """
    work = [list(r) for r in rows]
    n_cols = len(work[0])
    pivot_row = 0
    for col in range(n_cols):
        # Clear the column below pivot_row with gcd row operations.
        for i in range(pivot_row + 1, len(work)):
            a, b = work[pivot_row][col], work[i][col]
            if b == 0:
                continue
            if a == 0:
                work[pivot_row], work[i] = work[i], work[pivot_row]
                continue
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            r_p, r_i = work[pivot_row], work[i]
            for j in range(n_cols):
                u, w = r_p[j], r_i[j]
                r_p[j] = x * u + y * w
                r_i[j] = -bg * u + ag * w
        if work[pivot_row][col] != 0:
            if work[pivot_row][col] < 0:
                work[pivot_row] = [-x for x in work[pivot_row]]
            # Reduce the entries above the pivot.
            piv = work[pivot_row][col]
            for i in range(pivot_row):
                q = work[i][col] // piv
                if q:
                    work[i] = [u - q * w for u, w in zip(work[i], work[pivot_row])]
            pivot_row += 1
            if pivot_row == len(work):
                break
    return tuple(tuple(r) for r in work[:pivot_row] if any(r))


def multiplicative_order(a: int, n: int) -> int:
    """Order of a modulo n; n >= 1 and gcd(a, n) == 1. Order mod 1 is 1."""
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    k, x = 1, a % n
    while x != 1:
        x = (x * a) % n
        k += 1
    return k


def crt(residues, moduli):
    """Least nonnegative solution of x = r_i mod m_i (moduli pairwise coprime)."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        g, s, _ = xgcd(m, mi)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        x = x + m * ((s * ((r - x) // g)) % (mi // g))
        m = m * mi // g
        x %= m
    return x
