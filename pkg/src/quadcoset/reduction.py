"""Minkowski reduction of positive ternary cosets and value enumeration.

`reduce` brings a positive coset to a reduced representative (sorted
successive minima on the diagonal, size-reduced off-diagonal entries,
minimum of f attained at the zero vector) while recording the witnessing
equivalence.  `enumerate_represented` lists all integer values up to a
bound with one witness each, using exact ellipsoid bounds; the bulk scan
runs on int64 arrays after exact denominator clearing, with a pure-Python
big-integer fallback.
"""

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt

import numpy as np

from . import forms, linalg
from .errors import InternalCheckError, NotPositiveDefinite, NotReduced
from .forms import Coset
from .linalg import frac, mat

_INT64_GUARD = 2 ** 62


@dataclass(frozen=True)
class ReducedCoset:
    """Reduced representative plus the equivalence (T, u) that produced it."""

    coset: Coset
    minima: tuple
    transform_applied: tuple  # (T, u) with coset == transform(original, T, u)


def _diag(gram):
    return tuple(gram[i][i] for i in range(len(gram)))


# Scan vectors with last nonzero coordinate +1; Q(x) >= Q(e_k) on these is
# the full Minkowski condition set in dimension 3.
_SCAN3 = tuple(
    x
    for x in itertools.product((-1, 0, 1), repeat=3)
    if any(x) and x[max(i for i in range(3) if x[i] != 0)] == 1
)

# Wider improvement scan used while reducing; entries up to 2 cost nothing
# and catch violations in one step instead of several.
_IMPROVE3 = tuple(
    x
    for x in itertools.product((-2, -1, 0, 1, 2), repeat=3)
    if any(x) and abs(x[max(i for i in range(3) if x[i] != 0)]) == 1
)


def gram_is_minkowski(gram) -> bool:
    d = _diag(gram)
    if any(d[i] > d[i + 1] for i in range(len(d) - 1)):
        return False
    for x in _SCAN3:
        k = max(i for i in range(3) if x[i] != 0)
        q = linalg.dot(x, linalg.mat_vec(gram, x))
        if q < d[k]:
            return False
    return True


def _quad(gram, x):
    return linalg.dot(x, linalg.mat_vec(gram, x))


def _nearest_int_half_to_zero(x: Fraction) -> int:
    """Round to nearest integer, halves toward zero (keeps |B| = Q/2 stable)."""
    f = floor(x)
    r = x - f
    if r > Fraction(1, 2):
        return f + 1
    if r < Fraction(1, 2):
        return f
    return f if f >= 0 else f + 1


_SIGNED_PERMS = None


def _signed_perms():
    global _SIGNED_PERMS
    if _SIGNED_PERMS is None:
        out = []
        for perm in itertools.permutations(range(3)):
            for signs in itertools.product((1, -1), repeat=3):
                rows = []
                for i in range(3):
                    row = [0, 0, 0]
                    row[perm[i]] = signs[i]
                    rows.append(tuple(row))
                out.append(tuple(rows))
        _SIGNED_PERMS = tuple(out)
    return _SIGNED_PERMS


def _apply_basis(cur: Coset, S) -> Coset:
    S = mat(S)
    gram = linalg.mat_mul(linalg.mat_mul(S, cur.gram), linalg.transpose(S))
    shift = linalg.vec_mat(cur.shift, linalg.inverse(S))
    return Coset(gram, shift)


def normalize_shift(gram, shift):
    """Translate the shift into its canonical cell.

    Brings coordinates into [0, 1), then picks the translate minimizing
    Q(v) among v + {0, -1}^3, verified against the exact ellipsoid search
    so the constant term is the true minimum of f; ties go to the
    lexicographically greatest shift (which prefers the [0, 1) corner).
    Returns (new_shift, integer translation w) with new_shift = shift + w.
    """
    v1 = tuple(x - floor(x) for x in shift)
    best_q = None
    best_v = None
    for corner in itertools.product((0, -1), repeat=3):
        v = linalg.vec_add(v1, corner)
        q = _quad(gram, v)
        if best_q is None or q < best_q or (q == best_q and v > best_v):
            best_q, best_v = q, v
    # The corner claim is exact for reduced Grams; the enumeration below
    # guards the min-at-zero invariant for any input.
    for y in _points_within(gram, v1, best_q):
        v = linalg.vec_add(v1, y)
        q = _quad(gram, v)
        if q < best_q or (q == best_q and v > best_v):
            best_q, best_v = q, v
    w = tuple(int(b - s) for b, s in zip(best_v, shift))
    return best_v, w


def reduce(c: Coset) -> ReducedCoset:
    """Minkowski-reduce a positive ternary coset, tracking the equivalence."""
    if c.n != 3:
        raise ValueError("reduction is implemented for ternary cosets only")
    if not c.is_positive_definite():
        raise NotPositiveDefinite("gram matrix is not positive definite")
    cur = c
    T = linalg.int_identity(3)
    u = (0, 0, 0)

    def apply(S):
        nonlocal cur, T
        cur = _apply_basis(cur, S)
        T = linalg.int_mat(linalg.mat_mul(mat(S), mat(T)))

    changed = True
    while changed:
        changed = False
        # Sort the diagonal (strict swaps only, so ties cannot cycle).
        d = _diag(cur.gram)
        for i in range(2):
            if d[i] > d[i + 1]:
                S = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
                order = [0, 1, 2]
                order[i], order[i + 1] = order[i + 1], order[i]
                for r, k in enumerate(order):
                    S[r][k] = 1
                apply(S)
                changed = True
                break
        if changed:
            continue
        # Size reduction: 2|B(e_i, e_j)| <= Q(e_i) for i < j.
        for i in range(3):
            for j in range(i + 1, 3):
                b = cur.gram[i][j]
                qi = cur.gram[i][i]
                r = _nearest_int_half_to_zero(b / qi)
                if r:
                    S = [list(row) for row in linalg.int_identity(3)]
                    S[j][i] = -r
                    apply(S)
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        # Replace e_k by a shorter combination if one exists.
        d = _diag(cur.gram)
        for x in _IMPROVE3:
            k = max(i for i in range(3) if x[i] != 0)
            if _quad(cur.gram, x) < d[k]:
                S = [list(row) for row in linalg.int_identity(3)]
                S[k] = list(x)
                apply(S)
                changed = True
                break

    # Canonical sign/permutation representative: lexicographically smallest
    # Minkowski-valid Gram among the 48 signed permutations (integer-scaled).
    g_int, _ = _int_scaled_gram(cur.gram)
    best = None
    for P in _signed_perms():
        gram = _int_conj(P, g_int)
        if _int_is_minkowski(gram):
            key = tuple(x for row in gram for x in row)
            if best is None or key < best[0]:
                best = (key, P)
    apply(best[1])

    shift, w = normalize_shift(cur.gram, cur.shift)
    if any(w):
        cur = Coset(cur.gram, shift)
        u = tuple(a + b for a, b in zip(u, linalg.vec_mat(w, mat(T))))
        u = tuple(int(x) for x in u)

    minima = _diag(cur.gram)
    disc = linalg.det(cur.gram)
    if disc > minima[0] * minima[1] * minima[2]:
        raise InternalCheckError("discriminant exceeds product of minima after reduction")
    return ReducedCoset(coset=cur, minima=minima, transform_applied=(T, u))


def is_reduced(c: Coset) -> bool:
    """Necessary reduction invariants, checkable without a full enumeration."""
    if c.n != 3 or not c.is_positive_definite():
        return False
    if not gram_is_minkowski(c.gram):
        return False
    d = _diag(c.gram)
    for i in range(3):
        e = [0, 0, 0]
        e[i] = 1
        if abs(2 * c.bilinear(c.shift, e)) > d[i]:
            return False
    q0 = c.quad(c.shift)
    for x in itertools.product((-1, 0, 1), repeat=3):
        if any(x) and c.evaluate(x) < q0:
            return False
    return True


def ensure_reduced(c: Coset):
    if not is_reduced(c):
        raise NotReduced("coset does not satisfy the reduction invariants")


def min_value(c: Coset) -> Fraction:
    """Minimum of Q(x + v) over integer vectors x."""
    red = reduce(c)
    return red.coset.quad(red.coset.shift)


def search_box_filter(minima, a) -> bool:
    """True iff any representation of a must lie in |a1|<=30, |a2|<=21, |a3|<=8."""
    mu1, mu2, mu3 = (frac(m) for m in minima)
    return frac(a) < min(Fraction(3, 2) * mu3, Fraction(7, 2) * mu2, 31 * mu1)


def _scaled_int_model(c: Coset):
    """(Ghat, M, w0, dv): f(x) = Y^T Ghat Y / M with Y = dv*x + w0 integral."""
    dg = linalg.lcm_denominator(x for row in c.gram for x in row)
    dv = linalg.lcm_denominator(c.shift)
    ghat = tuple(tuple(int(x * dg) for x in row) for row in c.gram)
    w0 = tuple(int(x * dv) for x in c.shift)
    return ghat, dg * dv * dv, w0, dv


def _coordinate_ranges(c: Coset, bound):
    """Exact integer ranges with (x_i + v_i)^2 <= bound * (G^-1)_ii."""
    if bound < 0:
        return None
    ginv = linalg.inverse(c.gram)
    dv = linalg.lcm_denominator(c.shift)
    w0 = tuple(int(x * dv) for x in c.shift)
    ranges = []
    for i in range(c.n):
        cap = frac(bound) * ginv[i][i] * dv * dv
        b = isqrt(cap.numerator // cap.denominator)
        # ceil((-b - w0)/dv) and floor((b - w0)/dv) in exact integers:
        lo = -((b + w0[i]) // dv)
        hi = (b - w0[i]) // dv
        ranges.append((lo, hi))
    return ranges


def _points_within(gram, shift, bound):
    """All integer x with Q(x + shift) <= bound, exact arithmetic."""
    if bound < 0:
        return []
    c = Coset(gram, shift)
    ghat, m, w0, dv = _scaled_int_model(c)
    cap = frac(bound) * m
    cap_int = cap.numerator // cap.denominator
    ranges = _coordinate_ranges(c, bound)
    out = []
    for x1 in range(ranges[0][0], ranges[0][1] + 1):
        y1 = dv * x1 + w0[0]
        for x2 in range(ranges[1][0], ranges[1][1] + 1):
            y2 = dv * x2 + w0[1]
            partial = ghat[0][0] * y1 * y1 + 2 * ghat[0][1] * y1 * y2 + ghat[1][1] * y2 * y2
            for x3 in range(ranges[2][0], ranges[2][1] + 1):
                y3 = dv * x3 + w0[2]
                val = partial + y3 * (2 * (ghat[0][2] * y1 + ghat[1][2] * y2) + ghat[2][2] * y3)
                if val <= cap_int:
                    out.append((x1, x2, x3))
    return out


def _enumerate_arrays(c: Coset, bound):
    """Yield (x1, x2, x3, val) int64 arrays of all points with scaled value <= M*bound."""
    ghat, m, w0, dv = _scaled_int_model(c)
    ranges = _coordinate_ranges(c, bound)
    cap = m * bound
    max_y = [max(abs(dv * lo + w), abs(dv * hi + w)) for (lo, hi), w in zip(ranges, w0)]
    worst = sum(
        abs(ghat[i][j]) * max_y[i] * max_y[j] for i in range(3) for j in range(3)
    )
    if worst >= _INT64_GUARD:
        yield from _enumerate_arrays_exact(c, bound)
        return
    (lo1, hi1), (lo2, hi2), (lo3, hi3) = ranges
    if lo2 > hi2 or lo3 > hi3:
        return
    x2 = np.arange(lo2, hi2 + 1, dtype=np.int64)
    x3 = np.arange(lo3, hi3 + 1, dtype=np.int64)
    y2 = (dv * x2 + w0[1])[:, None]
    y3 = (dv * x3 + w0[2])[None, :]
    base23 = ghat[1][1] * y2 * y2 + 2 * ghat[1][2] * y2 * y3 + ghat[2][2] * y3 * y3
    lin23 = 2 * (ghat[0][1] * y2 + ghat[0][2] * y3)
    for x1 in range(lo1, hi1 + 1):
        y1 = dv * x1 + w0[0]
        val = base23 + y1 * lin23 + ghat[0][0] * y1 * y1
        mask = val <= cap
        if not mask.any():
            continue
        i2, i3 = np.nonzero(mask)
        yield (
            np.full(i2.shape, x1, dtype=np.int64),
            x2[i2],
            x3[i3],
            val[mask],
        )


def _enumerate_arrays_exact(c: Coset, bound):
    """Big-integer fallback for the array enumeration."""
    ghat, m, w0, dv = _scaled_int_model(c)
    pts = _points_within(c.gram, c.shift, bound)
    if not pts:
        return
    vals = []
    for x in pts:
        y = [dv * x[i] + w0[i] for i in range(3)]
        vals.append(sum(ghat[i][j] * y[i] * y[j] for i in range(3) for j in range(3)))
    yield (
        np.array([p[0] for p in pts], dtype=object),
        np.array([p[1] for p in pts], dtype=object),
        np.array([p[2] for p in pts], dtype=object),
        np.array(vals, dtype=object),
    )


def enumerate_represented(c, bound: int):
    """All integers <= bound of the form Q(x + v), with one witness each.

    The coset must already be reduced.  Witnesses are canonical: smallest
    coordinate norm, then lexicographically greatest (prefers the positive
    orthant among sign twins).
    """
    if isinstance(c, ReducedCoset):
        c = c.coset
    ensure_reduced(c)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    _, m, _, _ = _scaled_int_model(c)
    chunks = list(_enumerate_arrays(c, bound))
    if not chunks:
        return []
    x1 = np.concatenate([ch[0] for ch in chunks])
    x2 = np.concatenate([ch[1] for ch in chunks])
    x3 = np.concatenate([ch[2] for ch in chunks])
    val = np.concatenate([ch[3] for ch in chunks])
    integral = val % m == 0
    x1, x2, x3, val = x1[integral], x2[integral], x3[integral], val[integral]
    if val.size == 0:
        return []
    val = val // m
    norm = x1 * x1 + x2 * x2 + x3 * x3
    order = np.lexsort((-x3, -x2, -x1, norm, val))
    val, x1, x2, x3 = val[order], x1[order], x2[order], x3[order]
    uniq, first = np.unique(val, return_index=True)
    return [
        (int(v), (int(x1[i]), int(x2[i]), int(x3[i])))
        for v, i in zip(uniq, first)
    ]


def represented_values(c, bound: int):
    """Set of integers <= bound represented by the (reduced) coset."""
    return {v for v, _ in enumerate_represented(c, bound)}


def _witnesses_in_reduced(red: Coset, a: int):
    """All integer witnesses of the value a for a reduced coset."""
    _, m, _, _ = _scaled_int_model(red)
    target = m * a
    found = []
    for x1, x2, x3, val in _enumerate_arrays(red, a):
        hit = val == target
        if hit.any():
            found.extend(zip(x1[hit].tolist(), x2[hit].tolist(), x3[hit].tolist()))
    return [(int(a1), int(a2), int(a3)) for a1, a2, a3 in found]


def represents(c: Coset, a: int):
    """Witness x with Q(x + v) = a, or None.

    The search runs in the reduced frame; the canonical witness there is
    mapped back through the recorded equivalence.
    """
    if not c.is_positive_definite():
        raise NotPositiveDefinite("representation search needs a positive coset")
    if a < 0:
        return None
    red = reduce(c)
    if frac(a) < red.coset.quad(red.coset.shift):
        return None
    cands = _witnesses_in_reduced(red.coset, a)
    if not cands:
        return None
    best = min(cands, key=lambda x: (x[0] ** 2 + x[1] ** 2 + x[2] ** 2,
                                      (-x[0], -x[1], -x[2])))
    T, u = red.transform_applied
    mapped = linalg.vec_add(linalg.vec_mat(best, mat(T)), u)
    return tuple(int(x) for x in mapped)


def count_representations(c: Coset, a: int) -> int:
    """Number of integer vectors x with Q(x + v) = a."""
    if a < 0:
        return 0
    red = reduce(c)
    return len(_witnesses_in_reduced(red.coset, a))


def count_spectrum(c: Coset, bound: int) -> dict:
    """Map value -> number of representations, for integer values <= bound."""
    red = reduce(c).coset
    _, m, _, _ = _scaled_int_model(red)
    counts = {}
    for _, _, _, val in _enumerate_arrays(red, bound):
        ok = val % m == 0
        if not ok.any():
            continue
        uniq, cnt = np.unique(val[ok] // m, return_counts=True)
        for v, k in zip(uniq.tolist(), cnt.tolist()):
            counts[int(v)] = counts.get(int(v), 0) + int(k)
    return counts


# Integer-scaled fast path for the orbit and automorphism machinery: the
# Gram is multiplied by the lcm of its denominators so all checks run on
# plain ints.


def _int_scaled_gram(gram):
    d = linalg.lcm_denominator(x for row in gram for x in row)
    return tuple(tuple(int(x * d) for x in row) for row in gram), d


def _iq(g, x):
    x0, x1, x2 = x
    return (
        g[0][0] * x0 * x0 + g[1][1] * x1 * x1 + g[2][2] * x2 * x2
        + 2 * (g[0][1] * x0 * x1 + g[0][2] * x0 * x2 + g[1][2] * x1 * x2)
    )


def _int_is_minkowski(g):
    if g[0][0] > g[1][1] or g[1][1] > g[2][2]:
        return False
    for x in _SCAN3:
        k = max(i for i in range(3) if x[i] != 0)
        if _iq(g, x) < g[k][k]:
            return False
    return True


def _int_det(t):
    return (
        t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1])
        - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
        + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])
    )


def _int_conj(t, g):
    """t g t^T for integer matrices."""
    rows = [
        [sum(t[i][k] * g[k][j] for k in range(3)) for j in range(3)]
        for i in range(3)
    ]
    return tuple(
        tuple(sum(rows[i][k] * t[j][k] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def _int_short_vectors(g, cap):
    """Nonzero x with x g x^T <= cap, via adjugate coordinate bounds."""
    det = _int_det(g)
    adj = linalg.adjugate(g)
    out = []
    bounds = []
    for i in range(3):
        b = isqrt(max(cap * adj[i][i], 0) // det) + 1
        bounds.append(b)
    for x0 in range(-bounds[0], bounds[0] + 1):
        for x1 in range(-bounds[1], bounds[1] + 1):
            for x2 in range(-bounds[2], bounds[2] + 1):
                x = (x0, x1, x2)
                if any(x) and _iq(g, x) <= cap:
                    out.append(x)
    return out


def automorphisms(gram):
    """All unimodular T with T G T^T = G, from exact short-vector data."""
    g, _ = _int_scaled_gram(gram)
    by_val = {}
    cap = max(g[i][i] for i in range(3))
    for x in _int_short_vectors(g, cap):
        by_val.setdefault(_iq(g, x), []).append(x)
    out = []
    for r1 in by_val.get(g[0][0], []):
        for r2 in by_val.get(g[1][1], []):
            for r3 in by_val.get(g[2][2], []):
                t = (r1, r2, r3)
                if _int_det(t) not in (1, -1):
                    continue
                if _int_conj(t, g) == g:
                    out.append(t)
    return out


def _reduced_orbit_int(g):
    """All Minkowski-valid integer Grams of the class, one transform each.

    Candidate basis rows are the exact short vectors of length at most the
    largest successive minimum, so every reduced basis of the lattice is
    reachable; the orbit stays small.
    """
    start_key = g
    seen = {start_key: (g, linalg.int_identity(3))}
    queue = [start_key]
    while queue:
        key = queue.pop()
        cur, acc = seen[key]
        cap = max(cur[i][i] for i in range(3))
        rows = _int_short_vectors(cur, cap)
        by_val = {}
        for x in rows:
            by_val.setdefault(_iq(cur, x), []).append(x)
        diag_opts = sorted(v for v in by_val if v <= cap)
        for d1 in diag_opts:
            for r1 in by_val[d1]:
                for d2 in diag_opts:
                    if d2 < d1:
                        continue
                    for r2 in by_val[d2]:
                        for d3 in diag_opts:
                            if d3 < d2:
                                continue
                            for r3 in by_val[d3]:
                                t = (r1, r2, r3)
                                if _int_det(t) not in (1, -1):
                                    continue
                                g2 = _int_conj(t, cur)
                                if not _int_is_minkowski(g2):
                                    continue
                                if g2 not in seen:
                                    seen[g2] = (
                                        g2,
                                        linalg.int_mat(
                                            linalg.mat_mul(mat(t), mat(acc))
                                        ),
                                    )
                                    queue.append(g2)
                                    if len(seen) > 4096:
                                        raise InternalCheckError(
                                            "reduced orbit unexpectedly large"
                                        )
    return seen.values()


def canonical_form(c: Coset):
    """Canonical representative and stable string key of the isometry class.

    Reduces the coset, then minimizes the serialized form over every
    reduced Gram of the class and every automorphism of the reduced form,
    with the shift normalized in each frame.  Two cosets are isometric iff
    their keys match; used for census deduplication.
    """
    red = reduce(c)
    g_int, scale = _int_scaled_gram(red.coset.gram)
    auts = automorphisms(red.coset.gram)
    best = None
    for g2, u_map in _reduced_orbit_int(g_int):
        gram = tuple(tuple(Fraction(x, scale) for x in row) for row in g2)
        for aut in auts:
            x_map = linalg.mat_mul(mat(u_map), mat(aut))
            shift = linalg.vec_mat(red.coset.shift, linalg.inverse(x_map))
            shift, _ = normalize_shift(gram, shift)
            cand = Coset(gram, shift)
            key = json.dumps(forms.coset_to_record(cand), sort_keys=True)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1], best[0]


def canonical_key(c: Coset) -> str:
    return canonical_form(c)[1]
