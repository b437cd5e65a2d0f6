"""Genus-vs-global regularity checking and the desk-scale census.

A coset is certified `regular_up_to_N` when every integer in [0, N]
represented by its genus (nonnegative and locally represented at every
relevant prime) is globally represented.  Falsification is exact: the
first genus-represented gap is returned with its per-prime certificates.
Regularity is only ever certified up to the bound, never absolutely.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import forms, linalg, padic, reduction, watson
from .errors import NotPositiveDefinite, NotPrimitive
from .forms import Coset
from .linalg import frac

REGULAR = "regular_up_to_N"
IRREGULAR = "irregular"


@dataclass(frozen=True)
class GenusCheck:
    """Verdict of one genus-representation query with per-prime certificates."""

    value: int
    real_ok: bool
    local: tuple  # ((p, bool), ...)

    @property
    def ok(self) -> bool:
        return self.real_ok and all(v for _, v in self.local)

    def __bool__(self) -> bool:
        return self.ok

    def failing_primes(self):
        return [p for p, v in self.local if not v]

    def to_record(self) -> dict:
        return {
            "value": self.value,
            "real": self.real_ok,
            "local": {str(p): v for p, v in self.local},
        }


def genus_represents(c: Coset, a: int) -> GenusCheck:
    """Is a represented by the real completion and every L_p + v?"""
    real_ok = a >= 0
    local = []
    for p in padic.relevant_primes(c):
        local.append((p, padic.local_represents(c, p, a) if real_ok else False))
    return GenusCheck(value=a, real_ok=real_ok, local=tuple(local))


@dataclass(frozen=True)
class RegularityVerdict:
    bound: int
    status: str
    failure_witness: GenusCheck | None
    locally_represented: int
    globally_represented: int

    def to_record(self) -> dict:
        return {
            "bound": self.bound,
            "status": self.status,
            "failure_witness": (
                None if self.failure_witness is None else self.failure_witness.to_record()
            ),
            "locally_represented": self.locally_represented,
            "globally_represented": self.globally_represented,
        }


def check_regular(c: Coset, bound: int) -> RegularityVerdict:
    """Compare genus-represented and globally represented integers up to bound.

    Globally represented values come from the exact enumeration; for the
    gaps, the local engines decide genus membership (global always implies
    local, so members of the represented set need no local scan).
    """
    if not c.is_positive_definite():
        raise NotPositiveDefinite("regularity is defined for positive cosets")
    if not forms.is_primitive(c):
        raise NotPrimitive("regularity checking expects a primitive coset")
    red = reduction.reduce(c).coset
    represented = reduction.represented_values(red, bound)
    primes = padic.relevant_primes(red)
    witness = None
    locally = 0
    for a in range(bound + 1):
        if a in represented:
            locally += 1
            continue
        ok = True
        for p in primes:
            if not padic.local_represents(red, p, a):
                ok = False
                break
        if ok:
            locally += 1
            if witness is None:
                local = tuple((p, padic.local_represents(red, p, a)) for p in primes)
                witness = GenusCheck(value=a, real_ok=True, local=local)
    return RegularityVerdict(
        bound=bound,
        status=IRREGULAR if witness is not None else REGULAR,
        failure_witness=witness,
        locally_represented=locally,
        globally_represented=len(represented),
    )


# ---------------------------------------------------------------------------
# Census


@dataclass(frozen=True)
class CensusRecord:
    coset: Coset          # canonical representative
    canonical_key: str
    conductor: int
    discriminant: Fraction
    verdict: RegularityVerdict
    descent: tuple        # WatsonStep trace from descend_chain

    def to_record(self) -> dict:
        return {
            "coset": forms.coset_to_record(self.coset),
            "conductor": self.conductor,
            "discriminant": forms.frac_to_str(self.discriminant),
            "verdict": self.verdict.to_record(),
            "descent": [s.to_record() for s in self.descent],
        }


def record_from_dict(rec: dict) -> CensusRecord:
    coset = forms.coset_from_record(rec["coset"])
    v = rec["verdict"]
    fw = v.get("failure_witness")
    witness = None
    if fw is not None:
        witness = GenusCheck(
            value=fw["value"],
            real_ok=fw["real"],
            local=tuple(sorted((int(p), ok) for p, ok in fw["local"].items())),
        )
    verdict = RegularityVerdict(
        bound=v["bound"],
        status=v["status"],
        failure_witness=witness,
        locally_represented=v["locally_represented"],
        globally_represented=v["globally_represented"],
    )
    steps = tuple(
        watson.WatsonStep(
            p=s["p"],
            scale_exponent=s["i"],
            shift_order=s["j"],
            disc_drop=s["t"],
            before=forms.coset_from_record(
                {"gram": s["gram_before"], "shift": s["shift_before"]}
            ),
            after=forms.coset_from_record(
                {"gram": s["gram_after"], "shift": s["shift_after"]}
            ),
        )
        for s in rec["descent"]
    )
    return CensusRecord(
        coset=coset,
        canonical_key=reduction.canonical_key(coset),
        conductor=rec["conductor"],
        discriminant=forms.frac_from_str(rec["discriminant"]),
        verdict=verdict,
        descent=steps,
    )


def census_candidates(conductor: int, disc_bound, coeff_bound, diagonal_only=False):
    """Primitive positive reduced cosets with the given conductor, deduplicated.

    Candidates run over the Minkowski coefficient box: half-integer
    diagonals d1 <= d2 <= d3 <= coeff_bound with d1 d2 d3 <= 2 * disc_bound
    (reduced ternary forms satisfy mu1 mu2 mu3 <= 2 d), size-bounded
    off-diagonal entries, and shifts with denominator exactly the conductor.
    The scan runs on doubled integer Grams; all checks are exact.
    """
    disc_bound = frac(disc_bound)
    shifts = [
        tuple(Fraction(k, conductor) for k in ks)
        for ks in product(range(conductor), repeat=3)
    ]
    shifts = [s for s in shifts if linalg.lcm_denominator(s) == conductor]
    seen = {}
    seen_reduced = set()
    two_h = int(2 * frac(coeff_bound))
    det2_cap = 8 * disc_bound            # det of the doubled Gram
    prod2_cap = 16 * disc_bound          # doubled mu1 mu2 mu3 <= 16 d
    half = Fraction(1, 2)
    for e1 in range(1, two_h + 1):
        for e2 in range(e1, two_h + 1):
            if e1 * e2 * e2 > prod2_cap:
                break
            for e3 in range(e2, two_h + 1):
                if e1 * e2 * e3 > prod2_cap:
                    break
                r12 = range(-(e1 // 2), e1 // 2 + 1) if not diagonal_only else (0,)
                r23 = range(-(e2 // 2), e2 // 2 + 1) if not diagonal_only else (0,)
                for b12 in r12:
                    for b13 in r12:
                        for b23 in r23:
                            g2 = ((e1, b12, b13), (b12, e2, b23), (b13, b23, e3))
                            det2 = reduction._int_det(g2)
                            if det2 <= 0 or det2 > det2_cap:
                                continue
                            if not reduction._int_is_minkowski(g2):
                                continue
                            if not linalg.is_positive_definite(g2):
                                continue
                            gram = tuple(
                                tuple(x * half for x in row) for row in g2
                            )
                            for shift in shifts:
                                cand = Coset(gram, shift)
                                if not cand.is_integral():
                                    continue
                                if not forms.is_primitive(cand):
                                    continue
                                if forms.conductor(cand) != conductor:
                                    continue
                                red = reduction.reduce(cand).coset
                                rkey = json.dumps(
                                    forms.coset_to_record(red), sort_keys=True
                                )
                                if rkey in seen_reduced:
                                    continue
                                seen_reduced.add(rkey)
                                canon, key = reduction.canonical_form(red)
                                if key not in seen:
                                    seen[key] = canon
    return sorted(
        seen.items(), key=lambda kv: (forms.discriminant(kv[1]), kv[0])
    )


def _census_work(args):
    key, coset, bound = args
    verdict = check_regular(coset, bound)
    _, steps = watson.descend_chain(coset)
    return CensusRecord(
        coset=coset,
        canonical_key=key,
        conductor=forms.conductor(coset),
        discriminant=forms.discriminant(coset),
        verdict=verdict,
        descent=tuple(steps),
    )


def census(
    conductor: int,
    disc_bound,
    bound: int,
    coeff_bound,
    diagonal_only=False,
    jobs: int = 1,
    known: dict | None = None,
):
    """Regularity census over the candidate box; deterministic record order.

    `known` maps canonical keys to already-computed CensusRecords (resume
    support): those candidates are not re-checked.
    """
    known = known or {}
    cands = census_candidates(conductor, disc_bound, coeff_bound, diagonal_only)
    todo = [(key, coset, bound) for key, coset in cands if key not in known]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fresh = list(pool.map(_census_work, todo, chunksize=4))
    else:
        fresh = [_census_work(t) for t in todo]
    records = {r.canonical_key: r for r in fresh}
    for key, _ in cands:
        if key in known:
            records[key] = known[key]
    return sorted(
        records.values(), key=lambda r: (r.discriminant, r.canonical_key)
    )


# ---------------------------------------------------------------------------
# The counting identity of the introductory example


@dataclass(frozen=True)
class IdentityRow:
    n: int
    coset_count: int     # representations of 8n+5 by the triangular coset
    odd_form_count: int  # representations of 8n+5 by x^2 + y^2 + 3 z^2
    sub_form_count: int  # representations of 8n+5 by x^2 + y^2 + 12 z^2

    @property
    def difference_ok(self) -> bool:
        return self.coset_count == self.odd_form_count - self.sub_form_count

    @property
    def doubling_ok(self) -> bool:
        return self.odd_form_count == 2 * self.sub_form_count


@dataclass(frozen=True)
class IdentityReport:
    n_max: int
    rows: tuple

    @property
    def ok(self) -> bool:
        return all(r.difference_ok and r.doubling_ok for r in self.rows)


def verify_counting_identity(n_max: int) -> IdentityReport:
    """Count r(n), r1(8n+5), r2(8n+5) by direct enumeration and compare.

    r(n) counts representations by the sum of triangles with weights
    (1,1,3); the two auxiliary counts come from x^2+y^2+3z^2 and
    x^2+y^2+12z^2.  The expected identities are r = r1 - r2 and r1 = 2 r2.
    """
    half = Fraction(1, 2)
    delta = forms.diagonal_coset([4, 4, 12], [half, half, half])
    h1 = forms.diagonal_coset([1, 1, 3])
    h2 = forms.diagonal_coset([1, 1, 12])
    top = 8 * n_max + 5
    c_delta = reduction.count_spectrum(delta, top)
    c_h1 = reduction.count_spectrum(h1, top)
    c_h2 = reduction.count_spectrum(h2, top)
    rows = []
    for n in range(n_max + 1):
        m = 8 * n + 5
        rows.append(
            IdentityRow(
                n=n,
                coset_count=c_delta.get(m, 0),
                odd_form_count=c_h1.get(m, 0),
                sub_form_count=c_h2.get(m, 0),
            )
        )
    return IdentityReport(n_max=n_max, rows=tuple(rows))


def scan_diagonal_forms(max_coeff: int, bound: int):
    """Yield (coeffs, verdict) for diagonal forms a <= b <= c <= max_coeff.

    Lexicographic scan order; only primitive triples are checked.  The
    first irregular hit is the canonical fixture generator for the tests.
    """
    from math import gcd

    for a in range(1, max_coeff + 1):
        for b in range(a, max_coeff + 1):
            for c in range(b, max_coeff + 1):
                if gcd(gcd(a, b), c) != 1:
                    continue
                coset = forms.diagonal_coset([a, b, c])
                yield (a, b, c), check_regular(coset, bound)
