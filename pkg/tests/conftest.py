"""Shared fixtures and corpus generators."""

import itertools
import random
import re
import sys
from fractions import Fraction

import pytest

from quadcoset import forms
from quadcoset.forms import Coset


def pytest_runtest_logreport(report):
    """One PASS/FAIL line per acceptance criterion (outside capture)."""
    if report.when != "call":
        return
    m = re.search(r"test_acceptance_(\d+)", report.nodeid)
    if not m:
        return
    message = ""
    for name, value in report.user_properties:
        if name == "acceptance":
            message = f" - {value[1]}"
    verdict = "PASS" if report.passed else "FAIL"
    sys.stdout.write(f"ACCEPTANCE {m.group(1)}: {verdict}{message}\n")
    sys.stdout.flush()


HALF = Fraction(1, 2)


@pytest.fixture
def delta113():
    """The coset of the (1,1,3) triangular form: values are 8k+5."""
    return forms.diagonal_coset([4, 4, 12], [HALF, HALF, HALF])


@pytest.fixture
def ones():
    return forms.diagonal_coset([1, 1, 1])


def random_unimodular(rng, n=3, steps=8):
    """Random product of elementary integer row operations (det +-1)."""
    t = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        kind = rng.randrange(3)
        i, j = rng.sample(range(n), 2)
        if kind == 0:
            t[i], t[j] = t[j], t[i]
        elif kind == 1:
            t[i] = [-x for x in t[i]]
        else:
            c = rng.choice((-2, -1, 1, 2))
            t[i] = [a + c * b for a, b in zip(t[i], t[j])]
    return tuple(tuple(r) for r in t)


def random_pd_gram(rng, entry_bound=30, allow_half=True):
    """Random positive definite Gram with entries bounded and in (1/2)Z."""
    while True:
        a = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        g = [[sum(a[k][i] * a[k][j] for k in range(3)) for j in range(3)]
             for i in range(3)]
        for i in range(3):
            g[i][i] += rng.randint(1, 4)
        g = [[Fraction(x) for x in row] for row in g]
        if allow_half and rng.random() < 0.3:
            i, j = rng.sample(range(3), 2)
            i, j = min(i, j), max(i, j)
            g[i][j] += HALF
            g[j][i] = g[i][j]
        from quadcoset import linalg
        if not linalg.is_positive_definite(g):
            continue
        if max(abs(x) for row in g for x in row) > entry_bound:
            continue
        return tuple(tuple(row) for row in g)


def random_integral_coset(rng, entry_bound=30, conductors=(1, 1, 2, 2, 3, 4)):
    """Random integral coset with bounded entries and small conductor."""
    while True:
        gram = random_pd_gram(rng, entry_bound)
        c = rng.choice(conductors)
        options = []
        for ks in itertools.product(range(c), repeat=3):
            shift = tuple(Fraction(k, c) for k in ks)
            cand = Coset(gram, shift)
            if forms.conductor(cand) != c:
                continue
            if cand.is_integral():
                options.append(cand)
        if options:
            return rng.choice(options)


def random_primitive_coset(rng, entry_bound=30, conductors=(1, 1, 2, 2, 3, 4)):
    while True:
        c = random_integral_coset(rng, entry_bound, conductors)
        if forms.is_primitive(c):
            return c
