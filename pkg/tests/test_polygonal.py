"""m-gonal forms: construction, correspondence, universality, regularity."""

import random
from fractions import Fraction

import pytest

from quadcoset import forms, polygonal, regularity
from quadcoset.polygonal import GonalForm

import oracles


def test_gonal_number_examples():
    assert [polygonal.gonal_number(3, x) for x in (0, 1, 2, 3)] == [0, 1, 3, 6]
    assert polygonal.gonal_number(4, -2) == 4
    assert polygonal.gonal_number(5, -1) == 2


def test_gonal_conductor_examples():
    assert polygonal.gonal_conductor(3) == 2
    assert polygonal.gonal_conductor(6) == 4
    assert polygonal.gonal_conductor(8) == 3
    assert polygonal.gonal_conductor(4) == 1


def test_gonal_conductor_matches_coset():
    for m in range(3, 31):
        for coeffs in ((1, 1, 1), (2, 3, 7), (1, 5, 5)):
            coset, _ = polygonal.to_coset(GonalForm(m, coeffs))
            assert forms.conductor(coset) == polygonal.gonal_conductor(m)


def test_to_coset_triangular(delta113):
    coset, vmap = polygonal.to_coset(GonalForm(3, (1, 1, 3)))
    assert coset == delta113
    assert (vmap.scale, vmap.offset) == (8, 5)


def test_to_coset_squares():
    coset, vmap = polygonal.to_coset(GonalForm(4, (1, 1, 1)))
    assert [coset.gram[i][i] for i in range(3)] == [16, 16, 16]
    assert coset.shift == (0, 0, 0)
    assert (vmap.scale, vmap.offset) == (16, 0)


def test_to_coset_pentagonal():
    coset, vmap = polygonal.to_coset(GonalForm(5, (1, 2, 3)))
    assert [coset.gram[i][i] for i in range(3)] == [36, 72, 108]
    assert coset.shift == (Fraction(-1, 6),) * 3
    assert (vmap.scale, vmap.offset) == (24, 6)


def test_value_map_inverse():
    _, vmap = polygonal.to_coset(GonalForm(3, (1, 1, 3)))
    assert vmap.invert(vmap.forward(17)) == 17
    assert vmap.invert(vmap.forward(17) + 1) is None


def test_correspondence_with_direct_enumeration():
    rng = random.Random(70)
    for _ in range(8):
        m = rng.randint(3, 12)
        coeffs = tuple(sorted(rng.randint(1, 6) for _ in range(3)))
        g = GonalForm(m, coeffs)
        for k in list(range(25)) + [40, 57, 58]:
            assert polygonal.gonal_represents(g, k) == oracles.gonal_direct(
                m, coeffs, k
            ), (m, coeffs, k)


def test_direct_search_matches_coset_path_spot():
    g = GonalForm(7, (2, 3, 4))
    for k in range(40):
        assert polygonal.direct_represents(g, k) == polygonal.gonal_represents(g, k)


def test_universal_examples():
    assert polygonal.is_universal_up_to(GonalForm(3, (1, 1, 1)), 3000)
    assert polygonal.first_missing(GonalForm(3, (1, 1, 3)), 3000) == 8
    assert not polygonal.gonal_represents(GonalForm(3, (1, 1, 3)), 8)


def test_triangular_113_regular_small():
    verdict = polygonal.is_regular_up_to(GonalForm(3, (1, 1, 3)), 240)
    assert verdict.status == regularity.REGULAR


def test_regularity_requires_ternary():
    with pytest.raises(ValueError):
        polygonal.is_regular_up_to(GonalForm(3, (1, 1, 1, 1)), 50)


def test_four_variable_forms_supported_for_representation():
    g = GonalForm(3, (1, 1, 1, 1))
    for k in range(30):
        assert polygonal.gonal_represents(g, k)


def test_canonicalize_examples():
    assert polygonal.canonicalize(GonalForm(3, (3, 1, 1))).coeffs == (1, 1, 3)
    assert polygonal.canonicalize(GonalForm(5, (2, 2, 1))).coeffs == (1, 2, 2)
    g = GonalForm(5, (1, 2, 2))
    assert polygonal.canonicalize(g) == g


def test_canonical_equality_matches_coset_isometry():
    from quadcoset import reduction
    rng = random.Random(71)
    seen = []
    for _ in range(10):
        m = rng.randint(3, 6)
        coeffs = tuple(sorted(rng.randint(1, 4) for _ in range(3)))
        g = GonalForm(m, coeffs)
        coset, _ = polygonal.to_coset(g)
        seen.append((polygonal.canonicalize(g), reduction.canonical_key(coset)))
    for g1, k1 in seen:
        for g2, k2 in seen:
            if g1.m == g2.m:
                assert (g1 == g2) == (k1 == k2)


def test_small_scan_finds_liouville_triples():
    # coeff_max = 5 already contains all seven universal triples.
    found = polygonal.universal_scan(3, 5, 2000)
    assert found == [
        (1, 1, 1), (1, 1, 2), (1, 1, 4), (1, 1, 5),
        (1, 2, 2), (1, 2, 3), (1, 2, 4),
    ]
