from __future__ import annotations

import random
from itertools import combinations

import pytest

from apcert.apcount import count_aps
from apcert.modgroup import (
    affine_group,
    affine_image,
    affine_orbits3,
    anharmonic_classes,
    canonical_subset,
    check_modulus,
    discrete_log_table,
    is_prime,
    primes_between,
    primitive_root,
)

SMALL = primes_between(5, 31)


@pytest.mark.parametrize("p,r", [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (17, 3), (23, 5)])
def test_primitive_root_smallest(p, r):
    assert primitive_root(p) == r
    # oracle: brute-force order of every candidate
    orders = [next(e for e in range(1, p) if pow(g, e, p) == 1) for g in range(2, p)]
    assert orders.index(p - 1) + 2 == r


def test_discrete_log_is_inverse_of_power():
    for p in SMALL:
        r = primitive_root(p)
        table = discrete_log_table(p)
        assert all(pow(r, e, p) == x for x, e in table.items())
    with pytest.raises(ValueError):
        discrete_log_table(7, r=2)


def test_check_modulus():
    assert check_modulus(7) == 7
    for bad in (1, 3, 9, 15):
        with pytest.raises(ValueError):
            check_modulus(bad)
    with pytest.raises(TypeError):
        check_modulus(7.0)  # type: ignore[arg-type]
    assert [q for q in range(40) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


@pytest.mark.parametrize("p,sizes", [(5, [10]), (7, [21, 14]), (13, [78, 156, 52])])
def test_orbit_sizes(p, sizes):
    assert list(affine_orbits3(p).orbit_sizes) == sizes


def test_orbit_count_matches_omega_arity():
    assert [affine_orbits3(p).d for p in (5, 7, 11, 13, 17)] == [1, 2, 2, 3, 3]


def test_canonical_subset_examples():
    t7 = affine_orbits3(7)
    assert canonical_subset((2, 3, 4), t7) == (t7.ap_orbit, (0, 1, 2))
    oid, rep = canonical_subset({0, 1, 5}, t7)
    assert oid != t7.ap_orbit
    # least member of the orbit by brute force
    orbit = {affine_image((0, 1, 5), a, b, 7) for a, b in affine_group(7)}
    assert rep == min(orbit)
    assert canonical_subset((1, 2, 4), affine_orbits3(5)) == (0, (0, 1, 2))
    with pytest.raises(ValueError):
        canonical_subset((1, 1, 2), t7)


@pytest.mark.parametrize("p", SMALL)
def test_orbits_are_affine_invariant(p):
    table = affine_orbits3(p)
    triples = list(combinations(range(p), 3))
    assert sum(table.orbit_sizes) == len(triples)
    if p <= 13:
        maps = list(affine_group(p))
        subsets = triples
    else:
        rng = random.Random(p)
        maps = [(rng.randrange(1, p), rng.randrange(p)) for _ in range(40)]
        subsets = rng.sample(triples, 200)
    for s in subsets:
        for a, b in maps:
            assert table.orbit_of[affine_image(s, a, b, p)] == table.orbit_of[s]


@pytest.mark.parametrize("p", SMALL)
def test_ap_orbit_size_equals_progression_count(p):
    table = affine_orbits3(p)
    assert table.orbit_sizes[table.ap_orbit] == count_aps("1" * p, 3, "set")
    assert table.ap_orbit == 0


@pytest.mark.parametrize("p", SMALL)
def test_anharmonic_classes_match_orbits(p):
    table = affine_orbits3(p)
    classes = anharmonic_classes(p)
    assert len(classes) == table.d
    for oid, cls in enumerate(classes):
        assert {table.orbit_of[tuple(sorted((0, 1, c)))] for c in cls} == {oid}
