from __future__ import annotations

import random
from fractions import Fraction

import pytest

from apcert.certify import centred_square_sum
from apcert.modgroup import affine_orbits3, primes_between
from apcert.qfield import QuadExt
from apcert.sympoly import (
    DegreeOverflow,
    NonInvariantError,
    OmegaVector,
    SparsePoly,
    ap_polynomial,
    group_average,
    mixed_square_sum,
    omega_of,
    poly_sum,
    power_sum_cubes,
    reconstruct,
    square_linear,
)


def X(p: int, i: int) -> SparsePoly:
    return SparsePoly.variable(p, i)


def _random_cubic(p: int, rng: random.Random) -> SparsePoly:
    terms = {}
    for _ in range(rng.randint(1, 6)):
        deg = rng.choice((0, 3))
        m = tuple(sorted(rng.randrange(p) for _ in range(deg)))
        terms[m] = QuadExt(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    return SparsePoly(p, terms)


def test_square_of_difference():
    p = 5
    got = square_linear(p, {0: 1, 1: -1})
    assert got == X(p, 0) * X(p, 0) - (X(p, 0) * X(p, 1)).scale(2) + X(p, 1) * X(p, 1)


def test_square_linear_against_naive_loop():
    p, D = 5, 2
    coeffs = [D - 1, -1, -1, -1, -1]
    naive: dict[tuple[int, ...], int] = {}
    for i in range(p):
        for j in range(p):
            m = tuple(sorted((i, j)))
            naive[m] = naive.get(m, 0) + coeffs[i] * coeffs[j]
    got = square_linear(p, coeffs)
    assert len(got) == len(naive) == 15
    assert all(got.coeff(m) == c for m, c in naive.items())
    assert got.coeff((0, 0)) == (D - 1) ** 2


def test_arithmetic_and_degree():
    p = 7
    x0, x1 = X(p, 0), X(p, 1)
    q = (x0 + x1) * (x0 - x1)
    assert q == x0 * x0 - x1 * x1
    assert q.degree == 2
    assert (q - q) == SparsePoly(p)
    assert -q == q.scale(-1)
    assert x0.times_variable(8) == x0 * x1
    with pytest.raises(DegreeOverflow):
        q.mul(q)
    assert q.mul(q, max_degree=None).degree == 4
    with pytest.raises(ValueError):
        x0 + X(5, 0)


@pytest.mark.parametrize("p,count", [(5, 10), (7, 21), (17, 136)])
def test_ap_polynomial_counts(p, count):
    assert len(ap_polynomial(p)) == count


@pytest.mark.parametrize("p", primes_between(5, 31))
def test_ap_polynomial_matches_orbit_size(p):
    table = affine_orbits3(p)
    assert len(ap_polynomial(p, table)) == table.orbit_sizes[table.ap_orbit]


def test_omega_examples():
    t7 = affine_orbits3(7)
    assert omega_of(ap_polynomial(7), t7) == OmegaVector.of(0, 0, 0, 1, 0)
    assert omega_of(SparsePoly.constant(7, -5), t7) == OmegaVector.of(-5, 0, 0, 0, 0)
    # sum_i sigma_{2,i} X_i = sum_i (D X_i - sum_j X_j)^2 X_i / (p-1) at p=5, D=2
    t5 = affine_orbits3(5)
    got = omega_of(centred_square_sum(5, 2).scale(Fraction(1, 4)), t5)
    assert got == OmegaVector.of(0, Fraction(1, 4), Fraction(-1, 4), Fraction(3, 2))


def test_omega_rejects_non_invariant():
    t7 = affine_orbits3(7)
    with pytest.raises(NonInvariantError, match="a3"):
        omega_of(power_sum_cubes(7) - X(7, 0) * X(7, 0) * X(7, 0), t7)
    with pytest.raises(NonInvariantError, match="no omega slot"):
        omega_of(X(7, 2), t7)
    with pytest.raises(NonInvariantError, match="a111_1"):
        omega_of(X(7, 0) * X(7, 1) * X(7, 2), t7)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_round_trip_on_group_averages(p):
    rng = random.Random(p)
    table = affine_orbits3(p)
    for _ in range(100):
        q = group_average(_random_cubic(p, rng))
        assert reconstruct(omega_of(q, table), table) == q


def test_omega_is_linear():
    p = 7
    rng = random.Random(1)
    table = affine_orbits3(p)
    for _ in range(30):
        q1 = group_average(_random_cubic(p, rng))
        q2 = group_average(_random_cubic(p, rng))
        assert omega_of(q1 + q2, table) == omega_of(q1, table) + omega_of(q2, table)
        assert omega_of(q1.scale(3), table) == omega_of(q1, table).scale(3)


def test_named_sums():
    table = affine_orbits3(5)
    assert omega_of(power_sum_cubes(5), table) == OmegaVector.of(0, 1, 0, 0)
    assert omega_of(mixed_square_sum(5), table) == OmegaVector.of(0, 0, 1, 0)
    assert poly_sum(5, [power_sum_cubes(5), mixed_square_sum(5)]) == power_sum_cubes(5) + mixed_square_sum(5)


def test_omega_vector_helpers():
    w = OmegaVector.of(1, 0, Fraction(1, 2), 0, 3)
    assert w.nonzero_slots() == ["a0", "a21", "a111_2"]
    assert (w - w).is_zero()
    assert str(OmegaVector.zero(1)) == "w(0, 0, 0, 0)"
    with pytest.raises(ValueError):
        w + OmegaVector.zero(1)
