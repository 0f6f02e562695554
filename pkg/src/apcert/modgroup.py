"""Modular arithmetic over Z_p and affine orbits of 3-subsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

Triple = tuple[int, int, int]


def is_prime(n: int) -> bool:
    """Deterministic trial division; moduli here are small."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in range(lo, hi + 1) if is_prime(q)]


def check_modulus(p: int, minimum: int = 5) -> int:
    """Validate an odd prime modulus ``p >= minimum`` and return it."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError("modulus must be an int")
    if p < minimum or not is_prime(p):
        raise ValueError(f"expected a prime >= {minimum}, got {p}")
    return p


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group of Z_p."""
    check_modulus(p, minimum=3)
    phi = p - 1
    factors = _prime_factors(phi)
    for r in range(2, p):
        if all(pow(r, phi // q, p) != 1 for q in factors):
            return r
    raise AssertionError("unreachable: every prime has a primitive root")


def discrete_log_table(p: int, r: int | None = None) -> dict[int, int]:
    """Map each nonzero residue ``x`` to the exponent ``e`` with ``r^e = x``."""
    r = primitive_root(p) if r is None else r
    table, x = {}, 1
    for e in range(p - 1):
        table[x] = e
        x = x * r % p
    if len(table) != p - 1:
        raise ValueError(f"{r} is not a primitive root mod {p}")
    return table


def affine_image(subset: tuple[int, ...], a: int, b: int, p: int) -> tuple[int, ...]:
    return tuple(sorted((a * x + b) % p for x in subset))


def affine_group(p: int) -> Iterator[tuple[int, int]]:
    for a in range(1, p):
        for b in range(p):
            yield a, b


@dataclass(frozen=True)
class OrbitTable:
    """Partition of the 3-subsets of Z_p into affine orbits.

    Orbit ids are assigned in order of each orbit's lexicographically least
    member, so the arithmetic-progression orbit (containing ``(0, 1, 2)``) is
    always id 0.
    """

    p: int
    orbit_of: dict[Triple, int]
    orbit_sizes: tuple[int, ...]
    representatives: tuple[Triple, ...]
    ap_orbit: int = 0
    members: tuple[tuple[Triple, ...], ...] = field(default=(), repr=False)

    @property
    def d(self) -> int:
        return len(self.orbit_sizes)


def affine_orbits3(p: int) -> OrbitTable:
    check_modulus(p)
    orbit_of: dict[Triple, int] = {}
    members: list[list[Triple]] = []
    # combinations() is lexicographic, so the first unseen triple is the least
    # member of a new orbit
    for t in combinations(range(p), 3):
        if t in orbit_of:
            continue
        oid = len(members)
        group = sorted({affine_image(t, a, b, p) for a, b in affine_group(p)})
        for s in group:
            orbit_of[s] = oid  # type: ignore[index]
        members.append(group)  # type: ignore[arg-type]
    reps = tuple(g[0] for g in members)
    return OrbitTable(
        p=p,
        orbit_of=orbit_of,
        orbit_sizes=tuple(len(g) for g in members),
        representatives=reps,
        ap_orbit=orbit_of[(0, 1, 2)],
        members=tuple(tuple(g) for g in members),
    )


def canonical_subset(subset: tuple[int, ...] | set[int], table: OrbitTable) -> tuple[int, Triple]:
    """Orbit id and least orbit member of a 3-subset of Z_p."""
    items = [x % table.p for x in subset]
    if len(items) != 3 or len(set(items)) != 3:
        raise ValueError(f"expected 3 distinct residues, got {list(subset)}")
    key = tuple(sorted(items))
    oid = table.orbit_of[key]  # type: ignore[index]
    return oid, table.representatives[oid]


def anharmonic_classes(p: int) -> list[tuple[int, ...]]:
    """Orbits of 3-subsets as classes of ``c`` with ``{0, 1, c}`` representing them.

    ``{0, 1, c}`` and ``{0, 1, c'}`` are affinely equivalent exactly when
    ``c'`` is one of ``c, 1-c, 1/c, 1/(1-c), (c-1)/c, c/(c-1)``. Classes come
    in the same order as the ids of :func:`affine_orbits3` and avoid building
    the full table for large ``p``.
    """
    check_modulus(p)
    inv = {x: pow(x, p - 2, p) for x in range(1, p)}
    seen: set[int] = set()
    classes = []
    for c in range(2, p):
        if c in seen:
            continue
        cls = {
            c,
            (1 - c) % p,
            inv[c],
            inv[(1 - c) % p],
            (c - 1) * inv[c] % p,
            c * inv[(c - 1) % p] % p,
        }
        seen |= cls
        classes.append(tuple(sorted(cls)))
    return classes
