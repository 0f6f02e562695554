"""Counting k-term arithmetic progressions in subsets of Z_n and the
brute-force minimum W(k, Z_n, D/n) over fixed-density necklaces.

Two counting conventions exist, and the published tables mix them:

``"set"``
    each set ``{a, a+b, ..., a+(k-1)b}`` of ``k`` distinct residues counts once.
``"sequence"``
    each progression ``(a, b)`` counts once up to reversal
    ``(a, b) ~ (a+(k-1)b, -b)``, provided it hits at least three distinct
    residues. Different step sizes giving the same set count separately.
``"published"``
    ``"set"`` for ``k = 3`` and ``"sequence"`` for ``k >= 4``; this is what the
    appendix tables were computed with and is the default.

For ``k = 3`` and prime ``n`` all three agree.

The fast path never enumerates sets. For a step ``b`` the number of starting
points of progressions inside ``x`` is ``popcount(x & rot(x, b) & ... )`` and
each ``(a, b)`` generator receives an exact weight (one over the number of
generators of its set, or one half for a reversal pair).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, lcm
from typing import Iterable, Literal, Sequence

import numpy as np

from . import _kernels
from .necklace import BinaryNecklace, iter_necklaces, rotate, to_int

Convention = Literal["set", "sequence", "published"]
CONVENTIONS: tuple[str, ...] = ("set", "sequence", "published")

DEFAULT_CAP = 24
HARD_CAP = 32


class CapExceeded(RuntimeError):
    """Brute force requested beyond the configured enumeration cap."""


def resolve(convention: str, k: int) -> str:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if convention == "published":
        return "set" if k == 3 else "sequence"
    return convention


def _check(n: int, k: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if k < 3:
        raise ValueError("progressions need k >= 3")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")


def _progression(a: int, b: int, k: int, n: int) -> tuple[int, ...]:
    return tuple((a + i * b) % n for i in range(k))


@dataclass(frozen=True)
class StepWeights:
    """Per-step integer weights ``w_b``; the count is ``sum w_b N_b // scale``."""

    n: int
    k: int
    convention: str
    steps: tuple[int, ...]
    weights: tuple[int, ...]
    scale: int


@lru_cache(maxsize=None)
def step_weights(n: int, k: int, convention: Convention = "published") -> StepWeights:
    _check(n, k)
    conv = resolve(convention, k)
    raw: dict[int, Fraction] = {}
    for b in range(1, n):
        elems = set(_progression(0, b, k, n))
        if conv == "set":
            if len(elems) < k:
                continue
            target = frozenset(elems)
            # generators of this set, counted over all (a', b')
            mult = sum(
                1
                for b2 in range(1, n)
                for a2 in target
                if frozenset(_progression(a2, b2, k, n)) == target
            )
            raw[b] = Fraction(1, mult)
        else:
            if len(elems) < 3:
                continue
            raw[b] = Fraction(1, 2)
    # N_b == N_{n-b} (reversal), so fold onto 1 <= b <= n/2
    folded: dict[int, Fraction] = {}
    for b, w in raw.items():
        key = min(b, n - b)
        folded[key] = folded.get(key, Fraction(0)) + w
    steps = tuple(sorted(folded))
    scale = lcm(*(folded[b].denominator for b in steps)) if steps else 1
    weights = tuple(int(folded[b] * scale) for b in steps)
    return StepWeights(n, k, conv, steps, weights, scale)


def count_aps_int(x: int, n: int, k: int, convention: Convention = "published") -> int:
    sw = step_weights(n, k, convention)
    acc = 0
    for b, w in zip(sw.steps, sw.weights):
        c = x
        for i in range(1, k):
            c &= rotate(x, i * b, n)
        acc += w * c.bit_count()
    q, r = divmod(acc, sw.scale)
    assert r == 0, "weights must give an integral count"
    return q


def count_aps(bits: Sequence[int] | str, k: int, convention: Convention = "published") -> int:
    """Number of length-``k`` progressions inside the subset ``bits`` of Z_n."""
    n, x = to_int(bits)
    return count_aps_int(x, n, k, convention)


def count_aps_oracle(bits: Sequence[int] | str, k: int, convention: Convention = "published") -> int:
    """Slow reference count by explicit deduplication."""
    n, x = to_int(bits)
    _check(n, k)
    conv = resolve(convention, k)
    members = {i for i in range(n) if x >> (n - 1 - i) & 1}
    seen: set = set()
    for a in range(n):
        for b in range(1, n):
            prog = _progression(a, b, k, n)
            if not set(prog) <= members:
                continue
            if conv == "set":
                if len(set(prog)) == k:
                    seen.add(tuple(sorted(prog)))
            elif len(set(prog)) >= 3:
                rev = ((a + (k - 1) * b) % n, n - b)
                seen.add(min((a, b), rev))
    return len(seen)


def progression_count_full(n: int, k: int, convention: Convention = "published") -> int:
    return count_aps_int((1 << n) - 1, n, k, convention)


# ---------------------------------------------------------------------------
# brute-force minimisation


@dataclass
class ApStatistics:
    n: int
    k: int
    D: int
    min_count: int
    witness: BinaryNecklace
    histogram: dict[int, int] = field(default_factory=dict)
    convention: str = "published"

    @property
    def necklace_count(self) -> int:
        return sum(self.histogram.values())


def _check_cap(n: int, cap: int) -> None:
    if cap > HARD_CAP:
        raise ValueError(f"enumeration cap may not exceed {HARD_CAP}")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")


def _scan(n: int, k: int, D: int, convention: Convention, cap: int) -> ApStatistics:
    _check(n, k)
    if not 0 <= D <= n:
        raise ValueError(f"need 0 <= D <= n, got D={D}, n={n}")
    _check_cap(n, cap)
    sw = step_weights(n, k, convention)
    best, witness, hist = _kernels.scan(
        n,
        D,
        k,
        np.asarray(sw.steps, dtype=np.int64),
        np.asarray(sw.weights, dtype=np.int64),
        sw.scale,
        progression_count_full(n, k, convention),
    )
    histogram = {int(c): int(v) for c, v in enumerate(hist) if v}
    return ApStatistics(n, k, D, int(best), BinaryNecklace(n, int(witness)), histogram, sw.convention)


def min_aps(
    n: int, k: int, D: int, convention: Convention = "published", cap: int = DEFAULT_CAP
) -> ApStatistics:
    """W(k, Z_n, D/n) with the first minimising necklace in cool-lex order."""
    return _scan(n, k, D, convention, cap)


def distribution(
    n: int, k: int, D: int, convention: Convention = "published", cap: int = DEFAULT_CAP
) -> dict[int, int]:
    """Histogram ``count -> number of necklaces`` over all (n, D) necklaces."""
    return _scan(n, k, D, convention, cap).histogram


def w_row(n: int, k: int, convention: Convention = "published", cap: int = DEFAULT_CAP) -> list[int]:
    return [min_aps(n, k, D, convention, cap).min_count for D in range(n + 1)]


def w_table(
    k: int,
    n_range: Iterable[int],
    convention: Convention = "published",
    cap: int = DEFAULT_CAP,
) -> dict[int, list[int | None]]:
    """Rows ``n -> [W(k, Z_n, D/n) for D in 0..n]``; over-cap rows are ``None`` cells."""
    table: dict[int, list[int | None]] = {}
    for n in n_range:
        try:
            table[n] = list(w_row(n, k, convention, cap))
        except CapExceeded:
            table[n] = [None] * (n + 1)
    return table


# ---------------------------------------------------------------------------
# slow references used by the tests


def min_aps_python(n: int, k: int, D: int, convention: Convention = "published") -> tuple[int, int, dict[int, int]]:
    """Pure-Python scan over the reference generator: (min, witness, histogram)."""
    best, witness, hist = None, None, Counter()
    for x in iter_necklaces(n, D, "coollex"):
        c = count_aps_int(x, n, k, convention)
        hist[c] += 1
        if best is None or c < best:
            best, witness = c, x
    return best, witness, dict(hist)  # type: ignore[return-value]


def min_aps_all_subsets(n: int, k: int, D: int, convention: Convention = "published") -> int:
    """Minimum over every raw D-subset, no rotation reduction."""
    best = None
    for pos in combinations(range(n), D):
        x = sum(1 << (n - 1 - q) for q in pos)
        c = count_aps_int(x, n, k, convention)
        best = c if best is None else min(best, c)
    return best  # type: ignore[return-value]


def necklace_count(n: int, D: int) -> int:
    """Closed-form count of fixed-density necklaces (sum over gcd divisors)."""
    from math import gcd

    if n == 0:
        return 1
    g = gcd(n, D)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            total += _phi(d) * comb(n // d, D // d)
    return total // n


def _phi(m: int) -> int:
    out, x, f = m, m, 2
    while f * f <= x:
        if x % f == 0:
            while x % f == 0:
                x //= f
            out -= out // f
        f += 1
    if x > 1:
        out -= out // x
    return out
