"""Fixed-density binary necklaces in co-lex and cool-lex order.

Strings are handled internally as integers whose most significant of ``n``
bits is the first character, so integer order is lexicographic order.
The generator walks the computation tree ``L(s, t, g)``: node ``0^s 1^t g``
has children ``0^(s-1) 1^(t-i) 0 1^i g`` for ``i = t-1, ..., j`` where ``j``
is the smallest ``i`` giving a necklace. Pre-order visits give co-lex order,
post-order visits give cool-lex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator, Literal, Sequence

Order = Literal["colex", "coollex"]


@dataclass(frozen=True, slots=True)
class BinaryNecklace:
    n: int
    value: int

    @classmethod
    def from_string(cls, s: str) -> BinaryNecklace:
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(len(s), int(s, 2))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(int(c) for c in str(self))

    @property
    def ones(self) -> int:
        return self.value.bit_count()

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b") if self.n else ""


def to_int(bits: Sequence[int] | str) -> tuple[int, int]:
    s = bits if isinstance(bits, str) else "".join(str(int(b)) for b in bits)
    if not s or set(s) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    return len(s), int(s, 2)


def rotate(x: int, r: int, n: int) -> int:
    """Cyclic left shift of an ``n``-bit string by ``r`` places."""
    r %= n
    if r == 0:
        return x
    full = (1 << n) - 1
    return ((x << r) | (x >> (n - r))) & full


def is_necklace_int(x: int, n: int) -> bool:
    return all(rotate(x, r, n) >= x for r in range(1, n))


def is_necklace(bits: Sequence[int] | str) -> bool:
    """True iff no rotation of ``bits`` is lexicographically smaller."""
    n, x = to_int(bits)
    return is_necklace_int(x, n)


def _ones(k: int) -> int:
    return (1 << k) - 1


def _walk(n: int, ones: int, post: bool) -> Iterator[int]:
    if not 0 <= ones <= n:
        raise ValueError(f"need 0 <= ones <= n, got n={n}, ones={ones}")
    if n == 0:
        return
    # frame: [s, t, g, glen, next_i, j]
    stack: list[list[int]] = []

    def push(s: int, t: int, g: int, glen: int) -> int:
        node = (_ones(t) << glen) | g
        j = t  # no children unless some candidate is a necklace
        if s > 0:
            for i in range(t):
                cand = (_ones(t - i) << (glen + i + 1)) | (_ones(i) << glen) | g
                if is_necklace_int(cand, n):
                    j = i
                    break
        stack.append([s, t, g, glen, t - 1, j])
        return node

    root = push(n - ones, ones, 0, 0)
    if not post:
        yield root
    while stack:
        frame = stack[-1]
        s, t, g, glen, i, j = frame
        if i >= j and s > 0:
            frame[4] = i - 1
            child = push(s - 1, t - i, (_ones(i) << glen) | g, glen + i + 1)
            if not post:
                yield child
        else:
            stack.pop()
            if post:
                yield (_ones(t) << glen) | g


def iter_necklaces(n: int, ones: int, order: Order = "coollex") -> Iterator[int]:
    """Yield necklaces as ``n``-bit integers without materialising a list."""
    if order not in ("colex", "coollex"):
        raise ValueError(f"unknown order {order!r}")
    return _walk(n, ones, post=order == "coollex")


def gen_colex(n: int, ones: int) -> list[BinaryNecklace]:
    return [BinaryNecklace(n, x) for x in _walk(n, ones, post=False)]


def gen_coollex(n: int, ones: int) -> list[BinaryNecklace]:
    return [BinaryNecklace(n, x) for x in _walk(n, ones, post=True)]


def stream(n: int, ones: int, visitor: Callable[[BinaryNecklace], None]) -> None:
    """Call ``visitor`` once per necklace in cool-lex order."""
    for x in _walk(n, ones, post=True):
        visitor(BinaryNecklace(n, x))


def bubble_step(bits: Sequence[int] | str) -> str:
    """Replace the first ``10`` by ``01``."""
    s = bits if isinstance(bits, str) else "".join(str(int(b)) for b in bits)
    k = s.find("10")
    if k < 0:
        raise ValueError(f"{s!r} has no '10' substring")
    return s[:k] + "01" + s[k + 2:]


def necklaces_by_rotation_filter(n: int, ones: int) -> list[int]:
    """Oracle: every ``ones``-subset of positions, kept iff canonical."""
    out = []
    for pos in combinations(range(n), ones):
        x = 0
        for q in pos:
            x |= 1 << (n - 1 - q)
        if is_necklace_int(x, n):
            out.append(x)
    return sorted(out)


def hamming(x: int, y: int) -> int:
    return (x ^ y).bit_count()
