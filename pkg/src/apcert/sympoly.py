"""Sparse polynomials over QuadExt in X_0..X_{p-1} and the omega projection.

An affine-invariant cubic is determined by its constant term, the common
coefficient of the X_i^3, the common coefficient of the X_i^2 X_j (i != j)
and one coefficient per affine orbit of 3-subsets. Those numbers are its
omega-coordinates ``w(a0, a3, a21, a111_1, ..., a111_d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .modgroup import OrbitTable, affine_orbits3
from .qfield import ONE, ZERO, QuadExt, Scalar

Monomial = tuple[int, ...]


class DegreeOverflow(ValueError):
    """A product would exceed the degree its consumer can handle."""


class NonInvariantError(ValueError):
    """Polynomial is not constant on an affine class of monomials."""


def _fmt_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for v in sorted(set(m)):
        e = m.count(v)
        parts.append(f"X{v}" if e == 1 else f"X{v}^{e}")
    return "*".join(parts)


class SparsePoly:
    """Immutable-by-convention map ``monomial -> coefficient`` (no zeros stored)."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[Monomial, QuadExt] | None = None) -> None:
        self.p = p
        self.terms: dict[Monomial, QuadExt] = {}
        if terms:
            for m, c in terms.items():
                c = QuadExt.coerce(c)
                if c:
                    self.terms[tuple(sorted(i % p for i in m))] = c

    @classmethod
    def constant(cls, p: int, c: Scalar) -> SparsePoly:
        return cls(p, {(): QuadExt.coerce(c)})

    @classmethod
    def variable(cls, p: int, i: int) -> SparsePoly:
        return cls(p, {(i % p,): ONE})

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def coeff(self, m: Iterable[int]) -> QuadExt:
        return self.terms.get(tuple(sorted(i % self.p for i in m)), ZERO)

    def _same_p(self, other: SparsePoly) -> None:
        if self.p != other.p:
            raise ValueError(f"mixed moduli {self.p} and {other.p}")

    def __add__(self, other: SparsePoly) -> SparsePoly:
        self._same_p(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return _raw(self.p, out)

    def __neg__(self) -> SparsePoly:
        return _raw(self.p, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: SparsePoly) -> SparsePoly:
        return self + (-other)

    def scale(self, c: Scalar) -> SparsePoly:
        c = QuadExt.coerce(c)
        if not c:
            return SparsePoly(self.p)
        return _raw(self.p, {m: v * c for m, v in self.terms.items()})

    def mul(self, other: SparsePoly, max_degree: int | None = 3) -> SparsePoly:
        self._same_p(other)
        if max_degree is not None and self.degree + other.degree > max_degree:
            raise DegreeOverflow(
                f"product of degrees {self.degree} and {other.degree} exceeds {max_degree}"
            )
        out: dict[Monomial, QuadExt] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, ZERO) + c1 * c2
        return _raw(self.p, {m: c for m, c in out.items() if c})

    def __mul__(self, other: SparsePoly) -> SparsePoly:
        return self.mul(other)

    def times_variable(self, i: int) -> SparsePoly:
        i %= self.p
        return _raw(self.p, {tuple(sorted(m + (i,))): c for m, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{_fmt_monomial(m)}" for m, c in sorted(self.terms.items()))
        return f"SparsePoly(p={self.p}, {body or '0'})"


def _raw(p: int, terms: dict[Monomial, QuadExt]) -> SparsePoly:
    # trusted constructor: keys already canonical, no zeros
    poly = SparsePoly.__new__(SparsePoly)
    poly.p = p
    poly.terms = terms
    return poly


def poly_sum(p: int, polys: Iterable[SparsePoly]) -> SparsePoly:
    """Sum many polynomials with one accumulator dict."""
    out: dict[Monomial, QuadExt] = {}
    for q in polys:
        if q.p != p:
            raise ValueError(f"mixed moduli {p} and {q.p}")
        for m, c in q.terms.items():
            out[m] = out.get(m, ZERO) + c
    return _raw(p, {m: c for m, c in out.items() if c})


def quadratic_form(p: int, entries: Mapping[tuple[int, int], Scalar]) -> SparsePoly:
    """``sum_{(i,j)} c_ij X_i X_j`` over the listed ordered pairs."""
    out: dict[Monomial, QuadExt] = {}
    for (i, j), c in entries.items():
        m = tuple(sorted((i % p, j % p)))
        out[m] = out.get(m, ZERO) + QuadExt.coerce(c)
    return _raw(p, {m: c for m, c in out.items() if c})


def square_linear(p: int, coeffs: Mapping[int, Scalar] | Sequence[Scalar]) -> SparsePoly:
    """Expand ``(sum_i c_i X_i)^2``; repeated indices are merged first."""
    items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
    lin: dict[int, QuadExt] = {}
    for i, c in items:
        lin[i % p] = lin.get(i % p, ZERO) + QuadExt.coerce(c)
    keys = sorted(i for i, c in lin.items() if c)
    out: dict[Monomial, QuadExt] = {}
    for a, i in enumerate(keys):
        out[(i, i)] = lin[i] * lin[i]
        for j in keys[a + 1:]:
            out[(i, j)] = 2 * lin[i] * lin[j]
    return _raw(p, {m: c for m, c in out.items() if c})


def ap_polynomial(p: int, table: OrbitTable | None = None) -> SparsePoly:
    """Sum of X_i X_j X_k over the 3-term progressions of Z_p."""
    table = table or affine_orbits3(p)
    return _raw(p, {m: ONE for m in table.members[table.ap_orbit]})


# ---------------------------------------------------------------------------
# omega coordinates


@dataclass(frozen=True)
class OmegaVector:
    a0: QuadExt
    a3: QuadExt
    a21: QuadExt
    a111: tuple[QuadExt, ...]

    @classmethod
    def of(cls, *values: Scalar) -> OmegaVector:
        v = [QuadExt.coerce(x) for x in values]
        if len(v) < 4:
            raise ValueError("omega needs a0, a3, a21 and at least one orbit slot")
        return cls(v[0], v[1], v[2], tuple(v[3:]))

    @classmethod
    def zero(cls, d: int) -> OmegaVector:
        return cls(ZERO, ZERO, ZERO, (ZERO,) * d)

    def entries(self) -> tuple[QuadExt, ...]:
        return (self.a0, self.a3, self.a21, *self.a111)

    def _zip(self, other: OmegaVector) -> Iterator[tuple[QuadExt, QuadExt]]:
        if len(self.a111) != len(other.a111):
            raise ValueError("omega vectors of different arity")
        return zip(self.entries(), other.entries())

    def __add__(self, other: OmegaVector) -> OmegaVector:
        return OmegaVector.of(*(x + y for x, y in self._zip(other)))

    def __sub__(self, other: OmegaVector) -> OmegaVector:
        return OmegaVector.of(*(x - y for x, y in self._zip(other)))

    def __neg__(self) -> OmegaVector:
        return OmegaVector.of(*(-x for x in self.entries()))

    def scale(self, c: Scalar) -> OmegaVector:
        return OmegaVector.of(*(x * c for x in self.entries()))

    def is_zero(self) -> bool:
        return not any(self.entries())

    def slot_names(self) -> list[str]:
        return ["a0", "a3", "a21"] + [f"a111_{t + 1}" for t in range(len(self.a111))]

    def nonzero_slots(self) -> list[str]:
        return [name for name, v in zip(self.slot_names(), self.entries()) if v]

    def to_json(self) -> dict[str, object]:
        return {"a0": str(self.a0), "a3": str(self.a3), "a21": str(self.a21), "a111": [str(x) for x in self.a111]}

    def __str__(self) -> str:
        return "w(" + ", ".join(str(x) for x in self.entries()) + ")"


def _class_check(poly: SparsePoly, members: Iterable[Monomial], label: str) -> QuadExt:
    first: Monomial | None = None
    value = ZERO
    for m in members:
        c = poly.terms.get(m, ZERO)
        if first is None:
            first, value = m, c
        elif c != value:
            raise NonInvariantError(
                f"{label}: coefficient of {_fmt_monomial(first)} is {value} "
                f"but {_fmt_monomial(m)} is {c}"
            )
    return value


def _a21_members(p: int) -> Iterator[Monomial]:
    for i in range(p):
        for j in range(p):
            if i != j:
                yield tuple(sorted((i, i, j)))


def omega_of(poly: SparsePoly, table: OrbitTable) -> OmegaVector:
    """Project an affine-invariant cubic onto omega-coordinates."""
    p = table.p
    if poly.p != p:
        raise ValueError(f"polynomial over Z_{poly.p}, table over Z_{p}")
    for m, c in poly.terms.items():
        if len(m) in (1, 2) or len(m) > 3:
            raise NonInvariantError(
                f"monomial {_fmt_monomial(m)} (coefficient {c}) has no omega slot"
            )
    a0 = poly.terms.get((), ZERO)
    a3 = _class_check(poly, ((i, i, i) for i in range(p)), "a3")
    a21 = _class_check(poly, _a21_members(p), "a21")
    a111 = tuple(
        _class_check(poly, table.members[t], f"a111_{t + 1}") for t in range(table.d)
    )
    return OmegaVector(a0, a3, a21, a111)


def reconstruct(omega: OmegaVector, table: OrbitTable) -> SparsePoly:
    """Inverse of :func:`omega_of`."""
    p = table.p
    out: dict[Monomial, QuadExt] = {}
    if omega.a0:
        out[()] = omega.a0
    if omega.a3:
        for i in range(p):
            out[(i, i, i)] = omega.a3
    if omega.a21:
        for m in _a21_members(p):
            out[m] = omega.a21
    for t, c in enumerate(omega.a111):
        if c:
            for m in table.members[t]:
                out[m] = c
    return _raw(p, out)


def power_sum_cubes(p: int) -> SparsePoly:
    return _raw(p, {(i, i, i): ONE for i in range(p)})


def mixed_square_sum(p: int) -> SparsePoly:
    """``sum_{i != j} X_i^2 X_j``."""
    return _raw(p, {m: ONE for m in _a21_members(p)})


def group_average(poly: SparsePoly) -> SparsePoly:
    """Average over the affine group; the result is affine invariant."""
    p = poly.p
    out: dict[Monomial, QuadExt] = {}
    order = QuadExt(Fraction(p * (p - 1)))
    for a in range(1, p):
        for b in range(p):
            for m, c in poly.terms.items():
                key = tuple(sorted((a * i + b) % p for i in m))
                out[key] = out.get(key, ZERO) + c
    return _raw(p, {m: c / order for m, c in out.items() if c})


__all__ = [
    "DegreeOverflow",
    "NonInvariantError",
    "OmegaVector",
    "SparsePoly",
    "ap_polynomial",
    "group_average",
    "mixed_square_sum",
    "omega_of",
    "poly_sum",
    "power_sum_cubes",
    "quadratic_form",
    "reconstruct",
    "square_linear",
]

