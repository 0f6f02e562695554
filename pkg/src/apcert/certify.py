"""Exact verification of the degree-3 sum-of-squares certificates.

A certificate asserts an identity of affine-invariant cubics

    sum_{AP} X_i X_j X_k - lambda(D) = sum of terms,

where each term is ``coefficient(D) * body(D)``. The identity is checked in
omega-coordinates by exact evaluation at integer values of ``D``; both sides
are polynomials of degree at most 3 in ``D``, so four points decide it.

Some certificates are printed ambiguously (index ranges, an index offset,
one sign). Each plausible reading is built as its own :class:`Certificate`;
the verifier tries them in a fixed order, literal reading first, and the
report names the reading that checks together with the residuals of the
ones that do not.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Literal

from .modgroup import OrbitTable, affine_orbits3, check_modulus, primitive_root
from .qfield import ONE, ZERO, QuadExt, exact_cos
from .sympoly import (
    OmegaVector,
    SparsePoly,
    ap_polynomial,
    mixed_square_sum,
    omega_of,
    poly_sum,
    power_sum_cubes,
    quadratic_form,
    square_linear,
)

Theorem = Literal["general", "small-prime"]
SMALL_PRIMES = (5, 7, 11, 13, 17)
CHECK_POINTS = (0, 1, 2, 3)

Q = QuadExt
F = Fraction
S3 = QuadExt.sqrt(3)
S5 = QuadExt.sqrt(5)


def _q(x: int | Fraction) -> QuadExt:
    return QuadExt(F(x))


# ---------------------------------------------------------------------------
# closed-form bounds


def lambda_general(p: int, D: int) -> Fraction:
    """``(D^3 - (p+3)/2 D^2 + ((p+3)/2 - 1) D) / (p-1)``."""
    check_modulus(p)
    h = F(p + 3, 2)
    return (F(D) ** 3 - h * D * D + (h - 1) * D) / (p - 1)


_SMALL_LAMBDA: dict[int, Callable[[QuadExt], QuadExt]] = {
    5: lambda d: (d**3 - 3 * d**2 + 2 * d) / 6,
    7: lambda d: (d**3 - 4 * d**2 + 3 * d) / 8,
    11: lambda d: (S5 * d**3 + (15 - 12 * S5) * d**2 + (-15 + 11 * S5) * d) / 30,
    13: lambda d: (21 - 2 * S3) / 286 * d**3 + (28 * S3 - 151) / 286 * d**2 + (5 - S3) / 11 * d,
    17: lambda d: d**3 / 24 - d**2 / 4 + 5 * d / 24,
}


def lambda_small(p: int, D: int) -> QuadExt:
    if p not in _SMALL_LAMBDA:
        raise ValueError(f"no small-prime certificate for p={p}; choose from {SMALL_PRIMES}")
    return _SMALL_LAMBDA[p](_q(D))


# ---------------------------------------------------------------------------
# certificate data


@dataclass(frozen=True)
class TermPart:
    coefficient: Callable[[int], QuadExt]
    body: Callable[[int], SparsePoly]
    label: str = ""


@dataclass(frozen=True)
class Term:
    name: str
    parts: tuple[TermPart, ...]

    def polynomial(self, D: int) -> SparsePoly:
        p = None
        polys = []
        for part in self.parts:
            body = part.body(D)
            p = body.p
            polys.append(body.scale(part.coefficient(D)))
        assert p is not None
        return poly_sum(p, polys)


@dataclass(frozen=True)
class Certificate:
    p: int
    theorem: Theorem
    reading: str
    terms: tuple[Term, ...]
    bound: Callable[[int], QuadExt]

    def perturbed(self, term: str, delta: QuadExt, part: int = 0) -> Certificate:
        """Copy with ``delta`` added to one coefficient (mutation testing)."""
        new_terms = []
        for t in self.terms:
            if t.name == term:
                parts = list(t.parts)
                old = parts[part]
                parts[part] = replace(old, coefficient=lambda D, c=old.coefficient: c(D) + delta)
                t = replace(t, parts=tuple(parts))
            new_terms.append(t)
        if [t.name for t in new_terms].count(term) != 1:
            raise KeyError(term)
        return replace(self, terms=tuple(new_terms), reading=self.reading + f"+mutated({term})")


# bodies shared by both theorems ------------------------------------------------


def square_linear_pairs(p: int, items: list[tuple[int, int]]) -> SparsePoly:
    """Square of ``sum c X_idx`` given as ``(idx, c)`` pairs; indices mod p."""
    coeffs: dict[int, QuadExt] = {}
    for idx, c in items:
        coeffs[idx % p] = coeffs.get(idx % p, ZERO) + c
    return square_linear(p, coeffs)


@lru_cache(maxsize=None)
def _table(p: int) -> OrbitTable:
    return affine_orbits3(p)


@lru_cache(maxsize=None)
def _ap(p: int) -> SparsePoly:
    return ap_polynomial(p, _table(p))


@lru_cache(maxsize=None)
def centred_square_sum(p: int, D: int) -> SparsePoly:
    """``sum_i (D X_i - sum_j X_j)^2 X_i``."""
    polys = []
    for i in range(p):
        lin = {j: _q(-1) for j in range(p)}
        lin[i] = _q(D - 1)
        polys.append(square_linear(p, lin).times_variable(i))
    return poly_sum(p, polys)


def cube_constraint(p: int, D: int) -> SparsePoly:
    """``D - sum X_i^3``."""
    return SparsePoly.constant(p, D) - power_sum_cubes(p)


def mixed_constraint(p: int, D: int) -> SparsePoly:
    """``sum_{i != j} X_i^2 X_j - D(D-1)``."""
    return mixed_square_sum(p) - SparsePoly.constant(p, D * (D - 1))


def _const(value: QuadExt | Fraction | int) -> Callable[[int], QuadExt]:
    v = QuadExt.coerce(value)
    return lambda D: v


# Theorem 1 ---------------------------------------------------------------------


PairRange = Literal["strict", "inclusive", "gap"]


def theorem1_pairs(p: int, pairs: PairRange) -> list[tuple[int, int]]:
    """Offset pairs ``(s, t)`` so that the square is
    ``(X_{i+s} - X_{i+t} - X_{i-t} + X_{i-s})^2``.

    ``strict`` and ``inclusive`` read the printed subscripts literally,
    ``s = j`` and ``t = j + k`` with ``0 < j < k < (p-1)/2`` or ``k <= (p-1)/2``.
    ``gap`` reads ``k`` as the gap between the two offsets, so ``t = j + k``
    with ``j, k >= 1`` and ``j + k <= (p-1)/2``.
    """
    h = (p - 1) // 2
    if pairs == "strict":
        return [(j, j + k) for k in range(1, h) for j in range(1, k)]
    if pairs == "inclusive":
        return [(j, j + k) for k in range(1, h + 1) for j in range(1, k)]
    if pairs == "gap":
        return [(j, j + k) for j in range(1, h) for k in range(1, h - j + 1)]
    raise ValueError(f"unknown pair range {pairs!r}")


@lru_cache(maxsize=None)
def theorem1_pair_square_sum(p: int, pairs: PairRange) -> SparsePoly:
    """``sum_i X_i sum_(s,t) (X_{i+s} - X_{i+t} - X_{i-t} + X_{i-s})^2``.

    The symbol ``n`` in the printed subscripts ``X_{n-j+i}`` is read as ``p``.
    """
    polys = []
    for i in range(p):
        for s_, t_ in theorem1_pairs(p, pairs):
            lin = [(i + s_, 1), (i + t_, -1), (i - t_, -1), (i - s_, 1)]
            polys.append(square_linear_pairs(p, lin).times_variable(i))
    return poly_sum(p, polys)


def theorem1_certificate(p: int, pairs: PairRange = "strict", sigma4: str = "stated") -> Certificate:
    """Theorem 1 certificate under one reading.

    ``sigma4="stated"`` uses ``(4D - p + 3) / (2(p-1))`` as printed in the
    statement; ``"proof"`` uses ``(2D - (p+3)/2) / (p-1)``, the value in the
    proof's omega-line for the same term.
    """
    check_modulus(p)
    if sigma4 == "stated":
        s4 = lambda D: _q(F(4 * D - p + 3, 2 * (p - 1)))  # noqa: E731
    elif sigma4 == "proof":
        s4 = lambda D: _q(F(4 * D - p - 3, 2 * (p - 1)))  # noqa: E731
    else:
        raise ValueError(sigma4)
    inv = _q(F(1, p - 1))
    terms = (
        Term("sigma1", (TermPart(_const(inv), lambda D: theorem1_pair_square_sum(p, pairs)),)),
        Term("sigma2", (TermPart(_const(inv), lambda D: centred_square_sum(p, D)),)),
        Term("sigma3", (TermPart(lambda D: _q(F((D - 1) ** 2, p - 1)), lambda D: cube_constraint(p, D)),)),
        Term("sigma4", (TermPart(s4, lambda D: mixed_constraint(p, D)),)),
    )
    reading = f"sigma1 pairs {pairs}, sigma4 {sigma4}"
    return Certificate(p, "general", reading, terms, lambda D: _q(lambda_general(p, D)))


THEOREM1_READINGS: tuple[tuple[PairRange, str], ...] = tuple(
    (pr, s4) for s4 in ("stated", "proof") for pr in ("strict", "inclusive", "gap")
)


# Theorem 2 ---------------------------------------------------------------------


IndexRule = Callable[[int, int, int, int], int]

# candidate readings of the printed subscript r^(i+j)+1, with X_i the multiplier
INDEX_RULES: dict[str, IndexRule] = {
    "r^(i+j)+1": lambda p, r, i, j: (pow(r, i + j, p) + 1) % p,
    "r^(i+j)": lambda p, r, i, j: pow(r, i + j, p),
    "i+r^j": lambda p, r, i, j: (i + pow(r, j, p)) % p,
}


def fourier_square_sum(p: int, rule: IndexRule, r: int, length: int, f: int, q: int) -> SparsePoly:
    """``sum_i X_i [(sum_j cos(2 pi f j/q) X_idx)^2 + (sum_j sin(...) X_idx)^2]``.

    The two squares combine to ``sum_{j,l} cos(2 pi f (j-l)/q) X_idx(j) X_idx(l)``,
    which needs only exact cosines.
    """
    polys = []
    for i in range(p):
        idx = [rule(p, r, i, j) for j in range(length)]
        entries: dict[tuple[int, int], QuadExt] = {}
        for a in range(length):
            for b in range(length):
                key = (idx[a], idx[b])
                entries[key] = entries.get(key, ZERO) + exact_cos(f * (a - b), q)
        polys.append(quadratic_form(p, entries).times_variable(i))
    return poly_sum(p, polys)


def signed_square_sum(p: int, signs_idx: Callable[[int], list[tuple[int, int]]]) -> SparsePoly:
    polys = []
    for i in range(p):
        polys.append(square_linear_pairs(p, signs_idx(i)).times_variable(i))
    return poly_sum(p, polys)


def _smallprime_terms(p: int, s1: QuadExt, s3: Callable[[int], QuadExt]) -> list[Term]:
    return [
        Term("sigma1", (TermPart(_const(s1), lambda D: centred_square_sum(p, D)),)),
        Term("sigma2", (TermPart(lambda D: s1 * (D - 1) ** 2, lambda D: cube_constraint(p, D)),)),
        Term("sigma3", (TermPart(s3, lambda D: mixed_constraint(p, D)),)),
    ]


def smallprime_certificates(p: int) -> list[Certificate]:
    """Every reading of the printed small-prime certificate, literal first."""
    if p not in SMALL_PRIMES:
        raise ValueError(f"no small-prime certificate for p={p}; choose from {SMALL_PRIMES}")
    bound = lambda D: lambda_small(p, D)  # noqa: E731
    r = primitive_root(p)
    if p == 5:
        terms = _smallprime_terms(p, _q(F(1, 6)), lambda D: _q(F(2 * D - 3, 6)))
        return [Certificate(p, "small-prime", "as printed", tuple(terms), bound)]
    if p == 7:
        terms = _smallprime_terms(p, _q(F(1, 8)), lambda D: _q(F(D - 2, 4)))
        signs = ((1, 1), (2, 1), (3, -1), (4, 1), (5, -1), (6, -1))
        body = signed_square_sum(p, lambda i: [(i + s, c) for s, c in signs])
        terms.append(Term("sigma4", (TermPart(_const(F(1, 8)), lambda D: body),)))
        return [Certificate(p, "small-prime", "as printed", tuple(terms), bound)]

    certs = []
    if p == 11:
        s1 = S5 / 30
        base = _smallprime_terms(p, s1, lambda D: (2 * S5 * D + 15 - 12 * S5) / 30)
        for name, rule in INDEX_RULES.items():
            body = fourier_square_sum(p, rule, r, p - 1, 2, 10)
            t4 = Term("sigma4", (TermPart(_const((9 * S5 - 15) / 30), lambda D, b=body: b),))
            certs.append(Certificate(p, "small-prime", f"X index {name}", tuple(base + [t4]), bound))
    elif p == 13:
        s1 = (21 - 2 * S3) / 286
        base = _smallprime_terms(p, s1, lambda D: (2 * (21 - 2 * S3) * D + 28 * S3 - 151) / 286)
        c_a, c_b = (23 - 9 * S3) / 286, (5 - S3) / 22
        # the printed pairing of the two coefficients with the two squares,
        # then the transposed pairing
        for swapped in (False, True):
            first, second = (c_b, c_a) if swapped else (c_a, c_b)
            for name, rule in INDEX_RULES.items():
                b2 = fourier_square_sum(p, rule, r, p - 1, 2, 12)
                b1 = fourier_square_sum(p, rule, r, p - 1, 1, 12)
                t4 = Term(
                    "sigma4",
                    (
                        TermPart(_const(first), lambda D, b=b2: b, "cos(4 pi j/12)"),
                        TermPart(_const(second), lambda D, b=b1: b, "cos(2 pi j/12)"),
                    ),
                )
                reading = f"X index {name}" + (", coefficients transposed" if swapped else "")
                certs.append(Certificate(p, "small-prime", reading, tuple(base + [t4]), bound))
    elif p == 17:
        base = _smallprime_terms(p, _q(F(1, 24)), lambda D: _q(F(2 * D - 6, 24)))
        # printed sum runs j = 0..16, one past the order 16 of r = 3
        for length in (p, p - 1):
            for name, rule in INDEX_RULES.items():
                body = signed_square_sum(
                    p, lambda i, rule=rule, length=length: [(rule(p, r, i, j), (-1) ** j) for j in range(length)]
                )
                t4 = Term("sigma4", (TermPart(_const(F(1, 8)), lambda D, b=body: b),))
                reading = f"X index {name}, j=0..{length - 1}"
                certs.append(Certificate(p, "small-prime", reading, tuple(base + [t4]), bound))
    return certs


# ---------------------------------------------------------------------------
# checking


class ReadingFailure(Exception):
    pass


@dataclass
class Attempt:
    reading: str
    verified: bool
    residuals: dict[int, OmegaVector] = field(default_factory=dict)
    error: str | None = None

    def to_json(self) -> dict[str, object]:
        return {
            "reading": self.reading,
            "verified": self.verified,
            "error": self.error,
            "residuals": {str(D): w.to_json() for D, w in self.residuals.items()},
        }


_BODY_OMEGA: dict[int, tuple[SparsePoly, OmegaVector]] = {}


def _body_omega(body: SparsePoly) -> OmegaVector:
    # bodies from the lru caches are long-lived, so identity is a safe key;
    # the stored reference keeps the id from being recycled
    hit = _BODY_OMEGA.get(id(body))
    if hit is not None and hit[0] is body:
        return hit[1]
    w = omega_of(body, _table(body.p))
    if len(_BODY_OMEGA) > 4096:
        _BODY_OMEGA.clear()
    _BODY_OMEGA[id(body)] = (body, w)
    return w


def term_omega(term: Term, D: int) -> OmegaVector:
    """omega of one term, using linearity: coefficient times omega(body)."""
    total: OmegaVector | None = None
    for part in term.parts:
        w = _body_omega(part.body(D)).scale(part.coefficient(D))
        total = w if total is None else total + w
    assert total is not None
    return total


def term_lines(cert: Certificate, D: int) -> dict[str, OmegaVector]:
    return {t.name: term_omega(t, D) for t in cert.terms}


def residual(cert: Certificate, D: int) -> OmegaVector:
    """omega(AP - lambda - sum of terms) at one value of D."""
    table = _table(cert.p)
    target = omega_of(_ap(cert.p), table)
    target = OmegaVector(target.a0 - cert.bound(D), target.a3, target.a21, target.a111)
    total = OmegaVector.zero(table.d)
    for w in term_lines(cert, D).values():
        total = total + w
    return target - total


def check_certificate(cert: Certificate, points: tuple[int, ...] = CHECK_POINTS) -> Attempt:
    residuals: dict[int, OmegaVector] = {}
    try:
        for D in points:
            residuals[D] = residual(cert, D)
    except ValueError as exc:  # NonInvariantError: the reading is not even invariant
        return Attempt(cert.reading, False, residuals, f"{type(exc).__name__}: {exc}")
    ok = all(w.is_zero() for w in residuals.values())
    return Attempt(cert.reading, ok, residuals)


@dataclass
class CertificateReport:
    p: int
    theorem: Theorem
    verified: bool
    checked_D: list[int]
    residual: OmegaVector
    bound_formula: str
    reading: str | None = None
    attempts: list[Attempt] = field(default_factory=list)
    term_lines: dict[int, dict[str, OmegaVector]] = field(default_factory=dict)

    def to_json(self) -> dict[str, object]:
        return {
            "p": self.p,
            "theorem": self.theorem,
            "verified": self.verified,
            "reading": self.reading,
            "checked_D": self.checked_D,
            "residual": self.residual.to_json(),
            "bound_formula": self.bound_formula,
            "term_lines": {
                str(D): {name: w.to_json() for name, w in lines.items()}
                for D, lines in self.term_lines.items()
            },
            "attempts": [a.to_json() for a in self.attempts],
        }


def _report(p: int, theorem: Theorem, certs: list[Certificate], points: tuple[int, ...]) -> CertificateReport:
    attempts = []
    winner = None
    for cert in certs:
        att = check_certificate(cert, points)
        attempts.append(att)
        if att.verified:
            winner = cert
            break
    d = _table(p).d
    chosen = winner or certs[0]
    first = attempts[[c.reading for c in certs].index(chosen.reading)]
    res = next((w for w in first.residuals.values() if not w.is_zero()), OmegaVector.zero(d))
    lines = {D: term_lines(winner, D) for D in points} if winner else {}
    return CertificateReport(
        p=p,
        theorem=theorem,
        verified=winner is not None,
        checked_D=list(points),
        residual=res if winner is None else OmegaVector.zero(d),
        bound_formula=render_bound(chosen.bound),
        reading=winner.reading if winner else None,
        attempts=attempts,
        term_lines=lines,
    )


def verify_theorem1(p: int, points: tuple[int, ...] = CHECK_POINTS) -> CertificateReport:
    certs = [theorem1_certificate(p, pr, s4) for pr, s4 in THEOREM1_READINGS]
    return _report(p, "general", certs, points)


def verify_smallprime(p: int, points: tuple[int, ...] = CHECK_POINTS) -> CertificateReport:
    return _report(p, "small-prime", smallprime_certificates(p), points)


def verified_certificate(report: CertificateReport) -> Certificate:
    """The certificate object behind a verified report."""
    if not report.verified:
        raise ValueError("report is not verified")
    if report.theorem == "general":
        for pr, s4 in THEOREM1_READINGS:
            cert = theorem1_certificate(report.p, pr, s4)
            if cert.reading == report.reading:
                return cert
    for cert in smallprime_certificates(report.p):
        if cert.reading == report.reading:
            return cert
    raise AssertionError("reading not reproducible")


def random_points(count: int, seed: int = 0, lo: int = -20, hi: int = 40) -> tuple[int, ...]:
    rng = random.Random(seed)
    return tuple(rng.randint(lo, hi) for _ in range(count))


# ---------------------------------------------------------------------------
# rendering the bound as D(D-1)(aD + b)


def cubic_coefficients(f: Callable[[int], QuadExt]) -> tuple[QuadExt, QuadExt, QuadExt, QuadExt]:
    """Coefficients (c0, c1, c2, c3) of the cubic through f(0..3)."""
    y = [QuadExt.coerce(f(x)) for x in range(4)]
    # Newton forward differences
    d1 = [y[i + 1] - y[i] for i in range(3)]
    d2 = [d1[i + 1] - d1[i] for i in range(2)]
    d3 = d2[1] - d2[0]
    c3 = d3 / 6
    c2 = d2[0] / 2 - 3 * c3
    c1 = d1[0] - c2 - c3
    c0 = y[0]
    return c0, c1, c2, c3


def _fmt(c: QuadExt) -> str:
    if c.is_rational:
        return str(c.a)
    if c.a == 0:
        return f"{c.b}*sqrt({c.m})"
    return f"({c})"


def render_bound(f: Callable[[int], QuadExt]) -> str:
    c0, c1, c2, c3 = cubic_coefficients(f)
    poly = " + ".join(
        f"{_fmt(c)}*D^{e}" if e > 1 else (f"{_fmt(c)}*D" if e == 1 else _fmt(c))
        for e, c in ((3, c3), (2, c2), (1, c1), (0, c0))
        if c
    ) or "0"
    if c0 == 0 and c1 + c2 + c3 == 0 and c3:
        # f = D(D-1)(c3 D + beta) with beta = -(c1)
        beta = -c1
        if c3.is_rational and beta.is_rational:
            root = -beta / c3
            scale = c3.to_fraction()
            lin = "D" if root == 0 else (f"(D-{root})" if root > 0 else f"(D+{-root})")
            if scale.numerator == 1:
                tail = f"/{scale.denominator}" if scale.denominator != 1 else ""
                return f"D(D-1){lin}{tail}  [= {poly}]"
            return f"{scale}*D(D-1){lin}  [= {poly}]"
        return f"D(D-1)({_fmt(c3)}*D + {_fmt(beta)})  [= {poly}]"
    return poly


# ---------------------------------------------------------------------------
# bounds against brute force


@dataclass(frozen=True)
class BoundRow:
    D: int
    general: Fraction
    small: QuadExt | None
    exact: int | None

    @property
    def sound(self) -> bool:
        """Every available lower bound sits below W, and the small-prime bound above the general one."""
        ok = True
        if self.small is not None:
            ok &= self.small >= self.general
        if self.exact is not None:
            ok &= self.general <= self.exact
            if self.small is not None:
                ok &= self.small <= self.exact
        return ok


def compare_bounds(p: int, D_max: int | None = None, cap: int | None = None) -> list[BoundRow]:
    """Rows ``(D, lambda_general, lambda_small?, W?)`` for ``D = 0..D_max``."""
    from .apcount import DEFAULT_CAP, min_aps

    check_modulus(p)
    cap = DEFAULT_CAP if cap is None else cap
    D_max = p if D_max is None else min(D_max, p)
    rows = []
    for D in range(D_max + 1):
        small = lambda_small(p, D) if p in SMALL_PRIMES else None
        exact = min_aps(p, 3, D, cap=cap).min_count if p <= cap else None
        rows.append(BoundRow(D, lambda_general(p, D), small, exact))
    return rows
