"""The circulant LP: best degree-3 symmetric certificate for each (p, D).

Variables are ``u_0 .. u_h`` with ``h = (p-1)/2``; ``u_l`` is the weight of
the quadratic form entries ``X_{i+x} X_{i+y}`` whose ratio ``y/x`` has
discrete log ``+-l``. Feasibility is

* ``lambda_j(u) >= 0`` for ``j = 0..h`` (circulant eigenvalues, PSD), and
* the coefficient of every distinct-triple orbit equals 1 for the
  progression orbit and 0 otherwise,

and the bound is ``D(D-1) [ (D-1)/(p-1) * u_plus - u_0 ]`` with
``u_plus = lambda_0(u)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import simplex
from .modgroup import (
    anharmonic_classes,
    check_modulus,
    discrete_log_table,
    primes_between,
    primitive_root,
)

FEAS_TOL = 1e-9
POSITIVITY_TOL = 1e-6


class ConstraintMismatch(RuntimeError):
    """Literal-V rows and orbit-derived rows define different affine sets."""


class NumericalFailure(RuntimeError):
    pass


def fold(e: int, p: int) -> int:
    """Exponent class of ``+-e`` modulo ``p-1`` as an index into ``0..h``."""
    e %= p - 1
    return min(e, p - 1 - e)


@dataclass(frozen=True)
class LpInstance:
    p: int
    r: int
    num_vars: int
    ineq_rows: np.ndarray
    eq_rows: np.ndarray
    eq_rhs: np.ndarray
    orbit_classes: tuple[tuple[int, ...], ...]
    objective: np.ndarray | None = None

    def with_objective(self, D: int) -> LpInstance:
        return LpInstance(
            self.p, self.r, self.num_vars, self.ineq_rows, self.eq_rows, self.eq_rhs,
            self.orbit_classes, objective_vector(self.p, D),
        )


def eigen_rows(p: int) -> np.ndarray:
    """Row ``j`` maps ``u`` to ``lambda_j(u)``, ``j = 0..h``."""
    h = (p - 1) // 2
    rows = np.zeros((h + 1, h + 1))
    for j in range(h + 1):
        rows[j, 0] = 1.0
        for l in range(1, h):
            rows[j, l] = 2.0 * math.cos(2.0 * math.pi * l * j / (p - 1))
        rows[j, h] = math.cos(math.pi * j)
    return rows


def fold_matrix(p: int) -> np.ndarray:
    """``(p-1) x (h+1)`` matrix taking ``u`` to ``u_full``."""
    h = (p - 1) // 2
    M = np.zeros((p - 1, h + 1))
    for e in range(p - 1):
        M[e, fold(e, p)] = 1.0
    return M


def orbit_rows(p: int, r: int | None = None) -> tuple[np.ndarray, np.ndarray, tuple[tuple[int, ...], ...]]:
    """One equality row per orbit of 3-subsets.

    The coefficient of ``X_0 X_1 X_c`` collects, for each of the three
    elements taken as the centre, twice the ``u`` weight of the ratio of the
    other two (shifted by the centre): ``2[u(c) + u(1-c) + u(1-1/c)]``.
    """
    check_modulus(p)
    r = primitive_root(p) if r is None else r
    log = discrete_log_table(p, r)
    h = (p - 1) // 2
    classes = tuple(anharmonic_classes(p))
    rows = np.zeros((len(classes), h + 1))
    rhs = np.zeros(len(classes))
    for t, cls in enumerate(classes):
        c = cls[0]
        inv_c = pow(c, p - 2, p)
        for ratio in (c, (1 - c) % p, (1 - inv_c) % p):
            rows[t, fold(log[ratio], p)] += 2.0
        rhs[t] = 1.0 if 2 in cls else 0.0
    return rows, rhs, classes


def literal_v_system(p: int, centres: str = "all", mark: str = "ap") -> tuple[np.ndarray, np.ndarray]:
    """The ``V u_full = v`` system with exponents ``i, j`` in ``1..p-2`` for rows.

    ``V_ij`` counts ``t`` with ``{0, 1, r^i} - c = {0, r^t, r^(j+t)}``,
    summed over the centre ``c`` (``centres="all"``) or only ``c = 0``
    (``centres="zero"``, the formula as printed). ``v_i`` marks ``r^i = 2``
    (``mark="two"``, as printed) or every row whose triple is a progression
    (``mark="ap"``). Columns are the ``p-1`` full exponents ``j = 0..p-2``.
    """
    check_modulus(p)
    r = primitive_root(p)
    log = discrete_log_table(p, r)
    V = np.zeros((p - 2, p - 1))
    v = np.zeros(p - 2)
    powers = [pow(r, e, p) for e in range(2 * (p - 1))]
    for i in range(1, p - 1):
        ri = powers[i]
        triple = (0, 1, ri)
        for c in triple if centres == "all" else (0,):
            others = {(x - c) % p for x in triple if x != c}
            for t in range(p - 1):
                if powers[t] not in others:
                    continue
                for j in range(p - 1):
                    if {powers[t], powers[j + t]} == others:
                        V[i - 1, j] += 1
        is_ap = (2 * ri) % p == 1 or ri == 2 or ri == p - 1  # {0,1,c} is an AP iff c in {2, -1, 1/2}
        v[i - 1] = float(ri == 2) if mark == "two" else float(is_ap)
    return V, v


def same_affine_set(A1: np.ndarray, b1: np.ndarray, A2: np.ndarray, b2: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff ``A1 x = b1`` and ``A2 x = b2`` are consistent with equal row spaces."""
    def rank(M: np.ndarray) -> int:
        return int(np.linalg.matrix_rank(M, tol=tol)) if M.size else 0

    aug1 = np.hstack([A1, b1[:, None]])
    aug2 = np.hstack([A2, b2[:, None]])
    r1, r2 = rank(A1), rank(A2)
    if rank(aug1) != r1 or rank(aug2) != r2:
        return False
    return r1 == r2 == rank(np.vstack([aug1, aug2]))


@lru_cache(maxsize=None)
def build_constraints(p: int, check_literal: bool | None = None) -> LpInstance:
    """D-independent part of the LP, cross-checked against the literal V system."""
    check_modulus(p)
    r = primitive_root(p)
    eq, rhs, classes = orbit_rows(p, r)
    if check_literal is None:
        check_literal = p <= 31
    if check_literal:
        V, v = literal_v_system(p, centres="all", mark="ap")
        if not same_affine_set(V @ fold_matrix(p), v, eq, rhs):
            raise ConstraintMismatch(f"literal V and orbit rows disagree at p={p}")
    h = (p - 1) // 2
    return LpInstance(p, r, h + 1, eigen_rows(p), eq, rhs, classes)


def objective_vector(p: int, D: int) -> np.ndarray:
    """Coefficients of ``D(D-1)[(D-1)/(p-1) u_plus - u_0]``."""
    h = (p - 1) // 2
    u_plus = np.full(h + 1, 2.0)
    u_plus[0] = u_plus[h] = 1.0
    c = (D - 1) / (p - 1) * u_plus
    c[0] -= 1.0
    return D * (D - 1) * c


@dataclass
class LpResult:
    p: int
    D: int
    bound: float
    u_opt: np.ndarray
    status: str  # optimal | infeasible | numerical-failure
    residuals: float
    pivots: int = 0
    seconds: float = 0.0
    detail: str = ""

    def to_json(self) -> dict[str, object]:
        return {
            "p": self.p,
            "D": self.D,
            "bound": self.bound,
            "status": self.status,
            "residuals": self.residuals,
            "u_opt": [float(x) for x in self.u_opt],
            "pivots": self.pivots,
            "seconds": self.seconds,
            "detail": self.detail,
        }


def constraint_violation(inst: LpInstance, u: np.ndarray) -> float:
    ineq = np.maximum(0.0, -(inst.ineq_rows @ u)).max(initial=0.0)
    eq = np.abs(inst.eq_rows @ u - inst.eq_rhs).max(initial=0.0)
    return float(max(ineq, eq))


def solve_lp(p: int, D: int) -> LpResult:
    if not 0 <= D <= p:
        raise ValueError(f"need 0 <= D <= p, got D={D}")
    inst = build_constraints(p).with_objective(D)
    start = time.perf_counter()
    assert inst.objective is not None
    # Solve in eigenvalue coordinates w = C u >= 0: the inequality block
    # becomes plain nonnegativity and only the orbit rows remain.
    C_inv = _eigen_inverse(p)
    res = simplex.solve(
        inst.objective @ C_inv,
        A_eq=inst.eq_rows @ C_inv,
        b_eq=inst.eq_rhs,
        free=False,
    )
    u = C_inv @ res.x
    elapsed = time.perf_counter() - start
    if res.status == "infeasible":
        return LpResult(p, D, float("nan"), u, "infeasible", float("inf"), res.pivots, elapsed,
                        "phase 1 left artificial mass; the constraint rows are wrong")
    if res.status != "optimal":
        return LpResult(p, D, float("nan"), u, "numerical-failure", float("inf"), res.pivots, elapsed,
                        f"simplex stopped with status {res.status}")
    viol = constraint_violation(inst, u)
    bound = float(inst.objective @ u)
    if viol > FEAS_TOL:
        return LpResult(p, D, bound, u, "numerical-failure", viol, res.pivots, elapsed,
                        f"max constraint violation {viol:.3e} exceeds {FEAS_TOL:g}")
    return LpResult(p, D, bound, u, "optimal", viol, res.pivots, elapsed)


@lru_cache(maxsize=None)
def _eigen_inverse(p: int) -> np.ndarray:
    return np.linalg.inv(eigen_rows(p))


def bracket(p: int) -> tuple[int, int]:
    """``ceil((p+3)/4)`` and ``(p+3)/2``."""
    return -(-(p + 3) // 4), (p + 3) // 2


class BracketViolation(RuntimeError):
    pass


def threshold(p: int) -> int:
    """Smallest ``D`` whose LP bound exceeds the positivity tolerance."""
    lo, hi = bracket(p)
    for D in range(2, p + 1):
        res = solve_lp(p, D)
        if res.status != "optimal":
            raise NumericalFailure(f"p={p} D={D}: {res.status} ({res.detail})")
        if res.bound > POSITIVITY_TOL:
            if not lo <= D <= hi:
                raise BracketViolation(f"p={p}: threshold {D} outside [{lo}, {hi}]")
            return D
    raise BracketViolation(f"p={p}: LP bound never positive")


@dataclass(frozen=True)
class ThresholdRow:
    p: int
    Dstar: int
    lower_bracket: int
    upper_bracket: int

    @property
    def delta_star(self) -> float:
        return self.Dstar / self.p


def threshold_curve(p_max: int, p_min: int = 5) -> list[ThresholdRow]:
    rows = []
    for p in primes_between(max(5, p_min), p_max):
        lo, hi = bracket(p)
        rows.append(ThresholdRow(p, threshold(p), lo, hi))
    return rows


def orbit_rows_by_expansion(p: int) -> tuple[np.ndarray, np.ndarray]:
    """Independent route to :func:`orbit_rows` through symbolic expansion.

    For each unit vector ``u = e_l`` expand
    ``sum_i X_i sum_{x, y != 0} U(x, y) X_{i+x} X_{i+y}`` with
    ``U(x, y) = u_fold(log(y/x))``, project onto omega-coordinates and read
    the orbit slots; by linearity these are the columns of the equality block.
    Cost grows like ``p^3`` per column, so this is for cross-checks only.
    """
    from fractions import Fraction

    from .modgroup import affine_orbits3
    from .qfield import QuadExt
    from .sympoly import omega_of, poly_sum, quadratic_form

    r = primitive_root(p)
    log = discrete_log_table(p, r)
    table = affine_orbits3(p)
    h = (p - 1) // 2
    cols = []
    one = QuadExt(Fraction(1))
    for l in range(h + 1):
        polys = []
        for i in range(p):
            entries = {}
            for x in range(1, p):
                for y in range(1, p):
                    ratio = y * pow(x, p - 2, p) % p
                    if fold(log[ratio], p) == l:
                        entries[((i + x) % p, (i + y) % p)] = one
            polys.append(quadratic_form(p, entries).times_variable(i))
        w = omega_of(poly_sum(p, polys), table)
        cols.append([float(c) for c in w.a111])
    rows = np.array(cols).T
    rhs = np.zeros(table.d)
    rhs[table.ap_orbit] = 1.0
    return rows, rhs
