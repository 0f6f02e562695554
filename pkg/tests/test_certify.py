from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from apcert.certify import (
    SMALL_PRIMES,
    Certificate,
    check_certificate,
    compare_bounds,
    lambda_general,
    lambda_small,
    random_points,
    render_bound,
    smallprime_certificates,
    term_lines,
    theorem1_certificate,
    verified_certificate,
    verify_smallprime,
    verify_theorem1,
)
from apcert.modgroup import affine_orbits3, primes_between
from apcert.qfield import QuadExt
from apcert.sympoly import OmegaVector, omega_of, poly_sum

S3, S5 = QuadExt.sqrt(3), QuadExt.sqrt(5)
GENERAL_PRIMES = primes_between(5, 31)
SAMPLE_D = (0, 1, 2, 3, 5, 9, -4)


def w(*xs) -> OmegaVector:
    return OmegaVector.of(*xs)


# omega-lines of the proof displays, as functions of D --------------------------


def theorem1_lines(p: int, D: int) -> dict[str, OmegaVector]:
    d = affine_orbits3(p).d
    q = F(1, p - 1)
    c4 = (2 * D - F(p + 3, 2)) * q
    return {
        "sigma1": w(0, 0, F(p - 3, 2) * q, (p - 7) * q, *([-6 * q] * (d - 1))),
        "sigma2": w(0, (D - 1) ** 2 * q, (3 - 2 * D) * q, *([6 * q] * d)),
        "sigma3": w(D * (D - 1) ** 2 * q, -(D - 1) ** 2 * q, 0, *([0] * d)),
        "sigma4": w(-D * (D - 1) * c4, 0, c4, *([0] * d)),
    }


def smallprime_lines(p: int, D: int) -> dict[str, OmegaVector]:
    if p == 5:
        s, c3, d = QuadExt.coerce(F(1, 6)), QuadExt.coerce(F(2 * D - 3, 6)), 1
        a111 = [1]
    elif p == 7:
        s, c3, d = QuadExt.coerce(F(1, 8)), QuadExt.coerce(F(D - 2, 4)), 2
        a111 = [F(3, 4), F(3, 4)]
    elif p == 11:
        s, c3, d = S5 / 30, (2 * S5 * D + 15 - 12 * S5) / 30, 2
        a111 = [S5 / 5, S5 / 5]
    elif p == 13:
        s = (21 - 2 * S3) / 286
        c3, d = ((42 - 4 * S3) * D + 28 * S3 - 151) / 286, 3
        a111 = [6 * s] * 3
    else:
        s, c3, d = QuadExt.coerce(F(1, 24)), QuadExt.coerce(F(2 * D - 6, 24)), 3
        a111 = [F(1, 4)] * 3
    lines = {
        "sigma1": w(0, s * (D - 1) ** 2, -s * (2 * D - 3), *a111),
        "sigma2": w(s * D * (D - 1) ** 2, -s * (D - 1) ** 2, *([0] * (d + 1))),
        "sigma3": w(-c3 * D * (D - 1), 0, c3, *([0] * d)),
    }
    sigma4 = {
        7: w(0, 0, F(1, 8), F(1, 4), F(-3, 4)),
        11: w(0, 0, (9 * S5 - 15) / 30, 1 - S5 / 5, -S5 / 5),
        13: w(0, 0, (88 - 22 * S3) / 286, (80 + 6 * S3) / 143, -6 * s, -6 * s),
        17: w(0, 0, F(1, 8), F(3, 4), F(-1, 4), F(-1, 4)),
    }
    if p in sigma4:
        lines["sigma4"] = sigma4[p]
    return lines


# closed forms -----------------------------------------------------------------


def test_lambda_values():
    assert [lambda_general(p, p) for p in SMALL_PRIMES] == [10, 21, 55, 78, 136]
    assert [lambda_small(p, p) for p in SMALL_PRIMES] == [10, 21, 55, 78, 136]
    assert lambda_general(7, 7) == 21 and lambda_general(7, 4) == 0
    assert lambda_small(5, 2) == 0
    assert lambda_small(17, 17) == 136
    with pytest.raises(ValueError):
        lambda_small(19, 3)


# Theorem 1 ----------------------------------------------------------------------


@pytest.mark.parametrize("p", GENERAL_PRIMES)
def test_theorem1_verifies(p):
    report = verify_theorem1(p)
    assert report.verified, report.residual
    assert report.residual.is_zero()
    assert report.reading is not None
    # the literal strict reading with the printed sigma4 is rejected, with a residual
    assert not report.attempts[0].verified


@pytest.mark.parametrize("p", [5, 7, 13, 29])
def test_theorem1_lines_match_proof(p):
    cert = verified_certificate(verify_theorem1(p))
    for D in SAMPLE_D:
        assert term_lines(cert, D) == theorem1_lines(p, D), D


def test_theorem1_p5_sigma4_mutation_hits_a21():
    cert = verified_certificate(verify_theorem1(5))
    att = check_certificate(cert.perturbed("sigma4", QuadExt.coerce(1)))
    assert not att.verified
    assert "a21" in att.residuals[1].nonzero_slots()


def test_theorem1_literal_readings_fail_loudly():
    for p in (7, 11):
        strict = check_certificate(theorem1_certificate(p, "strict", "stated"))
        assert not strict.verified
        assert strict.error or any(not r.is_zero() for r in strict.residuals.values())
    stated = check_certificate(theorem1_certificate(11, "gap", "stated"))
    assert not stated.verified and stated.residuals[0].nonzero_slots() == ["a21"]


# Theorem 2 ----------------------------------------------------------------------


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_smallprime_verifies_with_proof_lines(p):
    report = verify_smallprime(p)
    assert report.verified, report.residual
    cert = verified_certificate(report)
    for D in SAMPLE_D:
        assert term_lines(cert, D) == smallprime_lines(p, D), D


def test_smallprime_winning_readings():
    assert verify_smallprime(5).reading == "as printed"
    assert verify_smallprime(7).reading == "as printed"
    assert verify_smallprime(11).reading == "X index i+r^j"
    assert verify_smallprime(13).reading == "X index i+r^j, coefficients transposed"
    assert verify_smallprime(17).reading == "X index i+r^j, j=0..15"
    assert "sigma4" not in term_lines(verified_certificate(verify_smallprime(5)), 2)


def test_p17_bound_formula():
    report = verify_smallprime(17)
    assert report.bound_formula.startswith("D(D-1)(D-5)/24")
    assert "1/24*D^3 + -1/4*D^2 + 5/24*D" in report.bound_formula


def test_render_bound_general():
    assert render_bound(lambda D: QuadExt.coerce(lambda_general(7, D))).startswith("D(D-1)(D-4)/6")


def _all_verified() -> list[Certificate]:
    out = [verified_certificate(verify_theorem1(p)) for p in (5, 7, 11, 13)]
    out += [verified_certificate(verify_smallprime(p)) for p in SMALL_PRIMES]
    return out


@pytest.mark.parametrize("cert", _all_verified(), ids=lambda c: f"{c.theorem}-{c.p}")
def test_mutation_sensitivity(cert):
    rng = random.Random(cert.p * 31 + len(cert.theorem))
    for _ in range(20):
        term = rng.choice(cert.terms)
        part = rng.randrange(len(term.parts))
        delta = F(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 30))
        if rng.random() < 0.3 and cert.p in (11, 13):
            delta = (S5 if cert.p == 11 else S3) * delta
        att = check_certificate(cert.perturbed(term.name, QuadExt.coerce(delta), part))
        assert not att.verified, (term.name, part, delta)


@pytest.mark.parametrize("cert", _all_verified(), ids=lambda c: f"{c.theorem}-{c.p}")
def test_random_degree_spot_check(cert):
    assert check_certificate(cert, random_points(10, seed=cert.p)).verified


@pytest.mark.parametrize("p,theorem", [(5, "general"), (7, "general"), (5, "small"), (7, "small"), (13, "small")])
def test_full_expansion_agrees_with_linearity(p, theorem):
    report = verify_theorem1(p) if theorem == "general" else verify_smallprime(p)
    cert = verified_certificate(report)
    table = affine_orbits3(p)
    for D in (0, 2, 3):
        whole = poly_sum(p, [t.polynomial(D) for t in cert.terms])
        assert omega_of(whole, table) == sum(term_lines(cert, D).values(), OmegaVector.zero(table.d))


def test_report_json_has_every_term_line():
    data = verify_smallprime(7).to_json()
    assert data["verified"] is True
    assert set(data["term_lines"]["2"]) == {"sigma1", "sigma2", "sigma3", "sigma4"}
    assert data["term_lines"]["0"]["sigma4"] == {"a0": "0", "a3": "0", "a21": "1/8", "a111": ["1/4", "-3/4"]}


def test_smallprime_rejects_other_primes():
    with pytest.raises(ValueError):
        smallprime_certificates(19)


# soundness against brute force --------------------------------------------------


@pytest.mark.parametrize("p", primes_between(5, 23))
def test_bounds_below_exact_minimum(p):
    rows = compare_bounds(p)
    assert len(rows) == p + 1
    assert all(r.exact is not None and r.sound for r in rows)
    if p in SMALL_PRIMES:
        assert rows[-1].general == rows[-1].small == rows[-1].exact
