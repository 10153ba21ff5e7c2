import random
from fractions import Fraction as Fr

import pytest
import sympy

from resurgia import covariance as cv
from resurgia.exact.poly import UniPoly

# from the invariants table
INVARIANTS = {
    2: ["f2", "f1*f1 - 4*f0*f2"],
    3: ["f3", "f2*f2 - 3*f1*f3",
        # cubic discriminant; the table's second term lacks its f3
        "f1**2*f2**2 - 4*f1**3*f3 - 4*f0*f2**3 + 18*f0*f1*f2*f3 - 27*f0**2*f3**2"],
}
TYPESET_R3_DISCRIMINANT = "f1*f1*f2*f2 - 4*f1*f1*f1 - 4*f0*f2*f2*f2 + 18*f0*f1*f2*f3 - 27*f0*f0*f3*f3"


def test_eps_derive_generators():
    assert cv.eps_derive(cv.parse_poly("f1", 3), 3) == cv.parse_poly("2*f2", 3)
    assert cv.eps_derive(cv.parse_poly("f3", 3), 3).is_zero()
    assert cv.eps_derive(cv.parse_poly("nu", 2), 2) == cv.parse_poly("-f0", 2)
    assert cv.eps_derive(cv.parse_poly("1", 2), 2).is_zero()
    assert cv.is_covariant(cv.parse_poly("f1*nu + f0**2/2", 1), 1)


@pytest.mark.parametrize("r", [2, 3])
def test_invariants(r):
    for expr in INVARIANTS[r]:
        assert cv.is_invariant(cv.parse_poly(expr, r), r), expr
    assert not cv.is_invariant(cv.parse_poly("f0", r), r)


def test_typeset_cubic_discriminant_is_not_invariant():
    assert not cv.is_invariant(cv.parse_poly(TYPESET_R3_DISCRIMINANT, 3), 3)


@pytest.mark.parametrize("r", [1, 4, 5])
def test_canonical_covariant_matches_table(r):
    rep = cv.canonical_covariant(r)
    assert rep.matches_printed
    assert rep.dimension == 1
    assert cv.is_covariant(rep.solution, r)


@pytest.mark.parametrize("r,mono", [(2, "f1^3"), (3, "f1^2")])
def test_canonical_covariant_flags_table_mismatch(r, mono):
    rep = cv.canonical_covariant(r)
    assert rep.matches_printed is False
    assert [(m, a, b) for m, a, b in rep.mismatches] == [(mono, Fr(-1, 12), Fr(-1, 20))]
    assert cv.is_covariant(rep.solution, r)
    assert not cv.is_covariant(rep.printed, r)


def test_canonical_covariant_beyond_table():
    rep = cv.canonical_covariant(6)
    assert rep.printed is None and rep.matches_printed is None
    assert cv.is_covariant(rep.solution, 6)


def test_covariant_shape():
    assert cv.covariant_shape(3) == (1, 2, 2)
    assert cv.covariant_shape(4) == (2, 3, 7)


def lambda_oracle(f):
    x, nu = sympy.symbols("x nu")
    fx = sum(sympy.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(f))
    F = sympy.integrate(fx, (x, 0, x))
    lead = sympy.Poly(fx, x).LC()
    res = sympy.resultant(sympy.expand(fx / lead), nu - F, x)
    P = sympy.Poly(sympy.expand(lead * res), nu)
    return UniPoly([Fr(int(c.p), int(c.q)) for c in reversed(P.all_coeffs())], "nu")


def test_lambda_examples():
    assert cv.leading_covariant_lambda([0, 3]) == UniPoly([0, 3], "nu")
    assert cv.leading_covariant_lambda([-1, 0, 1]) == UniPoly([Fr(-4, 9), 0, 1], "nu")
    assert cv.leading_covariant_lambda([0, -1, 1]) == UniPoly([0, Fr(1, 6), 1], "nu")


def test_lambda_against_resultant():
    rnd = random.Random(5)
    for r in range(1, 5):
        for _ in range(3):
            f = [Fr(rnd.randint(-4, 4), rnd.randint(1, 3)) for _ in range(r)] + [Fr(rnd.choice([-2, -1, 1, 3]))]
            assert cv.leading_covariant_lambda(f) == lambda_oracle(f)


def test_lambda_degree_and_shift():
    assert cv.eta([-1, 0, 1], 1) == Fr(-2, 3)
    assert cv.lambda_covariance_holds([-1, 0, 1], 1)
    for eps in (Fr(-3), Fr(1, 7), Fr(5, 2)):
        assert cv.lambda_covariance_holds([0, Fr(2, 3)], eps)
    for r in range(1, 6):
        assert cv.leading_covariant_lambda([1] * (r + 1)).degree == r


def test_root_chain_stages():
    ch = cv.root_chain([-1, 0, 1])
    assert ch.elementary_roots == (0, -1)        # roots +-1
    assert ch.power_roots[:3] == (2, 0, 2)
    assert ch.power_values == (0, Fr(8, 9))      # nu = -+2/3


def test_shift_check_trivial_and_proper_base_points():
    rep = cv.shift_covariance_check([0, 1], 0, bounds=((1, 1),), N=40)
    assert rep.coincide and rep.eta == 0
    rep = cv.shift_covariance_check([0, -1, 1], 1, bounds=((2, 2), (2, 3)), N=120)
    assert rep.eta == Fr(-1, 6)
    assert rep.coincide and rep.nontrivial


def test_shift_check_no_base_point():
    with pytest.raises(cv.NoProperBasePoint):
        cv.shift_covariance_check([0, 1], 1)
    with pytest.raises(cv.NoProperBasePoint):
        cv.shift_covariance_check([1, 1], 0)
