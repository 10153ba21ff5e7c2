from fractions import Fraction as Fr

import numpy as np
import pytest

from resurgia import kernels
from resurgia.exact.bernoulli import BetaChoice, UnknownBetaChoice, bernoulli_number, bernoulli_poly, beta_star
from resurgia.exact.cyclo import CycloElem, CycloMatrix, cyclo_charpoly, cyclo_det
from resurgia.exact.linalg import (SingularMatrix, canonical_basis, inverse_q, nullspace_q, rank_q,
                                   rref_q)
from resurgia.exact.poly import MultiPoly, UniPoly
from resurgia.exact.puiseux import (PuiseuxSeries, SeriesError, from_power_list, series_exp, series_log,
                                    series_pow)
from resurgia.exact.rational import q, qstr


def test_qstr_canonical():
    assert qstr(Fr(4, 2)) == "2"
    assert qstr(Fr(-3, 6)) == "-1/2"
    assert q("3/6") == Fr(1, 2)
    for s in ("0", "-7", "22/7", "-1/1024"):
        assert qstr(q(s)) == s


@pytest.mark.parametrize("k,expected", [
    (0, [1]),
    (1, [Fr(-1, 2), 1]),
    (2, [Fr(1, 6), -1, 1]),
    (4, [Fr(-1, 30), 0, 1, -2, 1]),
])
def test_bernoulli_poly(k, expected):
    assert bernoulli_poly(k) == UniPoly(expected, "x")


def test_bernoulli_numbers_recursion_oracle():
    # sum_{j<=k} C(k+1, j) B_j = 0 for k >= 1
    from math import comb

    B = [bernoulli_number(j) for j in range(16)]
    for k in range(1, 15):
        assert sum(comb(k + 1, j) * B[j] for j in range(k + 1)) == 0


def test_beta_star():
    assert beta_star(1, "trivial") == UniPoly([0, 0, Fr(1, 2)], "tau")
    assert beta_star(1, "standard") == UniPoly([Fr(-1, 24), 0, Fr(1, 2)], "tau")
    # B_4(tau + 1/2)/4 = (tau^4 - tau^2/2 + 7/240)/4
    assert beta_star(3, "standard") == UniPoly([Fr(7, 960), 0, Fr(-1, 8), 0, Fr(1, 4)], "tau")
    for k in range(1, 7):
        assert beta_star(k, "standard") == bernoulli_poly(k + 1, "tau").shift(Fr(1, 2)) * Fr(1, k + 1)
    with pytest.raises(UnknownBetaChoice):
        BetaChoice.parse("lopsided")


def test_unipoly_basics():
    p = UniPoly([1, 2, 3])
    assert p(2) == 17
    assert UniPoly([1, 1]).shift(1) == UniPoly([2, 1])
    qt, r = (p * UniPoly([1, 1]) + UniPoly([5])).divmod(UniPoly([1, 1]))
    assert qt == p and r == UniPoly([5])
    assert p.deriv() == UniPoly([2, 6])
    assert p.integral().deriv() == p
    assert UniPoly.from_json(p.to_json()) == p


def test_multipoly_diff_and_product():
    vs = ("a", "b")
    a, b = MultiPoly.var(vs, "a"), MultiPoly.var(vs, "b")
    P = (a + b) * (a - b)
    assert P == a * a - b * b
    assert P.diff("a") == a * 2
    assert MultiPoly.from_json(P.to_json()) == P


def test_linalg_nullspace_and_rank():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank_q(rows) == 2
    ns = nullspace_q(rows, 3)
    assert len(ns) == 1
    v = ns[0]
    assert all(sum(Fr(r[i]) * v[i] for i in range(3)) == 0 for r in rows)
    R, piv = rref_q(rows)
    assert piv == [0, 1]
    assert canonical_basis([[2, 4], [1, 2]]) == [(Fr(1), Fr(2))]


def test_inverse_q():
    A = [[2, 1], [7, 4]]
    inv = inverse_q(A)
    assert inv == [[4, -1], [-7, 2]]
    with pytest.raises(SingularMatrix):
        inverse_q([[1, 2], [2, 4]])


def test_cyclo_relation():
    for p in range(2, 10):
        for k in range(p + 1):
            assert CycloElem.gen_power(p, k) * CycloElem.gen_power(p, p - k) == CycloElem.scalar(p, -1)


def test_cyclo_charpoly_identity_and_det():
    I3 = CycloMatrix.identity(3, 3)
    assert cyclo_charpoly(I3) == UniPoly([-1, 3, -3, 1], "t")
    assert cyclo_det(I3) == CycloElem.scalar(3, 1)


def test_puiseux_split_and_arith():
    s = PuiseuxSeries.from_terms({Fr(-1, 2): 1, Fr(0): 1, Fr(1, 2): 1, Fr(1): 1}, Fr(3, 2))
    assert s.valuation == Fr(-1, 2)
    assert s.truncation == Fr(3, 2)
    d = s.deriv()
    assert d.coefficient(Fr(-3, 2)) == Fr(-1, 2)
    assert PuiseuxSeries.from_json(s.to_json()) == s


def test_series_exp_log_pow():
    nu = from_power_list([0, 1], 4)
    assert series_exp(nu).as_dict() == {Fr(0): 1, Fr(1): 1, Fr(2): Fr(1, 2), Fr(3): Fr(1, 6)}
    one = series_exp(PuiseuxSeries.zero(trunc=3))
    assert one.as_dict() == {Fr(0): 1}
    with pytest.raises(SeriesError):
        series_exp(from_power_list([1, 1], 4))
    s = from_power_list([1, 3, -2, 5, 7], 5)
    assert series_exp(series_log(s)).agrees_with(s)
    r = series_pow(s, Fr(1, 2))
    assert (r * r).agrees_with(s)


def test_series_exp_sharp_split():
    a, b = Fr(-1, 2), Fr(1, 3)
    phi = PuiseuxSeries.from_terms({Fr(2): a, Fr(3): b}, Fr(12), var="tau")
    lead, factor = series_exp(phi, "sharp_upper")
    assert lead.as_dict() == {Fr(2): a}
    assert factor.coefficient(0) == 1
    assert factor.coefficient(3) == b
    assert factor.coefficient(6) == b * b / 2
    assert series_exp(phi, "sharp_lower") == factor


def test_kernel_implementations_agree():
    rng = np.random.default_rng(1)
    P = kernels.PRIME
    impls = kernels.implementations()
    A = rng.integers(0, P, (30, 20), dtype=np.int64)
    B = rng.integers(0, P, (20, 25), dtype=np.int64)
    a = rng.integers(0, P, 50, dtype=np.int64)
    ref = impls["numpy"]
    for impl in impls.values():
        assert np.array_equal(np.asarray(impl.matmul_mod(A, B, P)), np.asarray(ref.matmul_mod(A, B, P)))
        assert np.array_equal(np.asarray(impl.conv_mod(a, a, 50, P)), np.asarray(ref.conv_mod(a, a, 50, P)))
        assert impl.rank_mod(np.asarray(ref.matmul_mod(A, B, P)), P) == 20


def test_kernel_rank_matches_exact():
    rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0], [1, 3, 4, 4]]
    M = np.array([[kernels.to_mod(x) for x in r] for r in rows], dtype=np.int64)
    assert kernels.rank_mod(M, kernels.PRIME) == rank_q(rows) == 2
    ns = kernels.nullspace_mod(M)
    assert ns.shape == (2, 4)
    assert not (np.asarray(kernels._py.matmul_mod(M, ns.T, kernels.PRIME)) % kernels.PRIME).any()


def test_to_mod_rejects_vanishing_denominator():
    with pytest.raises(ZeroDivisionError):
        kernels.to_mod(Fr(1, kernels.PRIME))
