import math
import random
from fractions import Fraction as Fr

import pytest

from resurgia.exact.puiseux import PuiseuxSeries, from_power_list
from resurgia.nir import nir_transform
from resurgia.ode import (DiffOperator, IllConditioned, InsufficientTruncation, NotFound, SeriesData,
                          apply_n_side, apply_operator, dimension_scan, find_annihilators, nonexistence_report,
                          structural_variable_ode, transform_equivalence)


def inv_sqrt(N):
    c = [Fr(1)]
    for n in range(1, N):
        c.append(c[-1] * Fr(2 * n - 1, 2 * n))
    return from_power_list(c, N)


def exp_series(N):
    return from_power_list([Fr(1, math.factorial(k)) for k in range(N)], N)


# 2(1 - nu) d - 1, normal ordered
MINIMAL = DiffOperator("nu_side", {(0, 1): 2, (1, 1): -2, (0, 0): -1})


def test_apply_operator_examples():
    assert apply_operator(DiffOperator("nu_side", {(0, 1): 1, (0, 0): -1}), exp_series(20)).is_zero()
    assert apply_operator(MINIMAL, inv_sqrt(30)).is_zero()
    s = PuiseuxSeries.from_terms({Fr(-1, 2): 1})
    out = apply_operator(DiffOperator("nu_side", {(0, 1): 1}), s)
    assert out.as_dict() == {Fr(-3, 2): Fr(-1, 2)}


def test_apply_operator_rejects_n_side():
    with pytest.raises(ValueError):
        apply_operator(DiffOperator("n_side", {(0, 1): 1}), exp_series(5))


def test_transform_equivalence_dictionary():
    n_mult = DiffOperator("n_side", {(0, 1): 1})
    assert transform_equivalence(n_mult) == DiffOperator("nu_side", {(0, 1): 1})
    P = DiffOperator("nu_side", {(2, 1): 3, (0, 3): -1, (1, 0): Fr(1, 2)})
    assert transform_equivalence(transform_equivalence(P)) == P


def test_transform_equivalence_action_on_monomials():
    # nu^(s-1)/Gamma(s) <-> n^-s; nu d_nu acts as (s-1) on both sides
    P = DiffOperator("nu_side", {(1, 1): 1})
    Q = transform_equivalence(P)
    for s in (Fr(1, 2), Fr(3), Fr(-2, 3)):
        hh = PuiseuxSeries.from_terms({s: 1}, var="1/n")
        assert apply_n_side(Q, hh).as_dict() == {s: s - 1}
        h = PuiseuxSeries.from_terms({s - 1: 1})
        assert apply_operator(P, h).as_dict() == ({s - 1: s - 1} if s != 1 else {})


def test_from_n_polynomials_round_trip():
    rnd = random.Random(3)
    for _ in range(20):
        A = [[Fr(rnd.randint(-5, 5)) for _ in range(rnd.randint(1, 4))] for _ in range(rnd.randint(1, 4))]
        if not any(any(p) for p in A):
            continue
        op = DiffOperator.from_n_polynomials(A)
        back = op.n_polynomials()
        for s, p in enumerate(A):
            want = [c for c in p]
            while want and want[-1] == 0:
                want.pop()
            got = list(back[s].coeffs) if s < len(back) else []
            assert got == want


def test_translate_composes():
    P = DiffOperator("nu_side", {(2, 1): 1, (1, 0): 3})
    assert P.translate(Fr(1, 3)).translate(Fr(-1, 3)) == P


def test_structural_linear_trivial():
    A0, A1 = structural_variable_ode({"f": "x"}, "trivial").n_polynomials()
    # a multiple of 2 n d_n - 1
    lam = -A0.coeffs[0]
    assert list(A0.coeffs) == [-lam] and list(A1.coeffs) == [0, 2 * lam]


@pytest.mark.parametrize("f,beta", [("x**2", "trivial"), ("x", "standard")])
def test_structural_operator_annihilates_nir(f, beta):
    op = structural_variable_ode({"f": f}, beta)
    out = nir_transform({"f": f}, beta, 60)
    nu = transform_equivalence(op)
    d = DiffOperator("nu_side", {(a, b + 1): c for (a, b), c in nu.coeffs.items()})
    for c in out.components:
        assert apply_n_side(op, c.hh).is_zero()
        assert apply_operator(nu, c.h_prime).is_zero()
        assert apply_operator(d, c.h).is_zero()


def test_structural_not_found():
    with pytest.raises(NotFound):
        structural_variable_ode({"f": "x"}, "trivial", (0, 0, 0))


@pytest.mark.parametrize("backend", ["exact", "modular", "float"])
def test_find_minimal_operator(backend):
    rep = find_annihilators(inv_sqrt(50), 1, 1, backend)
    assert rep.nullity == 1
    assert rep.basis == (MINIMAL.normalized(),)


def test_find_exponential():
    rep = find_annihilators(exp_series(30), 0, 1)
    assert rep.basis == (DiffOperator("nu_side", {(0, 1): 1, (0, 0): -1}),)


def test_random_series_has_no_operator():
    rnd = random.Random(11)
    cs = [Fr(rnd.randint(-10 ** 6, 10 ** 6), rnd.randint(1, 10 ** 6)) for _ in range(200)]
    s = from_power_list(cs, 200)
    assert find_annihilators(s, 2, 2).nullity == 0
    assert find_annihilators(s, 2, 2, "modular").nullity == 0


def test_backends_agree_on_larger_bounds():
    s = inv_sqrt(60)
    ex = find_annihilators(s, 3, 2)
    assert find_annihilators(s, 3, 2, "modular").basis == ex.basis
    assert find_annihilators(s, 3, 2, "float").basis == ex.basis


def test_insufficient_truncation():
    with pytest.raises(InsufficientTruncation):
        find_annihilators(inv_sqrt(6), 3, 3)
    with pytest.raises(InsufficientTruncation):
        SeriesData.from_series(PuiseuxSeries.from_terms({Fr(0): 1}))


def test_float_backend_gap_and_ill_conditioning():
    # e^nu with one coefficient perturbed by 1e-9: d - 1 almost annihilates it
    cs = [Fr(1, math.factorial(k)) * (1 + (Fr(1, 10 ** 9) if k == 7 else 0)) for k in range(30)]
    s = from_power_list(cs, 30)
    loose = find_annihilators(s, 0, 1, "float", tolerance=1e-6)
    assert loose.nullity == 1
    # the numeric null vector does not verify exactly, so no operator is returned
    assert loose.basis == ()
    with pytest.raises(IllConditioned):
        find_annihilators(s, 0, 1, "float", tolerance=1e-10)
    assert find_annihilators(s, 0, 1).nullity == 0


def test_dimension_scan_inverse_sqrt():
    g = dimension_scan(inv_sqrt(50), 4, 4)
    for (d, e), v in g.dims.items():
        assert v == d * e
    assert g.fit == (0, 0, 0) and g.minimal == ((1, 1),)


def test_dimension_scan_zero_series_degenerate():
    g = dimension_scan(PuiseuxSeries.zero(trunc=20), 2, 2)
    assert g.degenerate
    assert all(v == (d + 1) * (e + 1) for (d, e), v in g.dims.items())


def test_dimension_scan_matches_structural_bounds():
    op = transform_equivalence(structural_variable_ode({"f": "x"}, "standard"))
    hp = nir_transform({"f": "x"}, "standard", 40).singular().h_prime
    g = dimension_scan(hp, 3, 3)
    assert g.minimal == ((op.degree, op.order),)
    assert g.dims[(op.degree, op.order)] == 1


def test_dimension_scan_workers_identical():
    s = inv_sqrt(50)
    assert dimension_scan(s, 2, 2, workers=2).dims == dimension_scan(s, 2, 2).dims


def test_nonexistence_monomial_singular_part():
    rep = nonexistence_report("1-x", N=80, d_max=3, delta_max=2)
    sing = rep["parts"]["singular"]
    assert not sing["identically_zero"]
    assert any(c["rank"] < c["unknowns"] for c in sing["cells"])


def test_nonexistence_small_scale():
    rep = nonexistence_report("(1-x)/(1+x)", N=120, d_max=4, delta_max=3)
    assert rep["parts"]["singular"]["empty_everywhere"]


def test_nonexistence_rejects_degenerate():
    with pytest.raises(ValueError):
        nonexistence_report("1", N=20)
