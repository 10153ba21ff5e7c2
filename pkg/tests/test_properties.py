"""Randomized invariants over the exact layers."""
from fractions import Fraction as Fr

from hypothesis import given, settings, strategies as st

from resurgia import kernels
from resurgia import monodromy as md
from resurgia.covariance import eps_derive, lambda_covariance_holds, variables
from resurgia.exact.cyclo import CycloElem, cyclo_charpoly
from resurgia.exact.poly import MultiPoly
from resurgia.exact.puiseux import from_power_list, series_exp, series_log
from resurgia.ode import DiffOperator, dimension_scan, transform_equivalence

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def multipolys(r):
    vs = variables(r)
    mono = st.tuples(*[st.integers(0, 2) for _ in vs])
    return st.dictionaries(mono, small_q, max_size=4).map(lambda t: MultiPoly(vs, t))


@st.composite
def leibniz_pairs(draw):
    r = draw(st.integers(1, 4))
    return r, draw(multipolys(r)), draw(multipolys(r))


@settings(max_examples=300, deadline=None)
@given(leibniz_pairs())
def test_eps_derive_leibniz(case):
    r, P, Q = case
    assert eps_derive(P * Q, r) == eps_derive(P, r) * Q + P * eps_derive(Q, r)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.lists(small_q, min_size=6, max_size=6), small_q)
def test_lambda_shift_covariance(r, cs, eps):
    f = cs[:r] + [cs[r] or Fr(1)]
    assert lambda_covariance_holds(f, eps)


def series(n):
    return st.lists(small_q, min_size=n, max_size=n).map(lambda c: from_power_list(c, n))


@settings(max_examples=100, deadline=None)
@given(series(8), series(8), series(8))
def test_series_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a - a).is_zero()


@settings(max_examples=50, deadline=None)
@given(st.lists(small_q, min_size=7, max_size=7))
def test_exp_log_inverse(cs):
    s = from_power_list([Fr(0)] + cs, 8)
    assert series_log(series_exp(s)) == s


def cyclo(p):
    return st.lists(st.integers(-9, 9), min_size=p, max_size=p).map(lambda c: CycloElem(p, c))


@st.composite
def cyclo_triples(draw):
    p = draw(st.integers(1, 9))
    return p, draw(cyclo(p)), draw(cyclo(p)), draw(cyclo(p))


@settings(max_examples=200, deadline=None)
@given(cyclo_triples())
def test_cyclo_ring_laws(case):
    p, a, b, c = case
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(st.integers(2, 12), st.data())
def test_cyclo_generator_relation(p, data):
    k = data.draw(st.integers(0, p))
    assert CycloElem.gen_power(p, k) * CycloElem.gen_power(p, p - k) == CycloElem.scalar(p, -1)


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 9), st.sampled_from([Fr(1, 2), Fr(1), Fr(3, 2), Fr(2)]),
       st.sampled_from(["seeded", "geometric"]))
def test_crossings_unipotent_and_charpolys_integral(p, turns, source):
    res = md.compose_turn(p, turns, source)
    for e in res.schedule.events:
        assert md.is_unipotent(md.crossing_matrix(e, p))
    for cp in res.charpolys:
        assert all(c.denominator == 1 for c in cp.coeffs)
        assert cp.lead == 1 and cp.degree == p
    assert cyclo_charpoly(res.composite) == res.charpolys[-1]


ops = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small_q.filter(bool), min_size=1, max_size=6)


@settings(max_examples=100, deadline=None)
@given(ops)
def test_transform_round_trip(cs):
    P = DiffOperator("nu_side", cs)
    assert transform_equivalence(transform_equivalence(P)) == P
    Q = DiffOperator("n_side", cs)
    assert transform_equivalence(transform_equivalence(Q)) == Q


@settings(max_examples=100, deadline=None)
@given(ops, small_q)
def test_translate_round_trip(cs, c):
    P = DiffOperator("nu_side", cs)
    assert P.translate(c).translate(-c) == P


@given(st.fractions(max_denominator=1000).filter(lambda x: abs(x.numerator) <= 1000))
def test_rational_reconstruction_round_trip(x):
    assert kernels.rational_reconstruct(kernels.to_mod(x)) == x


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(0, 3))
def test_dimension_scan_monotone(cs, k):
    # rational data with a small annihilator, perturbed by a random polynomial part
    base = [Fr(1)]
    for n in range(1, 24):
        base.append(base[-1] * Fr(2 * n - 1, 2 * n))
    s = from_power_list([b + (cs[i] if i < len(cs) and i <= k else 0) for i, b in enumerate(base)], 24)
    g = dimension_scan(s, 2, 2)
    for (d, e), v in g.dims.items():
        if (d + 1, e) in g.dims:
            assert g.dims[(d + 1, e)] >= v
        if (d, e + 1) in g.dims:
            assert g.dims[(d, e + 1)] >= v
