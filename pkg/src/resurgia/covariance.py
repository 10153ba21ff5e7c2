"""Invariants, covariant polynomials and base-point shifts.

A shift of base point f -> f(. + e) acts on the coefficients through the
derivation d f_i = (i+1) f_{i+1}, d f_r = 0, d nu = -f_0.  Invariants and
covariants are its kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .exact.linalg import canonical_basis, nullspace_q
from .exact.poly import MultiPoly, UniPoly
from .exact.rational import q, qstr


class NonUniqueSolution(ArithmeticError):
    pass


class NoProperBasePoint(ValueError):
    pass


def variables(r: int) -> tuple[str, ...]:
    return tuple(f"f{i}" for i in range(r + 1)) + ("nu",)


def _degree_of(vars_: Sequence[str]) -> int:
    idx = [int(v[1:]) for v in vars_ if v.startswith("f")]
    return max(idx) if idx else -1


def eps_derive(P: MultiPoly, r: int | None = None) -> MultiPoly:
    """Image under the shift derivation; r defaults to the largest f_i among the variables."""
    vs = P.variables
    r = _degree_of(vs) if r is None else r
    images = {}
    for v in vs:
        if v == "nu":
            images[v] = -MultiPoly.var(vs, "f0") if "f0" in vs else MultiPoly(vs)
        elif v.startswith("f"):
            i = int(v[1:])
            nxt = f"f{i + 1}"
            images[v] = (i + 1) * MultiPoly.var(vs, nxt) if i < r and nxt in vs else MultiPoly(vs)
        else:
            raise ValueError(f"unexpected variable {v!r}")
    out = MultiPoly(vs)
    for v in vs:
        d = P.diff(v)
        if not d.is_zero() and not images[v].is_zero():
            out = out + d * images[v]
    return out


def is_invariant(A: MultiPoly, r: int | None = None) -> bool:
    return eps_derive(A, r).is_zero()


def is_covariant(P: MultiPoly, r: int | None = None) -> bool:
    return eps_derive(P, r).is_zero()


def parse_poly(expr: str, r: int) -> MultiPoly:
    """Polynomial in f0..fr and nu from a sympy-readable string."""
    import sympy

    vs = variables(r)
    syms = sympy.symbols(vs)
    P = sympy.Poly(sympy.sympify(expr, locals=dict(zip(vs, syms)), rational=True), *syms)
    return MultiPoly(vs, {m: Fraction(int(c.p), int(c.q)) for m, c in P.terms()})


# canonical covariants --------------------------------------------------

# as typeset; the r = 5 leading symbol is read as f5
PRINTED_PI = {
    1: "f1*nu + f0**2/2",
    2: "f2**2*nu + f0*f1*f2/2 - f1**3/20",
    3: "f3*nu + f0*f2/3 - f1**2/20",
    4: "f4**2*nu + f0*f3*f4/4 - f1*f2*f4/60 - f1*f3**2/40 + f2**2*f3/120",
    5: "f5*nu + f0*f4/5 - f1*f3/20 + f2**2/60",
}


def _monomials(r: int, degree: int, weight: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(r + 1), degree):
        if sum(combo) == weight:
            e = [0] * (r + 2)
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def covariant_shape(r: int) -> tuple[int, int, int]:
    """(power of f_r on nu, degree, weight) of the constant-in-nu part."""
    return (1, 2, r - 1) if r % 2 else (2, 3, 2 * r - 1)


@dataclass(frozen=True)
class CovariantSolveReport:
    r: int
    solution: MultiPoly
    dimension: int
    printed: MultiPoly | None
    mismatches: tuple = ()

    @property
    def matches_printed(self) -> bool | None:
        return None if self.printed is None else not self.mismatches

    def to_json(self) -> dict:
        return {"r": self.r, "solution": str(self.solution), "dimension": self.dimension,
                "printed": None if self.printed is None else str(self.printed),
                "matches_printed": self.matches_printed,
                "mismatches": [{"monomial": m, "solved": qstr(a), "printed": qstr(b)} for m, a, b in self.mismatches]}


def canonical_covariant(r: int) -> CovariantSolveReport:
    """Degree-one covariant with nu-coefficient f_r (odd r) or f_r^2 (even r), solved exactly."""
    if r < 1:
        raise ValueError("r must be at least 1")
    vs = variables(r)
    lead_pow, deg, wt = covariant_shape(r)
    lead_e = [0] * (r + 2)
    lead_e[r] = lead_pow
    lead_e[r + 1] = 1
    basis = [MultiPoly(vs, {tuple(lead_e): 1})] + [MultiPoly(vs, {m: 1}) for m in _monomials(r, deg, wt)]
    images = [eps_derive(b, r) for b in basis]
    keys = sorted({e for im in images for e in im.terms})
    rows = [[im.terms.get(k, Fraction(0)) for im in images] for k in keys]
    null = nullspace_q(rows, len(basis)) if rows else [[Fraction(int(i == j)) for i in range(len(basis))]
                                                         for j in range(len(basis))]
    pinned = [v for v in null if v[0]]
    if len(null) != 1 or not pinned:
        raise NonUniqueSolution(f"r={r}: solution space has dimension {len(null)}")
    v = [c / pinned[0][0] for c in pinned[0]]
    sol = MultiPoly(vs)
    for c, b in zip(v, basis):
        sol = sol + c * b
    printed = parse_poly(PRINTED_PI[r], r) if r in PRINTED_PI else None
    mism = []
    if printed is not None:
        for e in sorted(set(sol.terms) | set(printed.terms), reverse=True):
            a, b = sol.terms.get(e, Fraction(0)), printed.terms.get(e, Fraction(0))
            if a != b:
                mism.append((str(MultiPoly(vs, {e: 1})), a, b))
    return CovariantSolveReport(r, sol, len(null), printed, tuple(mism))


# Lambda(nu) through symmetric functions ----------------------------------


@dataclass(frozen=True)
class RootChain:
    """Every stage of f -> p(nu) without root extraction."""

    elementary_roots: tuple   # x*_s
    power_roots: tuple        # x**_s, s = 0..
    integral_powers: dict     # (s, t) -> f*_{s,t}, (f*(x))^s = sum_t f*_{s,t} x^t
    power_values: tuple       # nu**_s, s = 1..r
    elementary_values: tuple  # nu*_s, s = 1..r
    p: UniPoly


def _coeffs(f) -> list[Fraction]:
    if isinstance(f, UniPoly):
        cs = list(f.coeffs)
    else:
        cs = [q(c) for c in f]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("f must be nonzero")
    return cs


def _newton_power_sums(e: Sequence[Fraction], n: int, r: int) -> list[Fraction]:
    """p_0..p_n from elementary symmetric e_1..e_r (e[0] = 1)."""
    p = [Fraction(r)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, min(k, r + 1)):
            acc += (-1) ** (i - 1) * e[i] * p[k - i]
        if k <= r:
            acc += (-1) ** (k - 1) * k * e[k]
        p[k] = acc
    return p


def _newton_elementary(p: Sequence[Fraction], r: int) -> list[Fraction]:
    e = [Fraction(1)] + [Fraction(0)] * r
    for k in range(1, r + 1):
        e[k] = sum(((-1) ** (i - 1) * e[k - i] * p[i] for i in range(1, k + 1)), Fraction(0)) / k
    return e


def root_chain(f) -> RootChain:
    cs = _coeffs(f)
    r = len(cs) - 1
    if r < 1:
        raise ValueError("f must have degree at least 1")
    fr = cs[r]
    # f / f_r = sum (-1)^s x*_s x^(r-s)
    e = [Fraction(1)] + [(-1) ** s * cs[r - s] / fr for s in range(1, r + 1)]
    pw = _newton_power_sums(e, r * (r + 1), r)
    fstar = UniPoly(cs, "x").integral()
    ipow: dict = {}
    nu_pw = [Fraction(r)]
    acc = UniPoly([1], "x")
    for s in range(1, r + 1):
        acc = acc * fstar
        for t, c in enumerate(acc.coeffs):
            if c:
                ipow[(s, t)] = c
        nu_pw.append(sum((c * pw[t] for t, c in enumerate(acc.coeffs) if c), Fraction(0)))
    ne = _newton_elementary(nu_pw, r)
    # p(nu) = f_r prod (nu - nu_i) = f_r sum (-1)^s nu*_s nu^(r-s)
    pc = [Fraction(0)] * (r + 1)
    for s in range(r + 1):
        pc[r - s] = fr * (-1) ** s * ne[s]
    return RootChain(tuple(e[1:]), tuple(pw), ipow, tuple(nu_pw[1:]), tuple(ne[1:]), UniPoly(pc, "nu"))


def nu_of_root_chain(f) -> UniPoly:
    return root_chain(f).p


def leading_covariant_lambda(f) -> UniPoly:
    return root_chain(f).p


def shifted(f, eps) -> list[Fraction]:
    """Coefficients of f(x + eps)."""
    return list(UniPoly(_coeffs(f), "x").shift(q(eps)).coeffs)


def eta(f, eps) -> Fraction:
    """Integral of f from 0 to eps."""
    return UniPoly(_coeffs(f), "x").integral()(q(eps))


def lambda_covariance_holds(f, eps) -> bool:
    """Lambda of f(. + eps) evaluated at nu - eta equals Lambda of f."""
    lam = leading_covariant_lambda(f)
    lam_e = leading_covariant_lambda(shifted(f, eps))
    return lam_e.shift(-eta(f, eps)) == lam


# shift covariance of singular-part annihilators -------------------------


@dataclass
class ShiftCovarianceReport:
    f: list
    eps: Fraction
    eta: Fraction
    beta: str
    N: int
    cells: list = field(default_factory=list)

    @property
    def coincide(self) -> bool:
        return all(c["coincide"] for c in self.cells)

    @property
    def nontrivial(self) -> bool:
        return any(c["dimension"] for c in self.cells)

    def to_json(self) -> dict:
        return {"f": [qstr(c) for c in self.f], "eps": qstr(self.eps), "eta": qstr(self.eta), "beta": self.beta,
                "N": self.N, "coincide": self.coincide, "cells": self.cells}


def _op_space(ops, d: int, delta: int) -> list:
    keys = [(a, b) for a in range(d + 1) for b in range(delta + 1)]
    return canonical_basis([[o.coeffs.get(k, Fraction(0)) for k in keys] for o in ops])


def shift_covariance_check(f, eps, bounds=((2, 2),), N: int = 80, beta: str = "trivial",
                           backend: str = "exact") -> ShiftCovarianceReport:
    """Compare singular-part annihilator spaces at base points 0 and eps after nu -> nu - eta."""
    from .nir import nir_transform
    from .ode import SeriesData, find_annihilators
    from .sp import DrivingFunction

    cs = _coeffs(f)
    eps = q(eps)
    if cs[0] != 0:
        raise NoProperBasePoint("f(0) != 0: the origin is not a proper base point")
    sh = shifted(cs, eps)
    if sh[0] != 0:
        raise NoProperBasePoint(f"f({eps}) != 0: no proper base point after the shift")
    e = eta(cs, eps)
    sA = nir_transform(DrivingFunction.polynomial(cs), beta, N).singular().h
    sB = nir_transform(DrivingFunction.polynomial(sh), beta, N).singular().h
    rep = ShiftCovarianceReport(cs, eps, e, beta, N)
    for d, delta in bounds:
        ra = find_annihilators(SeriesData.from_series(sA), d, delta, backend)
        rb = find_annihilators(SeriesData.from_series(sB), d, delta, backend)
        A = _op_space(ra.basis, d, delta)
        B = _op_space([o.translate(e) for o in rb.basis], d, delta)
        rep.cells.append({"d": d, "delta": delta, "dimension": len(A), "dimension_shifted": len(B),
                          "coincide": A == B,
                          "basis": [str(o.normalized()) for o in ra.basis]})
    return rep


__all__ = [
    "NonUniqueSolution", "NoProperBasePoint", "variables", "eps_derive", "is_invariant", "is_covariant",
    "parse_poly", "PRINTED_PI", "CovariantSolveReport", "canonical_covariant", "covariant_shape",
    "RootChain", "root_chain", "nu_of_root_chain", "leading_covariant_lambda", "shifted", "eta",
    "lambda_covariance_holds", "ShiftCovarianceReport", "shift_covariance_check",
]
