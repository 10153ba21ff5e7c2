"""Driving functions, sum-product coefficients J(n) and singularity scanning."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .exact.poly import UniPoly
from .exact.puiseux import ONE, PuiseuxSeries, log_coeffs
from .exact.rational import q, qstr


class PoleOnGrid(ZeroDivisionError):
    def __init__(self, node: Fraction):
        super().__init__(f"F has a pole at the grid node {node}")
        self.node = node


class NotRational(ValueError):
    pass


def _poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a * (1 / a.lead) if not a.is_zero() else a


@dataclass(frozen=True)
class DrivingFunction:
    """Either a polynomial f with f(0) = 0 or a rational F; F = exp(-f)."""

    kind: str
    f: UniPoly | None = None
    num: UniPoly | None = None
    den: UniPoly | None = None

    def __post_init__(self):
        if self.kind == "poly_f":
            if self.f is None or self.f[0] != 0:
                raise ValueError("poly_f needs f(0) = 0")
        elif self.kind == "rational_F":
            if self.num is None or self.den is None or self.num.is_zero():
                raise ValueError("rational_F needs a nonzero numerator")
            if self.den.is_zero():
                raise ZeroDivisionError("zero denominator")
            g = _poly_gcd(self.num, self.den)
            num, den = self.num.divmod(g)[0], self.den.divmod(g)[0]
            # normalise so the denominator is monic at its lowest term
            v = den.valuation()
            c = den[v]
            object.__setattr__(self, "num", UniPoly((num * (1 / c)).coeffs, "x"))
            object.__setattr__(self, "den", UniPoly((den * (1 / c)).coeffs, "x"))
        else:
            raise ValueError(f"unknown driving kind {self.kind!r}")

    @classmethod
    def polynomial(cls, coeffs: Sequence) -> "DrivingFunction":
        """f from coefficients f_0, f_1, ... (f_0 must be 0)."""
        return cls("poly_f", f=UniPoly(coeffs, "x"))

    @classmethod
    def rational(cls, num: Sequence, den: Sequence = (1,)) -> "DrivingFunction":
        return cls("rational_F", num=UniPoly(num, "x"), den=UniPoly(den, "x"))

    @classmethod
    def parse(cls, spec) -> "DrivingFunction":
        """Accepts {"kind": ..., ...} dicts, {"F": expr} / {"f": expr}, or expression strings for F."""
        if isinstance(spec, DrivingFunction):
            return spec
        if isinstance(spec, str):
            return cls._from_expr(spec, "F")
        if not isinstance(spec, dict):
            raise ValueError(f"cannot parse driving function from {spec!r}")
        if "kind" in spec:
            extra = set(spec) - {"kind", "f", "num", "den"}
            if extra:
                raise ValueError(f"unknown driving fields {sorted(extra)}")
            if spec["kind"] == "poly_f":
                return cls.polynomial([q(c) for c in spec["f"]])
            return cls.rational([q(c) for c in spec["num"]], [q(c) for c in spec.get("den", ["1"])])
        if set(spec) == {"F"}:
            return cls._from_expr(spec["F"], "F")
        if set(spec) == {"f"}:
            return cls._from_expr(spec["f"], "f")
        raise ValueError(f"cannot parse driving function from {spec!r}")

    @classmethod
    def _from_expr(cls, expr, which: str) -> "DrivingFunction":
        import sympy

        if isinstance(expr, (list, tuple)):
            cs = [q(c) for c in expr]
            return cls.polynomial(cs) if which == "f" else cls.rational(cs)
        x = sympy.Symbol("x")
        e = sympy.sympify(str(expr), locals={"x": x}, rational=True)
        num, den = sympy.fraction(sympy.together(e))
        pn, pd = sympy.Poly(num, x), sympy.Poly(den, x)

        def coeffs(p):
            return [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]

        if which == "f":
            if pd.degree() != 0:
                raise ValueError("f must be a polynomial")
            d = Fraction(int(pd.LC().p), int(pd.LC().q))
            return cls.polynomial([c / d for c in coeffs(pn)])
        return cls.rational(coeffs(pn), coeffs(pd))

    def to_json(self) -> dict:
        if self.kind == "poly_f":
            return {"kind": "poly_f", "f": [qstr(c) for c in self.f.coeffs]}
        return {"kind": "rational_F", "num": [qstr(c) for c in self.num.coeffs],
                "den": [qstr(c) for c in self.den.coeffs]}

    # derived data -----------------------------------------------------
    @property
    def start_index(self) -> int:
        """1 when F(0) is 0 or infinite, else 0."""
        if self.kind == "poly_f":
            return 0
        return int(self.num[0] == 0 or self.den[0] == 0)

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational_F" or (self.f is not None and self.f.is_zero())

    def f_coefficients(self, order: int) -> list[Fraction]:
        """f_0..f_{order-1} of f = -log F."""
        if self.kind == "poly_f":
            return [self.f[k] for k in range(order)]
        if self.num[0] == 0 or self.den[0] == 0:
            raise ValueError("f = -log F needs F(0) finite and nonzero")
        c = self.num[0] / self.den[0]
        if c != 1:
            raise ValueError("f = -log F has f(0) != 0 unless F(0) = 1")
        a = [self.num[k] / self.num[0] for k in range(order)]
        b = [self.den[k] / self.den[0] for k in range(order)]
        la, lb = log_coeffs(a), log_coeffs(b)
        return [-(x - y) for x, y in zip(la, lb)]

    @property
    def kappa(self) -> int:
        if self.kind == "poly_f":
            v = self.f.valuation()
            if v is None:
                raise ValueError("f = 0 has no valuation")
            return v
        n = 8
        while True:
            cs = self.f_coefficients(n)
            for k, c in enumerate(cs):
                if c:
                    return k
            if n > 4096:
                raise ValueError("f = -log F vanishes identically (F = 1)")
            n *= 2

    def is_degenerate(self) -> bool:
        """f identically zero (F = 1)."""
        if self.kind == "poly_f":
            return self.f.is_zero()
        return self.num == self.den

    def F_at(self, x: Fraction) -> Fraction:
        if self.kind == "poly_f":
            if self.f.is_zero():
                return Fraction(1)
            raise NotRational("F = exp(-f) is not rational for nonzero polynomial f")
        d = self.den(x)
        if d == 0:
            raise PoleOnGrid(x)
        return self.num(x) / d

    def F_numeric(self, x):
        if self.kind == "poly_f":
            return mpmath.exp(-self.f(x))
        return self.num(x) / self.den(x)


def sp_coefficient(F: DrivingFunction, n: int) -> Fraction:
    """J(n) = sum_{e<=m<=n} prod_{e<=k<=m} F(k/n), exact."""
    F = DrivingFunction.parse(F)
    if n < 0:
        raise ValueError("n must be nonnegative")
    e = F.start_index
    if n == 0:
        return Fraction(1 - e)
    # U_m = U_{m-1} b_m + A_m and B_m = B_{m-1} b_m give J = U_n / B_n in O(n) integer steps
    U, A, B = 0, 1, 1
    for m in range(e, n + 1):
        v = F.F_at(Fraction(m, n))
        a, b = v.numerator, v.denominator
        A *= a
        U = U * b + A
        B *= b
        if A == 0:
            # every later term vanishes; finish scaling the denominator
            for k in range(m + 1, n + 1):
                vb = F.F_at(Fraction(k, n)).denominator
                U *= vb
                B *= vb
            break
    return Fraction(U, B)


def sp_coefficient_numeric(F: DrivingFunction, n: int, dps: int = 30):
    F = DrivingFunction.parse(F)
    e = F.start_index
    if n == 0:
        return mpmath.mpf(1 - e)
    with mpmath.workdps(dps):
        total, prod = mpmath.mpf(0), mpmath.mpf(1)
        for m in range(e, n + 1):
            prod *= F.F_numeric(mpmath.mpf(m) / n)
            total += prod
        return +total


def sp_series(F: DrivingFunction, N: int) -> PuiseuxSeries:
    """j(zeta) = sum_{n<=N} J(n) zeta^n, truncated after zeta^N."""
    if N < 1:
        raise ValueError("N must be positive")
    F = DrivingFunction.parse(F)
    cs = [sp_coefficient(F, n) for n in range(N + 1)]
    return PuiseuxSeries(1, 0, tuple(cs), N + 1, ONE, "zeta")


# singularity scanner ---------------------------------------------------


class Inconclusive(ArithmeticError):
    def __init__(self, message: str, candidates: list[float]):
        super().__init__(message)
        self.candidates = candidates


@dataclass(frozen=True)
class SingularityEstimate:
    location: complex
    exponent: float
    confidence: float
    modulus: float
    argument: float


def _neville_zero(hs, ys):
    """Value at h = 0 of the interpolating polynomial through (hs, ys)."""
    p = list(ys)
    n = len(hs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (hs[i + k] * p[i] - hs[i] * p[i + 1]) / (hs[i + k] - hs[i])
    return p[0]


def _richardson(ns, ys, max_order: int):
    """Extrapolants of y(1/n) to n = infinity for orders 1..max_order on the tail."""
    out = []
    for K in range(1, max_order + 1):
        hs = [mpmath.mpf(1) / n for n in ns[-(K + 1):]]
        out.append(_neville_zero(hs, ys[-(K + 1):]))
    return out


def _best(extrapolants):
    """Pick the extrapolant whose neighbour differs least; return (value, spread)."""
    best, spread = extrapolants[0], mpmath.inf
    for a, b in zip(extrapolants, extrapolants[1:]):
        d = abs(b - a)
        if d < spread:
            best, spread = b, d
    return best, spread


def _prony_arguments(cs, R, terms: int = 4) -> list[float]:
    import numpy as np

    y = np.array([complex(c * R**n) for n, c in enumerate(cs)])
    y = y[len(y) // 2:]
    m = len(y)
    if m < 2 * terms + 2:
        return []
    Hk = np.array([y[i:i + terms] for i in range(m - terms)])
    rhs = -y[terms:]
    a, *_ = np.linalg.lstsq(Hk, rhs, rcond=None)
    roots = np.roots(np.concatenate(([1.0], a[::-1])))
    # roots of modulus near one are the dominant singularity directions
    good = [r for r in roots if abs(abs(r) - 1) < 0.05]
    return sorted({round(float(-np.angle(r)), 6) for r in good})


def locate_closest_singularity(coeffs: Sequence, *, tail: int | None = None, max_order: int = 6,
                               tolerance: float = 1e-4, dps: int = 50) -> SingularityEstimate:
    """Dominant singularity of sum c_n z^n from the tail of its coefficients.

    The ratio c_n / c_{n-1} is extrapolated in 1/n to get 1/zeta_0; then
    n (r_n zeta_0 - 1) extrapolates to alpha with c_n ~ n^alpha zeta_0^-n, and
    the local exponent is sigma = -alpha - 1.
    """
    if len(coeffs) < 30:
        raise ValueError("need at least 30 coefficients")
    with mpmath.workdps(dps):
        cs = [mpmath.mpc(complex(c)) if isinstance(c, complex) else
              (mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpmath.mpf(c))
              for c in coeffs]
        N = len(cs) - 1
        if all(c == 0 for c in cs[-10:]):
            raise ValueError("coefficients are eventually zero")
        tail = tail or max(10, N // 4)
        ns = list(range(N - tail + 1, N + 1))
        if any(cs[n - 1] == 0 for n in ns):
            R = abs(cs[N]) ** (-mpmath.mpf(1) / N) if cs[N] != 0 else mpmath.mpf(1)
            raise Inconclusive("vanishing coefficients in the tail", _prony_arguments(cs, R))
        r = [cs[n] / cs[n - 1] for n in ns]
        mus = _richardson(ns, r, max_order)
        mu, spread = _best(mus)
        rel = spread / abs(mu) if mu != 0 else mpmath.inf
        if mu == 0 or rel > tolerance:
            R = 1 / abs(mu) if mu != 0 else abs(cs[N]) ** (-mpmath.mpf(1) / N)
            raise Inconclusive(f"ratio extrapolants do not settle (relative spread {float(rel):.3g})",
                               _prony_arguments(cs, R))
        zeta0 = 1 / mu
        s = [n * (rn / mu - 1) for n, rn in zip(ns, r)]
        alphas = _richardson(ns, s, max_order)
        alpha, aspread = _best(alphas)
        sigma = -alpha - 1
        conf = float(-mpmath.log10(max(rel, mpmath.mpf(10) ** (-dps + 5))))
        loc = complex(zeta0)
        if abs(loc.imag) < 1e-12 * max(1.0, abs(loc)):
            loc = complex(loc.real, 0.0)
        sig = complex(sigma)
        return SingularityEstimate(loc, float(sig.real), conf, abs(loc), float(mpmath.arg(zeta0)))


__all__ = ["DrivingFunction", "PoleOnGrid", "NotRational", "sp_coefficient", "sp_coefficient_numeric",
           "sp_series", "locate_closest_singularity", "SingularityEstimate", "Inconclusive"]
