"""Truncated ramified power series with exact coefficients.

A series stores coefficients c_k of var^((base + k)/q).  Every exponent below
``trunc/q`` is known (absent coefficients are zero); ``trunc=None`` marks a
finite, exactly known series.  Irrational overall content lives in a
:class:`Prefactor` so the coefficients stay rational.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator

from .rational import q as _q, qstr


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class Prefactor:
    """Overall factor Gamma(gamma_arg)^gamma_power * radicand^(1/root) * exp(i*pi*phase)."""

    gamma_power: int = 0
    gamma_arg: Fraction = Fraction(1, 2)
    radicand: Fraction = Fraction(1)
    root: int = 2
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        if self.radicand <= 0:
            raise SeriesError("prefactor radicand must be positive; signs go into phase")
        if self.root < 1:
            raise SeriesError("root must be positive")
        object.__setattr__(self, "phase", Fraction(self.phase) % 2)

    @property
    def trivial(self) -> bool:
        return self.gamma_power == 0 and self.radicand == 1 and self.phase == 0

    def compatible(self, other: "Prefactor") -> bool:
        return self.value_key() == other.value_key()

    def value_key(self):
        g = (self.gamma_power, self.gamma_arg) if self.gamma_power else (0, None)
        # radicand^(1/root) normalised to the smallest root
        r, k = self.radicand, self.root
        for d in range(2, k + 1):
            while k % d == 0:
                num = _exact_root(r.numerator, d)
                den = _exact_root(r.denominator, d)
                if num is None or den is None:
                    break
                r, k = Fraction(num, den), k // d
        if r == 1:
            k = 1
        return g, r, k, self.phase

    def __mul__(self, other: "Prefactor") -> "Prefactor":
        if self.trivial:
            return other
        if other.trivial:
            return self
        if self.gamma_power and other.gamma_power and self.gamma_arg != other.gamma_arg:
            raise SeriesError("cannot merge prefactors with different Gamma arguments")
        arg = self.gamma_arg if self.gamma_power else other.gamma_arg
        k = self.root * other.root // gcd(self.root, other.root)
        rad = self.radicand ** (k // self.root) * other.radicand ** (k // other.root)
        return Prefactor(self.gamma_power + other.gamma_power, arg, rad, k, self.phase + other.phase)

    def value(self) -> complex:
        import mpmath

        v = complex(mpmath.gamma(mpmath.mpf(self.gamma_arg.numerator) / self.gamma_arg.denominator)) ** self.gamma_power
        v *= float(self.radicand) ** (1.0 / self.root)
        if self.phase:
            v *= cmath.exp(1j * math.pi * float(self.phase))
        return v

    def to_json(self) -> dict:
        if self.gamma_arg == Fraction(1, 2) and self.root == 2 and self.phase == 0:
            return {"gamma_half": self.gamma_power, "sqrt": qstr(self.radicand)}
        return {
            "gamma_power": self.gamma_power,
            "gamma_arg": qstr(self.gamma_arg),
            "radicand": qstr(self.radicand),
            "root": self.root,
            "phase_pi": qstr(self.phase),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Prefactor":
        if "gamma_half" in d:
            return cls(int(d["gamma_half"]), Fraction(1, 2), _q(d["sqrt"]), 2)
        return cls(int(d["gamma_power"]), _q(d["gamma_arg"]), _q(d["radicand"]), int(d["root"]), _q(d["phase_pi"]))


ONE = Prefactor()


def _exact_root(n: int, d: int):
    """Integer d-th root of n when exact, else None."""
    if n < 0:
        return None
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + d - 1) // d)
    while True:
        y = ((d - 1) * x + n // x ** (d - 1)) // d
        if y >= x:
            break
        x = y
    return x if x**d == n else None


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class PuiseuxSeries:
    q: int
    base: int
    coeffs: tuple[Fraction, ...]
    trunc: int | None = None
    prefactor: Prefactor = ONE
    var: str = "nu"

    def __post_init__(self):
        if self.q < 1:
            raise SeriesError("ramification must be positive")
        cs = tuple(_q(c) for c in self.coeffs)
        if self.trunc is not None:
            keep = max(0, self.trunc - self.base)
            cs = cs[:keep]
        # strip leading zeros, then trailing zeros
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        base = self.base + lead
        cs = cs[lead:]
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        if not cs:
            base = self.base if self.trunc is None else min(self.base, self.trunc)
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "base", base)

    # construction -----------------------------------------------------
    @classmethod
    def from_terms(cls, terms: dict, trunc_exp: Fraction | None = None, prefactor: Prefactor = ONE,
                   var: str = "nu") -> "PuiseuxSeries":
        """Build from {exponent: coefficient}; ``trunc_exp`` is the first unknown exponent."""
        exps = [_q(e) for e in terms] + ([_q(trunc_exp)] if trunc_exp is not None else [])
        qq = 1
        for e in exps:
            qq = _lcm(qq, e.denominator)
        if not terms:
            t = None if trunc_exp is None else int(_q(trunc_exp) * qq)
            return cls(qq, 0 if t is None else t, (), t, prefactor, var)
        idx = {int(_q(e) * qq): _q(c) for e, c in terms.items()}
        lo, hi = min(idx), max(idx)
        cs = [idx.get(k, Fraction(0)) for k in range(lo, hi + 1)]
        t = None if trunc_exp is None else int(_q(trunc_exp) * qq)
        return cls(qq, lo, tuple(cs), t, prefactor, var)

    @classmethod
    def zero(cls, q: int = 1, trunc: int | None = None, var: str = "nu") -> "PuiseuxSeries":
        return cls(q, 0 if trunc is None else trunc, (), trunc, ONE, var)

    @classmethod
    def one(cls, trunc: int | None = None, var: str = "nu") -> "PuiseuxSeries":
        return cls(1, 0, (Fraction(1),), trunc, ONE, var)

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> Fraction | None:
        return None if not self.coeffs else Fraction(self.base, self.q)

    @property
    def truncation(self) -> Fraction | None:
        return None if self.trunc is None else Fraction(self.trunc, self.q)

    def items(self) -> Iterator[tuple[Fraction, Fraction]]:
        for k, c in enumerate(self.coeffs):
            if c:
                yield Fraction(self.base + k, self.q), c

    def as_dict(self) -> dict[Fraction, Fraction]:
        return dict(self.items())

    def coefficient(self, e) -> Fraction:
        e = _q(e)
        if self.trunc is not None and e >= Fraction(self.trunc, self.q):
            raise SeriesError(f"coefficient at {e} lies beyond truncation {self.truncation}")
        k = e * self.q
        if k.denominator != 1:
            return Fraction(0)
        k = int(k) - self.base
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def exponents(self) -> list[Fraction]:
        return [e for e, _ in self.items()]

    # lattice changes --------------------------------------------------
    def ramify(self, qnew: int) -> "PuiseuxSeries":
        if qnew % self.q:
            raise SeriesError("new ramification must be a multiple")
        s = qnew // self.q
        if s == 1:
            return self
        cs = []
        for c in self.coeffs:
            cs.append(c)
            cs.extend([Fraction(0)] * (s - 1))
        t = None if self.trunc is None else self.trunc * s
        return PuiseuxSeries(qnew, self.base * s, tuple(cs), t, self.prefactor, self.var)

    def normalize(self) -> "PuiseuxSeries":
        """Smallest ramification able to hold the known exponents."""
        g = self.q
        for e, _ in self.items():
            g = gcd(g, e.numerator * (self.q // e.denominator))
        if self.trunc is not None:
            g = gcd(g, self.trunc)
        if g <= 1:
            return self
        terms = self.as_dict()
        return PuiseuxSeries.from_terms(terms, self.truncation, self.prefactor, self.var) \
            if terms else PuiseuxSeries.zero(1, None if self.trunc is None else self.trunc // g, self.var)

    def truncate(self, e) -> "PuiseuxSeries":
        e = _q(e) * self.q
        t = math.ceil(e)
        if self.trunc is not None:
            t = min(t, self.trunc)
        return replace(self, trunc=t)

    def with_prefactor(self, pf: Prefactor) -> "PuiseuxSeries":
        return replace(self, prefactor=pf)

    # arithmetic -------------------------------------------------------
    def _align(self, other: "PuiseuxSeries"):
        L = _lcm(self.q, other.q)
        return self.ramify(L), other.ramify(L)

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries(1, 0, (_q(other),), None, self.prefactor, self.var)
        if other.is_zero() and other.prefactor.trivial:
            pf = self.prefactor
        elif self.is_zero() and self.prefactor.trivial:
            pf = other.prefactor
        elif self.prefactor.compatible(other.prefactor):
            pf = self.prefactor
        else:
            raise SeriesError("cannot add series with different prefactors")
        a, b = self._align(other)
        trunc = _min_trunc(a.trunc, b.trunc)
        if not a.coeffs and not b.coeffs:
            return PuiseuxSeries(a.q, 0 if trunc is None else trunc, (), trunc, pf, self.var)
        lo = min(x.base for x in (a, b) if x.coeffs)
        hi = max(x.base + len(x.coeffs) for x in (a, b) if x.coeffs)
        cs = [Fraction(0)] * (hi - lo)
        for x in (a, b):
            for k, c in enumerate(x.coeffs):
                cs[x.base - lo + k] += c
        return PuiseuxSeries(a.q, lo, tuple(cs), trunc, pf, self.var)

    __radd__ = __add__

    def __neg__(self):
        return replace(self, coeffs=tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PuiseuxSeries":
        c = _q(c)
        return replace(self, coeffs=tuple(c * a for a in self.coeffs))

    def shift(self, e) -> "PuiseuxSeries":
        """Multiply by var^e."""
        e = _q(e)
        s = self.ramify(_lcm(self.q, e.denominator))
        k = int(e * s.q)
        return replace(s, base=s.base + k, trunc=None if s.trunc is None else s.trunc + k)

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return self.scale(other)
        a, b = self._align(other)
        pf = a.prefactor * b.prefactor
        ta = None if a.trunc is None else a.trunc + (b.base if b.coeffs else 0)
        tb = None if b.trunc is None else b.trunc + (a.base if a.coeffs else 0)
        if not a.coeffs or not b.coeffs:
            t = _min_trunc(ta, tb)
            return PuiseuxSeries(a.q, 0 if t is None else t, (), t, pf, self.var)
        trunc = _min_trunc(ta, tb)
        n = len(a.coeffs) + len(b.coeffs) - 1
        if trunc is not None:
            n = min(n, trunc - a.base - b.base)
        cs = [Fraction(0)] * max(n, 0)
        for i, x in enumerate(a.coeffs):
            if x:
                for j in range(min(len(b.coeffs), n - i)):
                    y = b.coeffs[j]
                    if y:
                        cs[i + j] += x * y
        return PuiseuxSeries(a.q, a.base + b.base, tuple(cs), trunc, pf, self.var)

    __rmul__ = __mul__

    def deriv(self) -> "PuiseuxSeries":
        cs = tuple(Fraction(self.base + k, self.q) * c for k, c in enumerate(self.coeffs))
        t = None if self.trunc is None else self.trunc - self.q
        return PuiseuxSeries(self.q, self.base - self.q, cs, t, self.prefactor, self.var)

    def integral(self) -> "PuiseuxSeries":
        cs = []
        for k, c in enumerate(self.coeffs):
            e = Fraction(self.base + k, self.q) + 1
            if c and e == 0:
                raise SeriesError("integral of var^-1 is not a Puiseux series")
            cs.append(c / e if c else Fraction(0))
        t = None if self.trunc is None else self.trunc + self.q
        return PuiseuxSeries(self.q, self.base + self.q, tuple(cs), t, self.prefactor, self.var)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (self.as_dict() == other.as_dict() and self.truncation == other.truncation
                and self.prefactor.compatible(other.prefactor))

    def __hash__(self):
        return hash((tuple(self.items()), self.truncation))

    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        """Equality of coefficients below the smaller truncation."""
        t = _min_q(self.truncation, other.truncation)
        keys = set(self.as_dict()) | set(other.as_dict())
        for e in keys:
            if t is not None and e >= t:
                continue
            if self.coefficient(e) != other.coefficient(e):
                return False
        return True

    # evaluation and io ------------------------------------------------
    def evaluate(self, x: complex, with_prefactor: bool = True) -> complex:
        import mpmath

        acc = mpmath.mpc(0)
        for e, c in self.items():
            acc += mpmath.mpf(c.numerator) / c.denominator * mpmath.power(x, mpmath.mpf(e.numerator) / e.denominator)
        v = complex(acc)
        return v * self.prefactor.value() if with_prefactor else v

    def to_json(self) -> dict:
        out = {
            "exponents": [qstr(e) for e, _ in self.items()],
            "coeffs": [qstr(c) for _, c in self.items()],
            "prefactor": self.prefactor.to_json(),
        }
        out["truncation"] = None if self.trunc is None else qstr(self.truncation)
        return out

    @classmethod
    def from_json(cls, d: dict, var: str = "nu") -> "PuiseuxSeries":
        terms = {_q(e): _q(c) for e, c in zip(d["exponents"], d["coeffs"])}
        t = d.get("truncation")
        return cls.from_terms(terms, None if t is None else _q(t), Prefactor.from_json(d["prefactor"]), var)

    def __str__(self) -> str:
        parts = [f"{qstr(c)}*{self.var}^({qstr(e)})" for e, c in self.items()]
        body = " + ".join(parts) if parts else "0"
        if self.trunc is not None:
            body += f" + O({self.var}^({qstr(self.truncation)}))"
        return body

    __repr__ = __str__


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _min_q(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _power_coeffs(s: PuiseuxSeries, n: int) -> list[Fraction]:
    """Coefficients on the var^(k/q) grid from exponent 0, length n."""
    out = [Fraction(0)] * n
    for k, c in enumerate(s.coeffs):
        i = s.base + k
        if 0 <= i < n:
            out[i] = c
    return out


def _grid_length(s: PuiseuxSeries, order: int | None) -> int:
    if s.trunc is not None:
        return s.trunc if order is None else min(s.trunc, order)
    if order is None:
        raise SeriesError("an exact series needs an explicit order for transcendental operations")
    return order


def exp_coeffs(a: list[Fraction]) -> list[Fraction]:
    """exp of a power series with a[0] = 0, via E' = A' E."""
    n = len(a)
    if n and a[0]:
        raise SeriesError("exp needs zero constant term")
    e = [Fraction(0)] * n
    if n:
        e[0] = Fraction(1)
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if a[j]:
                acc += j * a[j] * e[k - j]
        e[k] = acc / k
    return e


def log_coeffs(a: list[Fraction]) -> list[Fraction]:
    n = len(a)
    if not n or a[0] != 1:
        raise SeriesError("log needs constant term 1")
    out = [Fraction(0)] * n
    for k in range(1, n):
        acc = k * a[k]
        for j in range(1, k):
            if out[j] and a[k - j]:
                acc -= j * out[j] * a[k - j]
        out[k] = acc / k
    return out


def pow_coeffs(a: list[Fraction], alpha) -> list[Fraction]:
    """(a)^alpha for a[0] != 0 rational power when a[0] = 1 (J.C.P. Miller recurrence)."""
    alpha = _q(alpha)
    n = len(a)
    if not n or a[0] == 0:
        raise SeriesError("power needs a nonzero constant term")
    if a[0] != 1 and alpha.denominator != 1:
        raise SeriesError("fractional power needs constant term 1")
    out = [Fraction(0)] * n
    out[0] = a[0] ** alpha if alpha.denominator == 1 else Fraction(1)
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if a[j]:
                acc += ((alpha + 1) * j - k) * a[j] * out[k - j]
        out[k] = acc / (k * a[0])
    return out


def series_exp(phi: PuiseuxSeries, mode: str = "full", order: int | None = None):
    """Exponential of a series.

    ``full`` needs strictly positive valuation.  ``sharp_lower`` drops the
    leading (lowest-exponent) term and expands the exponential of the rest;
    ``sharp_upper`` returns ``(leading_term, series_factor)`` so the caller
    keeps exp(leading_term) as a kernel.
    """
    if mode not in ("full", "sharp_upper", "sharp_lower"):
        raise SeriesError(f"unknown exp mode {mode!r}")
    if mode == "full":
        if phi.is_zero():
            t = phi.trunc if phi.trunc is not None else order
            return PuiseuxSeries(phi.q, 0, (Fraction(1),), t, ONE, phi.var)
        if phi.base <= 0:
            raise SeriesError("exp needs strictly positive valuation in full mode")
        n = _grid_length(phi, order)
        cs = exp_coeffs(_power_coeffs(phi, n))
        return PuiseuxSeries(phi.q, 0, tuple(cs), n, ONE, phi.var)
    if phi.is_zero():
        raise SeriesError("no leading term to split off")
    lead = PuiseuxSeries(phi.q, phi.base, (phi.coeffs[0],), None, ONE, phi.var)
    rest = PuiseuxSeries(phi.q, phi.base + 1, phi.coeffs[1:], phi.trunc, ONE, phi.var)
    if rest.coeffs and rest.base <= 0:
        raise SeriesError("non-leading part must have positive valuation")
    factor = series_exp(rest, "full", order)
    return factor if mode == "sharp_lower" else (lead, factor)


def series_log(s: PuiseuxSeries, order: int | None = None) -> PuiseuxSeries:
    if s.base != 0 or not s.coeffs or s.coeffs[0] != 1:
        raise SeriesError("log needs a series with constant term 1")
    n = _grid_length(s, order)
    cs = log_coeffs(_power_coeffs(s, n))
    return PuiseuxSeries(s.q, 0, tuple(cs), n, ONE, s.var)


def series_pow(s: PuiseuxSeries, alpha, order: int | None = None) -> PuiseuxSeries:
    if s.base != 0 or not s.coeffs:
        raise SeriesError("power needs a nonzero constant term")
    n = _grid_length(s, order)
    cs = pow_coeffs(_power_coeffs(s, n), alpha)
    return PuiseuxSeries(s.q, 0, tuple(cs), n, ONE, s.var)


def from_power_list(coeffs: Iterable, trunc: int | None = None, var: str = "nu") -> PuiseuxSeries:
    cs = tuple(_q(c) for c in coeffs)
    return PuiseuxSeries(1, 0, cs, trunc, ONE, var)


__all__ = [
    "Prefactor", "ONE", "PuiseuxSeries", "SeriesError", "series_exp", "series_log", "series_pow",
    "exp_coeffs", "log_coeffs", "pow_coeffs", "from_power_list",
]
