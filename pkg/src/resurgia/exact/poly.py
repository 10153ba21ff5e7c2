"""Dense univariate and sparse multivariate polynomials over Q."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import zip_longest
from typing import Iterable, Mapping, Sequence

from .rational import q, qstr


def _trim(cs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class UniPoly:
    """Polynomial sum c_k var^k; ``coeffs[k]`` is the coefficient of var^k."""

    coeffs: tuple[Fraction, ...] = ()
    var: str = "x"

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        object.__setattr__(self, "coeffs", _trim(q(c) for c in coeffs))
        object.__setattr__(self, "var", var)

    @classmethod
    def monomial(cls, k: int, c=1, var: str = "x") -> "UniPoly":
        return cls([0] * k + [c], var)

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1, var: str = "x") -> "UniPoly":
        p = cls([lead], var)
        for r in roots:
            p = p * cls([-q(r), 1], var)
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other], self.var)

    def __add__(self, other):
        other = self._lift(other)
        return UniPoly([a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = q(other)
            return UniPoly([c * a for a in self.coeffs], self.var)
        if not self.coeffs or not other.coeffs:
            return UniPoly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly([1], self.var)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == UniPoly([other]).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - other.degree, 1)
        while len(rem) - 1 >= other.degree and any(rem):
            k = len(rem) - 1 - other.degree
            c = rem[-1] / other.lead
            quo[k] = c
            for i, b in enumerate(other.coeffs):
                rem[i + k] -= c * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return UniPoly(quo, self.var), UniPoly(rem, self.var)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def integral(self) -> "UniPoly":
        """Antiderivative vanishing at 0."""
        return UniPoly([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)], self.var)

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly([], other.var)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def shift(self, a) -> "UniPoly":
        """p(x + a)."""
        return self.compose(UniPoly([a, 1], self.var))

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def to_json(self) -> dict[str, str]:
        return {str(k): qstr(c) for k, c in enumerate(self.coeffs) if c}

    @classmethod
    def from_json(cls, data: Mapping[str, str], var: str = "x") -> "UniPoly":
        if not data:
            return cls([], var)
        deg = max(int(k) for k in data)
        cs = [Fraction(0)] * (deg + 1)
        for k, v in data.items():
            cs[int(k)] = q(v)
        return cls(cs, var)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False, separators=(",", ":"))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            if mono and abs(c) == 1:
                s = mono
            elif mono:
                s = f"{qstr(abs(c))}*{mono}"
            else:
                s = qstr(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, s))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    __repr__ = __str__


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial: map from exponent tuples to nonzero rationals."""

    variables: tuple[str, ...]
    terms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        variables = tuple(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(variables):
                raise ValueError("exponent tuple length does not match variables")
            c = q(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", dict(sorted(clean.items(), reverse=True)))

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        e = tuple(int(v == name) for v in variables)
        return cls(variables, {e: 1})

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "MultiPoly"):
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return MultiPoly(self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.const(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and dict(self.terms) == dict(other.terms)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, tuple(self.terms.items())))

    def diff(self, name: str) -> "MultiPoly":
        i = self.variables.index(name)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return MultiPoly(self.variables, t)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, values: Mapping[str, object]):
        acc = 0
        for e, c in self.terms.items():
            m = c
            for v, k in zip(self.variables, e):
                if k:
                    m = m * values[v] ** k
            acc = acc + m
        return acc

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [[list(e), qstr(c)] for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        return cls(data["variables"], {tuple(e): q(c) for e, c in data["terms"]})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.terms.items():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            coef = qstr(c)
            if mono:
                s = mono if c == 1 else ("-" + mono if c == -1 else f"{coef}*{mono}")
            else:
                s = coef
            out.append(s)
        return " + ".join(out).replace("+ -", "- ")

    __repr__ = __str__


__all__ = ["UniPoly", "MultiPoly"]
