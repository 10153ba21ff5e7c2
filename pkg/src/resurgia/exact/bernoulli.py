"""Bernoulli polynomials and the beta-star polynomials beta(d/dtau) tau^k."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping

from .poly import UniPoly
from .rational import q


_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli_number(k: int) -> Fraction:
    """B_k with B_1 = -1/2, from sum_{j<=k} C(k+1, j) B_j = 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    while len(_BERNOULLI) <= k:
        m = len(_BERNOULLI)
        acc = sum((comb(m + 1, j) * _BERNOULLI[j] for j in range(m)), Fraction(0))
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[k]


def bernoulli_poly(k: int, var: str = "x") -> UniPoly:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j); B_1(x) = x - 1/2."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return UniPoly([comb(k, j) * bernoulli_number(j) for j in range(k, -1, -1)], var)


class UnknownBetaChoice(ValueError):
    pass


@dataclass(frozen=True)
class BetaChoice:
    """beta(tau) = 1/tau + sum_s coeffs[s] tau^s.

    ``kind`` is one of trivial, standard, odd, general.  For odd/general the
    coefficients are user supplied; standard uses 1/(2 sinh(tau/2)).
    """

    kind: str = "trivial"
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("trivial", "standard", "odd", "general"):
            raise UnknownBetaChoice(self.kind)
        cs = {int(s): q(c) for s, c in dict(self.coeffs).items() if q(c)}
        if any(s < 0 for s in cs):
            raise ValueError("beta coefficients are indexed by s >= 0")
        if self.kind == "odd" and any(s % 2 == 0 for s in cs):
            raise ValueError("odd beta choice only carries odd powers")
        if self.kind in ("trivial", "standard") and cs:
            raise ValueError(f"{self.kind} beta takes no coefficients")
        object.__setattr__(self, "coeffs", dict(sorted(cs.items())))

    @classmethod
    def parse(cls, spec) -> "BetaChoice":
        if isinstance(spec, BetaChoice):
            return spec
        if spec is None:
            return cls("trivial")
        if isinstance(spec, str):
            return cls(spec)
        if isinstance(spec, dict):
            kind = spec.get("choice", spec.get("kind"))
            extra = set(spec) - {"choice", "kind", "coeffs"}
            if extra:
                raise ValueError(f"unknown beta fields {sorted(extra)}")
            return cls(kind, {int(k): q(v) for k, v in spec.get("coeffs", {}).items()})
        raise UnknownBetaChoice(repr(spec))

    def to_json(self) -> dict:
        d: dict = {"choice": self.kind}
        if self.coeffs:
            d["coeffs"] = {str(s): str(c) for s, c in self.coeffs.items()}
        return d

    def coefficient(self, s: int) -> Fraction:
        """beta_s, the coefficient of tau^s in beta(tau) - 1/tau."""
        if self.kind == "trivial":
            return Fraction(0)
        if self.kind == "standard":
            return standard_beta_coefficient(s)
        return self.coeffs.get(s, Fraction(0))

    def coefficients(self, upto: int) -> dict[int, Fraction]:
        out = {}
        for s in range(upto + 1):
            c = self.coefficient(s)
            if c:
                out[s] = c
        return out


@lru_cache(maxsize=None)
def standard_beta_coefficient(s: int) -> Fraction:
    # 1/(2 sinh(t/2)) = sum_k (2^(1-2k) - 1) B_2k t^(2k-1) / (2k)!
    if s < 0 or s % 2 == 0:
        return Fraction(0)
    k = (s + 1) // 2
    return (Fraction(2) ** (1 - 2 * k) - 1) * bernoulli_number(2 * k) / factorial(2 * k)


def beta_star(k: int, choice="trivial", var: str = "tau") -> UniPoly:
    """beta(d/dtau) applied to tau^k, with 1/d taken as the antiderivative from 0."""
    if k < 1:
        raise ValueError("beta_star needs k >= 1")
    b = BetaChoice.parse(choice)
    if b.kind == "standard":
        return bernoulli_poly(k + 1, var).shift(Fraction(1, 2)) * Fraction(1, k + 1)
    cs = [Fraction(0)] * (k + 2)
    cs[k + 1] = Fraction(1, k + 1)
    for s, bs in b.coefficients(k).items():
        cs[k - s] += bs * (factorial(k) // factorial(k - s))
    return UniPoly(cs, var)


__all__ = ["bernoulli_number", "bernoulli_poly", "BetaChoice", "UnknownBetaChoice", "beta_star",
           "standard_beta_coefficient"]
