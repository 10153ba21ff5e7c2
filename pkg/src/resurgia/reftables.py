"""Embedded T- and gamma-polynomial tables with structural checks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .exact.poly import UniPoly

FAMILIES = {"T": "beta", "gamma": "alpha"}


class UnknownEntry(KeyError):
    pass


def _parse(expr: str, var: str) -> UniPoly:
    import sympy
    from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication, parse_expr,
                                            standard_transformations)

    sym = sympy.Symbol(var)
    e = parse_expr(expr, local_dict={var: sym},
                   transformations=standard_transformations + (implicit_multiplication, convert_xor))
    P = sympy.Poly(sympy.expand(e), sym)
    if P.domain not in (sympy.ZZ, sympy.QQ):
        raise ValueError(f"non-rational coefficients in {expr!r}")
    return UniPoly([Fraction(int(c.p), int(c.q)) for c in reversed(P.all_coeffs())], var)


@dataclass(frozen=True)
class RefPolyTable:
    family: str
    entries: dict
    source: dict

    def __getitem__(self, index: int) -> UniPoly:
        try:
            return self.entries[index]
        except KeyError:
            raise UnknownEntry(f"{self.family} has no entry {index}") from None


@lru_cache(maxsize=1)
def load_tables() -> dict[str, RefPolyTable]:
    text = resources.files("resurgia").joinpath("data/ref_tables.txt").read_text()
    raw: dict = {f: {} for f in FAMILIES}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, expr = line.split(":", 1)
        fam, idx = head.split()
        raw[fam][int(idx)] = expr.strip()
    return {f: RefPolyTable(f, {i: _parse(s, FAMILIES[f]) for i, s in raw[f].items()}, raw[f]) for f in FAMILIES}


def ref_poly(family: str, index: int) -> UniPoly:
    if family not in FAMILIES:
        raise UnknownEntry(f"unknown family {family!r}")
    return load_tables()[family][index]


def dumps(P: UniPoly) -> str:
    """Canonical serialization: sorted exponent -> "p/q" map."""
    return json.dumps({"var": P.var, "coeffs": P.to_json()}, sort_keys=True, separators=(",", ":"))


def loads(s: str) -> UniPoly:
    d = json.loads(s)
    return UniPoly.from_json(d["coeffs"], d["var"])


def _divides(d: UniPoly, P: UniPoly) -> bool:
    return P.divmod(d)[1].is_zero()


def _is_even(P: UniPoly) -> bool:
    return all(not c for k, c in enumerate(P.coeffs) if k % 2)


@dataclass(frozen=True)
class StructuralReport:
    checked: dict
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "violations": list(self.violations)}


def structural_check() -> StructuralReport:
    tabs = load_tables()
    bad = []
    beta = UniPoly([0, 1], "beta")
    a2m1 = UniPoly([-1, 0, 1], "alpha")
    for idx, P in sorted(tabs["T"].entries.items()):
        k = idx // 2
        if idx % 2:
            bad.append(f"T {idx}: odd index")
        if P.degree != k:
            bad.append(f"T {idx}: degree {P.degree}, expected {k}")
        if k >= 1 and not _divides(beta, P):
            bad.append(f"T {idx}: not divisible by beta")
        if P.lead <= 0:
            bad.append(f"T {idx}: leading coefficient {P.lead}")
    for k, P in sorted(tabs["gamma"].entries.items()):
        if P.degree != 2 * k:
            bad.append(f"gamma {k}: degree {P.degree}, expected {2 * k}")
        if not _is_even(P):
            bad.append(f"gamma {k}: not even in alpha")
        if k >= 1 and not _divides(a2m1, P):
            bad.append(f"gamma {k}: not divisible by alpha^2 - 1")
        if P.lead <= 0:
            bad.append(f"gamma {k}: leading coefficient {P.lead}")
    checked = {f: len(t.entries) for f, t in tabs.items()}
    return StructuralReport(checked, tuple(bad))


def roundtrip_identical() -> bool:
    for t in load_tables().values():
        for P in t.entries.values():
            s = dumps(P)
            if dumps(loads(s)) != s or loads(s) != P:
                return False
    return True


__all__ = ["FAMILIES", "UnknownEntry", "RefPolyTable", "load_tables", "ref_poly", "dumps", "loads",
           "StructuralReport", "structural_check", "roundtrip_identical"]
