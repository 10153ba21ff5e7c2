"""Linear ODEs with polynomial coefficients: construction, discovery, scanning.

Operators live in the Weyl algebra generated by n and nu with [n, nu] = 1.
Coefficients are stored on normal-ordered monomials nu^a n^b; the same map is
realized as sum c nu^a d_nu^b on the nu-side and sum c (-d_n)^a n^b on the
n-side.  Formal Borel (n^-s -> nu^(s-1)/Gamma(s)) intertwines the two, so an
n-side operator killing hh(n) kills h'(nu) on the nu-side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, perm
from typing import Sequence

import mpmath
import numpy as np

from . import kernels
from .exact.bernoulli import BetaChoice
from .exact.linalg import canonical_basis, nullspace_q
from .exact.poly import UniPoly
from .exact.puiseux import PuiseuxSeries, SeriesError
from .exact.rational import falling, q, qstr


class InsufficientTruncation(SeriesError):
    pass


class IllConditioned(ArithmeticError):
    pass


class NotFound(LookupError):
    pass


# operators -------------------------------------------------------------


def _normalize_vector(v: dict) -> dict:
    """Primitive integer coefficients, positive at (highest order, lowest nu power)."""
    v = {k: q(c) for k, c in v.items() if c}
    if not v:
        raise ValueError("zero operator")
    den = math.lcm(*(c.denominator for c in v.values()))
    ints = {k: int(c * den) for k, c in v.items()}
    g = 0
    for c in ints.values():
        g = math.gcd(g, c)
    key = max(ints, key=lambda ab: (ab[1], -ab[0]))
    sign = 1 if ints[key] > 0 else -1
    return {k: Fraction(sign * c // g) for k, c in ints.items()}


@dataclass(frozen=True)
class DiffOperator:
    """sum coeffs[(a, b)] nu^a d_nu^b (nu_side) or (-d_n)^a n^b (n_side)."""

    form: str
    coeffs: dict = field(hash=False)

    def __post_init__(self):
        if self.form not in ("nu_side", "n_side"):
            raise ValueError(f"unknown operator form {self.form!r}")
        cs = {(int(a), int(b)): q(c) for (a, b), c in dict(self.coeffs).items() if q(c)}
        if not cs:
            raise ValueError("an operator needs a nonzero coefficient")
        object.__setattr__(self, "coeffs", dict(sorted(cs.items())))

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.form == other.form and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.form, tuple(self.coeffs.items())))

    @property
    def degree(self) -> int:
        return max(a for a, _ in self.coeffs)

    @property
    def order(self) -> int:
        return max(b for _, b in self.coeffs)

    def normalized(self) -> "DiffOperator":
        return DiffOperator(self.form, _normalize_vector(self.coeffs))

    def translate(self, eta) -> "DiffOperator":
        """nu -> nu - eta (nu_side)."""
        eta = q(eta)
        out: dict = {}
        for (a, b), c in self.coeffs.items():
            for i in range(a + 1):
                key = (i, b)
                out[key] = out.get(key, Fraction(0)) + c * comb(a, i) * (-eta) ** (a - i)
        return DiffOperator(self.form, out)

    @classmethod
    def from_n_polynomials(cls, A: Sequence) -> "DiffOperator":
        """n-side operator sum_s A_s(n) d_n^s, rewritten in normal order."""
        out: dict = {}
        for s, poly in enumerate(A):
            poly = poly if isinstance(poly, UniPoly) else UniPoly(poly, "n")
            for i, c in enumerate(poly.coeffs):
                if not c:
                    continue
                # d_n^s = (-1)^s nu^s;  n^i nu^s = sum_k C(i,k) s!/(s-k)! nu^(s-k) n^(i-k)
                c = c * (-1) ** s
                for k in range(min(i, s) + 1):
                    key = (s - k, i - k)
                    out[key] = out.get(key, Fraction(0)) + c * comb(i, k) * perm(s, k)
        return cls("n_side", out)

    def n_polynomials(self) -> list[UniPoly]:
        """Inverse of from_n_polynomials: the A_s(n) with the operator = sum A_s(n) d_n^s."""
        acc: dict = {}
        for (a, b), c in self.coeffs.items():
            # nu^a n^b = sum_k (-1)^k C(a,k) b!/(b-k)! n^(b-k) nu^(a-k), nu = -d_n
            for k in range(min(a, b) + 1):
                s = a - k
                key = (b - k, s)
                acc[key] = acc.get(key, Fraction(0)) + c * (-1) ** k * comb(a, k) * perm(b, k) * (-1) ** s
        order = max((s for (_, s) in acc), default=0)
        out = []
        for s in range(order + 1):
            deg = max((i for (i, t) in acc if t == s), default=-1)
            out.append(UniPoly([acc.get((i, s), 0) for i in range(deg + 1)], "n"))
        return out

    def to_json(self) -> dict:
        return {"form": self.form, "terms": [[a, b, qstr(c)] for (a, b), c in self.coeffs.items()]}

    @classmethod
    def from_json(cls, d: dict) -> "DiffOperator":
        return cls(d["form"], {(int(a), int(b)): q(c) for a, b, c in d["terms"]})

    def __str__(self) -> str:
        parts = []
        for (a, b), c in sorted(self.coeffs.items(), key=lambda t: (-t[0][1], t[0][0])):
            if self.form == "nu_side":
                mono = "*".join(x for x in ((f"nu^{a}" if a > 1 else "nu" if a else ""),
                                             (f"d^{b}" if b > 1 else "d" if b else "")) if x)
            else:
                mono = "*".join(x for x in ((f"(-dn)^{a}" if a > 1 else "(-dn)" if a else ""),
                                             (f"n^{b}" if b > 1 else "n" if b else "")) if x)
            cs = qstr(c)
            parts.append(cs if not mono else mono if c == 1 else f"-{mono}" if c == -1 else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def transform_equivalence(P: DiffOperator) -> DiffOperator:
    """Switch between the nu-side and n-side realizations (same normal-ordered coefficients)."""
    return DiffOperator("n_side" if P.form == "nu_side" else "nu_side", P.coeffs)


def apply_operator(P: DiffOperator, s: PuiseuxSeries) -> PuiseuxSeries:
    """Apply a nu-side operator to a series in nu; truncation drops by the order and rises with nu^a."""
    if P.form != "nu_side":
        raise ValueError("apply_operator takes a nu-side operator; use apply_n_side for hh(n)")
    if s.trunc is not None and not s.is_zero() and s.truncation - P.order <= s.valuation - P.order:
        raise InsufficientTruncation("series has no coefficients to act on")
    derivs = [s]
    for _ in range(P.order):
        derivs.append(derivs[-1].deriv())
    out = None
    for (a, b), c in P.coeffs.items():
        term = derivs[b].shift(a).scale(c)
        out = term if out is None else out + term
    return out


def apply_n_side(P: DiffOperator, hh: PuiseuxSeries) -> PuiseuxSeries:
    """Apply an n-side operator to a series in 1/n (exponent s means n^-s)."""
    if P.form != "n_side":
        raise ValueError("apply_n_side takes an n-side operator")
    out = None
    for s_ord, poly in enumerate(P.n_polynomials()):
        cur = hh
        for _ in range(s_ord):
            # d_n n^-s = -s n^-(s+1)
            cur = PuiseuxSeries.from_terms({e + 1: -e * c for e, c in cur.items()},
                                           None if cur.truncation is None else cur.truncation + 1,
                                           cur.prefactor, cur.var)
        for i, c in enumerate(poly.coeffs):
            if c:
                term = cur.shift(-i).scale(c)
                out = term if out is None else out + term
    return out


# structural construction ------------------------------------------------


def _bivariate_phi(f, beta) -> dict:
    from .nir import phi_expand

    return dict(phi_expand(f, beta).terms)


def _dn(P: dict) -> dict:
    """d/dn on sum c n^-k tau^j."""
    return {(k + 1, j): -k * c for (k, j), c in P.items() if k}


def _mulb(P: dict, Q: dict) -> dict:
    out: dict = {}
    for (k1, j1), c1 in P.items():
        for (k2, j2), c2 in Q.items():
            key = (k1 + k2, j1 + j2)
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _addb(P: dict, Q: dict) -> dict:
    out = dict(P)
    for k, v in Q.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def phi_chain(phi: dict, smax: int) -> list[dict]:
    """Phi_s with d_n^s exp(phi) = Phi_s exp(phi)."""
    out = [{(0, 0): Fraction(1)}]
    dphi = _dn(phi)
    for _ in range(smax):
        P = out[-1]
        out.append(_addb(_dn(P), _mulb(P, dphi)))
    return out


def psi_chain(phi: dict, kmax: int) -> list[dict]:
    """psi_k = tau^k d_tau phi + k tau^(k-1), k = 1..kmax (psi_k exp(phi) = d_tau(tau^k exp(phi)))."""
    dtau = {(k, j - 1): j * c for (k, j), c in phi.items() if j}
    out = []
    for k in range(1, kmax + 1):
        P = {(a, b + k): c for (a, b), c in dtau.items()}
        P = _addb(P, {(0, k - 1): Fraction(k)})
        out.append(P)
    return out


def _structural_solve(Phi, Psi, order: int, kmax: int, nd: int):
    # unknowns: a[s][i] (n^i in A_s), b[k][i]
    cols = [("A", s, i) for s in range(order + 1) for i in range(nd + 1)]
    cols += [("B", k, i) for k in range(1, kmax + 1) for i in range(nd + 1)]
    eqs: dict = {}
    for ci, (kind, s, i) in enumerate(cols):
        src = Phi[s] if kind == "A" else Psi[s - 1]
        for (k, j), c in src.items():
            # n^i * n^-k tau^j
            row = eqs.setdefault((i - k, j), {})
            row[ci] = row.get(ci, Fraction(0)) + c
    rows = [[row.get(ci, Fraction(0)) for ci in range(len(cols))] for _, row in sorted(eqs.items())]
    basis = nullspace_q(rows, len(cols))
    nA = (order + 1) * (nd + 1)
    proj = [v[:nA] for v in basis if any(v[:nA])]
    for v in canonical_basis(proj) if proj else []:
        A = [UniPoly([v[s * (nd + 1) + i] for i in range(nd + 1)], "n") for s in range(order + 1)]
        if not A[order].is_zero():
            return DiffOperator.from_n_polynomials(A).normalized()
    return None


def structural_variable_ode(f, beta="trivial", bounds=(2, 4, 2)) -> DiffOperator:
    """n-side operator sum_s A_s(n) d_n^s annihilating hh(n), from sum A_s Phi_s + sum B_k psi_k = 0.

    ``bounds`` = (max order in d_n, max k for psi_k, max degree in n of A_s and B_k).
    Searches increasing order, then increasing degree, and returns the first
    normalized operator found.
    """
    dmax, kmax, nd = (int(x) for x in bounds)
    if dmax < 1 or nd < 0:
        raise NotFound("bounds leave no room for an operator")
    phi = _bivariate_phi(f, beta)
    Phi = phi_chain(phi, dmax)
    Psi = psi_chain(phi, kmax)
    for order in range(1, dmax + 1):
        for deg in range(nd + 1):
            op = _structural_solve(Phi, Psi, order, kmax, deg)
            if op is not None:
                return op
    raise NotFound(f"no operator within bounds {tuple(bounds)}")


# annihilator search ------------------------------------------------------


@dataclass(frozen=True)
class SeriesData:
    """Coefficients indexed by exponent with the first unknown exponent; exact or mod P."""

    terms: dict
    truncation: Fraction
    modulus: int | None = None

    @classmethod
    def from_series(cls, s) -> "SeriesData":
        from .nir import ModularSeries

        if isinstance(s, ModularSeries):
            return cls({e: int(v) for e, v in zip(s.exponents, s.residues) if v}, s.truncation, s.modulus)
        if not isinstance(s, PuiseuxSeries):
            raise TypeError("expected a PuiseuxSeries or ModularSeries")
        if s.trunc is None:
            raise InsufficientTruncation("annihilator search needs a truncated series (finite series: truncate first)")
        return cls(s.as_dict(), s.truncation, None)

    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class AnnihilatorReport:
    grid: tuple
    basis: tuple
    rank: int
    unknowns: int
    rows: int
    residual_order: Fraction | None
    backend: dict
    degenerate: bool = False

    @property
    def nullity(self) -> int:
        return self.unknowns - self.rank

    def to_json(self) -> dict:
        return {"grid": list(self.grid), "rank": self.rank, "nullity": self.nullity, "unknowns": self.unknowns,
                "rows": self.rows, "residual_order": None if self.residual_order is None else qstr(self.residual_order),
                "backend": self.backend, "degenerate": self.degenerate,
                "basis": [str(P) for P in self.basis]}


def _system(data: SeriesData, d: int, delta: int):
    """Rows (as dicts col -> value) for output exponents below truncation - delta."""
    cols = [(a, b) for a in range(d + 1) for b in range(delta + 1)]
    limit = data.truncation - delta
    rows: dict = {}
    P = data.modulus
    for e, c in data.terms.items():
        for ci, (a, b) in enumerate(cols):
            E = e - b + a
            if E >= limit:
                continue
            v = falling(e, b)
            if not v:
                continue
            if P:
                val = c * kernels.to_mod(v, P) % P
            else:
                val = c * v
            row = rows.setdefault(E, {})
            row[ci] = (row.get(ci, 0) + val) % P if P else row.get(ci, 0) + val
    keys = sorted(E for E, r in rows.items() if any(r.values()))
    return cols, [rows[E] for E in keys]


def _equation_count(data: SeriesData, delta: int) -> int:
    """Output positions whose coefficient is fully known, zero rows included."""
    limit = data.truncation - delta
    low: dict = {}
    for e in data.terms:
        rho = e - math.floor(e)
        low[rho] = min(low.get(rho, e), e)
    return sum(max(0, math.ceil(limit - (v - delta))) for v in low.values())


def _dense(rows, ncols, P=None):
    if P:
        M = np.zeros((len(rows), ncols), dtype=np.int64)
        for i, r in enumerate(rows):
            for j, v in r.items():
                M[i, j] = v
        return M
    return [[r.get(j, Fraction(0)) for j in range(ncols)] for r in rows]


def _verify(op: DiffOperator, data: SeriesData) -> Fraction:
    """Re-apply op and return the exponent up to which the result is known to vanish."""
    s = PuiseuxSeries.from_terms(data.terms, data.truncation)
    res = apply_operator(op, s)
    if not res.is_zero():
        raise ArithmeticError(f"operator {op} does not annihilate the series")
    return res.truncation


def _verify_mod(vec: dict, data: SeriesData, d: int, delta: int) -> Fraction:
    cols, rows = _system(data, d, delta)
    P = data.modulus
    for r in rows:
        if sum(v * vec.get(cols[j], 0) for j, v in r.items()) % P:
            raise ArithmeticError("modular operator does not annihilate the series")
    return data.truncation - delta


def find_annihilators(s, d: int, delta: int, backend="exact", tolerance: float = 1e-10, digits: int = 30,
                      margin: float = 1.25) -> AnnihilatorReport:
    """Operators sum_{a<=d, b<=delta} c_ab nu^a d^b killing s through its known coefficients.

    backend: ``exact`` (nullspace over Q), ``modular`` (rank over GF(P); full
    rank there certifies full rank over Q) or ``float`` (singular-value gap at
    relative ``tolerance`` with ``digits`` working digits).
    """
    if d < 0 or delta < 0:
        raise ValueError("bounds must be nonnegative")
    data = s if isinstance(s, SeriesData) else SeriesData.from_series(s)
    kind = backend if isinstance(backend, str) else backend.get("kind", "exact")
    nunk = (d + 1) * (delta + 1)
    if data.is_zero():
        return AnnihilatorReport((d, delta), (), 0, nunk, 0, data.truncation - delta, {"kind": kind}, True)
    cols, rows = _system(data, d, delta)
    neq = _equation_count(data, delta)
    if neq < margin * nunk:
        raise InsufficientTruncation(
            f"{neq} equations for {nunk} unknowns; need {math.ceil(margin * nunk)}")
    if data.modulus and kind != "modular":
        raise ValueError("modular series data needs the modular backend")
    if kind == "exact":
        basis_v = nullspace_q(_dense(rows, nunk), nunk)
        ops = []
        resid = data.truncation - delta
        for v in canonical_basis(basis_v) if basis_v else []:
            op = DiffOperator("nu_side", {cols[j]: c for j, c in enumerate(v) if c}).normalized()
            resid = min(resid, _verify(op, data))
            ops.append(op)
        return AnnihilatorReport((d, delta), tuple(ops), nunk - len(basis_v), nunk, neq, resid,
                                 {"kind": "exact"})
    if kind == "modular":
        P = data.modulus or kernels.PRIME
        exact_data = None if data.modulus else data
        if not data.modulus:
            data = SeriesData({e: kernels.to_mod(c, P) for e, c in data.terms.items()}, data.truncation, P)
            cols, rows = _system(data, d, delta)
        M = _dense(rows, nunk, P)
        rk = kernels.rank_mod(M, P)
        ops = []
        if rk < nunk:
            for v in kernels.nullspace_mod(M, P):
                vec = {cols[j]: int(x) for j, x in enumerate(v) if x}
                _verify_mod(vec, data, d, delta)
                if exact_data is not None:
                    op = _lift(vec, P, exact_data)
                    if op is not None:
                        ops.append(op)
            ops = _canonical_ops(ops, cols)
        return AnnihilatorReport((d, delta), tuple(ops), rk, nunk, neq, data.truncation - delta,
                                 {"kind": "modular", "prime": P,
                                  "certificate": "full rank mod P implies full rank over Q" if rk == nunk else
                                  "rank mod P is a lower bound for the rank over Q"})
    if kind == "float":
        dense = _dense(rows, nunk)
        rk, info = _float_rank(dense, tolerance, digits)
        ops = []
        if rk < nunk:
            for v in _float_nullspace(dense, nunk - rk, digits):
                op = _rationalize(dict(zip(cols, v)), data)
                if op is not None:
                    ops.append(op)
            ops = _canonical_ops(ops, cols)
        return AnnihilatorReport((d, delta), tuple(ops), rk, nunk, neq, data.truncation - delta,
                                 {"kind": "float", "digits": digits, "tolerance": tolerance, **info})
    raise ValueError(f"unknown backend {backend!r}")


def _canonical_ops(ops: list, cols: list) -> list:
    """Same presentation as the exact backend: canonical basis of the span, normalized."""
    if not ops:
        return []
    vecs = canonical_basis([[o.coeffs.get(c, Fraction(0)) for c in cols] for o in ops])
    return [DiffOperator("nu_side", {cols[j]: x for j, x in enumerate(v) if x}).normalized() for v in vecs]


def _checked(coeffs: dict, data: SeriesData) -> DiffOperator | None:
    if not any(coeffs.values()):
        return None
    op = DiffOperator("nu_side", coeffs).normalized()
    try:
        _verify(op, data)
    except ArithmeticError:
        return None
    return op


def _lift(vec: dict, P: int, data: SeriesData) -> DiffOperator | None:
    """Rational reconstruction of a modular null vector, kept only if it verifies over Q."""
    out = {}
    for k, v in vec.items():
        r = kernels.rational_reconstruct(v, P)
        if r is None:
            return None
        out[k] = r
    return _checked(out, data)


def _rationalize(vec: dict, data: SeriesData, max_den: int = 10**6) -> DiffOperator | None:
    """Snap a float null vector to small rationals; kept only if it verifies exactly."""
    lead = max(vec.values(), key=abs)
    if lead == 0:
        return None
    return _checked({k: Fraction(float(v / lead)).limit_denominator(max_den) for k, v in vec.items()}, data)


def _float_nullspace(rows, k: int, digits: int) -> list:
    """Reduced basis (rref of the right singular vectors) of the k-dimensional numeric nullspace."""
    with mpmath.workdps(max(digits, 20)):
        A = mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator for x in r] for r in rows])
        scale = [max(abs(A[i, j]) for i in range(A.rows)) or 1 for j in range(A.cols)]
        for j in range(A.cols):
            for i in range(A.rows):
                A[i, j] /= scale[j]
        _, _, V = mpmath.svd_r(A)
        n = A.cols
        B = [[V[n - 1 - t, j] / scale[j] for j in range(n)] for t in range(k)]
        # reduce so each vector has a unit pivot the others vanish on
        piv_cols = []
        for t in range(k):
            j = max((c for c in range(n) if c not in piv_cols), key=lambda c: abs(B[t][c]))
            piv_cols.append(j)
            p = B[t][j]
            B[t] = [x / p for x in B[t]]
            for u in range(k):
                if u != t:
                    m = B[u][j]
                    B[u] = [x - m * y for x, y in zip(B[u], B[t])]
        return B


def _float_rank(rows, tol: float, digits: int):
    """Rank by singular-value gap after row and column scaling."""
    if digits <= 15:
        A = np.array([[float(x) for x in r] for r in rows])
        A = A / np.maximum(np.abs(A).max(axis=1, keepdims=True), 1e-300)
        cs = np.abs(A).max(axis=0)
        A = A / np.where(cs > 0, cs, 1.0)
        sv = np.linalg.svd(A, compute_uv=False)
        sv = [float(x) for x in sv]
    else:
        with mpmath.workdps(digits):
            A = mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator for x in r] for r in rows])
            for i in range(A.rows):
                m = max(abs(A[i, j]) for j in range(A.cols)) or 1
                for j in range(A.cols):
                    A[i, j] /= m
            for j in range(A.cols):
                m = max(abs(A[i, j]) for i in range(A.rows)) or 1
                for i in range(A.rows):
                    A[i, j] /= m
            sv = sorted((float(x) for x in mpmath.svd_r(A, compute_uv=False)), reverse=True)
    smax = sv[0] if sv else 0.0
    if smax == 0:
        return 0, {"singular_values": sv, "gap": None}
    small = [x for x in sv if x < tol * smax]
    big = [x for x in sv if x >= tol * smax]
    gap = (min(big) / max(small)) if small and big and max(small) > 0 else math.inf
    # values just above the cut leave the rank ambiguous
    if any(tol * smax <= x < 1e3 * tol * smax for x in sv):
        raise IllConditioned(f"singular values straddle the cut {tol:g} (no clear gap)")
    return len(big), {"gap": gap, "smallest": sv[-1] / smax}


# grid scans ------------------------------------------------------------


@dataclass(frozen=True)
class DimensionGrid:
    dims: dict
    fit: tuple | None
    fit_residual: Fraction | None
    minimal: tuple
    degenerate: bool = False
    reports: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"dims": [[d, e, v] for (d, e), v in sorted(self.dims.items())],
                "fit": None if self.fit is None else [qstr(x) for x in self.fit],
                "fit_residual": None if self.fit_residual is None else qstr(self.fit_residual),
                "minimal": [list(x) for x in self.minimal], "degenerate": self.degenerate}


class MonotonicityViolation(AssertionError):
    pass


def check_monotone(dims: dict) -> None:
    for (d, e), v in dims.items():
        for nb in ((d + 1, e), (d, e + 1)):
            if nb in dims and dims[nb] < v:
                raise MonotonicityViolation(f"dimension drops from {(d, e)} to {nb}")


def _fit_abc(dims: dict):
    """Least squares for dim = (d-A)(delta-B) - C on the positive region, exact over Q."""
    pts = [(d, e, v) for (d, e), v in dims.items() if v > 0]
    if len(pts) < 3:
        return None, None
    # dim - d*e = -B d - A e + K,  K = A B - C
    X = [[Fraction(d), Fraction(e), Fraction(1)] for d, e, _ in pts]
    y = [Fraction(v - d * e) for d, e, v in pts]
    XtX = [[sum(r[i] * r[j] for r in X) for j in range(3)] for i in range(3)]
    Xty = [sum(r[i] * t for r, t in zip(X, y)) for i in range(3)]
    from .exact.linalg import SingularMatrix, inverse_q

    try:
        inv = inverse_q(XtX)
    except SingularMatrix:
        return None, None
    sol = [sum(inv[i][j] * Xty[j] for j in range(3)) for i in range(3)]
    mB, mA, K = sol
    A, B = -mA, -mB
    C = A * B - K
    resid = sum((t - (r[0] * mB + r[1] * mA + K)) ** 2 for r, t in zip(X, y))
    return (A, B, C), resid


def _cell(args):
    data, d, e, backend, kw = args
    return find_annihilators(data, d, e, backend, **kw)


def dimension_scan(s, d_max: int, delta_max: int, backend="exact", d_min: int = 0, delta_min: int = 0,
                   workers: int = 1, **kw) -> DimensionGrid:
    """Nullspace dimension on the (d, delta) grid; ``workers`` > 1 farms cells out to processes."""
    data = s if isinstance(s, SeriesData) else SeriesData.from_series(s)
    cells = [(d, e) for d in range(d_min, d_max + 1) for e in range(delta_min, delta_max + 1)]
    jobs = [(data, d, e, backend, kw) for d, e in cells]
    if workers > 1 and len(cells) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            reps = list(ex.map(_cell, jobs))
    else:
        reps = [_cell(j) for j in jobs]
    dims, reports = {}, {}
    degenerate = False
    for k, rep in zip(cells, reps):
        dims[k] = rep.nullity
        reports[k] = rep
        degenerate = degenerate or rep.degenerate
    check_monotone(dims)
    fit, resid = _fit_abc(dims) if not degenerate else (None, None)
    pos = [k for k, v in dims.items() if v > 0]
    minimal = tuple(sorted(k for k in pos if not any(o != k and o[0] <= k[0] and o[1] <= k[1] for o in pos)))
    return DimensionGrid(dims, fit, resid, minimal, degenerate, reports)


def nonexistence_report(F, N: int = 300, d_max: int = 5, delta_max: int = 5, backend: str = "modular",
                        beta="standard", d_min: int = 0, delta_min: int = 0, part_source: str = "h") -> dict:
    """Annihilator scan of the singular and regular parts of the nir output of f = -log F.

    N counts coefficients per part.  With the modular backend the series are
    computed directly mod P; full rank there is an exact certificate that no
    operator exists within the bounds.
    """
    from .nir import nir_h_modular, nir_transform
    from .sp import DrivingFunction

    F = DrivingFunction.parse(F)
    if F.is_degenerate():
        raise ValueError("degenerate input: f = -log F vanishes identically")
    beta = BetaChoice.parse(beta)
    kappa = F.kappa
    K = kappa + 1
    total = K * N
    if backend == "modular":
        parts = nir_h_modular(F, beta, total)
        series = {r: parts[r] for r in parts}
    else:
        out = nir_transform(F, beta, total, method="lagrange")
        series = {c.residue: c.h for c in out.components}
    result = {"driving": F.to_json(), "beta": beta.to_json(), "N": N, "kappa": kappa, "backend": backend,
              "bounds": {"d": [d_min, d_max], "delta": [delta_min, delta_max]}, "parts": {}}
    for r, s in sorted(series.items()):
        name = "regular" if r == kappa else ("singular" if kappa == 1 else f"singular[{r}]")
        data = SeriesData.from_series(s)
        cells = {}
        for d in range(d_min, d_max + 1):
            for e in range(delta_min, delta_max + 1):
                rep = find_annihilators(data, d, e, backend)
                cells[(d, e)] = rep
        dims = {k: v.nullity for k, v in cells.items()}
        check_monotone(dims)
        zero = data.is_zero()
        result["parts"][name] = {
            "class": r,
            "identically_zero": zero,
            "coefficients": len(data.terms),
            "empty_everywhere": (not zero) and all(v == 0 for v in dims.values()),
            "cells": [{"d": d, "delta": e, "rank": rep.rank, "unknowns": rep.unknowns, "rows": rep.rows}
                      for (d, e), rep in sorted(cells.items())],
            "backend": next(iter(cells.values())).backend if cells else {},
        }
    return result


__all__ = [
    "DiffOperator", "transform_equivalence", "apply_operator", "apply_n_side", "structural_variable_ode",
    "phi_chain", "psi_chain", "find_annihilators", "AnnihilatorReport", "SeriesData", "dimension_scan",
    "DimensionGrid", "check_monotone", "nonexistence_report", "InsufficientTruncation", "IllConditioned",
    "NotFound", "MonotonicityViolation",
]
