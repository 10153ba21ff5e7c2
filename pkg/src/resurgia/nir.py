"""The formal nir-transform: f -> (hh(n), h(nu), h'(nu)).

hh(n) is the tau-integral of exp(phi), phi = -sum_k f_k n^-k beta*_k(tau),
expanded around the kernel exp(-lam n^-kappa tau^(kappa+1)) with
lam = f_kappa/(kappa+1).  Each exponent class r = W mod (kappa+1) carries its
own irrational content Gamma(g) lam^-g/(kappa+1) with g = (r+1)/(kappa+1), so
a result is a list of components, each a rational series times a prefactor.

hh is stored as a series in the variable ``1/n`` (exponent s means n^-s).
Borel images: n^-s -> nu^s/Gamma(s+1) for h, nu^(s-1)/Gamma(s) for h'.

Two routes compute the same coefficients:

* ``laplace`` expands exp of the non-leading part of phi in u = tau n^(-kappa/(kappa+1))
  and integrates monomials against the kernel;
* ``lagrange`` substitutes t^(kappa+1) = F*(y)/lam (F* = antiderivative of f)
  and reads coefficients off powers of (F*/(lam y^(kappa+1)))^(-1/(kappa+1)).
  It runs over Q or over GF(P) on the modular kernels and is the fast path
  for long series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import kernels
from .exact.bernoulli import BetaChoice, beta_star
from .exact.puiseux import ONE, Prefactor, PuiseuxSeries, SeriesError
from .exact.rational import q, qstr, rising
from .sp import DrivingFunction


class UnsupportedRamification(SeriesError):
    pass


class NonConvergent(ArithmeticError):
    pass


# phi --------------------------------------------------------------------


@dataclass(frozen=True)
class PhiExpansion:
    """phi(n, tau) = sum terms[(k, j)] n^-k tau^j."""

    kappa: int
    terms: dict
    beta: BetaChoice
    order: int | None = None  # k-range cut for non-polynomial f (None: exact)

    @property
    def leading(self) -> tuple[int, int, Fraction]:
        k = self.kappa
        return k, k + 1, self.terms[(k, k + 1)]

    def __add__(self, other: "PhiExpansion") -> "PhiExpansion":
        if self.beta != other.beta:
            raise ValueError("beta choices differ")
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
            if not out[key]:
                del out[key]
        kap = min(k for k, _ in out) if out else 0
        return PhiExpansion(kap, out, self.beta, _min_opt(self.order, other.order))

    def __eq__(self, other):
        return isinstance(other, PhiExpansion) and self.terms == other.terms and self.beta == other.beta

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def evaluate(self, n, tau):
        acc = 0
        for (k, j), c in self.terms.items():
            acc += (mpmath.mpf(c.numerator) / c.denominator) * mpmath.power(n, -k) * mpmath.power(tau, j)
        return acc

    def to_json(self) -> dict:
        return {"kappa": self.kappa, "beta": self.beta.to_json(),
                "terms": [[k, j, qstr(c)] for (k, j), c in sorted(self.terms.items())]}


def _min_opt(a, b):
    return b if a is None else a if b is None else min(a, b)


def _as_driving(f) -> DrivingFunction:
    if isinstance(f, DrivingFunction):
        return f
    if isinstance(f, (list, tuple)):
        return DrivingFunction.polynomial([q(c) for c in f])
    return DrivingFunction.parse(f)


def phi_expand(f, beta="trivial", order: int | None = None) -> PhiExpansion:
    """Exact phi for polynomial f; for series f (from a rational F) keep k < order."""
    f = _as_driving(f)
    beta = BetaChoice.parse(beta)
    if f.kind == "poly_f":
        cs = list(f.f.coeffs)
        order_used = None
    else:
        if order is None:
            raise ValueError("f = -log F is an infinite series; pass order")
        cs = f.f_coefficients(order)
        order_used = order
    terms: dict = {}
    for k, fk in enumerate(cs):
        if not fk or k == 0:
            continue
        bs = beta_star(k, beta)
        for j, c in enumerate(bs.coeffs):
            if c:
                terms[(k, j)] = terms.get((k, j), Fraction(0)) - fk * c
    terms = {key: c for key, c in terms.items() if c}
    kappa = min(k for k, _ in terms) if terms else 0
    if not terms:
        raise ValueError("f = 0 gives no kernel")
    return PhiExpansion(kappa, terms, beta, order_used)


# output containers ---------------------------------------------------


@dataclass(frozen=True)
class NirComponent:
    residue: int
    hh: PuiseuxSeries
    h: PuiseuxSeries
    h_prime: PuiseuxSeries


def _combine(series: list[PuiseuxSeries]) -> PuiseuxSeries:
    nz = [s for s in series if not s.is_zero()]
    if not nz:
        return series[0] if series else PuiseuxSeries.zero()
    pf = nz[0].prefactor
    for s in nz[1:]:
        if not s.prefactor.compatible(pf):
            raise UnsupportedRamification(
                "these exponent classes carry independent irrational factors; use the per-class components")
    out = nz[0]
    for s in nz[1:]:
        out = out + s
    return out


@dataclass(frozen=True)
class NirOutput:
    kappa: int
    components: tuple
    metadata: dict = field(default_factory=dict, compare=False)

    def _pick(self, name: str) -> PuiseuxSeries:
        return _combine([getattr(c, name) for c in self.components])

    @property
    def hh(self) -> PuiseuxSeries:
        return self._pick("hh")

    @property
    def h(self) -> PuiseuxSeries:
        return self._pick("h")

    @property
    def h_prime(self) -> PuiseuxSeries:
        return self._pick("h_prime")

    def component(self, r: int) -> NirComponent:
        for c in self.components:
            if c.residue == r:
                return c
        raise KeyError(r)

    def singular(self) -> "NirOutput":
        return NirOutput(self.kappa, tuple(c for c in self.components if c.residue != self.kappa), self.metadata)

    def regular(self) -> "NirOutput":
        return NirOutput(self.kappa, tuple(c for c in self.components if c.residue == self.kappa), self.metadata)

    def hh_value(self, n, terms: int | None = None, dps: int = 30):
        """Numeric hh(n) from the first ``terms`` nonzero terms (all when None)."""
        with mpmath.workdps(dps):
            items = []
            for c in self.components:
                pf = _prefactor_mp(c.hh.prefactor)
                for e, v in c.hh.items():
                    items.append((e, v, pf))
            items.sort(key=lambda t: t[0])
            if terms is not None:
                items = items[:terms]
            n = mpmath.mpmathify(n)
            acc = mpmath.mpc(0)
            for e, v, pf in items:
                acc += pf * (mpmath.mpf(v.numerator) / v.denominator) * mpmath.power(n, -mpmath.mpf(e.numerator) / e.denominator)
            return acc

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "metadata": self.metadata,
            "components": [
                {"class": c.residue, "hh": c.hh.to_json(), "h": c.h.to_json(), "h_prime": c.h_prime.to_json()}
                for c in self.components
            ],
        }


def _prefactor_mp(pf: Prefactor):
    g = mpmath.mpf(pf.gamma_arg.numerator) / pf.gamma_arg.denominator
    v = mpmath.gamma(g) ** pf.gamma_power
    r = mpmath.mpf(pf.radicand.numerator) / pf.radicand.denominator
    v *= mpmath.root(r, pf.root)
    if pf.phase:
        v *= mpmath.expjpi(mpmath.mpf(pf.phase.numerator) / pf.phase.denominator)
    return v


def split_singular_regular(s: PuiseuxSeries) -> tuple[PuiseuxSeries, PuiseuxSeries]:
    """(non-integer exponent part, integer exponent part); both keep the truncation."""
    sing = {e: c for e, c in s.items() if e.denominator != 1}
    reg = {e: c for e, c in s.items() if e.denominator == 1}
    t = s.truncation
    mk = lambda d: PuiseuxSeries.from_terms(d, t, s.prefactor, s.var) if d or t is not None else \
        PuiseuxSeries(s.q, 0, (), None, s.prefactor, s.var)
    a, b = mk(sing), mk(reg)
    # keep the original ramification so the pieces add back exactly
    if a.q != s.q and s.q % a.q == 0:
        a = a.ramify(s.q)
    if b.q != s.q and s.q % b.q == 0:
        b = b.ramify(s.q)
    return a, b


# class data ------------------------------------------------------------


def _class_prefactor(r: int, kappa: int, lam: Fraction) -> tuple[Prefactor, Fraction]:
    """(prefactor without the Gamma factor, rational fold) for class r of hh's content."""
    K = kappa + 1
    g = Fraction(r + 1, K)
    neg = lam < 0
    a = abs(lam)
    if g.denominator == 1:
        # Gamma(1) a^-1 / K is rational
        fold = 1 / (a * K)
        return ONE, -fold if neg else fold
    rad = a ** (-(r + 1)) / Fraction(K) ** K
    return Prefactor(0, g, rad, K, -g if neg else Fraction(0)), Fraction(1)


def _assemble(kappa: int, lam: Fraction, N: int, hh_rat: dict, meta: dict) -> NirOutput:
    K = kappa + 1
    comps = []
    for r in range(K):
        g = Fraction(r + 1, K)
        pf, fold = _class_prefactor(r, kappa, lam)
        hh_pf = Prefactor(1, g, pf.radicand, pf.root, pf.phase) if g.denominator != 1 else pf
        hh_t, h_t, hp_t = {}, {}, {}
        for W in range(r, N, K):
            c = hh_rat.get(W, Fraction(0)) * fold
            if not c:
                continue
            s = Fraction(W - kappa, K)
            hh_t[s] = c
            hc = c / rising(g, (W - r) // K)
            h_t[s] = hc
            if s:
                hp_t[s - 1] = hc * s
        s_cut = Fraction(N - kappa, K)
        hh = PuiseuxSeries.from_terms(hh_t, s_cut, hh_pf, "1/n")
        h = PuiseuxSeries.from_terms(h_t, s_cut, pf, "nu")
        hp = PuiseuxSeries.from_terms(hp_t, s_cut - 1, pf, "nu")
        comps.append(NirComponent(r, hh, h, hp))
    return NirOutput(kappa, tuple(comps), meta)


# laplace route ---------------------------------------------------------


def _laplace_hh(phi: PhiExpansion, N: int) -> dict:
    kappa = phi.kappa
    K = kappa + 1
    lam = -phi.terms[(kappa, K)]
    R: dict[int, dict[int, Fraction]] = {}
    for (k, j), c in phi.terms.items():
        if (k, j) == (kappa, K):
            continue
        w = K * k - kappa * j
        if w <= 0:
            raise SeriesError("non-leading term of nonpositive weight")
        if w < N:
            R.setdefault(w, {})
            R[w][j] = R[w].get(j, Fraction(0)) + c
    E: list[dict[int, Fraction]] = [{0: Fraction(1)}]
    for W in range(1, N):
        acc: dict[int, Fraction] = {}
        for w, Rw in R.items():
            if w > W:
                continue
            prev = E[W - w]
            for j, c in Rw.items():
                cw = w * c
                for a, e in prev.items():
                    acc[a + j] = acc.get(a + j, Fraction(0)) + cw * e
        E.append({a: v / W for a, v in acc.items() if v})
    out = {}
    for W, poly in enumerate(E):
        r = W % K
        g = Fraction(r + 1, K)
        tot = Fraction(0)
        for a, e in poly.items():
            t = (a - r) // K
            tot += e * rising(g, t) / lam ** t
        if tot:
            out[W] = tot
    return out


# lagrange route ------------------------------------------------------


class _QRing:
    """Exact rational scalars and python lists."""

    modulus = None

    def s(self, x):
        return q(x)

    def inv(self, x):
        return 1 / x

    def zeros(self, n):
        return [Fraction(0)] * n

    def conv(self, a, b, n):
        out = [Fraction(0)] * n
        for i, x in enumerate(a[:n]):
            if x:
                for j in range(min(len(b), n - i)):
                    if b[j]:
                        out[i + j] += x * b[j]
        return out

    def matmul(self, A, B):
        m, k, n = len(A), len(B), len(B[0]) if B else 0
        out = [[Fraction(0)] * n for _ in range(m)]
        for i in range(m):
            Ai, Oi = A[i], out[i]
            for t in range(k):
                x = Ai[t]
                if x:
                    Bt = B[t]
                    for j in range(n):
                        if Bt[j]:
                            Oi[j] += x * Bt[j]
        return out

    def matrix(self, m, n):
        return [[Fraction(0)] * n for _ in range(m)]


class _ModRing:
    """GF(P) scalars as python ints, vectors as int64 arrays."""

    def __init__(self, P: int):
        self.modulus = P

    def s(self, x):
        return kernels.to_mod(x, self.modulus)

    def inv(self, x):
        return pow(int(x), -1, self.modulus)

    def zeros(self, n):
        return np.zeros(n, dtype=np.int64)

    def conv(self, a, b, n):
        return kernels.conv_mod(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), n, self.modulus)

    def matmul(self, A, B):
        return kernels.matmul_mod(A, B, self.modulus)

    def matrix(self, m, n):
        return np.zeros((m, n), dtype=np.int64)


def _mul(R, a, b):
    return a * b % R.modulus if R.modulus else a * b


def _add(R, a, b):
    return (a + b) % R.modulus if R.modulus else a + b


def _series_pow(R, a, alpha: Fraction, n: int):
    """a^alpha with a[0] = 1 (Miller recurrence)."""
    out = [R.s(0)] * n
    out[0] = R.s(1)
    al = [R.s((alpha + 1) * j) for j in range(n)]
    for k in range(1, n):
        acc = R.s(0)
        for j in range(1, k + 1):
            aj = int(a[j]) if R.modulus else a[j]
            if aj:
                acc = _add(R, acc, _mul(R, _mul(R, (al[j] - k) % R.modulus if R.modulus else al[j] - k, aj), out[k - j]))
        out[k] = _mul(R, acc, R.inv(R.s(k)))
    return out


def _series_exp(R, a, n: int):
    out = [R.s(0)] * n
    if not n:
        return out
    out[0] = R.s(1)
    for k in range(1, n):
        acc = R.s(0)
        for j in range(1, k + 1):
            aj = int(a[j]) if R.modulus else a[j]
            if aj:
                acc = _add(R, acc, _mul(R, _mul(R, R.s(j), aj), out[k - j]))
        out[k] = _mul(R, acc, R.inv(R.s(k)))
    return out


def _lagrange_core(R, fc: list[Fraction], kappa: int, beta: BetaChoice, N: int):
    """Raw c[m][j] = [t^(j-1)] Q_m(y(t)) y'(t) in ring R."""
    K = kappa + 1
    J = N
    M = (N - 1) // K
    fk = fc[kappa]
    # 1 + g(y) = F*(y) / (lam y^K)
    onepg = [R.s(fc[kappa + i] * K / ((K + i) * fk)) if kappa + i < len(fc) else R.s(0) for i in range(J)]
    if R.modulus:
        onepg = np.array(onepg, dtype=np.int64)
    H = _series_pow(R, onepg, Fraction(-1, K), J)
    H = np.array(H, dtype=np.int64) if R.modulus else H
    Hrev = R.matrix(J, J + 1)
    P = H
    for j in range(1, J + 1):
        if j > 1:
            P = R.conv(P, H, J)
        for i in range(j):
            Hrev[i][j] = P[j - 1 - i]
    # Q(eps, y) = exp(-sum_s beta_s eps^s f^(s)(y)), split by powers of eps
    fpoly = [fc[i] if i < len(fc) else Fraction(0) for i in range(J + M + 1)]
    fmod = [R.s(c) for c in fpoly] if R.modulus else None
    b0 = beta.coefficient(0)
    if b0:
        q0 = _series_exp(R, [R.s(-b0 * c) for c in fpoly[:J]], J)
    else:
        q0 = [R.s(1)] + [R.s(0)] * (J - 1)
    qs = [np.array(q0, dtype=np.int64) if R.modulus else q0]
    B = {}
    for s in range(1, M + 1):
        bs = beta.coefficient(s)
        if bs:
            if R.modulus:
                mb = R.s(-bs)
                row = [mb * fmod[i + s] % R.modulus * (math.perm(i + s, s) % R.modulus) % R.modulus
                       for i in range(J)]
            else:
                row = [-bs * fpoly[i + s] * math.perm(i + s, s) for i in range(J)]
            B[s] = np.array(row, dtype=np.int64) if R.modulus else row
    for m in range(1, M + 1):
        acc = R.zeros(J)
        for s, Bs in B.items():
            if s > m:
                break
            term = R.conv(Bs, qs[m - s], J)
            if R.modulus:
                acc = (acc + term * s) % R.modulus
            else:
                acc = [x + s * y for x, y in zip(acc, term)]
        im = R.inv(R.s(m))
        qs.append(acc * im % R.modulus if R.modulus else [x * im for x in acc])
    Qmat = np.array(qs, dtype=np.int64) if R.modulus else qs
    return R.matmul(Qmat, Hrev), M


def _lagrange_hh_q(fc, kappa, beta, N) -> dict:
    R = _QRing()
    C, M = _lagrange_core(R, fc, kappa, beta, N)
    K = kappa + 1
    lam = fc[kappa] / K
    out: dict[int, Fraction] = {}
    for m in range(M + 1):
        for j in range(1, N - K * m + 1):
            c = C[m][j]
            if not c:
                continue
            r = (j - 1) % K
            t = (j - 1 - r) // K
            W = K * m + j - 1
            out[W] = out.get(W, Fraction(0)) + c * rising(Fraction(r + 1, K), t) / lam ** t
    return {W: v for W, v in out.items() if v}


def _coeffs_for(f: DrivingFunction, kappa: int, N: int) -> list[Fraction]:
    K = kappa + 1
    M = (N - 1) // K
    return f.f_coefficients(max(kappa + N, N + M) + 2)


def nir_transform(f, beta="trivial", N: int = 20, method: str = "laplace") -> NirOutput:
    """Exact nir-transform keeping every term with W < N, W = (kappa+1) s + kappa for hh ~ n^-s."""
    f = _as_driving(f)
    beta = BetaChoice.parse(beta)
    if f.is_degenerate():
        raise ValueError("f = 0 (F = 1) has no kernel")
    if N < 1:
        raise ValueError("N must be positive")
    kappa = f.kappa
    K = kappa + 1
    fc = _coeffs_for(f, kappa, N)
    lam = fc[kappa] / K
    if method == "laplace":
        phi = phi_expand(f, beta, order=None if f.kind == "poly_f" else kappa + N + 1)
        hh = _laplace_hh(phi, N)
    elif method == "lagrange":
        hh = _lagrange_hh_q(fc, kappa, beta, N)
    else:
        raise ValueError(f"unknown method {method!r}")
    meta = {"driving": f.to_json(), "beta": beta.to_json(), "N": N, "method": method,
            "kernel_lambda": qstr(lam), "ray_rotation_pi": qstr(Fraction(-1, K) if lam < 0 else Fraction(0))}
    return _assemble(kappa, lam, N, hh, meta)


# modular images --------------------------------------------------------


@dataclass(frozen=True)
class ModularSeries:
    """Residues mod P of a rational series, times an exact prefactor."""

    exponents: tuple
    residues: np.ndarray
    truncation: Fraction
    modulus: int
    prefactor: Prefactor = ONE

    def coefficient_map(self) -> dict:
        return {e: int(v) for e, v in zip(self.exponents, self.residues) if v}


def nir_h_modular(f, beta="standard", N: int = 100, P: int = kernels.PRIME) -> dict[int, ModularSeries]:
    """Images in GF(P) of the per-class h series (same content as nir_transform(...).component(r).h)."""
    f = _as_driving(f)
    beta = BetaChoice.parse(beta)
    kappa = f.kappa
    K = kappa + 1
    fc = _coeffs_for(f, kappa, N)
    lam = fc[kappa] / K
    R = _ModRing(P)
    C, M = _lagrange_core(R, fc, kappa, beta, N)
    lam_inv = R.inv(R.s(lam))
    # rise[r][t] = rising((r+1)/K, t) mod P, built incrementally
    T = N // K + 2
    rise = []
    for r in range(K):
        g = R.s(Fraction(r + 1, K))
        row = [1]
        for t in range(T + M + 1):
            row.append(row[-1] * ((g + t) % P) % P)
        rise.append(row)
    lam_pow = [1]
    for _ in range(T):
        lam_pow.append(lam_pow[-1] * lam_inv % P)
    hh = np.zeros(N, dtype=np.int64)
    for m in range(M + 1):
        jmax = N - K * m
        for j in range(1, jmax + 1):
            c = int(C[m][j])
            if not c:
                continue
            r = (j - 1) % K
            t = (j - 1 - r) // K
            W = K * m + j - 1
            hh[W] = (int(hh[W]) + c * rise[r][t] % P * lam_pow[t]) % P
    out = {}
    for r in range(K):
        pf, fold = _class_prefactor(r, kappa, lam)
        fold_m = R.s(fold)
        exps, vals = [], []
        for W in range(r, N, K):
            exps.append(Fraction(W - kappa, K))
            vals.append(int(hh[W]) * fold_m % P * pow(rise[r][(W - r) // K], -1, P) % P)
        out[r] = ModularSeries(tuple(exps), np.array(vals, dtype=np.int64), Fraction(N - kappa, K), P, pf)
    return out


# nur -------------------------------------------------------------------


@dataclass(frozen=True)
class NurResult:
    nu: tuple
    values: tuple
    m_estimate: float
    nir_values: tuple | None = None


def _phi_at_nodes(fc: Sequence[Fraction], beta: BetaChoice, n: np.ndarray, m: Fraction) -> np.ndarray:
    """phi(n, m) on a grid of complex n for one exact node m."""
    acc = np.zeros_like(n, dtype=complex)
    for k, fk in enumerate(fc):
        if fk and k:
            acc -= float(fk * beta_star(k, beta)(m)) * n ** (-k)
    return acc


def _contour(fun_vals: np.ndarray, ys: np.ndarray, n: np.ndarray, c: float, nu: float) -> float:
    from scipy.integrate import simpson

    integrand = np.exp(n * nu) * fun_vals / n
    return float(np.real(simpson(integrand, x=ys)) / (2 * math.pi))


def nur_numeric(f, beta="trivial", M: int = 128, contour=(2.0, 20.0, 2001), nu_samples=(0.5, 1.0),
                tol: float = 1e-6, compare: bool = True, nir_terms: int = 30) -> NurResult:
    """Discretised (half-integer m) sum followed by a numeric vertical-line inverse transform.

    h(nu) ~ (1/2 pi i) int_{c-iH}^{c+iH} S_M(n) e^(nu n) dn/n with
    S_M(n) = sum_{m in 1/2+N, m<M} exp(phi(n, m)).  The M-estimate is the largest
    change between the M and M/2 truncations over the samples.
    """
    f = _as_driving(f)
    if f.kind != "poly_f":
        raise ValueError("nur_numeric takes polynomial f")
    beta = BetaChoice.parse(beta)
    c, H, steps = float(contour[0]), float(contour[1]), int(contour[2])
    if c <= 0 or H <= 0 or steps < 3:
        raise ValueError("contour parameters must be positive")
    nus = tuple(float(v) for v in nu_samples)
    if M <= 0:
        return NurResult(nus, tuple(0.0 for _ in nus), 0.0, None)
    fc = list(f.f.coeffs)
    ys = np.linspace(-H, H, steps if steps % 2 else steps + 1)
    n = c + 1j * ys

    def partial(Mc):
        S = np.zeros_like(n)
        m = Fraction(1, 2)
        while m < Mc:
            S += np.exp(_phi_at_nodes(fc, beta, n, m))
            m += 1
        return S

    S_full, S_half = partial(M), partial(M / 2)
    vals = tuple(_contour(S_full, ys, n, c, v) for v in nus)
    half = tuple(_contour(S_half, ys, n, c, v) for v in nus)
    est = max(abs(a - b) for a, b in zip(vals, half))
    if est > tol:
        raise NonConvergent(f"M-estimate {est:.3g} exceeds tolerance {tol:.3g}")
    nir_vals = None
    if compare:
        out = nir_transform(f, beta, N=nir_terms)
        hh = np.array([complex(out.hh_value(complex(z), dps=20)) for z in n])
        nir_vals = tuple(_contour(hh, ys, n, c, v) for v in nus)
    return NurResult(nus, vals, est, nir_vals)


def hh_quadrature(f, beta, n, dps: int = 30):
    """Adaptive quadrature of int_0^inf exp(phi(n, tau)) dtau for real n > 0."""
    f = _as_driving(f)
    phi = phi_expand(f, beta)
    with mpmath.workdps(dps):
        n = mpmath.mpf(n)
        scale = n ** (mpmath.mpf(phi.kappa) / (phi.kappa + 1))
        pts = [0] + [scale * 2**i for i in range(-2, 6)] + [mpmath.inf]
        return mpmath.quad(lambda t: mpmath.exp(phi.evaluate(n, t)), pts)


__all__ = [
    "PhiExpansion", "phi_expand", "NirComponent", "NirOutput", "nir_transform", "split_singular_regular",
    "nir_h_modular", "ModularSeries", "nur_numeric", "NurResult", "hh_quadrature", "UnsupportedRamification",
    "NonConvergent",
]
