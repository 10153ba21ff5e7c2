"""Exact scalars, polynomials, ramified series and cyclotomic matrices."""

from .bernoulli import BetaChoice, UnknownBetaChoice, bernoulli_number, bernoulli_poly, beta_star
from .cyclo import CycloElem, CycloMatrix, NonRationalCharPoly, cyclo_charpoly, cyclo_det
from .linalg import SingularMatrix, canonical_basis, inverse_q, nullspace_q, rank_q, rref_q
from .poly import MultiPoly, UniPoly
from .puiseux import ONE, Prefactor, PuiseuxSeries, SeriesError, series_exp, series_log, series_pow
from .rational import gamma_ratio, q, qstr

__all__ = [
    "BetaChoice", "UnknownBetaChoice", "bernoulli_number", "bernoulli_poly", "beta_star",
    "CycloElem", "CycloMatrix", "NonRationalCharPoly", "cyclo_charpoly", "cyclo_det",
    "SingularMatrix", "canonical_basis", "inverse_q", "nullspace_q", "rank_q", "rref_q",
    "MultiPoly", "UniPoly", "ONE", "Prefactor", "PuiseuxSeries", "SeriesError",
    "series_exp", "series_log", "series_pow", "gamma_ratio", "q", "qstr",
]
