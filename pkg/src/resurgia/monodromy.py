"""Crossing matrices for a star of p singular points and their turn compositions.

The points x_1..x_p sit at the p-th roots of unity, x_k at angle 2 pi k / p
(x_0 = x_p).  When the Laplace direction sweeps across the direction of
x_a - x_b, the generator at x_a picks up C(p, d) eps^((p-d)/p) times the
generator at x_b, d = (a - b) mod p.  eps = -1 throughout and eps^(1/p) is
the ring generator x of Z[x]/(x^p + 1).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import comb

from .exact.cyclo import CycloElem, CycloMatrix, cyclo_charpoly, cyclo_det
from .exact.linalg import inverse_q, matmul_q
from .exact.poly import UniPoly

SEEDED_P = range(3, 10)


class UnsupportedP(ValueError):
    pass


@lru_cache(maxsize=1)
def golden_data() -> dict:
    return json.loads(resources.files("resurgia").joinpath("data/monodromy.json").read_text())


@dataclass(frozen=True)
class StarConfig:
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise UnsupportedP("a star needs p >= 2")

    def point_angle(self, k: int) -> Fraction:
        """Angle of x_k in units of pi."""
        return Fraction(2 * (k % self.p), self.p)

    def direction(self, a: int, b: int) -> Fraction:
        """Angle of x_a - x_b in units of pi, in [0, 2)."""
        # x_a - x_b = e^(i pi (a+b)/p) * 2i sin(pi (a-b)/p)
        a, b = a % self.p, b % self.p
        shift = Fraction(1, 2) if a > b else Fraction(3, 2)
        return (Fraction(a + b, self.p) + shift) % 2


@dataclass(frozen=True)
class CrossingEvent:
    """angle in units of pi; updates (i, j, c, k) mean x_i += c x^k x_j."""

    angle: Fraction
    updates: tuple

    def to_json(self) -> dict:
        return {"angle_pi": str(self.angle), "updates": [list(u) for u in self.updates]}

    def describe(self, p: int) -> list[str]:
        return [f"x_{i} <- x_{i} + {c} x_{j} eps^({Fraction(k, p)})" for i, j, c, k in self.updates]


@dataclass(frozen=True)
class TurnSchedule:
    p: int
    turns: Fraction
    events: tuple
    rule_source: str

    def to_json(self) -> dict:
        return {"p": self.p, "turns": str(self.turns), "rule_source": self.rule_source,
                "events": [e.to_json() for e in self.events]}


def _first_axis(p: int) -> int:
    # the sweep starts just past the direction pi (opposite x_0)
    return p // 2 + 1


def _axis_angle(p: int, s: int) -> Fraction:
    return Fraction(s, p) + Fraction(1, 2)


def _geometric_event(p: int, s: int) -> CrossingEvent:
    star = StarConfig(p)
    theta = _axis_angle(p, s) % 2
    ups = []
    for a in range(p):
        for b in range(p):
            if a != b and star.direction(a, b) == theta:
                d = (a - b) % p
                ups.append((a or p, b or p, comb(p, d), p - d))
    return CrossingEvent(_axis_angle(p, s), tuple(sorted(ups)))


def _parse_update(u, p: int) -> tuple:
    i, j, c, e = u
    k = Fraction(e) * p
    if k.denominator != 1:
        raise ValueError(f"exponent {e} is not a multiple of 1/{p}")
    return (int(i), int(j), int(c), int(k))


def seeded_vectors(p: int, corrected: bool = True) -> dict:
    """The two transcribed crossing vectors for p (half and full axis)."""
    if p not in SEEDED_P:
        raise UnsupportedP(f"no transcribed crossing vectors for p={p}")
    raw = golden_data()["rvectors"][str(p)]
    out = {w: [list(u) for u in raw[w]] for w in ("half", "full")}
    if corrected:
        for fix in golden_data()["corrections"]:
            if fix["p"] != p:
                continue
            if "index" in fix:
                out[fix["which"]][fix["index"]] = list(fix["corrected"])
            else:
                out[fix["which"]] = [list(u) for u in fix["corrected"]]
    return {w: tuple(sorted(_parse_update(u, p) for u in v)) for w, v in out.items()}


def _rotate(updates: tuple, k: int, p: int) -> tuple:
    r = lambda i: (i - 1 + k) % p + 1
    return tuple(sorted((r(i), r(j), c, e) for i, j, c, e in updates))


def build_schedule(p: int, turns=1, rule_source: str = "seeded") -> TurnSchedule:
    """Crossing events for a sweep of ``turns`` full turns (multiples of 1/2)."""
    turns = Fraction(turns)
    if turns < 0 or (2 * turns).denominator != 1:
        raise ValueError("turns must be a nonnegative multiple of 1/2")
    if p < 3:
        raise UnsupportedP("p must be at least 3")
    n = int(2 * p * turns)
    s0 = _first_axis(p)
    if rule_source == "geometric":
        events = tuple(_geometric_event(p, s0 + m) for m in range(n))
    elif rule_source == "seeded":
        vec = seeded_vectors(p)
        events = []
        # consecutive axes alternate between the two seeded vectors; two steps rotate indices by one
        for m in range(n):
            base = vec["half"] if m % 2 == 0 else vec["full"]
            events.append(CrossingEvent(_axis_angle(p, s0 + m), _rotate(base, m // 2, p)))
        events = tuple(events)
    else:
        raise ValueError(f"unknown rule source {rule_source!r}")
    return TurnSchedule(p, turns, events, rule_source)


def schedule_agreement(p: int, turns=1) -> bool:
    return build_schedule(p, turns, "seeded").events == build_schedule(p, turns, "geometric").events


def crossing_matrix(e: CrossingEvent, p: int) -> CycloMatrix:
    rows = [[CycloElem.scalar(p, int(i == j)) for j in range(p)] for i in range(p)]
    for i, j, c, k in e.updates:
        if not (1 <= i <= p and 1 <= j <= p):
            raise IndexError(f"index out of range 1..{p}: ({i}, {j})")
        rows[i - 1][j - 1] = rows[i - 1][j - 1] + CycloElem.gen_power(p, k, c)
    return CycloMatrix(p, rows)


@dataclass(frozen=True)
class MonodromyResult:
    schedule: TurnSchedule
    composite: CycloMatrix
    charpolys: tuple

    @property
    def composite_charpoly(self) -> UniPoly:
        return self.charpolys[-1] if self.charpolys else (UniPoly([-1, 1], "t") ** self.schedule.p)

    def determinant(self) -> CycloElem:
        return cyclo_det(self.composite)

    def charpoly_lists(self) -> list[list[int]]:
        return [[int(c) for c in cp.coeffs] for cp in self.charpolys]

    def to_json(self, emit: str = "charpolys") -> dict:
        out = {"p": self.schedule.p, "turns": str(self.schedule.turns)}
        if emit in ("charpolys", "all"):
            out["charpolys"] = self.charpoly_lists()
            out["charpolys_text"] = [str(cp) for cp in self.charpolys]
        if emit in ("matrix", "all"):
            out["composite"] = self.composite.to_json()
        if emit in ("schedule", "all"):
            out["schedule"] = self.schedule.to_json()
        return out


def compose_turn(p: int, turns=1, rule_source: str = "seeded") -> MonodromyResult:
    """Left-multiply crossing matrices in sweep order; charpoly after every event."""
    sched = build_schedule(p, turns, rule_source)
    M = CycloMatrix.identity(p, p)
    cps = []
    for e in sched.events:
        M = crossing_matrix(e, p) @ M
        cps.append(cyclo_charpoly(M))
    return MonodromyResult(sched, M, tuple(cps))


def is_unipotent(M: CycloMatrix) -> bool:
    N = M - CycloMatrix.identity(M.p, M.n)
    return N.power(M.n).is_zero()


# golden comparisons ----------------------------------------------------


def _poly_from_text(text: str) -> UniPoly:
    import sympy

    t = sympy.Symbol("t")
    P = sympy.Poly(sympy.sympify(text, locals={"t": t}), t)
    return UniPoly([Fraction(int(c)) for c in reversed(P.all_coeffs())], "t")


def golden_charpolys(p: int) -> tuple[Fraction, list[UniPoly]]:
    """(turns, printed intermediate charpoly list) for p in {3, 4, 5, 7, 9}."""
    entry = golden_data()["charpolys"].get(str(p))
    if entry is None:
        raise UnsupportedP(f"no printed charpoly list for p={p}")
    return Fraction(entry["turns"]), [_poly_from_text(s) for s in entry["list"]]


@dataclass(frozen=True)
class GoldenComparison:
    p: int
    matches: tuple
    computed: tuple
    printed: tuple

    @property
    def mismatches(self) -> list[int]:
        return [i for i, ok in enumerate(self.matches) if not ok]

    def to_json(self) -> dict:
        return {"p": self.p, "entries": len(self.matches), "mismatches": [
            {"index": i, "computed": str(self.computed[i]), "printed": str(self.printed[i])} for i in self.mismatches]}


def compare_with_golden(p: int, rule_source: str = "seeded") -> GoldenComparison:
    turns, printed = golden_charpolys(p)
    res = compose_turn(p, turns, rule_source)
    m = tuple(a == b for a, b in zip(res.charpolys, printed))
    if len(res.charpolys) != len(printed):
        m = m + (False,) * abs(len(res.charpolys) - len(printed))
    return GoldenComparison(p, m, res.charpolys, tuple(printed))


def printed_half_turn_p3() -> CycloMatrix:
    return CycloMatrix(3, [[tuple(e) + (0,) * (3 - len(e)) for e in row]
                           for row in golden_data()["half_turn_matrix_p3_printed"]])


# normalising identity --------------------------------------------------


def shift_upper(p: int, r: int) -> list[list[int]]:
    """J(p, r): ones on the r-th upper diagonal (J(p, 0) = identity)."""
    return [[int(j == i + r) for j in range(p)] for i in range(p)]


def cyclic_shift(p: int, r: int) -> list[list[int]]:
    """P(p, r): permutation matrix with P[i][(i + r) mod p] = 1."""
    return [[int(j == (i + r) % p) for j in range(p)] for i in range(p)]


ORDER_FACTORS = ("Rinv", "L", "J", "P")


def normalising_check(p: int, L, R, orderings=None) -> dict[str, bool]:
    """Test Rinv, L, J(p,0)+J(p,1) and P(p,-1) multiplied in each ordering against the identity."""
    L = [[Fraction(x) for x in r] for r in L]
    R = [[Fraction(x) for x in r] for r in R]
    for M in (L, R):
        if len(M) != p or any(len(r) != p for r in M):
            raise ValueError(f"expected {p}x{p} matrices")
    J = [[a + b for a, b in zip(r0, r1)] for r0, r1 in zip(shift_upper(p, 0), shift_upper(p, 1))]
    fac = {"Rinv": inverse_q(R), "L": L, "J": J, "P": cyclic_shift(p, -1)}
    ident = [[Fraction(int(i == j)) for j in range(p)] for i in range(p)]
    if orderings is None:
        orderings = list(itertools.permutations(ORDER_FACTORS))
    out = {}
    for order in orderings:
        M = ident
        for name in order:
            M = matmul_q(M, fac[name])
        out["*".join(order)] = M == ident
    return out


def paper_normalising_p7() -> dict[str, bool]:
    d = golden_data()["p7_normalising"]
    return normalising_check(7, d["L"], d["R"])


__all__ = [
    "UnsupportedP", "StarConfig", "CrossingEvent", "TurnSchedule", "MonodromyResult", "GoldenComparison",
    "build_schedule", "schedule_agreement", "seeded_vectors", "crossing_matrix", "compose_turn", "is_unipotent",
    "golden_charpolys", "compare_with_golden", "printed_half_turn_p3", "normalising_check",
    "paper_normalising_p7", "shift_upper", "cyclic_shift", "golden_data",
]
