"""Command-line entry point: job configs in, JSON reports out."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .exact.puiseux import PuiseuxSeries, SeriesError
from .exact.rational import q, qstr

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTE, EXIT_INCONCLUSIVE = 0, 2, 3, 4

COMMANDS = ("sp", "nir", "ode-find", "ode-scan", "nonexist", "covariant", "monodromy", "refdata", "singscan")

# keys that never influence results
_PLUMBING = {"cache", "out", "threads", "emit"}
_DRIVING = {"driving", "F", "f"}
_SERIES = _DRIVING | {"beta", "N", "part", "series"}
_BACKEND = {"backend", "digits", "tolerance"}

ALLOWED = {
    "sp": _DRIVING | {"N"},
    "nir": _DRIVING | {"beta", "N", "part", "quantity", "method"},
    "ode-find": _SERIES | _BACKEND | {"d", "delta"},
    "ode-scan": _SERIES | _BACKEND | {"d_max", "delta_max", "d_min", "delta_min"},
    "nonexist": _DRIVING | {"beta", "N", "d_max", "delta_max", "d_min", "delta_min", "backend"},
    "covariant": {"pi", "lambda", "check_invariant", "shift_check"},
    "monodromy": {"p", "turns", "rule_source", "golden"},
    "refdata": {"family", "index", "eval", "check"},
    "singscan": _DRIVING | {"N", "coeffs", "tail", "max_order", "tolerance"},
}


class ValidationError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str
    params: dict
    cache: str | None = None
    out: str | None = None
    threads: int = 1
    emit: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "JobConfig":
        if not isinstance(raw, dict):
            raise ValidationError("config must be a JSON object")
        cmd = raw.get("command")
        if cmd not in COMMANDS:
            raise ValidationError(f"unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}")
        params = {k: v for k, v in raw.items() if k != "command" and k not in _PLUMBING and v is not None}
        unknown = sorted(set(params) - ALLOWED[cmd])
        if unknown:
            raise ValidationError(f"unknown fields for {cmd}: {', '.join(unknown)}")
        if len(set(params) & _DRIVING) > 1:
            raise ValidationError("give exactly one of driving, F, f")
        threads = raw.get("threads") or 1
        if not isinstance(threads, int) or threads < 1:
            raise ValidationError("threads must be a positive integer")
        for k in ("N", "d", "delta", "d_max", "delta_max", "d_min", "delta_min", "p", "index", "pi"):
            if k in params and (not isinstance(params[k], int) or isinstance(params[k], bool) or params[k] < 0):
                raise ValidationError(f"{k} must be a nonnegative integer")
        if "turns" in params:
            try:
                params["turns"] = qstr(Fraction(str(params["turns"])))
            except ValueError:
                raise ValidationError("turns must be a rational multiple of 1/2") from None
        return cls(cmd, params, raw.get("cache"), raw.get("out"), threads, raw.get("emit"))

    def canonical(self) -> dict:
        return {"command": self.command, **self.params}

    def inputs_hash(self) -> str:
        return _sha(self.canonical())


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _sha(obj) -> str:
    return hashlib.sha256(_dumps(obj).encode()).hexdigest()


# series cache ----------------------------------------------------------


class SeriesCache:
    """On-disk store keyed by (kind, driving, beta, N); hits are spot-checked before use."""

    SPOTS = 5

    def __init__(self, root: str | None):
        self.root = Path(root) if root else None
        self.status: dict[str, str] = {}

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, material: dict, compute, encode, decode, spot_check):
        key = _sha(material)
        if self.root is None:
            self.status[material["kind"]] = "disabled"
            return compute()
        path = self._path(key)
        if path.exists():
            try:
                blob = json.loads(path.read_text())
                if blob["material"] != material or blob["digest"] != _sha(blob["payload"]):
                    raise ValueError("digest mismatch")
                obj = decode(blob["payload"])
                if spot_check(obj):
                    self.status[material["kind"]] = "hit"
                    return obj
            except (ValueError, KeyError, TypeError, SeriesError):
                pass
            self.status[material["kind"]] = "corrupt-recomputed"
        else:
            self.status[material["kind"]] = "miss"
        obj = compute()
        payload = encode(obj)
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(_dumps({"material": material, "payload": payload, "digest": _sha(payload)}))
        tmp.replace(path)
        return obj


def _spot_indices(n: int, k: int) -> list[int]:
    if n <= k:
        return list(range(n))
    return sorted({round(i * (n - 1) / (k - 1)) for i in range(k)})


def _sp_cached(cache: SeriesCache, F, N: int) -> PuiseuxSeries:
    from .sp import sp_coefficient, sp_series

    def spot(s):
        return all(s.coefficient(n) == sp_coefficient(F, n) for n in _spot_indices(N + 1, cache.SPOTS))

    return cache.get({"kind": "sp", "driving": F.to_json(), "N": N}, lambda: sp_series(F, N),
                     lambda s: s.to_json(), lambda d: PuiseuxSeries.from_json(d, "zeta"), spot)


def _nir_cached(cache: SeriesCache, F, beta, N: int, method: str = "laplace"):
    from .nir import NirComponent, NirOutput, nir_transform

    def encode(o):
        return {"kappa": o.kappa, "metadata": o.metadata,
                "components": [{"class": c.residue, "hh": c.hh.to_json(), "h": c.h.to_json(),
                                "h_prime": c.h_prime.to_json()} for c in o.components]}

    def decode(d):
        comps = tuple(NirComponent(c["class"], PuiseuxSeries.from_json(c["hh"], "1/n"),
                                   PuiseuxSeries.from_json(c["h"]), PuiseuxSeries.from_json(c["h_prime"]))
                      for c in d["components"])
        return NirOutput(d["kappa"], comps, d["metadata"])

    def spot(o):
        # the lowest terms do not depend on N, so a short recompute pins them
        small = nir_transform(F, beta, min(N, cache.SPOTS), method)
        for c in small.components:
            got = o.component(c.residue).h
            for e, v in list(c.h.items())[: cache.SPOTS]:
                if got.coefficient(e) != v:
                    return False
        return True

    material = {"kind": "nir", "driving": F.to_json(), "beta": beta.to_json(), "N": N, "method": method}
    return cache.get(material, lambda: nir_transform(F, beta, N, method), encode, decode, spot)


# command handlers ------------------------------------------------------


@dataclass
class Context:
    config: JobConfig
    cache: SeriesCache
    timings: dict = field(default_factory=dict)


def _driving(p: dict):
    from .sp import DrivingFunction

    if "driving" in p:
        spec = p["driving"]
    elif "F" in p:
        spec = {"F": p["F"]}
    elif "f" in p:
        spec = {"f": p["f"]}
    else:
        raise ValidationError("a driving function (driving, F or f) is required")
    try:
        return DrivingFunction.parse(spec)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad driving function: {exc}") from None


def _beta(p: dict):
    from .exact.bernoulli import BetaChoice

    try:
        return BetaChoice.parse(p.get("beta", "trivial"))
    except (ValueError, TypeError) as exc:
        raise ValidationError(f"bad beta: {exc}") from None


def _need(p: dict, key: str, default=None):
    if key in p:
        return p[key]
    if default is None:
        raise ValidationError(f"missing field {key!r}")
    return default


def _backend(p: dict) -> tuple[str, dict]:
    b = p.get("backend", "exact")
    kw = {}
    if isinstance(b, dict):
        extra = set(b) - {"kind", "digits", "tolerance"}
        if extra:
            raise ValidationError(f"unknown backend fields: {', '.join(sorted(extra))}")
        kw = {k: b[k] for k in ("digits", "tolerance") if k in b}
        b = b.get("kind", "exact")
    kw.update({k: p[k] for k in ("digits", "tolerance") if k in p})
    if b not in ("exact", "modular", "float"):
        raise ValidationError(f"unknown backend {b!r}")
    if kw and b != "float":
        raise ValidationError("digits/tolerance apply to the float backend only")
    return b, kw


def _pick_part(out, part: str):
    if part == "singular":
        return out.singular().h
    if part == "regular":
        return out.regular().h
    if part in ("h", "total"):
        return out.h
    raise ValidationError(f"unknown part {part!r}; expected singular, regular or total")


def _target_series(ctx: Context, p: dict):
    if "series" in p:
        if set(p) & _DRIVING:
            raise ValidationError("give either series or a driving function")
        try:
            return PuiseuxSeries.from_json(p["series"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad series: {exc}") from None
    F, beta = _driving(p), _beta(p)
    out = _nir_cached(ctx.cache, F, beta, _need(p, "N"))
    return _pick_part(out, p.get("part", "singular"))


def cmd_sp(ctx: Context, p: dict) -> dict:
    F = _driving(p)
    N = _need(p, "N")
    s = _sp_cached(ctx.cache, F, N)
    return {"driving": F.to_json(), "N": N, "coeffs": [qstr(s.coefficient(n)) for n in range(N + 1)]}


def cmd_nir(ctx: Context, p: dict) -> dict:
    F, beta = _driving(p), _beta(p)
    out = _nir_cached(ctx.cache, F, beta, _need(p, "N"), p.get("method", "laplace"))
    qty = p.get("quantity", "h")
    if qty not in ("h", "hh", "h_prime"):
        raise ValidationError(f"unknown quantity {qty!r}")
    part = p.get("part", "all")
    comps = {"all": out, "singular": out.singular(), "regular": out.regular()}.get(part)
    if comps is None:
        raise ValidationError(f"unknown part {part!r}; expected all, singular or regular")
    return {"kappa": out.kappa, "metadata": out.metadata, "quantity": qty, "part": part,
            "components": [{"class": c.residue, **getattr(c, qty).to_json()} for c in comps.components]}


def cmd_ode_find(ctx: Context, p: dict) -> dict:
    from .ode import find_annihilators

    s = _target_series(ctx, p)
    kind, kw = _backend(p)
    rep = find_annihilators(s, _need(p, "d"), _need(p, "delta"), kind, **kw)
    return {"N": p.get("N"), "part": p.get("part", "singular") if "series" not in p else "given",
            "certificate": rep.to_json(), "operators": [str(P.normalized()) for P in rep.basis]}


def cmd_ode_scan(ctx: Context, p: dict) -> dict:
    from .ode import dimension_scan

    s = _target_series(ctx, p)
    kind, kw = _backend(p)
    grid = dimension_scan(s, _need(p, "d_max"), _need(p, "delta_max"), kind, p.get("d_min", 0),
                          p.get("delta_min", 0), workers=ctx.config.threads, **kw)
    cells = [{"d": d, "delta": e, "rank": r.rank, "unknowns": r.unknowns, "rows": r.rows}
             for (d, e), r in sorted(grid.reports.items())]
    return {"N": p.get("N"), "backend": {"kind": kind, **kw}, "grid": grid.to_json(), "cells": cells}


def cmd_nonexist(ctx: Context, p: dict) -> dict:
    from .ode import nonexistence_report

    F = _driving(p)
    b = p.get("backend", "modular")
    if b not in ("modular", "exact"):
        raise ValidationError("nonexist supports the modular and exact backends")
    return nonexistence_report(F, N=p.get("N", 300), d_max=p.get("d_max", 5), delta_max=p.get("delta_max", 5),
                               backend=b, beta=p.get("beta", "standard"), d_min=p.get("d_min", 0),
                               delta_min=p.get("delta_min", 0))


def _f_list(v) -> list[Fraction]:
    if isinstance(v, dict):
        if set(v) != {"f"}:
            raise ValidationError("expected {\"f\": [f_0, f_1, ...]}")
        v = v["f"]
    if not isinstance(v, list):
        raise ValidationError("f must be a coefficient list")
    try:
        return [q(c) for c in v]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad coefficient: {exc}") from None


def cmd_covariant(ctx: Context, p: dict) -> dict:
    from . import covariance as cv

    if not p:
        raise ValidationError("covariant needs one of pi, lambda, check_invariant, shift_check")
    res = {}
    if "pi" in p:
        if not 1 <= p["pi"] <= 8:
            raise ValidationError("pi must be between 1 and 8")
        res["pi"] = cv.canonical_covariant(p["pi"]).to_json()
    if "lambda" in p:
        f = _f_list(p["lambda"])
        lam = cv.leading_covariant_lambda(f)
        res["lambda"] = {"f": [qstr(c) for c in f], "poly": lam.to_json(), "text": str(lam)}
    if "check_invariant" in p:
        spec = p["check_invariant"]
        if not isinstance(spec, dict) or set(spec) - {"expr", "r"} or "expr" not in spec:
            raise ValidationError("check_invariant needs {\"expr\": ..., \"r\": ...}")
        r = spec.get("r", 2)
        try:
            A = cv.parse_poly(spec["expr"], r)
        except Exception as exc:
            raise ValidationError(f"cannot parse expression: {exc}") from None
        res["check_invariant"] = {"expr": spec["expr"], "r": r, "invariant": cv.is_invariant(A, r),
                                  "covariant": cv.is_covariant(A, r), "derivative": str(cv.eps_derive(A, r))}
    if "shift_check" in p:
        spec = p["shift_check"]
        if not isinstance(spec, dict) or set(spec) - {"f", "eps", "bounds", "N", "beta"}:
            raise ValidationError("shift_check needs {f, eps[, bounds, N, beta]}")
        bounds = tuple(tuple(b) for b in spec.get("bounds", [[2, 2]]))
        rep = cv.shift_covariance_check(_f_list(spec.get("f")), q(spec.get("eps", 0)), bounds,
                                        spec.get("N", 80), spec.get("beta", "trivial"))
        res["shift_check"] = rep.to_json()
    return res


def cmd_monodromy(ctx: Context, p: dict) -> dict:
    from . import monodromy as md

    P = _need(p, "p")
    try:
        turns = Fraction(str(p.get("turns", 1)))
    except ValueError:
        raise ValidationError("turns must be a rational multiple of 1/2") from None
    emit = ctx.config.emit or "charpolys"
    if emit not in ("charpolys", "matrix", "schedule", "all"):
        raise ValidationError("monodromy emit must be charpolys, matrix, schedule or all")
    try:
        res = md.compose_turn(P, turns, p.get("rule_source", "seeded"))
    except md.UnsupportedP as exc:
        raise ValidationError(str(exc)) from None
    out = res.to_json(emit)
    out["unipotent_steps"] = all(md.is_unipotent(md.crossing_matrix(e, P)) for e in res.schedule.events)
    if p.get("golden"):
        out["golden"] = md.compare_with_golden(P).to_json()
    return out


def cmd_refdata(ctx: Context, p: dict) -> dict:
    from . import reftables as rt

    res = {}
    if p.get("check"):
        rep = rt.structural_check()
        res["check"] = {**rep.to_json(), "roundtrip_identical": rt.roundtrip_identical()}
    if "family" in p or "index" in p:
        fam, idx = _need(p, "family"), _need(p, "index")
        try:
            P = rt.ref_poly(fam, idx)
        except rt.UnknownEntry as exc:
            raise ValidationError(exc.args[0]) from None
        res["entry"] = {"family": fam, "index": idx, "poly": P.to_json(), "text": str(P)}
        if "eval" in p:
            var, _, val = str(p["eval"]).partition("=")
            if var.strip() != P.var or not val:
                raise ValidationError(f"eval must look like {P.var}=value")
            res["entry"]["value"] = qstr(P(q(val.strip())))
    if not res:
        raise ValidationError("refdata needs check or family/index")
    return res


def cmd_singscan(ctx: Context, p: dict) -> dict:
    from .sp import locate_closest_singularity

    if "coeffs" in p:
        if set(p) & _DRIVING:
            raise ValidationError("give either coeffs or a driving function")
        try:
            cs = [q(c) for c in p["coeffs"]]
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad coefficient: {exc}") from None
    else:
        F = _driving(p)
        N = _need(p, "N")
        s = _sp_cached(ctx.cache, F, N)
        cs = [s.coefficient(n) for n in range(N + 1)]
    kw = {k: p[k] for k in ("tail", "max_order", "tolerance") if k in p}
    est = locate_closest_singularity(cs, **kw)
    return {"coefficients": len(cs), "location": [est.location.real, est.location.imag],
            "modulus": est.modulus, "argument": est.argument, "exponent": est.exponent,
            "confidence": est.confidence}


HANDLERS = {
    "sp": cmd_sp, "nir": cmd_nir, "ode-find": cmd_ode_find, "ode-scan": cmd_ode_scan, "nonexist": cmd_nonexist,
    "covariant": cmd_covariant, "monodromy": cmd_monodromy, "refdata": cmd_refdata, "singscan": cmd_singscan,
}


def _filter(results: dict, emit: str | None, command: str) -> dict:
    if not emit or command == "monodromy":
        return results
    keys = [k.strip() for k in emit.split(",") if k.strip()]
    missing = [k for k in keys if k not in results]
    if missing:
        raise ValidationError(f"cannot emit {', '.join(missing)}; available: {', '.join(sorted(results))}")
    return {k: results[k] for k in keys}


def run(config: JobConfig | dict) -> dict:
    """Validate, dispatch and assemble the report (the ``timings`` block is the only run-dependent part)."""
    if isinstance(config, dict):
        config = JobConfig.from_dict(config)
    cache_dir = os.environ.get("RESURGIA_CACHE") or config.cache
    ctx = Context(config, SeriesCache(cache_dir))
    t0 = time.perf_counter()
    results = _filter(HANDLERS[config.command](ctx, config.params), config.emit, config.command)
    timings = {"total_s": round(time.perf_counter() - t0, 6)}
    if ctx.cache.status:
        timings["cache"] = dict(sorted(ctx.cache.status.items()))
    return {"command": config.canonical(), "inputs_hash": config.inputs_hash(), "results": results,
            "timings": timings, "version": __version__}


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# argument parsing ------------------------------------------------------


def _json_arg(v: str):
    """Inline JSON, or a path to a JSON file."""
    path = Path(v)
    if path.exists():
        return json.loads(path.read_text())
    return json.loads(v)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="resurgia", description="Exact SP-series and resurgence toolkit.")
    ap.add_argument("--version", action="version", version=f"resurgia {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, driving=False, series=False):
        sp.add_argument("--config", help="JSON job file; command-line options override its fields")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--cache", help="series cache directory (RESURGIA_CACHE overrides)")
        sp.add_argument("--threads", type=int, help="worker processes for grid scans")
        sp.add_argument("--emit", help="payload subset (comma-separated result keys)")
        if driving:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--F", dest="F", help="multiplicative driving function, e.g. '(1-x)/(1+x)'")
            g.add_argument("--f", dest="f", help="additive driving polynomial, e.g. 'x**2'")
            sp.add_argument("--N", type=int)
        if series:
            sp.add_argument("--beta", help="trivial | standard")
            sp.add_argument("--part", help="singular | regular | total")

    p = sub.add_parser("sp", help="SP Taylor coefficients")
    common(p, driving=True)
    p = sub.add_parser("nir", help="nir-transform series")
    common(p, driving=True)
    p.add_argument("--beta")
    p.add_argument("--part", help="all | singular | regular")
    p.add_argument("--quantity", help="h | hh | h_prime")
    p.add_argument("--method", help="laplace | lagrange")
    p = sub.add_parser("ode-find", help="annihilators at one (d, delta)")
    common(p, driving=True, series=True)
    p.add_argument("--d", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--backend", help="exact | modular | float")
    p = sub.add_parser("ode-scan", help="nullspace dimensions over a (d, delta) grid")
    common(p, driving=True, series=True)
    p.add_argument("--d-max", dest="d_max", type=int)
    p.add_argument("--delta-max", dest="delta_max", type=int)
    p.add_argument("--backend", help="exact | modular | float")
    p = sub.add_parser("nonexist", help="annihilator scan of singular and regular parts")
    common(p, driving=True)
    p.add_argument("--beta")
    p.add_argument("--d-max", dest="d_max", type=int)
    p.add_argument("--delta-max", dest="delta_max", type=int)
    p.add_argument("--backend", help="modular | exact")
    p = sub.add_parser("covariant", help="covariance calculus")
    common(p)
    p.add_argument("--pi", type=int, help="solve the canonical covariant of degree r")
    p.add_argument("--lambda", dest="lambda_", type=_json_arg, help="f as JSON list or file")
    p.add_argument("--check-invariant", dest="check_invariant", type=_json_arg,
                   help='{"expr": ..., "r": ...} as JSON or file')
    p.add_argument("--shift-check", dest="shift_check", type=_json_arg,
                   help='{"f": [...], "eps": ..., "bounds": [[d, delta]], "N": ...} as JSON or file')
    p = sub.add_parser("monodromy", help="turn compositions of crossing matrices")
    common(p)
    p.add_argument("--p", type=int)
    p.add_argument("--turns")
    p.add_argument("--golden", action="store_true", default=None, help="compare with the transcribed lists")
    p = sub.add_parser("refdata", help="reference polynomial tables")
    common(p)
    p.add_argument("--family")
    p.add_argument("--index", type=int)
    p.add_argument("--eval", help="e.g. beta=1/2")
    p.add_argument("--check", action="store_true", default=None)
    p = sub.add_parser("singscan", help="closest singularity of SP coefficients")
    common(p, driving=True)
    return ap


def _merge(ns: argparse.Namespace) -> dict:
    raw = {}
    if ns.config:
        try:
            raw = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config: {exc}") from None
        if not isinstance(raw, dict):
            raise ValidationError("config must be a JSON object")
        if raw.get("command", ns.command) != ns.command:
            raise ValidationError(f"config command {raw['command']!r} does not match {ns.command!r}")
    raw["command"] = ns.command
    for k, v in vars(ns).items():
        if k in ("config", "command") or v is None:
            continue
        raw["lambda" if k == "lambda_" else k] = v
    return raw


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    from .ode import IllConditioned
    from .sp import Inconclusive
    from .nir import NonConvergent

    try:
        cfg = JobConfig.from_dict(_merge(ns))
        report = run(cfg)
    except ValidationError as exc:
        print(f"resurgia: invalid config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (IllConditioned, Inconclusive, NonConvergent) as exc:
        print(f"resurgia: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ArithmeticError, ValueError, KeyError, IndexError) as exc:
        print(f"resurgia: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    text = render(report)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
