"""Command line: compute formulas, expand series, run checks and oracle comparisons.

Exit codes: 0 success, 1 a check or comparison failed, 2 bad spec or arguments,
3 resource guard, 4 ramified spec, 5 oracle budget exceeded (partial table).
"""

from __future__ import annotations

import argparse
import ast
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__
from .exactalg import Polynomial, RationalFunction, dumps, series_expand, specialize
from .igusa import abstract_match_data, check_genigusa_funeq, igusas_match_check, HypothesisViolation
from .oracle import BudgetExceeded, budget_from_env, catalog_table, ext_ideal_count, hnf_ideal_count
from .zeta import (
    LieRingSpec,
    NotCertified,
    RamifiedError,
    ResourceGuard,
    SpecError,
    check_local_funeq,
    compute,
    parse_spec,
)

EXIT_OK, EXIT_FAIL, EXIT_SPEC, EXIT_GUARD, EXIT_RAMIFIED, EXIT_BUDGET = 0, 1, 2, 3, 4, 5
MAX_DEGREE = 64
FORMATS = ("plain", "latex", "json")
CHECKS = ("funeq", "genigusa", "dwrho", "match")


@dataclass
class JobConfig:
    command: str
    spec: str
    format: str = "plain"
    degree: int = 3
    primes: list[int] = field(default_factory=list)
    budget: int | None = None
    threads: int = 1
    check: str = "funeq"
    out: str | None = None
    terms: bool = False


class Failure(Exception):
    """Carries an exit code and a message for stderr."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _primes(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from exc
    for p in out:
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise argparse.ArgumentTypeError(f"{p} is not prime")
    return out


def _parse(spec: str) -> LieRingSpec:
    return parse_spec(spec)


def _document(kind: str, body: dict) -> dict:
    return {"version": 1, "kind": kind, **body}


def _coeff_values(c: Polynomial, p: int) -> int:
    v = specialize(c, {"q": p}).constant_value()
    if v is None or v != int(v):
        raise Failure(EXIT_FAIL, f"coefficient {c} does not specialize to an integer at q={p}")
    return int(v)


# ---------------------------------------------------------------------------------------
# Commands


def cmd_compute(cfg: JobConfig) -> tuple[int, str]:
    spec = _parse(cfg.spec)
    res = compute(spec, threads=cfg.threads)
    z = res.value
    if cfg.format == "json":
        body = {"spec": spec.to_json_obj(), "zeta": z.to_json_obj(), "certified": res.certified}
        if cfg.terms:
            body["terms"] = [
                {"w": t.w.word, "rho": [list(r) for r in t.rho.rho], "value": t.value.to_json_obj()}
                for t in res.terms
            ]
        return EXIT_OK, dumps(_document("formula", body))
    if cfg.format == "latex":
        lines = [z.latex()]
        if cfg.terms:
            lines += [f"D_{{{t.w.word},{_rho_str(t.rho.rho)}}} = {t.value.latex()}" for t in res.terms]
        return EXIT_OK, "\n".join(lines)
    lines = [str(z)]
    if cfg.terms:
        lines += [f"{t.w.word} {_rho_str(t.rho.rho)}: {t.value}" for t in res.terms]
    return EXIT_OK, "\n".join(lines)


def _rho_str(rho) -> str:
    return "(" + ";".join(",".join(map(str, row)) for row in rho) + ")"


def cmd_series(cfg: JobConfig) -> tuple[int, str]:
    if not 0 <= cfg.degree <= MAX_DEGREE:
        raise Failure(EXIT_SPEC, f"degree must lie in [0, {MAX_DEGREE}]")
    spec = _parse(cfg.spec)
    s = series_expand(compute(spec, threads=cfg.threads).value, "t", cfg.degree)
    values = {p: [_coeff_values(c, p) for c in s.coeffs] for p in cfg.primes}
    if cfg.format == "json":
        body = {
            "spec": spec.to_json_obj(),
            "degree": cfg.degree,
            "coefficients": [c.to_json_obj() for c in s.coeffs],
            "values": {str(p): v for p, v in values.items()},
        }
        return EXIT_OK, dumps(_document("series", body))
    lines = []
    for k, c in enumerate(s.coeffs):
        text = c.latex() if cfg.format == "latex" else str(c)
        extra = "".join(f"  p={p}: {values[p][k]}" for p in cfg.primes)
        lines.append(f"{k}: {text}{extra}")
    return EXIT_OK, "\n".join(lines)


def _composition(text: str) -> tuple[int, ...]:
    try:
        val = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError) as exc:
        raise SpecError(f"cannot parse composition {text!r}") from exc
    if isinstance(val, int):
        val = (val,)
    if not isinstance(val, tuple) or not val or not all(isinstance(x, int) and x > 0 for x in val):
        raise SpecError(f"composition must be a tuple of positive integers, got {text!r}")
    return val


def cmd_check(cfg: JobConfig) -> tuple[int, str]:
    if cfg.check == "genigusa":
        nbar = _composition(cfg.spec)
        ok = check_genigusa_funeq(nbar, bound=max(sum(nbar), 6))
        report = {"check": "genigusa", "composition": list(nbar), "holds": ok}
    elif cfg.check == "match":
        g = _composition(cfg.spec)
        if len(g) != 1:
            raise SpecError("match check takes a single positive integer g")
        try:
            ok = igusas_match_check(g[0], abstract_match_data(g[0]))
        except HypothesisViolation as exc:
            raise Failure(EXIT_FAIL, str(exc)) from exc
        report = {"check": "match", "g": g[0], "holds": ok}
    else:
        spec = _parse(cfg.spec)
        res = compute(spec, threads=cfg.threads, strict=False)
        fe = check_local_funeq(spec, res.value)
        report = {"check": cfg.check, "spec": str(spec), **fe.to_json_obj()}
        report["factor"] = str(fe.factor)
        if cfg.check == "dwrho":
            report["terms"] = [
                {"w": t.w.word, "rho": [list(r) for r in t.rho.rho], "holds": bool(t.funeq)} for t in res.terms
            ]
            report["holds"] = fe.holds and all(t.funeq for t in res.terms)
        ok = report["holds"]
    code = EXIT_OK if ok else EXIT_FAIL
    if cfg.format == "json":
        return code, dumps(_document("report", report))
    lines = [f"{k}: {v}" for k, v in report.items() if k != "terms"]
    for t in report.get("terms", []):
        lines.append(f"  {t['w']} {_rho_str(t['rho'])}: {'holds' if t['holds'] else 'FAILS'}")
    return code, "\n".join(lines)


def cmd_oracle(cfg: JobConfig) -> tuple[int, str]:
    spec = _parse(cfg.spec)
    primes = cfg.primes or [2]
    f = spec.base
    try:
        # ideals of index q^k over the base ring sit at t^{fk}
        s = series_expand(compute(spec, threads=cfg.threads).value, "t", cfg.degree * f)
        engine = {p: [_coeff_values(c, p) for c in s.coeffs[::f]] for p in primes}
    except NotCertified:
        engine = None
    rows, code = [], EXIT_OK
    budget = cfg.budget if cfg.budget is not None else budget_from_env()
    for p in primes:
        table = catalog_table(spec, p)
        for k in range(cfg.degree + 1):
            try:
                if f == 1:
                    count = hnf_ideal_count(table, p, k, budget=budget, threads=cfg.threads)
                else:
                    count = ext_ideal_count(table, p, f, k, budget=budget)
            except BudgetExceeded as exc:
                rows.append({"p": p, "k": k, "engine": None if engine is None else engine[p][k],
                             "oracle": None, "status": f"budget exceeded ({exc.estimate})"})
                code = EXIT_BUDGET
                break
            if engine is None:
                status = "oracle-only"
                e = None
            else:
                e = engine[p][k]
                status = "match" if e == count else "MISMATCH"
                if status != "match" and code == EXIT_OK:
                    code = EXIT_FAIL
            rows.append({"p": p, "k": k, "engine": e, "oracle": count, "status": status})
    if cfg.format == "json":
        return code, dumps(_document("oracle", {"spec": spec.to_json_obj(), "rows": rows}))
    lines = [f"{'p':>3} {'k':>3} {'engine':>14} {'oracle':>14}  status"]
    for r in rows:
        e = "-" if r["engine"] is None else r["engine"]
        o = "-" if r["oracle"] is None else r["oracle"]
        lines.append(f"{r['p']:>3} {r['k']:>3} {e!s:>14} {o!s:>14}  {r['status']}")
    return code, "\n".join(lines)


COMMANDS = {"compute": cmd_compute, "series": cmd_series, "check": cmd_check, "oracle": cmd_oracle}


# ---------------------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ideal-zeta", description="Ideal zeta functions of class-2 Lie rings.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("spec_pos", nargs="?", metavar="SPEC")
        sp.add_argument("--spec", help='catalog string such as "f2,3 x h2[f=2] x Z^1", or a JSON file')
        sp.add_argument("--format", choices=FORMATS, default="plain")
        sp.add_argument("--degree", type=int, default=3)
        sp.add_argument("--primes", type=_primes, default=[])
        sp.add_argument("--budget", type=int, default=None)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--check", choices=CHECKS, default="funeq")
        sp.add_argument("--out", default=None)
        sp.add_argument("--terms", action="store_true", help="also list the individual D_{w,rho}")
    return ap


def config_from_args(argv: Sequence[str] | None = None) -> JobConfig:
    args = build_parser().parse_args(argv)
    spec = args.spec if args.spec is not None else args.spec_pos
    if spec is None:
        build_parser().error("a spec is required")
    return JobConfig(
        command=args.command, spec=spec, format=args.format, degree=args.degree, primes=args.primes,
        budget=args.budget, threads=max(1, args.threads), check=args.check, out=args.out, terms=args.terms,
    )


@dataclass
class Outcome:
    code: int
    stdout: str | None = None
    stderr: str | None = None


def run(cfg: JobConfig) -> Outcome:
    """Run a job; on error paths nothing is destined for stdout."""
    try:
        code, text = COMMANDS[cfg.command](cfg)
        return Outcome(code, text)
    except Failure as exc:
        return Outcome(exc.code, stderr=str(exc))
    except RamifiedError as exc:
        return Outcome(EXIT_RAMIFIED, stderr=f"ramified: {exc}")
    except (SpecError, NotCertified) as exc:
        return Outcome(EXIT_SPEC, stderr=f"spec error: {exc}")
    except ResourceGuard as exc:
        return Outcome(EXIT_GUARD, stderr=f"resource guard: {exc}")
    except BudgetExceeded as exc:
        return Outcome(EXIT_BUDGET, stderr=f"budget exceeded: {exc}")


def main(argv: Sequence[str] | None = None) -> int:
    cfg = config_from_args(argv)
    res = run(cfg)
    if res.stderr:
        print(res.stderr, file=sys.stderr)
    if res.stdout is not None:
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(res.stdout + "\n")
        else:
            print(res.stdout)
    return res.code


def reserialize(text: str) -> str:
    """Re-parse a JSON document from this CLI and emit it again canonically."""
    obj = json.loads(text)
    if obj.get("kind") == "formula":
        obj["zeta"] = RationalFunction.from_json_obj(obj["zeta"]).to_json_obj()
        obj["spec"] = LieRingSpec.from_json_obj(obj["spec"]).to_json_obj()
    return dumps(obj)
