"""Command-line entry point: ``hgperiod <subcommand> ...``.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for unreadable input (bad JSON, schema violations, bad arguments) and
3 for any other package error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import io as hio
from .chambers import (admissible_chambers, bounded_chambers, classify_with_f0,
                       discrete_invariants, enumerate_chambers, relative_invariants,
                       verify_growing_count)
from .closed_form import beta_function, beta_function_relative, critical_product
from .errors import HGError, ParseError, SchemaError
from .forms import BranchAssignment, nform_label
from .geometry import projectivize
from .nbc import bnbc_bases, bnbc_with_f0, chamber_bijection
from .quadrature import (PeriodComputation, QuadratureSpec, condition_number,
                         convergence_check, determinant, verify)
from .selberg import (A_POWER_READINGS, EXP_READINGS, Composition, SelbergParams,
                      compositions, critical_products_selberg, determinant_exp,
                      determinant_no_exp, rectangular_to_triangular)
from .suite import check_instance, combinatorial_check, generate

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ERROR = 0, 1, 2, 3


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def jsonable(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, Fraction):
        return hio.format_rational(x)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, np.generic):
        return jsonable(x.item())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _fmt_scalar(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _table_lines(obj, prefix=""):
    """Flatten nested reports into "key  value" lines; flat lists stay on one line."""
    if isinstance(obj, dict):
        items = obj.items()
    elif isinstance(obj, (list, tuple, np.ndarray)) and not _is_flat(obj):
        items = ((f"[{k}]", v) for k, v in enumerate(obj))
    else:
        yield f"{prefix:<40} {_fmt_value(obj)}"
        return
    for k, v in items:
        key = f"{prefix}{k}" if str(k).startswith("[") else (f"{prefix}.{k}" if prefix else str(k))
        yield from _table_lines(v, key)


def _is_flat(v) -> bool:
    return all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in v)


def _fmt_value(v) -> str:
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt_scalar(x) for x in v) + "]"
    return _fmt_scalar(v)


class Writer:
    """All user-visible output goes through here."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def report(self, obj: dict):
        if self.fmt == "json":
            self.stream.write(json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n")
        else:
            for line in _table_lines(obj):
                self.stream.write(line + "\n")
        self.stream.flush()

    def note(self, text: str):
        sys.stderr.write(text + "\n")
        sys.stderr.flush()


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

def _env_float(name, default):
    v = os.environ.get(name)
    return float(v) if v else default


def _env_int(name, default):
    v = os.environ.get(name)
    return int(v) if v else default


def _spec(args, tol) -> QuadratureSpec:
    qtol = args.quad_tol if args.quad_tol is not None else min(1e-10, tol * 1e-3)
    return QuadratureSpec(tol=qtol, nodes=args.nodes, max_depth=args.max_depth)


def _tolerance(args, default):
    if args.tol is not None:
        return args.tol
    return _env_float("HGPERIOD_TOL", default)


def _load(args):
    A, f0 = hio.load(args.input)
    if args.with_f0 and f0 is None:
        raise SchemaError(f"{args.input}: --with-f0 given but the file has no f0")
    return A, (f0 if args.with_f0 else None), f0


# --------------------------------------------------------------------------
# arrangement subcommands
# --------------------------------------------------------------------------

def _edge_report(A, f0):
    P = projectivize(A)
    out = []
    for F in P.edges:
        inv = discrete_invariants(A, F)
        row = {"edge": F.label(), "dimension": F.dimension, "at_infinity": F.at_infinity,
               "l": inv.l, "s": inv.s, "vol": inv.vol}
        if f0 is not None:
            rel = relative_invariants(A, F, f0)
            row.update({"l_rel": rel.l, "s_rel": rel.s, "vol_rel": rel.vol})
        out.append(row)
    return out


def _labelling_report(lab):
    return [{"basis": [i + 1 for i in B], "chamber": list(c.signs),
             "point": list(c.point), "orientation": o}
            for B, c, o in zip(lab.bases, lab.chambers, lab.orientations)]


def cmd_analyze(args, out: Writer) -> int:
    A, f0, raw_f0 = _load(args)
    chambers = enumerate_chambers(A)
    rep = {
        "dimension": A.dimension,
        "hyperplanes": len(A),
        "essential": A.is_essential(),
        "edges": _edge_report(A, f0),
        "chambers": len(chambers),
        "bounded_chambers": len(bounded_chambers(A)),
        "bnbc": [[i + 1 for i in B] for B in bnbc_bases(A)],
        "labelling": _labelling_report(chamber_bijection(A)),
    }
    if f0 is not None:
        rep["classes"] = [{"chamber": list(c.signs), "class": k} for c, k in classify_with_f0(A, f0)]
        rep["admissible_chambers"] = len(admissible_chambers(A, f0))
        rep["bnbc_f0"] = [[i + 1 for i in B] for B in bnbc_with_f0(A, f0)]
        rep["labelling_f0"] = _labelling_report(chamber_bijection(A, f0))
        growing, total = verify_growing_count(A, f0)
        rep["growing_count"] = {"growing": growing, "sum_vol": total}
    checks = combinatorial_check(A, f0)
    rep["checks"] = checks
    rep["fixture"] = hio.to_document(A, raw_f0)
    out.report(rep)
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


def cmd_beta(args, out: Writer) -> int:
    A, f0, _ = _load(args)
    b = beta_function(A) if f0 is None else beta_function_relative(A, f0)
    out.report({"value": b.value,
                "factors": [{"edge": g.edge, "gamma_of": g.argument, "power": g.exponent}
                            for g in b.factors]})
    return EXIT_OK


def cmd_critical(args, out: Writer) -> int:
    A, f0, _ = _load(args)
    lab = chamber_bijection(A, f0)
    value, recs = critical_product(A, BranchAssignment(), lab.chambers, f0)
    chambers = []
    for ch in recs:
        chambers.append({
            "chamber": list(ch.signs),
            "value": ch.value,
            "f0_min": ch.f0_min,
            "records": [{"hyperplane": r.hyperplane + 1, "path": r.path, "modulus": r.modulus,
                         "half_turns": r.half_turns, "value": r.value} for r in ch.records],
        })
    out.report({"value": value, "chambers": chambers})
    return EXIT_OK


def cmd_period_matrix(args, out: Writer) -> int:
    A, f0, _ = _load(args)
    tol = _tolerance(args, 1e-6)
    comp = PeriodComputation(A, f0, _spec(args, tol))
    pm = comp.matrix()
    out.report({
        "rows": [nform_label(phi) for phi in pm.forms],
        "columns": _labelling_report(pm.labelling),
        "matrix": pm.matrix,
        "errors": pm.errors,
        "determinant": determinant(pm.matrix),
        "condition": condition_number(pm.matrix),
        "converged": pm.converged,
    })
    return EXIT_OK if pm.converged else EXIT_FAIL


def cmd_verify(args, out: Writer) -> int:
    A, f0, _ = _load(args)
    tol = _tolerance(args, 1e-6)
    spec = _spec(args, tol)
    r = verify(A, tol, f0, spec)
    rep = {
        "identity": "det PM = c * B" + (" (with f0)" if f0 is not None else ""),
        "lhs": r.lhs, "rhs": r.rhs, "beta": r.beta, "critical": r.critical,
        "deviation": r.deviation, "tolerance": tol, "size": r.size,
        "condition": r.condition, "entry_error": r.entry_error,
        "converged": r.converged, "passed": r.passed, "seconds": r.seconds,
    }
    if args.convergence:
        if f0 is None:
            raise SchemaError("--convergence needs --with-f0")
        devs = convergence_check(A, f0, spec=spec)
        rep["convergence"] = {
            "deviations": [{"t": t, "deviation": d} for t, d in devs],
            "monotone": all(b < a for (_, a), (_, b) in zip(devs, devs[1:])),
        }
    out.report(rep)
    return EXIT_OK if r.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# Selberg
# --------------------------------------------------------------------------

def _parse_list(text, conv):
    return [conv(x) for x in text.split(",") if x.strip()]


def _composition(text) -> Composition:
    return Composition(tuple(int(x) for x in text.split(",")))


def cmd_selberg(args, out: Writer) -> int:
    z = _parse_list(args.z, hio.parse_rational)
    alpha = _parse_list(args.alpha, lambda s: complex(s.replace(" ", "")))
    params = SelbergParams(z, alpha, complex(args.gamma), args.n,
                           None if args.a is None else complex(args.a))
    v = args.variant
    critical = v in ("critical-bounded", "critical-exp")
    tol = _tolerance(args, 1e-10 if critical else 1e-4)
    spec = _spec(args, tol)
    rep = {"variant": v, "n": params.n, "p": params.p, "tolerance": tol}
    if v in ("noexp", "noexp-sym"):
        r = determinant_no_exp(params, spec, tilde=(v == "noexp-sym"))
    elif v == "exp":
        r = determinant_exp(params, spec, args.exp_reading, args.a_power)
    elif critical:
        lhs, rhs, dev = critical_products_selberg(params, "bounded" if v == "critical-bounded" else "exponential",
                                                  args.exp_reading, args.a_power,
                                                  not args.without_point_product)
        rep.update({"closed": lhs, "critical": rhs, "deviation": dev, "passed": dev <= tol})
        out.report(rep)
        return EXIT_OK if dev <= tol else EXIT_FAIL
    else:
        ls = [_composition(args.l)] if args.l else compositions(params.n, params.p)
        ms = [_composition(args.m)] if args.m else compositions(params.n, params.p)
        pairs, worst = [], 0.0
        for l in ls:
            for m in ms:
                lhs, rhs, dev = rectangular_to_triangular(l, m, params, spec)
                pairs.append({"l": list(l.parts), "m": list(m.parts), "box": lhs,
                              "ordered_times_factor": rhs, "deviation": dev})
                worst = max(worst, dev)
        rep.update({"pairs": pairs, "deviation": worst, "passed": worst <= tol})
        out.report(rep)
        return EXIT_OK if worst <= tol else EXIT_FAIL
    passed = r.converged and r.deviation <= tol
    rep.update({"lhs": r.lhs, "rhs": r.rhs, "deviation": r.deviation, "size": r.size,
                "converged": r.converged, "passed": passed})
    if r.readings:
        rep["readings"] = r.readings
    out.report(rep)
    return EXIT_OK if passed else EXIT_FAIL


# --------------------------------------------------------------------------
# randomized suite
# --------------------------------------------------------------------------

def _suite_task(job):
    inst, tol, spec, cov_seed = job
    rng = np.random.default_rng(cov_seed) if cov_seed is not None else None
    res = check_instance(inst, tol, spec, rng)
    comb = combinatorial_check(inst.A, inst.f0)
    return res, comb


def cmd_random_suite(args, out: Writer) -> int:
    start = time.perf_counter()
    out.note(f"random-suite seed {args.seed}")
    insts = generate(args.seed, args.n1, args.n2, args.with_f0, args.complex_weights)
    tols = {1: _tolerance(args, args.tol1), 2: _tolerance(args, args.tol2)}
    jobs = []
    for k, inst in enumerate(insts):
        tol = tols[inst.A.dimension]
        cov = (args.seed * 1000 + k) if args.with_f0 else None
        jobs.append((inst, tol, _spec(args, tol), cov))
    threads = args.threads or _env_int("HGPERIOD_THREADS", 1)
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            results = list(pool.map(_suite_task, jobs))
    else:
        results = [_suite_task(j) for j in jobs]
    rows, failures = [], []
    for res, comb in results:
        ok = res.passed and all(comb.values())
        rows.append({"label": res.label, "dimension": res.dimension, "size": res.size,
                     "deviation": res.deviation, "covariance_deviation": res.covariance_deviation,
                     "tolerance": res.tolerance, "combinatorics": all(comb.values()),
                     "passed": ok, "error": res.error})
        if not ok:
            failures.append((res, comb))
    if failures and args.dump_dir:
        d = Path(args.dump_dir)
        d.mkdir(parents=True, exist_ok=True)
        for res, _ in failures:
            path = d / f"{res.label}.json"
            path.write_text(json.dumps(res.fixture, indent=2) + "\n")
            out.note(f"dumped failing instance to {path}")
    rep = {
        "seed": args.seed,
        "with_f0": args.with_f0,
        "instances": len(rows),
        "passed": sum(r["passed"] for r in rows),
        "worst_deviation": max((r["deviation"] for r in rows), default=0.0),
        "results": rows,
        "failures": [{"label": r.label, "error": r.error, "checks": c, "fixture": r.fixture}
                     for r, c in failures],
        "seconds": time.perf_counter() - start,
    }
    out.report(rep)
    return EXIT_OK if not failures else EXIT_FAIL


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _common(p, input_file=True):
    if input_file:
        p.add_argument("input", help="arrangement JSON file")
        p.add_argument("--with-f0", action="store_true",
                       help="use the f0 from the input file (exponential variant)")
    p.add_argument("--tol", type=float, default=None,
                   help="acceptance tolerance on the relative deviation (env HGPERIOD_TOL)")
    p.add_argument("--quad-tol", type=float, default=None,
                   help="target accuracy of each raw integral (default min(1e-10, tol/1000))")
    p.add_argument("--nodes", type=int, default=10, help="Gauss nodes per direction at the first level")
    p.add_argument("--max-depth", type=int, default=4, help="number of quadrature refinements")
    p.add_argument("--format", choices=("json", "table"), default="json", help="report format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hgperiod",
                                     description="Period matrices of weighted hyperplane arrangements.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="lattice, chambers, betanbc bases and discrete invariants")
    _common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("beta", help="the Gamma-product B(A) or B(A; f0)")
    _common(p)
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("critical", help="product of critical values over the labelled chambers")
    _common(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("period-matrix", help="the period matrix by quadrature")
    _common(p)
    p.set_defaults(func=cmd_period_matrix)

    p = sub.add_parser("verify", help="compare det PM against the closed form")
    _common(p)
    p.add_argument("--convergence", action="store_true",
                   help="also report PM(A_t) against PM(A; f0) for t in 10, 40, 160")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selberg-verify", help="Selberg-type determinant and lemma checks")
    _common(p, input_file=False)
    p.add_argument("--n", type=int, required=True, help="number of integration variables")
    p.add_argument("--z", required=True, help="comma-separated increasing rational points")
    p.add_argument("--alpha", required=True, help="comma-separated weights, one per point")
    p.add_argument("--gamma", required=True, help="pairwise exponent gamma")
    p.add_argument("--a", default=None, help="exponential rate (needed for exp, critical-exp, rect)")
    p.add_argument("--variant", required=True,
                   choices=("noexp", "noexp-sym", "exp", "critical-bounded", "critical-exp", "rect"),
                   help="determinants, closed-vs-critical products, or boxes vs ordered simplices")
    p.add_argument("--exp-reading", choices=EXP_READINGS, default="a",
                   help="exponential prefactor: exp(a...) or exp(a pi ...)")
    p.add_argument("--a-power", choices=A_POWER_READINGS, default="corrected",
                   help="power of a on the closed side")
    p.add_argument("--without-point-product", action="store_true",
                   help="omit the point-difference product on the closed side of critical-exp")
    p.add_argument("--l", default=None, help="rect: one composition, e.g. 1,1 (default all)")
    p.add_argument("--m", default=None, help="rect: one composition (default all)")
    p.set_defaults(func=cmd_selberg)

    p = sub.add_parser("random-suite", help="seeded random arrangements checked end to end")
    _common(p, input_file=False)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--n1", type=int, default=20, help="instances on the line")
    p.add_argument("--n2", type=int, default=10, help="instances in the plane")
    p.add_argument("--tol1", type=float, default=1e-5, help="tolerance on the line")
    p.add_argument("--tol2", type=float, default=1e-4, help="tolerance in the plane")
    p.add_argument("--with-f0", action="store_true", help="random f0 plus branch covariance")
    p.add_argument("--complex-weights", action="store_true")
    p.add_argument("--threads", type=int, default=None, help="worker processes (env HGPERIOD_THREADS)")
    p.add_argument("--dump-dir", default=None, help="write failing instances here as fixtures")
    p.set_defaults(func=cmd_random_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Writer(args.format)
    try:
        return args.func(args, out)
    except (SchemaError, ParseError, FileNotFoundError, ValueError) as exc:
        out.note(f"error: {type(exc).__name__}: {exc}")
        out.report({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_INPUT
    except HGError as exc:
        out.note(f"error: {type(exc).__name__}: {exc}")
        out.report({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
