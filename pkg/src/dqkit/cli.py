"""Command-line front door.

Subcommands map one-to-one onto the library modules: ``star``, ``norm``,
``dist``, ``flat-section``, ``quantizable``, ``approx``, ``trace``,
``graphs``, and ``check``.  All file inputs are validated against the
shipped JSON schemas before dispatch.  Exit codes: 0 success, 2 validation
error, 3 budget exceeded; errors are emitted as JSON on standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from fractions import Fraction
from typing import List, Optional, Sequence

from . import serialization as ser
from .approx import quantum_weierstrass
from .bvgraphs import enumerate_admissible, hbar_order, verify_locality_bound
from .coeffring import Box, PolyRep, TrigRep
from .fedosov import (FedosovData, check_flat, flat_section, is_quantizable,
                      star_via_flat_sections)
from .formal import FormalFunction
from .frechet import (Atlas, continuity_ratio, formal_seminorm,
                      frechet_distance)
from .intervals import BudgetExceededError, Enclosure, QQi
from .star import SymplecticStructure, moyal, poisson
from .trace import cyclicity_defect, renormalized_trace, trace_continuity_check


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ser.ValidationError(f"{path}: {exc}") from exc


def _pad(f: FormalFunction, N: int) -> FormalFunction:
    if N == f.N:
        return f
    if N < f.N:
        return f.truncate(N)
    zero = f.coeffs[0].scale(Fraction(0))
    return FormalFunction(list(f.coeffs) + [zero] * (N - f.N), N)


def _load_formal(path: str, N: Optional[int]) -> FormalFunction:
    obj = _read_json(path)
    if isinstance(obj, dict) and "coeffs" in obj and "N" in obj:
        f = ser.formal_from_json(obj)
    else:
        rep = ser.smoothrep_from_json(obj)
        f = FormalFunction.of(rep, N if N is not None else 4)
    return _pad(f, N) if N is not None else f


def _load_omega(flag: Optional[str], dim: int) -> SymplecticStructure:
    if flag is None or flag == "standard":
        if dim % 2:
            raise ser.ValidationError(f"odd dimension {dim} has no standard omega")
        return SymplecticStructure.standard(dim // 2)
    S = ser.omega_from_json(_read_json(flag))
    if S.dim != dim:
        raise ser.ValidationError(f"omega is {S.dim}-dimensional, inputs are {dim}")
    return S


def _load_atlas(flag: Optional[str], dim: int) -> Atlas:
    if flag is None:
        return Atlas.default_flat(dim)
    if flag == "torus":
        return Atlas.torus(dim)
    A = ser.atlas_from_json(_read_json(flag))
    if A.charts[0].dim != dim:
        raise ser.ValidationError(
            f"atlas charts are {A.charts[0].dim}-dimensional, inputs are {dim}")
    return A


def _enclosure_json(e: Enclosure) -> dict:
    return {"lo": ser.rat_to_str(e.lo), "hi": ser.rat_to_str(e.hi)}


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


# -- subcommands -------------------------------------------------------------

def _cmd_star(args) -> int:
    f = _load_formal(args.lhs, args.N)
    g = _load_formal(args.rhs, args.N)
    S = _load_omega(args.omega, f.dim)
    _emit(ser.formal_to_json(moyal(f, g, S)))
    return 0


def _cmd_norm(args) -> int:
    f = _load_formal(args.f, args.N)
    A = _load_atlas(args.atlas, f.dim)
    e = formal_seminorm(f, args.k, A, Fraction(args.tol))
    _emit({"k": args.k, "seminorm": _enclosure_json(e)})
    return 0


def _cmd_dist(args) -> int:
    f = _load_formal(args.lhs, args.N)
    g = _load_formal(args.rhs, args.N)
    A = _load_atlas(args.atlas, f.dim)
    e = frechet_distance(f, g, A, args.terms, Fraction(args.tol))
    _emit({"terms": args.terms, "distance": _enclosure_json(e)})
    return 0


def _load_connection(flag: str, S: SymplecticStructure) -> FedosovData:
    if flag == "flat":
        return FedosovData.flat(S)
    obj = _read_json(flag)
    christoffel = None
    if "christoffel" in obj:
        christoffel = [[[ser.smoothrep_from_json(c) for c in row]
                        for row in plane] for plane in obj["christoffel"]]
    correction = None
    if "I" in obj:
        correction = ser.weyl_from_json(obj["I"])
    try:
        return FedosovData(S, christoffel, correction)
    except ValueError as exc:
        raise ser.ValidationError(str(exc)) from exc


def _cmd_flat_section(args) -> int:
    f = _load_formal(args.f, args.N)
    S = _load_omega(args.omega, f.dim)
    F = _load_connection(args.connection, S)
    W = args.W if args.W is not None else 2 * f.N + 4
    O = flat_section(f, F, W)
    defect = check_flat(O, F)
    _emit({"section": ser.weyl_to_json(O),
           "flat_defect_is_zero": defect.is_zero()})
    return 0


def _cmd_quantizable(args) -> int:
    f = _load_formal(args.f, args.N)
    S = _load_omega(args.omega, f.dim)
    F = _load_connection(args.connection, S)
    W = args.W if args.W is not None else 2 * f.N + 6
    res = is_quantizable(f, F, W)
    _emit({"quantizable": res.quantizable, "weight": res.weight,
           "checked_up_to": res.checked_up_to})
    return 0


def _value_degree(value: FormalFunction) -> int:
    return max((c.degree() for c in value.coeffs if isinstance(c, PolyRep)),
               default=-1)


def report_convergence(f: FormalFunction, K: Box, S: SymplecticStructure,
                       Ns: Sequence[int]) -> List[dict]:
    """Rows (N, certified bound, polynomial degree, seconds); the bound
    column is asserted monotone non-increasing over the given N range."""
    rows = []
    prev = None
    for N in Ns:
        t0 = time.monotonic()
        qp, bound = quantum_weierstrass(_pad(f, max(N + 1, f.N)), K, N, S)
        dt = time.monotonic() - t0
        if prev is not None and bound.hi > prev:
            raise AssertionError(f"bound not monotone at N={N}")
        prev = bound.hi
        rows.append({"N": N, "bound": bound.hi,
                     "degree": _value_degree(qp.value), "seconds": dt})
    return rows


def _write_report(rows: List[dict], csv_path: str, fig_path: Optional[str]) -> None:
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "bound", "degree", "seconds"])
        for r in rows:
            w.writerow([r["N"], float(r["bound"]), r["degree"],
                        f"{r['seconds']:.3f}"])
    if fig_path is None:
        fig_path = csv_path.rsplit(".", 1)[0] + ".png"
    if rows:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(6, 4))
        Ns = [r["N"] for r in rows]
        ax.semilogy(Ns, [float(r["bound"]) for r in rows], "o-",
                    label="certified bound")
        ax.semilogy(Ns, [(N + 3) / 2 ** (N + 1) + 2 ** -(N + 1) for N in Ns],
                    "s--", label="target threshold")
        ax.set_xlabel("truncation order N")
        ax.set_ylabel("distance bound")
        ax.set_xticks(Ns)
        ax.legend()
        ax.set_title("Quantum Weierstrass convergence")
        fig.tight_layout()
        fig.savefig(fig_path, dpi=120)
        plt.close(fig)


def _parse_range(spec: str) -> List[int]:
    try:
        lo, hi = spec.split(":")
        return list(range(int(lo), int(hi) + 1))
    except ValueError as exc:
        raise ser.ValidationError(f"bad range {spec!r}, expected LO:HI") from exc


def _cmd_approx(args) -> int:
    f = _load_formal(args.f, args.N)
    K = ser.box_from_json(_read_json(args.box))
    if K.dim != f.dim:
        raise ser.ValidationError(f"box is {K.dim}-dimensional, input is {f.dim}")
    S = _load_omega(args.omega, f.dim)
    if args.report is not None:
        Ns = _parse_range(args.N_range) if args.N_range else (
            list(range(1, args.N + 1)) if args.N else [1, 2, 3])
        rows = report_convergence(f, K, S, Ns)
        _write_report(rows, args.report, args.figure)
        _emit({"rows": len(rows), "csv": args.report})
        return 0
    N = args.N if args.N is not None else 3
    qp, bound = quantum_weierstrass(_pad(f, max(N + 1, f.N)), K, N, S)
    _emit({"N": N, "bound": _enclosure_json(bound),
           "value": ser.formal_to_json(qp.value),
           "witness_terms": len(qp.witness),
           "degree": _value_degree(qp.value)})
    return 0


def _cmd_trace(args) -> int:
    f = _load_formal(args.f, args.N)
    S = _load_omega(args.omega, f.dim)
    t = renormalized_trace(f, S, args.n)
    _emit({"coeffs": [{"rat": ser.rat_to_str(c.re), "im": ser.rat_to_str(c.im),
                       "twopi_pow": t.twopi_pow} for c in t.coeffs]})
    return 0


def _cmd_graphs(args) -> int:
    graphs = enumerate_admissible(args.n, args.l, args.cap, budget=args.budget)
    loc = verify_locality_bound(args.n, args.l, args.cap)
    payload = {"n": args.n, "l": args.l, "valency_cap": args.cap,
               "count": len(graphs), "locality": loc,
               "graphs": [{"vertices": [list(v) for v in G.vertices],
                           "edges": [list(e) for e in G.internal_edges()],
                           "hbar_order": hbar_order(G, args.n)}
                          for G in graphs]}
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
        _emit({"count": len(graphs), "emitted": args.emit})
    else:
        _emit(payload)
    return 0


# -- property suites ---------------------------------------------------------

def _random_poly(rng: random.Random, dim: int, deg: int) -> PolyRep:
    terms = {}
    for _ in range(rng.randint(1, 5)):
        exp = [0] * dim
        for _ in range(rng.randint(0, deg)):
            exp[rng.randrange(dim)] += 1
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if c:
            terms[tuple(exp)] = terms.get(tuple(exp), Fraction(0)) + c
    return PolyRep(dim, {e: c for e, c in terms.items() if c})


def _random_formal(rng: random.Random, dim: int, N: int, deg: int) -> FormalFunction:
    return FormalFunction([_random_poly(rng, dim, deg) for _ in range(N + 1)], N)


def _random_trig(rng: random.Random, dim: int, kmax: int) -> TrigRep:
    modes = {}
    for _ in range(rng.randint(1, 4)):
        k = tuple(rng.randint(-kmax, kmax) for _ in range(dim))
        modes[k] = QQi(Fraction(rng.randint(-5, 5), rng.randint(1, 4)),
                       Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
    return TrigRep(dim, modes)


def _suite_associativity(rng, N, cases, deadline):
    S = SymplecticStructure.standard(1)
    for i in range(cases):
        _check_deadline(deadline)
        f = _random_formal(rng, 2, N, 3)
        g = _random_formal(rng, 2, N, 3)
        h = _random_formal(rng, 2, N, 3)
        if moyal(moyal(f, g, S), h, S) != moyal(f, moyal(g, h, S), S):
            return {"ok": False, "failed_case": i}
    return {"ok": True, "cases": cases}


def _suite_poisson(rng, N, cases, deadline):
    for i in range(cases):
        _check_deadline(deadline)
        n = rng.choice([1, 2])
        S = SymplecticStructure.standard(n)
        f = FormalFunction.of(_random_poly(rng, 2 * n, 4), max(N, 1))
        g = FormalFunction.of(_random_poly(rng, 2 * n, 4), max(N, 1))
        comm = moyal(f, g, S) - moyal(g, f, S)
        pb = poisson(f.coeffs[0], g.coeffs[0], S)
        if comm.coeffs[1] + pb.scale(Fraction(-1)) != comm.coeffs[1].scale(Fraction(0)):
            return {"ok": False, "failed_case": i}
    return {"ok": True, "cases": cases}


def _suite_flat_sections(rng, N, cases, deadline):
    S = SymplecticStructure.standard(1)
    F = FedosovData.flat(S)
    for i in range(cases):
        _check_deadline(deadline)
        f = FormalFunction.of(_random_poly(rng, 2, 3), N)
        g = FormalFunction.of(_random_poly(rng, 2, 3), N)
        if star_via_flat_sections(f, g, F) != moyal(f, g, S):
            return {"ok": False, "failed_case": i}
    return {"ok": True, "cases": cases}


def _suite_cyclicity(rng, N, cases, deadline):
    S = SymplecticStructure.standard(1)
    for i in range(cases):
        _check_deadline(deadline)
        f = FormalFunction.of(_random_trig(rng, 2, 2), N)
        g = FormalFunction.of(_random_trig(rng, 2, 2), N)
        if not cyclicity_defect(f, g, S, 1).is_zero():
            return {"ok": False, "failed_case": i}
    return {"ok": True, "cases": cases}


def _suite_continuity(rng, N, cases, deadline):
    A = Atlas.default_flat(2)
    S = SymplecticStructure.standard(1)
    report = {}
    for l in range(min(N, 3) + 1):
        worst = Fraction(0)
        for _ in range(cases):
            _check_deadline(deadline)
            f = FormalFunction.of(_random_poly(rng, 2, 2), max(l, 1))
            g = FormalFunction.of(_random_poly(rng, 2, 2), max(l, 1))
            try:
                # a loose sup tolerance keeps ratios cheap; the maxima are
                # only reported, never compared against a constant
                r = continuity_ratio(f, g, l, A, S, Fraction(16))
            except (ZeroDivisionError, BudgetExceededError):
                continue
            worst = max(worst, r.hi)
        report[str(l)] = ser.rat_to_str(worst)
    return {"ok": True, "cases": cases, "max_ratio_by_l": report}


def _suite_trace_continuity(rng, N, cases, deadline):
    A = Atlas.torus(2)
    for i in range(cases):
        _check_deadline(deadline)
        f = FormalFunction([_random_trig(rng, 2, 2) for _ in range(N + 1)], N)
        for l in range(N + 1):
            # only rhs.hi matters for the enclosure-wise bound, so a loose
            # sup tolerance keeps the grid certifier off the hot path
            holds, _, _ = trace_continuity_check(f, l, A, Fraction(64))
            if not holds:
                return {"ok": False, "failed_case": i, "l": l}
    return {"ok": True, "cases": cases}


_SUITES = {
    "associativity": _suite_associativity,
    "poisson": _suite_poisson,
    "flat-sections": _suite_flat_sections,
    "cyclicity": _suite_cyclicity,
    "continuity": _suite_continuity,
    "trace-continuity": _suite_trace_continuity,
}


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceededError("suite exceeded --budget-ms")


def _cmd_check(args) -> int:
    rng = random.Random(args.seed)
    deadline = (time.monotonic() + args.budget_ms / 1000.0
                if args.budget_ms is not None else None)
    N = args.N if args.N is not None else 3
    result = _SUITES[args.suite](rng, N, args.cases, deadline)
    result.update({"suite": args.suite, "seed": args.seed, "N": N})
    _emit(result)
    return 0 if result["ok"] else 1


# -- entry point -------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", default=None,
                        help="'standard' or a JSON file with omega_lower")
    common.add_argument("--atlas", default=None,
                        help="'torus' or an atlas JSON file (default: flat)")
    common.add_argument("--N", type=int, default=None, help="hbar truncation order")
    common.add_argument("--W", type=int, default=None, help="Weyl weight cap")
    common.add_argument("--tol", default="1/100",
                        help="enclosure width budget, a rational string")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--budget-ms", dest="budget_ms", type=int, default=None,
                        help="wall-clock budget for randomized suites")

    p = argparse.ArgumentParser(prog="dqkit",
                                description="deformation quantization toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("star", parents=[common], help="Moyal-Weyl star product")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.set_defaults(func=_cmd_star)

    s = sub.add_parser("norm", parents=[common], help="Frechet semi-norm enclosure")
    s.add_argument("--f", required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=_cmd_norm)

    s = sub.add_parser("dist", parents=[common], help="Frechet distance enclosure")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--terms", type=int, default=10)
    s.set_defaults(func=_cmd_dist)

    s = sub.add_parser("flat-section", parents=[common],
                       help="Fedosov flat section with symbol f")
    s.add_argument("--f", required=True)
    s.add_argument("--connection", default="flat",
                   help="'flat' or a JSON file with christoffel/I blocks")
    s.set_defaults(func=_cmd_flat_section)

    s = sub.add_parser("quantizable", parents=[common],
                       help="bounded-weight certificate for O_f")
    s.add_argument("--f", required=True)
    s.add_argument("--connection", default="flat")
    s.set_defaults(func=_cmd_quantizable)

    s = sub.add_parser("approx", parents=[common],
                       help="certified quantum Weierstrass approximation")
    s.add_argument("--f", required=True)
    s.add_argument("--box", required=True)
    s.add_argument("--report", default=None, help="write a convergence CSV here")
    s.add_argument("--figure", default=None,
                   help="figure path (default: CSV path with .png)")
    s.add_argument("--N-range", dest="N_range", default=None,
                   help="LO:HI range of truncation orders for the report")
    s.set_defaults(func=_cmd_approx)

    s = sub.add_parser("trace", parents=[common], help="renormalized torus trace")
    s.add_argument("--f", required=True)
    s.add_argument("--n", type=int, required=True, help="half-dimension")
    s.set_defaults(func=_cmd_trace)

    s = sub.add_parser("graphs", parents=[common], help="admissible BV graphs")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--cap", type=int, default=4)
    s.add_argument("--budget", type=int, default=200_000)
    s.add_argument("--emit", default=None)
    s.set_defaults(func=_cmd_graphs)

    s = sub.add_parser("check", parents=[common], help="randomized invariant suites")
    s.add_argument("--suite", required=True, choices=sorted(_SUITES))
    s.add_argument("--cases", type=int, default=25)
    s.set_defaults(func=_cmd_check)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ser.ValidationError as exc:
        json.dump({"error": "validation", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except BudgetExceededError as exc:
        json.dump({"error": "budget-exceeded", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3


def main() -> None:
    sys.exit(run())
