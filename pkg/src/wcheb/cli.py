"""Batch front end: ``wcheb run problem.json --out result.json``.

Exit codes: 0 success, 1 other library error, 2 schema error (nothing is
written), 3 solver non-convergence, 4 ambiguous certificate.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bounds as B
from .certificates import (RivlinShapiro, alternation_verify, extremal_points, kolmogorov_check,
                           rivlin_shapiro_multipliers)
from .domains import IntervalUnion, Preimage
from .errors import AmbiguousCertificate, ChainTooShort, NonConvergence, SchemaError, WChebError
from .potential import capacity, has_exact_data, leja_capacity
from .serialize import parse_result, parse_set, parse_weight, to_jsonable, to_poly, validate
from .solver import preimage_transfer, solve, widom_factor
from .weights import Constant, Pullback

EXIT_OK, EXIT_ERROR, EXIT_SCHEMA, EXIT_NONCONV, EXIT_AMBIGUOUS = 0, 1, 2, 3, 4


class Problem:
    """Decoded problem file plus the numeric options after flag overrides."""

    def __init__(self, doc, flags):
        validate(doc)
        self.doc = doc
        self.command = doc["command"]
        opts = dict(doc.get("options", {}))
        for key in ("tol", "grid", "quad", "max_iter", "seed"):
            v = getattr(flags, key, None)
            if v is not None:
                opts[key] = v
        self.options = opts
        if self.command == "sharpness" and "set" not in doc:
            self.K = IntervalUnion([(-1.0, 1.0)])
        elif "set" in doc:
            self.K = parse_set(doc["set"])
        else:
            raise SchemaError("problem: missing field 'set'", path="set")
        self.w = parse_weight(doc["weight"], self.K) if "weight" in doc else Constant(1.0)
        n = doc.get("n")
        if n is None and self.command not in ("capacity", "certify"):
            raise SchemaError("problem: missing field 'n'", path="n")
        self.degrees = [] if n is None else ([n] if isinstance(n, int) else list(n))

    @property
    def solve_opts(self):
        o = self.options
        out = {}
        if "tol" in o:
            out["tol"] = o["tol"]
        if "grid" in o:
            out["density"] = o["grid"]
        if "max_iter" in o:
            out["max_iter"] = o["max_iter"]
        if "seed" in o:
            out["seed"] = o["seed"]
        return out

    @property
    def quad(self):
        return int(self.options.get("quad", 512))


# -- certificates -------------------------------------------------------------


def _certificate(K, w, res, tol=1e-8, density=None):
    """Certificate record for a result; ambiguity propagates to the caller."""
    n = res.T.degree
    if K.is_real:
        grid = K.sample(density or max(4000, 400 * n))
    else:
        grid = K.sample(density or 512)
    E = extremal_points(res.T, w, grid)
    cert = kolmogorov_check(res.T, E, tol, grid, w)
    out = {"extremal_count": len(E), "extremal_tol": E.tol_rel}
    if isinstance(cert, RivlinShapiro):
        try:
            rs = rivlin_shapiro_multipliers(res.T, E, n, tol)
            out["certificate"] = {"kind": "rivlin_shapiro", "points": rs.points, "multipliers": rs.multipliers,
                                  "residual": rs.residual, "raw_residual": rs.raw_residual,
                                  "primal_value": cert.primal_value, "primal_agrees": cert.primal_agrees}
        except WChebError as exc:
            out["certificate"] = {"kind": "rivlin_shapiro", "points": cert.points,
                                  "multipliers": cert.multipliers, "residual": cert.residual,
                                  "primal_value": cert.primal_value, "primal_agrees": cert.primal_agrees,
                                  "pruning": exc}
    else:
        out["certificate"] = {"kind": "improvable", "q": cert.q, "decrease": cert.decrease,
                              "step": cert.step, "residual": cert.residual,
                              "primal_value": cert.primal_value, "primal_agrees": cert.primal_agrees}
    if K.is_real and isinstance(cert, RivlinShapiro):
        try:
            out["alternation"] = alternation_verify(res, K, w, density=density)
        except ChainTooShort as exc:
            out["alternation"] = exc
    return out


# -- commands ------------------------------------------------------------------


def _solve_rows(pb: Problem, with_widom: bool):
    rows, records = [], []
    for n in pb.degrees:
        res = solve(pb.K, pb.w, n, **pb.solve_opts)
        rec = {"n": n, "result": res}
        row = {"n": n, "t_n": res.norm, "converged": res.converged, "iterations": res.iterations,
               "residual": res.residual}
        if with_widom:
            rep = widom_factor(pb.K, pb.w, n, result=res, N=pb.quad)
            rec["widom"] = rep
            row.update({"capacity": rep.capacity, "W_n": rep.W_n, "S_w": rep.S_w, "ratio": rep.ratio})
        rec.update(_certificate(pb.K, pb.w, res, density=pb.options.get("grid")))
        records.append(rec)
        rows.append(row)
    return records, rows


def cmd_solve(pb):
    return _solve_rows(pb, with_widom=False)


def cmd_widom(pb):
    return _solve_rows(pb, with_widom=True)


def cmd_certify(pb):
    if "result" not in pb.doc:
        raise SchemaError("problem: certify needs a stored 'result'", path="result")
    stored = pb.doc["result"]
    # accept either a bare result or a whole result file
    if "records" in stored:
        stored = stored["records"][0]["result"]
    res = parse_result(stored)
    rec = {"n": res.n, "result": res}
    rec.update(_certificate(pb.K, pb.w, res, density=pb.options.get("grid")))
    return [rec], [{"n": res.n, "kind": rec["certificate"]["kind"],
                    "residual": rec["certificate"]["residual"]}]


def cmd_preimage(pb):
    if "p" not in pb.doc:
        raise SchemaError("problem: preimage needs 'p'", path="p")
    p = to_poly(pb.doc["p"])
    Kp = Preimage(p, pb.K)
    wp = Pullback(p, pb.w)
    records, rows = [], []
    for n in pb.degrees:
        base = solve(pb.K, pb.w, n, **pb.solve_opts)
        res = preimage_transfer(base, p, pb.K)
        rec = {"n": n, "base_result": base, "result": res}
        row = {"n": n, "nm": res.n, "t_base": base.norm, "t_preimage": res.norm}
        if has_exact_data(pb.K):
            rb = widom_factor(pb.K, pb.w, n, result=base, N=pb.quad)
            rp = widom_factor(Kp, wp, res.n, result=res, N=pb.quad)
            rec["widom_base"], rec["widom"] = rb, rp
            row.update({"W_base": rb.W_n, "W_preimage": rp.W_n})
        rec.update(_certificate(Kp, wp, res))
        records.append(rec)
        rows.append(row)
    return records, rows


def cmd_bounds(pb):
    records, rows = [], []
    for n in pb.degrees:
        reps = [B.szego_lower_bound(pb.K, pb.w, n, N=pb.quad, **pb.solve_opts)]
        eq = reps[0].provenance["equality"]
        solved = solve(pb.K, pb.w, n, **pb.solve_opts)
        zs = [complex(*z) if isinstance(z, list) else complex(z) for z in pb.doc.get("z", [])]
        if zs:
            reps.append(B.bernstein_walsh_check(pb.K, pb.w, solved.T, zs, N=pb.quad))
        if "w2" in pb.doc:
            reps.append(B.compare_weights(pb.K, pb.w, parse_weight(pb.doc["w2"], pb.K, "w2"), n,
                                          **pb.solve_opts))
        if "P_d" in pb.doc:
            reps.append(B.doubled_bound_check(pb.K, to_poly(pb.doc["P_d"]), n, **pb.solve_opts))
        rec = {"n": n, "result": solved, "bounds": reps, "equality": eq}
        rec.update(_certificate(pb.K, pb.w, solved, density=pb.options.get("grid")))
        records.append(rec)
        for r in reps:
            rows.append({"n": n, **r.as_row()})
    return records, rows


def cmd_sharpness(pb):
    eps = pb.doc.get("eps", [0.3, 0.1, 0.03, 0.01])
    use_poly = bool(pb.doc.get("use_poly_approx", False))
    degrees = tuple(pb.doc.get("degrees", (8, 16, 32, 64)))
    records, rows = [], []
    for n in pb.degrees:
        reps = B.sharpness_sweep(pb.K, n, eps, use_poly, degrees, N=pb.quad, **pb.solve_opts)
        for r in reps:
            prov = dict(r.provenance)
            res = prov.pop("result")
            rec = {"n": n, "eps": prov["eps"], "report": B.BoundReport(r.name, r.lhs, r.rhs, r.margin,
                                                                        r.passed, r.tolerance, prov),
                   "result": res}
            rec.update(_certificate(pb.K, B.eps_weight(prov["eps"], n), res))
            records.append(rec)
            row = {"n": n, "eps": prov["eps"], "t_n": prov["t_n"], "W_n": prov["W_n"], "S": prov["S"],
                   "ratio": prov["ratio"], "ceiling": prov["ceiling"], "pass": r.passed}
            for j, v in prov.get("poly", {}).items():
                row[f"ratio_deg{j}"] = v["ratio"]
            rows.append(row)
    return records, rows


def cmd_capacity(pb):
    if has_exact_data(pb.K):
        val, kind = capacity(pb.K), "exact"
    else:
        val, kind = leja_capacity(pb.K), "leja-estimate"
    return [{"capacity": val, "kind": kind}], [{"capacity": val, "kind": kind}]


COMMANDS = {"solve": cmd_solve, "widom": cmd_widom, "certify": cmd_certify, "preimage": cmd_preimage,
            "bounds": cmd_bounds, "sharpness": cmd_sharpness, "capacity": cmd_capacity}


# -- driver --------------------------------------------------------------------


def _write_csv(path: Path, rows):
    keys = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    with open(path, "w", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=keys)
        wr.writeheader()
        for r in rows:
            wr.writerow({k: _csv_value(r.get(k)) for k in keys})


def _csv_value(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return v


def _unconverged(records):
    for rec in records:
        for key in ("result", "base_result"):
            r = rec.get(key)
            if r is not None and hasattr(r, "converged") and not r.converged:
                return True
    return False


def run(problem_path, flags) -> int:
    """Run one problem file; returns the process exit code."""
    out = Path(flags.out)
    try:
        doc = json.loads(Path(problem_path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        _err({"reason": "schema_error", "message": f"cannot read problem file: {exc}"})
        return EXIT_SCHEMA
    t0 = time.perf_counter()
    try:
        pb = Problem(doc, flags)
    except SchemaError as exc:
        _err({"reason": exc.reason, "message": str(exc), **to_jsonable(exc.details)})
        return EXIT_SCHEMA
    code = EXIT_OK
    status = {"reason": "ok"}
    records, rows = [], []
    try:
        records, rows = COMMANDS[pb.command](pb)
        if _unconverged(records):
            code, status = EXIT_NONCONV, {"reason": "non_convergence"}
    except SchemaError as exc:
        _err({"reason": exc.reason, "message": str(exc)})
        return EXIT_SCHEMA
    except NonConvergence as exc:
        code, status = EXIT_NONCONV, {"reason": exc.reason, "message": str(exc)}
    except AmbiguousCertificate as exc:
        code, status = EXIT_AMBIGUOUS, {"reason": exc.reason, "message": str(exc),
                                        **to_jsonable(exc.details)}
    except WChebError as exc:
        code, status = EXIT_ERROR, {"reason": exc.reason, "message": str(exc)}
    doc_out = {"problem": doc, "options": pb.options, "status": status, "records": to_jsonable(records)}
    if not flags.reproducible:
        doc_out["wall_clock"] = time.perf_counter() - t0
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc_out, indent=2) + "\n")
    if flags.format == "csv":
        _write_csv(out.with_suffix(".csv"), to_jsonable(rows))
    if code != EXIT_OK:
        _err(status)
    return code


def _err(obj):
    print(json.dumps(obj), file=sys.stderr)


def build_parser():
    ap = argparse.ArgumentParser(prog="wcheb", description="Weighted Chebyshev polynomials on compact sets")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a problem file")
    r.add_argument("problem", help="problem file (JSON)")
    r.add_argument("--out", required=True, help="result file (JSON)")
    r.add_argument("--format", choices=["json", "csv"], default="json",
                   help="csv also writes a flat table next to --out")
    r.add_argument("--tol", type=float)
    r.add_argument("--grid", type=int, help="grid density")
    r.add_argument("--quad", type=int, help="quadrature nodes N")
    r.add_argument("--max-iter", dest="max_iter", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--reproducible", action="store_true", help="omit wall-clock timing")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.problem, args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
