"""Command-line front end.

Scalar reports go to stdout as JSON; curve and grid data are CSV.  Numbers
carry 12 significant digits and infinity is written as ``inf``.  Exit codes:
0 success, 2 usage error, 1 failed invariant or verification (a JSON reason
is printed on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .entropy import entropy_reduction_estimate
from .measures import MeasurePair, Spectrum
from .oracle import oracle_F, oracle_G, oracle_I, oracle_R, sample_haar
from .optimal import INEQUALITIES, averaged_all, check_saturation, optimal_measurement
from .region import (
    CurvatureClassificationError,
    NoTangentError,
    TABLE1_PAIRS,
    averaged_region,
    curvature_sign,
    decrease_profile,
    single_outcome_region,
    tangent_from_identity,
)
from .verify import fuzz_inequalities

REGION_HEADER = ["series", "lambda", "info", "disturbance"]
DECREASE_HEADER = ["info", "amount", "rate"]
TABLE1_HEADER = ["info", "disturbance", "sign"]

ADDITIVE_PAIRS = ["ig-df", "ig-dr", "i-df", "i-dr"]


class VerificationFailure(Exception):
    def __init__(self, reason, payload=None):
        super().__init__(reason)
        self.payload = payload or {}


def fmt(x) -> str:
    x = float(x) + 0.0  # no "-0"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj) + 0.0
        if math.isfinite(x):
            return float(format(x, ".12g"))
        return fmt(x)
    return obj


def dump_json(obj, stream) -> None:
    stream.write(json.dumps(_clean(obj), indent=2) + "\n")


def _write_csv(path, header, rows, stdout):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    if path in (None, "-"):
        stdout.write(buf.getvalue())
    else:
        with open(path, "w", newline="") as fh:
            fh.write(buf.getvalue())


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _spectrum(args):
    if len(args.sigma) != args.dim:
        raise ValueError(f"--sigma has {len(args.sigma)} values but --dim is {args.dim}")
    return Spectrum(args.sigma)


# ------------------------------------------------------------------ commands


def cmd_measures(args, out):
    s = _spectrum(args)
    method = "montecarlo" if args.method == "mc" else "quadrature"
    est = entropy_reduction_estimate(s, method=method, tol=args.tol, seed=args.seed)
    from .measures import single_outcome_measures

    vals = single_outcome_measures(s)
    dump_json(
        {
            "dim": s.dim,
            "sigma": list(s.sigma),
            "p": vals.probability,
            "G": vals.G,
            "F": vals.F,
            "R": vals.R,
            "I": est.value,
            "I_error": est.error,
            "I_method": method,
            "I_G": vals.IG,
            "D_F": vals.DF,
            "D_R": vals.DR,
        },
        out,
    )


def cmd_region(args, out):
    pair = MeasurePair.parse(args.pair)
    reg = single_outcome_region(args.dim, pair, args.resolution, n_random=args.n_random, seed=args.seed)
    rows = [("cloud", "", x, y) for x, y in reg.cloud]
    for name, curve in reg.curves.items():
        rows += [(name, lam, x, y) for lam, x, y in zip(curve.lam, curve.info, curve.disturbance)]
    for p in reg.projectors:
        rows.append((f"P_{p.rank}", "", p.point.info, p.point.disturbance))
    hull = averaged_region(reg)
    rows += [("hull_lower", "", x, y) for x, y in hull.lower]
    if not hull.unbounded:
        rows += [("hull_upper", "", x, y) for x, y in hull.upper]
    _write_csv(args.out, REGION_HEADER, rows, out)


def cmd_tangent(args, out):
    t = tangent_from_identity(args.dim, MeasurePair.parse(args.pair), tol=args.tol)
    dump_json(t.as_dict(), out)


def cmd_decrease(args, out):
    prof = decrease_profile(args.dim, MeasurePair.parse(args.pair), grid=args.grid)
    _write_csv(args.out, DECREASE_HEADER, [(p.info, p.amount, p.rate) for p in prof], out)


def cmd_optimal(args, out):
    d = args.dim
    tangents = {}
    for name, pair in (("IF", "i-df"), ("IR", "i-dr")):
        try:
            tangents[name] = tangent_from_identity(d, pair)
        except NoTangentError:
            tangents[name] = None
    chosen = tangents["IF" if args.pair == "i-df" else "IR"] if args.kind == "i" else None
    meas, construction = optimal_measurement(d, args.kind, args.target, tangent=chosen)
    avg = averaged_all(meas)
    reports = [check_saturation(meas, q, tangents.get(q), averages=avg) for q in INEQUALITIES]
    payload = {
        "dim": d,
        "kind": args.kind,
        "target": args.target,
        "construction": construction,
        "label": meas.label,
        "operators": [[np.real(v) for v in np.diagonal(M)] for M in meas.operators],
        "probabilities": list(meas.probabilities()),
        "completeness_error": meas.completeness_error(),
        "averages": avg,
        "saturation": [r.as_dict() for r in reports],
    }
    if chosen is not None:
        payload["tangent"] = chosen.as_dict()
    if any(r.verdict == "violated" for r in reports):
        raise VerificationFailure("inequality violated", payload)
    dump_json(payload, out)


def cmd_table1(args, out):
    rows = []
    for pair in TABLE1_PAIRS:
        rows.append((pair.info.value, pair.disturbance.value, curvature_sign(args.dim, pair)))
    if args.format == "csv":
        _write_csv(None, TABLE1_HEADER, rows, out)
    else:
        dump_json(
            {"dim": args.dim, "entries": [dict(zip(TABLE1_HEADER, r)) for r in rows]},
            out,
        )


def cmd_verify(args, out):
    report = fuzz_inequalities(args.dims, args.trials, args.seed)
    payload = report.as_dict()
    dump_json(payload, out)
    if not report.ok:
        raise VerificationFailure("tradeoff inequality violated", {"violations": report.violations})


def cmd_oracle(args, out):
    s = _spectrum(args)
    ens = sample_haar(args.dim, args.samples, args.seed)
    M = np.diag(s.array)
    from .measures import single_outcome_measures

    closed = single_outcome_measures(s)
    rows = {}
    ok = True
    for name, fn, ref in (
        ("G", oracle_G, closed.G),
        ("F", oracle_F, closed.F),
        ("R", oracle_R, closed.R),
        ("I", oracle_I, closed.I),
    ):
        est = fn(ens, M)
        diff = est.value - ref
        passed = abs(diff) <= 3 * est.error or abs(diff) <= 1e-12
        ok &= passed
        rows[name] = {
            "closed_form": ref,
            "oracle": est.value,
            "stderr": est.error,
            "difference": diff,
            "within_3se": passed,
        }
    payload = {"dim": args.dim, "sigma": list(s.sigma), "samples": args.samples, "seed": args.seed,
               "measures": rows, "ok": ok}
    dump_json(payload, out)
    if not ok:
        raise VerificationFailure("oracle disagrees with closed form beyond 3 standard errors")


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infodist", description="Additive information-disturbance measures and optimal measurements."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="single-outcome measures of a spectrum (JSON)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--sigma", type=_floats, required=True)
    p.add_argument("--method", choices=["quadrature", "mc"], default="quadrature")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("region", help="single-outcome region and its hull (CSV)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--pair", choices=ADDITIVE_PAIRS, required=True)
    p.add_argument("--resolution", type=int, default=1001, help="lambda samples per family curve")
    p.add_argument("--n-random", type=int, default=5000, help="random spectra in the cloud")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("tangent", help="tangent point from the identity (JSON)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--pair", choices=["i-df", "i-dr"], required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_tangent)

    p = sub.add_parser("decrease", help="disturbance decrease below the curve (CSV)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--pair", choices=["i-df", "i-dr"], required=True)
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_decrease)

    p = sub.add_parser("optimal", help="optimal measurement for a target information (JSON)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kind", choices=["ig", "i"], required=True)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--pair", choices=["i-df", "i-dr"], default="i-df",
                   help="disturbance the construction minimises when --kind i")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("table1", help="curvature signs of the (1, d-1) boundary")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", help="fuzz the tradeoff inequalities (JSON)")
    p.add_argument("--dims", type=_ints, default=[2, 3, 4])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="compare closed forms with the ensemble oracle (JSON)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--sigma", type=_floats, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, stdout)
    except VerificationFailure as exc:
        dump_json({"error": "verification", "reason": str(exc), **exc.payload}, stderr)
        return 1
    except (NoTangentError, CurvatureClassificationError) as exc:
        dump_json({"error": "invariant", "reason": str(exc)}, stderr)
        return 1
    except ValueError as exc:
        dump_json({"error": "usage", "reason": str(exc)}, stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
