"""Command line entry point: ``python3 -m pathdensity <command> ...``.

Exit codes: 0 on success, 2 when an input is rejected, 3 when a guarantee
that should always hold fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from . import coloring as col
from . import extract as ex
from . import oracle as orc
from . import sequences as seq
from .errors import InvariantViolation, PathDensityError, PreconditionError
from .graphmodel import Color, read_coloring, write_coloring

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_INVARIANT = 3

WORKERS_ENV = "PATHDENSITY_WORKERS"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _open_out(path: str | None) -> TextIO:
    return sys.stdout if path in (None, "-") else open(path, "w", encoding="utf-8", newline="")


def _close(fh: TextIO) -> None:
    if fh is not sys.stdout:
        fh.close()


# -- construct / profile / sweep -------------------------------------------------------


def cmd_construct(args: argparse.Namespace) -> int:
    C = col.build(args.q, args.n_min)
    write_coloring(col.to_total_graph(C), args.out)
    print(f"wrote {C.n} vertices in {C.num_levels} blocks to {args.out}", file=sys.stderr)
    return EXIT_OK


def _profile_source(args: argparse.Namespace) -> col.GeometricColoring:
    if args.input:
        return col.block_structure_of(read_coloring(args.input))
    if args.q is None or args.n_min is None:
        raise PreconditionError("profile needs --input or both --q and --n-min")
    return col.build(args.q, args.n_min)


def cmd_profile(args: argparse.Namespace) -> int:
    C = _profile_source(args)
    M_r, M_b = col.matchings(C)
    M = M_r if args.matching == "r" else M_b
    prof = col.density_profile(C, M, col.reordering(C))
    out = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["k", "density_num", "density_den", "density"])
        for bp in prof.breakpoints:
            w.writerow([bp.k, bp.value.numerator, bp.value.denominator, f"{float(bp.value):.12f}"])
    finally:
        _close(out)
    if prof.breakpoints:
        best = prof.max_breakpoint()
        print(
            f"n={C.n} breakpoints={len(prof.breakpoints)} max={float(best.value):.9f} at k={best.k}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    workers = args.workers if args.workers is not None else int(os.environ.get(WORKERS_ENV, "1"))
    rows = col.sweep_q(args.q, args.n_min, workers=workers)
    out = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(col.SWEEP_HEADER)
        for r in rows:
            w.writerow(r.as_csv_row())
    finally:
        _close(out)
    return EXIT_OK


# -- extract ------------------------------------------------------------------------------


def _default_k(n: int, gamma: Fraction) -> int:
    want = math.ceil(32 / gamma)
    k = min(n, want)
    return max(8, k - k % 8) if n >= 8 else max(1, n)


def cmd_extract(args: argparse.Namespace) -> int:
    G = read_coloring(args.input)
    if args.check:
        cert = ex.read_certificate(args.check)
        reason = ex.verify_certificate(G, cert)
        if reason:
            raise PreconditionError(f"certificate rejected: {reason}")
        print(f"certificate valid: color {cert.forest.color.letter} horizon {cert.horizon} density {_frac(cert.density)}")
        return EXIT_OK
    if args.t is not None:
        cert = ex.extract_forest(G, args.t)
        summary = {"t": args.t, "ell": cert.ell, "branch": cert.branch, "clipped": cert.clipped}
    else:
        gamma = Fraction(args.gamma)
        k = args.k if args.k is not None else _default_k(G.n, gamma)
        res = ex.simple_forest_pipeline(G, k, gamma)
        cert = ex.ForestCertificate(res.forest, res.horizon, res.density, res.branch, t=res.t)
        summary = {
            "k": k,
            "N": res.N,
            "t": res.t,
            "branch": res.branch,
            "swapped": res.swapped,
            "guaranteed": res.guaranteed,
            "target": float(res.target),
            "notes": list(res.notes),
        }
    text = ex.format_certificate(cert)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary.update(horizon=cert.horizon, density=_frac(cert.density), density_float=float(cert.density))
    print(json.dumps(summary, sort_keys=True), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


# -- sequence ---------------------------------------------------------------------------------


def cmd_sequence(args: argparse.Namespace) -> int:
    values = seq.read_sequence(args.input)
    a = seq.OscillationSequence(values)
    osc = seq.oscillation(a)
    part = seq.interval_partition(a)
    rows: list[tuple[str, str]] = [
        ("length", str(len(a))),
        ("T", str(osc.T)),
        ("witness_i", str(osc.i)),
        ("witness_j", str(osc.j)),
        ("intervals", " ".join(f"{s}-{e}" for s, e in part.intervals)),
        ("gaps", " ".join(str(g) for g in part.gaps)),
    ]
    for t in args.t or []:
        tv = Fraction(t)
        rows.append((f"ell_plus({t})", str(seq.ell_plus(a, tv))))
        rows.append((f"ell_minus({t})", str(seq.ell_minus(a, tv))))
    if args.k is not None:
        gamma = Fraction(args.gamma)
        th = seq.find_oscillation_t(a, Fraction(args.k), gamma, args.N)
        rows += [
            ("good_t", str(th.t)),
            ("good_t_int", str(th.t_int)),
            ("ell_plus", str(th.lplus)),
            ("ell_minus", str(th.lminus)),
            ("ratio_achieved", f"{float((th.lplus + th.lminus) / th.t):.9f}"),
            ("ratio_required", f"{float(th.ratio):.9f}"),
        ]
    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
    else:
        width = max(len(k) for k, _ in rows)
        for k, v in rows:
            print(f"{k:<{width}}  {v}")
    return EXIT_OK


# -- oracle ------------------------------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace) -> int:
    records: list[dict] = []
    ok = True
    if args.check == "gg":
        for n in args.n:
            r = orc.gg_verify(n, args.mode, samples=args.samples, seed=args.seed)
            records.append(json.loads(r.to_json()))
            ok &= r.holds
    elif args.check == "faithful":
        for q in args.q:
            for n in args.n:
                C = col.build(q, n)
                r = orc.faithfulness_check(C, args.cap or orc.DEFAULT_FAITHFUL_CAP, n=n, extendable_only=not args.all_paths)
                records.append(json.loads(r.to_json()))
                # paths without an endpoint of their colour are reported, not enforced
                ok &= r.holds or args.all_paths
    else:
        if not args.input:
            raise PreconditionError("oracle longest needs --input")
        G = read_coloring(args.input)
        for c in (Color.RED, Color.BLUE):
            length, path = orc.longest_mono_path(G, c, args.cap or orc.DEFAULT_PATH_CAP)
            records.append({"check": "longest", "color": c.letter, "n": G.n, "length": length, "path": list(path)})
    for rec in records:
        print(json.dumps(rec, sort_keys=True))
    if not ok:
        raise InvariantViolation("an oracle check failed")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pathdensity", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="write a geometric colouring prefix")
    c.add_argument("q", help="growth rate: integer, a/b, or 'silver'")
    c.add_argument("n_min", type=int, help="minimum number of vertices (whole blocks)")
    c.add_argument("out", help="output colouring file")
    c.set_defaults(func=cmd_construct)

    pr = sub.add_parser("profile", help="density breakpoints of a canonical matching as CSV")
    pr.add_argument("--q")
    pr.add_argument("--n-min", type=int)
    pr.add_argument("--input", help="colouring file with geometric block structure")
    pr.add_argument("--matching", choices=("r", "b"), default="r")
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_profile)

    sw = sub.add_parser("sweep", help="closed-form bound against the measured profile maximum")
    sw.add_argument("--q", nargs="+", required=True)
    sw.add_argument("--n-min", type=int, required=True)
    sw.add_argument("--workers", type=int)
    sw.add_argument("--out")
    sw.set_defaults(func=cmd_sweep)

    e = sub.add_parser("extract", help="dense monochromatic simple forest with certificate")
    e.add_argument("--input", required=True)
    e.add_argument("--gamma", default="1/10")
    e.add_argument("--k", type=int)
    e.add_argument("--t", type=int, help="skip the pipeline and extract for this threshold")
    e.add_argument("--out")
    e.add_argument("--check", metavar="CERT", help="validate an existing certificate instead")
    e.set_defaults(func=cmd_extract)

    s = sub.add_parser("sequence", help="oscillation report for a sequence file")
    s.add_argument("--input", required=True)
    s.add_argument("--t", nargs="*")
    s.add_argument("--k")
    s.add_argument("--gamma", default="1/2")
    s.add_argument("--N", type=int, help="override the lemma's N")
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_sequence)

    o = sub.add_parser("oracle", help="brute-force checks, JSON lines")
    o.add_argument("check", choices=("gg", "faithful", "longest"))
    o.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    o.add_argument("--n", type=int, nargs="+", default=[6])
    o.add_argument("--q", nargs="+", default=["3/2", "2"])
    o.add_argument("--cap", type=int, help="vertex cap (18 for faithful, 20 for longest)")
    o.add_argument("--seed", type=int)
    o.add_argument("--samples", type=int, default=1000)
    o.add_argument("--input")
    o.add_argument("--all-paths", action="store_true", help="faithful: include paths with no endpoint of their colour")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"alarm: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (PreconditionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PathDensityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
