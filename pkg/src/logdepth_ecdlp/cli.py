"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from math import ceil, log2
from pathlib import Path

import numpy as np

from . import verify as V
from .circuit import CSV_HEADER, Circuit, ParseError, ResourceReport, parse, serialize
from .edwards import (AffinePoint, CurveSpec, enumerate_points, find_structural_curve, find_toy_curve,
                      order_of, scalar_mul)
from .field import FieldSpec
from .sim import SHOR_MAX_BITS, postprocess, shor_distribution, success_probability
from .synth import (SynthConfig, aqft_circuit, double_scalar_tree, double_scalar_tree_report,
                    itoh_tsuji_circuit, mastrovito_mul, point_add_circuit, proj_to_affine,
                    seq_double_add_l2r, seq_double_add_r2l, shor_dlog_circuit, stage_reports)

KINDS = ("mul", "inv", "add", "dsa-r2l", "dsa-l2r", "dsa-tree", "p2a", "aqft", "shor")
POINT_KINDS = {"add", "dsa-r2l", "dsa-l2r", "dsa-tree", "p2a", "shor"}
TOY_MAX_N = 8
SHOR_DEMO_MAX_N = 4


class UsageError(Exception):
    pass


def _hex(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a hex integer like 0x1b, got {text!r}") from None


# ---------------------------------------------------------------------------
# instance setup
# ---------------------------------------------------------------------------

def _field(args) -> FieldSpec:
    if args.n is None or args.n < 2:
        raise UsageError("--n must be an integer >= 2")
    try:
        return FieldSpec(args.n, args.poly) if args.poly is not None else FieldSpec.default(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _planted_r(q: int, seed: int) -> int:
    return int(np.random.default_rng(seed).integers(1, q)) if q > 1 else 1


def _instance(args, f: FieldSpec) -> tuple[CurveSpec, AffinePoint, AffinePoint]:
    """Curve and points ``P``, ``Q`` chosen from the flags, deterministically."""
    explicit = args.d1 is not None or args.d2 is not None
    if not explicit and args.kind == "shor":
        args.curve = "auto"  # the full pipeline only makes sense on a searched curve
    if not explicit and args.curve != "auto":
        raise UsageError("point-level kinds need --curve auto or --d1/--d2")
    if explicit:
        if args.d1 is None or args.d2 is None:
            raise UsageError("--d1 and --d2 go together")
        try:
            curve = CurveSpec.from_ints(f, args.d1, args.d2)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if f.n > TOY_MAX_N:
            _, P, Q = find_structural_curve(f, curve)
            return curve, P, Q
        pts = enumerate_points(curve)
        P = max(pts, key=lambda p: (order_of(curve, p), [-v for v in p.xy]))
    elif f.n > TOY_MAX_N:
        return find_structural_curve(f)
    else:
        curve, P, _ = find_toy_curve(f)
    q = order_of(curve, P)
    return curve, P, scalar_mul(curve, _planted_r(q, args.seed), P)


def _build(kind: str, args) -> tuple[Circuit, list[ResourceReport]]:
    if kind == "aqft":
        if args.n is None or not 1 <= args.n:
            raise UsageError("--n must be >= 1")
        c = aqft_circuit(args.n, args.epsilon)
        return c, [c.report(kind, args.n)]
    f = _field(args)
    n = f.n
    if kind in POINT_KINDS:
        curve, P, Q = _instance(args, f)
        cfg = SynthConfig.for_curve(curve, uncompute=args.uncompute)
    else:
        cfg = SynthConfig(f, uncompute=args.uncompute)
    if kind == "shor":
        c = shor_dlog_circuit(cfg, P, Q)
        return c, stage_reports(c) + [c.meta["uncompute"], c.report("shor", n)]
    build = {
        "mul": lambda: mastrovito_mul(cfg),
        "inv": lambda: itoh_tsuji_circuit(cfg),
        "add": lambda: point_add_circuit(cfg),
        "p2a": lambda: proj_to_affine(cfg),
        "dsa-r2l": lambda: seq_double_add_r2l(cfg, P, Q),
        "dsa-l2r": lambda: seq_double_add_l2r(cfg, P, Q),
        "dsa-tree": lambda: double_scalar_tree(cfg, P, Q),
    }[kind]
    c = build()
    return c, [c.report(kind, n)]


def _csv(rows: list[ResourceReport]) -> str:
    return "\n".join([CSV_HEADER] + [r.csv_row() for r in rows]) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_synth(args) -> int:
    c, rows = _build(args.kind, args)
    out = Path(args.out or f"{args.kind}_n{args.n}.qc")
    out.write_text(serialize(c))
    csv_path = out.with_suffix(".csv")
    csv_path.write_text(_csv(rows))
    sys.stdout.write(_csv(rows))
    print(f"# wrote {out} and {csv_path}")
    return 0


def cmd_export(args) -> int:
    c, _ = _build(args.kind, args)
    text = serialize(c)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _estimate_row(kind: str, n: int, uncompute: str) -> ResourceReport:
    f = FieldSpec.default(n)
    if kind == "mul":
        return mastrovito_mul(SynthConfig(f, uncompute=uncompute)).report(kind, n)
    if kind == "inv":
        return itoh_tsuji_circuit(SynthConfig(f, uncompute=uncompute)).report(kind, n)
    if kind == "aqft":
        return aqft_circuit(n).report(kind, n)
    curve, P, Q = find_structural_curve(f)
    cfg = SynthConfig.for_curve(curve, uncompute=uncompute)
    if kind == "add":
        return point_add_circuit(cfg).report(kind, n)
    if kind == "p2a":
        return proj_to_affine(cfg).report(kind, n)
    if kind == "dsa-tree":
        return double_scalar_tree_report(cfg, P, Q)[0]
    raise UsageError(f"estimate supports mul, inv, add, p2a, dsa-tree and aqft, not {kind}")


def fit_log(rows: list[ResourceReport], power: int) -> tuple[float, float]:
    """Least-squares ``depth ~ C1 * ceil(log2 n)^power + C2``."""
    x = np.array([ceil(log2(r.n)) ** power for r in rows], float)
    y = np.array([r.depth for r in rows], float)
    c1, c2 = np.polyfit(x, y, 1)
    return float(c1), float(c2)


def cmd_estimate(args) -> int:
    ns = args.n_list
    if ns != sorted(ns) or len(set(ns)) != len(ns) or min(ns) < 2:
        raise UsageError("--n values must be distinct, ascending and >= 2")
    lines = [CSV_HEADER + ",depth_diff"]
    rows: list[ResourceReport] = []
    fits = []
    for kind in args.kind:
        sel = [_estimate_row(kind, n, args.uncompute) for n in ns]
        prev = None
        for r in sel:
            diff = "" if prev is None else str(r.depth - prev)
            lines.append(f"{r.csv_row()},{diff}")
            prev = r.depth
        rows += sel
        if len(sel) > 1:
            power = 1 if kind in ("mul", "add", "p2a") else 2
            c1, c2 = fit_log(sel, power)
            fits.append(f"# fit {kind}: depth ~ {c1:.3f} * ceil(log2 n)^{power} + {c2:.3f}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    for line in fits:
        print(line)
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        if args.plot:
            from .plotting import plot_scaling
            print(f"# figure {plot_scaling(rows, out.with_suffix('.png'))}")
    elif args.plot:
        raise UsageError("--plot needs --out")
    return 0


def cmd_verify(args) -> int:
    rng_seed = args.seed
    if args.circuit:
        if not args.kind:
            raise UsageError("--circuit needs --kind")
        try:
            c = parse(Path(args.circuit).read_text())
        except (OSError, ParseError) as exc:
            raise UsageError(f"cannot load {args.circuit}: {exc}") from None
        try:
            results = [V.verify_file(c, args.kind, np.random.default_rng(rng_seed))]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if args.scope is None:
            raise UsageError("verify needs a scope (field, curve, circuits, all) or --circuit")
        if args.n_max < 2:
            raise UsageError("--n-max must be >= 2")
        results = V.run_suite(args.scope, args.n_max, rng_seed)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"# {len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_shor_demo(args) -> int:
    if args.n is None or not 2 <= args.n <= SHOR_DEMO_MAX_N:
        raise UsageError(f"shor-demo needs 2 <= --n <= {SHOR_DEMO_MAX_N}")
    f = FieldSpec.default(args.n)
    curve, P, q = find_toy_curve(f)
    r = args.r if args.r is not None else _planted_r(q, args.seed)
    if not 1 <= r <= q:
        raise UsageError(f"--r must lie in 1..{q}")
    Q = scalar_mul(curve, r, P)
    m = args.n + 1
    if m > SHOR_MAX_BITS:
        raise UsageError(f"register size {m} is beyond the exact-distribution cap {SHOR_MAX_BITS}")
    dist = shor_distribution(curve, P, Q, m)
    p_star = success_probability(dist, q, curve, P, Q)
    print(f"curve: {curve}")
    print(f"P = {P.xy}, order q = {q}, planted r = {r}, Q = {Q.xy}")
    print("top outcomes (u, v, probability, candidate r):")
    for u, v, p in dist.top(8):
        cand = postprocess((u, v), q, m, curve, P, Q)
        print(f"  {u:4d} {v:4d}  {p:.6f}  {'-' if cand is None else cand}")
    recovered = None
    for u, v, _ in dist.top(2 ** (2 * m)):
        recovered = postprocess((u, v), q, m, curve, P, Q)
        if recovered is not None:
            break
    print(f"success probability p* = {p_star:.6f}")
    print(f"recovered r = {recovered}")
    if recovered is None or scalar_mul(curve, recovered, P) != Q or (recovered - r) % q:
        print("FAIL: recovered r differs from the planted r")
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _instance_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, help="field degree (qubits per register for aqft)")
    p.add_argument("--poly", type=_hex, help="modulus as hex, e.g. 0x11b")
    p.add_argument("--curve", choices=["auto"], help="pick a curve deterministically")
    p.add_argument("--d1", type=_hex, help="curve parameter d1 as hex")
    p.add_argument("--d2", type=_hex, help="curve parameter d2 as hex")
    p.add_argument("--uncompute", choices=["clean", "garbage"], default="clean")
    p.add_argument("--epsilon", type=float, default=None, help="aqft target error")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logdepth-ecdlp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a circuit; write it and its resource report")
    p.add_argument("kind", choices=KINDS)
    _instance_flags(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("export", help="write a circuit in text form (stdout unless --out)")
    p.add_argument("kind", choices=KINDS)
    _instance_flags(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("estimate", help="resource-scaling table as CSV")
    p.add_argument("--kind", action="append", choices=["mul", "inv", "add", "p2a", "dsa-tree", "aqft"])
    p.add_argument("--n", dest="n_list", type=int, nargs="+", default=[4, 8, 16, 32, 64, 128, 256])
    p.add_argument("--uncompute", choices=["clean", "garbage"], default="garbage")
    p.add_argument("--out", help="CSV path")
    p.add_argument("--plot", action="store_true", help="also write a PNG next to the CSV")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="oracle-equivalence sweeps")
    p.add_argument("scope", nargs="?", choices=["field", "curve", "circuits", "all"])
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--circuit", help="check an exported circuit file instead")
    p.add_argument("--kind", choices=["mul", "inv", "add", "p2a"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("shor-demo", help="exact discrete-log distribution on a toy curve")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--r", type=int, help="planted discrete log (default: drawn from --seed)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_shor_demo)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "estimate" and not args.kind:
        args.kind = ["mul"]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{ap.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
