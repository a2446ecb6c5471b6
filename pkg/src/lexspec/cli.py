"""Command-line front-end.

Graph arguments accept a file path (read with ``--format``), ``g6:<code>``
for an inline graph6 string, or a family spec such as ``star:2``,
``cycle:4`` or ``complete_bipartite:2,2``.

Exit codes: 0 success, 1 a verification or theory check failed, 2 usage or
input error, 3 size cap or numerical failure.

Polynomials are printed ascending (constant term first) in JSON and in the
usual highest-power-first form in tables.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import tracemalloc

import numpy as np

from . import poly
from .errors import GraphParseError, LexSpecError, NumericalError, SizeCapError, TheoryViolation
from .graph import (Graph, is_regular, lex_power_explicit, oracle_cap, parse_edge_list, parse_family,
                    parse_graph6, random_graph)
from .lexjoin import corollary_check, lex_spectrum
from .lexpower import power_char_poly, power_main_poly, power_spectrum
from .oracle import compare_multisets, oracle_power_spectrum, oracle_spectrum
from .spectral import GroupingConfig, Spectrum, eigen_sym, main_spectrum

DEFAULT_VERIFY_TOL = 1e-7
BENCH_ORACLE_CAP = 2500  # eigh on more vertices than this is too slow to bench interactively

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class Failure(Exception):
    """A verification did not pass; the payload has already been printed."""


def load_graph(spec: str, fmt: str = "edgelist") -> Graph:
    if spec.startswith("g6:"):
        return parse_graph6(spec[3:])
    if os.path.exists(spec):
        with open(spec) as fh:
            text = fh.read()
        G = parse_graph6(text) if fmt == "graph6" else parse_edge_list(text)
        return Graph(G.adjacency, label=os.path.basename(spec))
    try:
        return parse_family(spec)
    except ValueError as exc:
        raise GraphParseError(f"{spec!r} is neither a file, a g6: string nor a family spec ({exc})") from None


def _config(args) -> GroupingConfig:
    return GroupingConfig(group_tol=args.tol) if args.tol else GroupingConfig()


def _verify_tol(args) -> float:
    return args.tol or DEFAULT_VERIFY_TOL


def _graph_arg(args, name="graph"):
    value = getattr(args, name, None) or args.input
    if value is None:
        raise GraphParseError(f"missing graph argument ({name} or --input)")
    return load_graph(value, args.format)


# -- printing ----------------------------------------------------------------

def _emit(args, payload: dict, table: str):
    if args.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(table)


def spectrum_table(spec: Spectrum) -> str:
    lines = [f"{'value':>20}  {'mult':>6}  main"]
    for e in reversed(spec.entries):
        v = 0.0 if abs(e.value) < 1e-12 else e.value
        lines.append(f"{v:>20.12g}  {e.multiplicity:>6}  {e.main}")
    lines.append(f"order {spec.order}, {len(spec.entries)} distinct")
    return "\n".join(lines)


def diff_table(diff) -> str:
    status = "PASS" if diff.passed else "FAIL"
    out = f"verify: {status}  max gap {diff.max_gap:.3g} (tol {diff.tol:g}), {len(diff.matched)} paired"
    if diff.unmatched_left or diff.unmatched_right:
        out += f", unmatched {len(diff.unmatched_left)} / {len(diff.unmatched_right)}"
    if diff.close_classes:
        out += "\nwarning: classes closer than 2*tol, pairing may be ambiguous"
    return out


# -- commands ----------------------------------------------------------------

def cmd_spectrum(args):
    G = _graph_arg(args)
    spec = main_spectrum(G, _config(args))
    _emit(args, spec.to_dict(), spectrum_table(spec))


def cmd_main_poly(args):
    G = _graph_arg(args)
    mp = power_main_poly(G, args.power)
    payload = dict(mp.to_dict(), ascending=mp.ascending(), text=str(mp))
    _emit(args, payload, f"m(x) = {mp}   (s = {mp.s})")


def _check_diff(args, diff, payload, lines):
    payload["verify"] = diff.to_dict()
    lines.append(diff_table(diff))
    return diff.passed


def _oracle_or_skip(fn, payload, lines):
    try:
        return fn()
    except SizeCapError as exc:
        payload["verify"] = {"pass": False, "skipped": str(exc)}
        lines.append(f"verify: SKIPPED ({exc})")
        return None


def cmd_lexprod(args):
    H, G = load_graph(args.H, args.format), load_graph(args.G, args.format)
    cfg = _config(args)
    spec = lex_spectrum(H, G, cfg)
    payload, lines = {"spectrum": spec.to_dict()}, [spectrum_table(spec)]
    ok = True
    if args.verify:
        ref = _oracle_or_skip(lambda: oracle_spectrum(H, G, cfg, cap=args.cap), payload, lines)
        ok = ref is not None and _check_diff(args, compare_multisets(spec, ref, _verify_tol(args)), payload, lines)
    _emit(args, payload, "\n".join(lines))
    if not ok:
        raise Failure()


def cmd_lexpower(args):
    G = _graph_arg(args)
    cfg = _config(args)
    if args.char_poly:
        phi = power_char_poly(G, args.k)
        _emit(args, {"k": args.k, "char_poly": phi}, f"phi(x) = {poly.format_poly(phi)}")
        return
    result = power_spectrum(G, args.k, cfg, method=args.method)
    payload = result.to_dict()
    lines = [f"k = {args.k}, order {result.spectrum.order}, route {result.method}",
             "s per level: " + ", ".join(str(lv.s) for lv in result.levels),
             spectrum_table(result.spectrum)]
    ok = True
    if args.verify:
        ref = _oracle_or_skip(lambda: oracle_power_spectrum(G, args.k, cfg, cap=args.cap), payload, lines)
        ok = ref is not None and _check_diff(
            args, compare_multisets(result.spectrum, ref, _verify_tol(args)), payload, lines)
    _emit(args, payload, "\n".join(lines))
    if not ok:
        raise Failure()


def cmd_corollary(args):
    H, G = load_graph(args.H, args.format), load_graph(args.G, args.format)
    rep = corollary_check(H, G, _config(args))
    zero = "absent" if rep.zero_main is None else ("main" if rep.zero_main else "non-main")
    lines = [f"nullity of H: {rep.eta}, 0 is {zero} in H"]
    for m in rep.mains:
        lines.append(
            f"  mu = {m.mu:.10g}: mult in W~ {m.mult_in_W}, residual {m.max_residual:.2e}, "
            f"v.start {m.v_dot_start:.2e}, {'non-main' if m.nonmain_in_W else 'main'} in W~"
        )
    lines.append("PASS" if rep.passed else "FAIL: " + "; ".join(rep.failures))
    _emit(args, rep.to_dict(), "\n".join(lines))
    if not rep.passed:
        raise Failure()


def _measure(fn):
    tracemalloc.start()
    t0 = time.perf_counter()
    try:
        out = fn()
    finally:
        elapsed = time.perf_counter() - t0
        peak = tracemalloc.get_traced_memory()[1]
        tracemalloc.stop()
    return out, elapsed, peak


def cmd_bench(args):
    G = _graph_arg(args)
    cfg = _config(args)
    cap = args.cap if args.cap is not None else BENCH_ORACLE_CAP
    k_reg = is_regular(G)
    rows, ok = [], True
    for k in range(1, args.k_max + 1):
        res, t_s, m_s = _measure(lambda: power_spectrum(G, k, cfg))
        row = {"k": k, "order": G.order ** k, "route": res.method, "structured_s": t_s,
               "structured_peak_bytes": m_s, "oracle_s": None, "oracle_peak_bytes": None, "oracle": "refused"}
        try:
            ref, t_o, m_o = _measure(lambda: eigen_sym(lex_power_explicit(G, k, cap=cap), cfg))
            diff = compare_multisets(res.spectrum, ref, _verify_tol(args))
            row.update(oracle_s=t_o, oracle_peak_bytes=m_o, oracle="pass" if diff.passed else "FAIL")
            ok &= diff.passed
        except SizeCapError:
            pass
        rows.append(row)
    payload = {"graph": G.label, "regular_degree": k_reg, "rows": rows}
    lines = []
    if k_reg is not None:
        lines.append(f"regular graph (degree {k_reg}): s = 1 at every level, W~ = n A + k I")
    lines.append(f"{'k':>3} {'order':>8} {'route':>7} {'struct s':>10} {'struct MB':>10} "
                 f"{'oracle s':>10} {'oracle MB':>10}  oracle")
    for r in rows:
        o_t = f"{r['oracle_s']:.4f}" if r["oracle_s"] is not None else "-"
        o_m = f"{r['oracle_peak_bytes'] / 2**20:.2f}" if r["oracle_peak_bytes"] is not None else "-"
        lines.append(f"{r['k']:>3} {r['order']:>8} {r['route']:>7} {r['structured_s']:>10.4f} "
                     f"{r['structured_peak_bytes'] / 2**20:>10.2f} {o_t:>10} {o_m:>10}  {r['oracle']}")
    _emit(args, payload, "\n".join(lines))
    if not ok:
        raise Failure()


def cmd_verify(args):
    rng = np.random.default_rng(args.seed)
    tol = _verify_tol(args)
    cfg = _config(args)
    failures, worst = [], 0.0
    for i in range(args.count):
        H = random_graph(int(rng.integers(1, args.max_order + 1)), rng)
        G = random_graph(int(rng.integers(1, args.max_order + 1)), rng)
        try:
            diff = compare_multisets(lex_spectrum(H, G, cfg), oracle_spectrum(H, G, cfg, cap=args.cap), tol)
        except LexSpecError as exc:
            failures.append({"case": i, "error": str(exc)})
            continue
        worst = max(worst, diff.max_gap)
        if not diff.passed:
            failures.append(dict(diff.to_dict(), case=i))
    payload = {"seed": args.seed, "count": args.count, "tol": tol, "max_gap": worst,
               "failures": failures, "pass": not failures}
    table = (f"{args.count} random pairs (seed {args.seed}): {args.count - len(failures)} pass, "
             f"{len(failures)} fail, max gap {worst:.3g} (tol {tol:g})")
    _emit(args, payload, table)
    if failures:
        raise Failure()


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="graph file (alternative to the positional graph)")
    common.add_argument("--format", choices=("edgelist", "graph6"), default="edgelist")
    common.add_argument("--tol", type=float, default=None,
                        help="grouping tolerance and --verify tolerance (default 1e-7 for verify)")
    common.add_argument("--output", choices=("json", "table"), default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=None,
                        help=f"oracle vertex cap (default LEXSPEC_CAP or {oracle_cap()})")

    ap = argparse.ArgumentParser(prog="lexspec", description="Spectra of lexicographic products and powers.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum with main flags")
    p.add_argument("graph", nargs="?")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("main-poly", parents=[common], help="main characteristic polynomial")
    p.add_argument("graph", nargs="?")
    p.add_argument("--power", type=int, default=1, help="use G^k instead of G")
    p.set_defaults(func=cmd_main_poly)

    p = sub.add_parser("lexprod", parents=[common], help="spectrum of H[G]")
    p.add_argument("H")
    p.add_argument("G")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_lexprod)

    p = sub.add_parser("lexpower", parents=[common], help="spectrum or char. polynomial of G^k")
    p.add_argument("graph", nargs="?")
    p.add_argument("k", type=int)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--char-poly", action="store_true")
    p.add_argument("--method", choices=("auto", "walk", "angles"), default="auto")
    p.set_defaults(func=cmd_lexpower)

    p = sub.add_parser("corollary", parents=[common], help="nullity / left-eigenvector check for H[G]")
    p.add_argument("H")
    p.add_argument("G")
    p.set_defaults(func=cmd_corollary)

    p = sub.add_parser("bench", parents=[common], help="structured vs explicit timings for G^1..G^k_max")
    p.add_argument("graph", nargs="?")
    p.add_argument("k_max", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", parents=[common], help="seeded random sweep against the oracle")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--max-order", type=int, default=6)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except Failure:
        return EXIT_FAIL
    except BrokenPipeError:
        # output piped into e.g. head; silence the flush at interpreter exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except TheoryViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (GraphParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SizeCapError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
