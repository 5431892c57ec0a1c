"""Command-line entry point: deterministic, file-based JSON I/O.

Exit codes: 0 success, 2 validation error, 3 resource cap exceeded,
4 verification failure (a spectral or structural check came back false).
Set GU3_CACHE_DIR to memoize gate sets and group closures between runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cayley import DENSE_LIMIT, build_cayley, ramanujan_check
from .covering import covering_stats
from .errors import NotInLatticeError, PrecisionExceededError, ResourceCapError
from .finitefield import Closure, close_under_products, predict_group, reduce_gate_set, det_class_test
from .gatesets import free_product_check, full_gate_set, split_gate_set, super_gate_set
from .matrices import SimilitudeMatrix
from .navigation import evaluate_word, navigate
from .spectral import stats_table

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_VERIFICATION = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_VALIDATION):
        super().__init__(message)
        self.code = code


def _gate_set(p: int, variant: str):
    if variant == "super":
        return super_gate_set()
    if variant not in ("full", "split"):
        raise CliError(f"unknown variant {variant!r}")
    builder = full_gate_set if variant == "full" else split_gate_set
    cache = _cache_dir()
    if cache is None:
        return builder(p)
    f = cache / f"gateset_p{p}_{variant}.json"
    if f.exists():
        from .gatesets import _build_gate_set  # revalidates counts and distinctness

        c = p * p + p + 1
        expected = c if variant == "split" else (2 * c if p % 4 == 1 else p**4 + p)
        lifts = [SimilitudeMatrix.from_json(d) for d in json.loads(f.read_text())]
        return _build_gate_set(p, variant, lifts, expected)
    gs = builder(p)
    cache.mkdir(parents=True, exist_ok=True)
    f.write_text(json.dumps([m.to_json() for m in gs.lifts], sort_keys=True))
    return gs


def _write_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _manifest(args: argparse.Namespace, **extra) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func" and v is not None}
    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "config": config, **extra}


def _cache_dir() -> Path | None:
    d = os.environ.get("GU3_CACHE_DIR")
    return Path(d) if d else None


def _cached_closure(p: int, q: int, variant: str, cap: int) -> Closure:
    gens = reduce_gate_set(_gate_set(p, variant), q)
    cache = _cache_dir()
    tag = f"closure_p{p}_q{q}_{variant}"
    if cache is not None:
        f = cache / f"{tag}.npz"
        if f.exists():
            data = np.load(f)
            return Closure(q=q, quadratic=bool(data["quadratic"]), codes=data["codes"], gens=tuple(gens))
    clo = close_under_products(gens, cap=cap)
    if cache is not None:
        cache.mkdir(parents=True, exist_ok=True)
        np.savez_compressed(cache / f"{tag}.npz", codes=clo.codes, quadratic=clo.quadratic)
    return clo


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    gs = _gate_set(args.p, args.variant)
    payload = _manifest(
        args,
        p=gs.p,
        p_prime=gs.similitude if gs.variant != "super" else None,
        variant=gs.variant,
        count=len(gs),
        elements=[m.to_json() for m in gs.lifts],
    )
    _write_json(payload, args.out)
    return EXIT_OK


def cmd_sizes(args) -> int:
    rows = stats_table(args.p, args.lmax, args.variant)
    print(f"{'l':>3} {'lambda_triv':>16} {'lambda_ram':>24}")
    for s in rows:
        print(f"{s.l:>3} {s.lambda_triv:>16} {str(s.lambda_ram):>24}")
    if args.out:
        _write_json(_manifest(args, rows=[s.to_json() for s in rows]), args.out)
    return EXIT_OK


def cmd_identify(args) -> int:
    pred = predict_group(args.p, args.q)
    gens = reduce_gate_set(full_gate_set(args.p), args.q)
    cubes = det_class_test(gens)
    agree = cubes == (not pred.tri_partite)
    order = pred.order()
    bfs_order = None
    if order <= args.cap:
        bfs_order = _cached_closure(args.p, args.q, "full", args.cap).order
    print(f"G_{{{args.p},{args.q}}} = {pred.pretty}  tri_partite={pred.tri_partite}")
    print(f"det-class test (all cubes): {cubes}  agrees with prediction: {agree}")
    print(f"predicted order: {order}" + (f"  BFS order: {bfs_order}" if bfs_order is not None else "  (BFS skipped: above cap)"))
    if args.out:
        _write_json(
            _manifest(
                args,
                label=pred.label,
                pretty=pred.pretty,
                tri_partite=pred.tri_partite,
                cubic_symbol=pred.symbol,
                det_class_all_cubes=cubes,
                agreement=agree,
                predicted_order=order,
                bfs_order=bfs_order,
            ),
            args.out,
        )
    return EXIT_OK if agree and (bfs_order in (None, order)) else EXIT_VERIFICATION


def cmd_spectrum(args) -> int:
    pred = predict_group(args.p, args.q)
    clo = _cached_closure(args.p, args.q, "full", args.cap)
    gens = reduce_gate_set(_gate_set(args.p, args.variant), args.q)
    graph = build_cayley(clo, gens)
    if args.graph_out:
        with open(args.graph_out, "w") as fh:
            fh.write(f"# vertices {graph.n} generators {graph.degree}\n")
            for line in graph.edge_lines():
                fh.write(line + "\n")
    if args.vertex_out:
        with open(args.vertex_out, "w") as fh:
            fh.write(f"# vertex canonical codes, base-{graph.q} digits of the reduced matrix\n")
            for i, code in enumerate(graph.codes):
                fh.write(f"{i} {int(code)}\n")
    mode = "split" if args.p % 4 == 1 else "inert"
    if args.mode == "dense" and graph.n > DENSE_LIMIT:
        raise CliError(
            f"dense mode needs <= {DENSE_LIMIT} vertices, got {graph.n}; use --mode extremal",
            EXIT_RESOURCE,
        )
    report = ramanujan_check(
        graph,
        args.p,
        mode,
        args.tol,
        tri_partite=pred.tri_partite,
        solver=args.mode,
        dense_method=args.dense_method,
        k=args.k,
        seed=args.seed,
    )
    payload = _manifest(args, group=pred.pretty, report=report.to_json())
    _write_json(payload, args.out)
    print(
        f"{pred.pretty}: n={graph.n} degree={graph.degree} mode={report.mode} "
        f"method={report.method} verdict={'pass' if report.verdict else 'FAIL'}",
        file=sys.stderr,
    )
    return EXIT_OK if report.verdict else EXIT_VERIFICATION


def cmd_navigate(args) -> int:
    gs = _gate_set(args.p, args.variant)
    raw = Path(args.infile).read_text() if args.infile else sys.stdin.read()
    try:
        mat = SimilitudeMatrix.from_json(json.loads(raw))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"bad matrix JSON: {exc}") from exc
    if mat.p != gs.p:
        raise CliError(f"matrix p={mat.p} does not match --p {gs.p}")
    elem = mat.canonicalize()
    word = navigate(elem, gs)
    check = evaluate_word(word, gs)
    assert check == elem
    payload = _manifest(
        args,
        length=len(word),
        word=word.to_json(),
        evaluation=check.to_json(),
    )
    _write_json(payload, args.out)
    return EXIT_OK


def cmd_cover(args) -> int:
    gs = _gate_set(args.p, args.variant)
    report = covering_stats(gs, args.lmax, args.samples, args.seed, cap=args.cap)
    payload = _manifest(args, report=report.to_json())
    _write_json(payload, args.out)
    for row in report.summary():
        print(
            f"l<={row['l']}: net={row['net_size']:>8} mean={row['mean']:.6f} max={row['max']:.6f}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_supergates(args) -> int:
    gs = super_gate_set()
    sigma, tau = gs.lifts
    sigma3 = sigma @ sigma @ sigma
    tau3 = tau @ tau @ tau
    fc = free_product_check(args.syllables)
    ok = sigma3.is_scalar() and tau3.is_scalar() and fc["ok"]
    payload = _manifest(
        args,
        sigma=sigma.to_json(),
        tau=tau.to_json(),
        sigma_cubed_scalar=sigma3.is_scalar(),
        tau_cubed_scalar=tau3.is_scalar(),
        tau_cubed=tau3.entries[0][0].__str__(),
        free_product=fc,
        ok=ok,
    )
    _write_json(payload, args.out)
    return EXIT_OK if ok else EXIT_VERIFICATION


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gu3gates",
        description="Golden gate sets for PU(3): generators, spectra, navigation, covering.",
    )
    ap.add_argument("--threads", type=int, default=None, help="cap BLAS/LAPACK threads")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(func=fn)
        return sp

    sp = add("gen", cmd_gen, help="enumerate a gate set")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--variant", choices=("full", "split", "super"), default="full")
    sp.add_argument("--out")

    sp = add("sizes", cmd_sizes, help="sphere sizes and tempered bounds")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--lmax", type=int, default=6)
    sp.add_argument("--variant", choices=("full", "split"), default="full")
    sp.add_argument("--out")

    sp = add("identify", cmd_identify, help="identify the congruence quotient group")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--cap", type=int, default=10**7)
    sp.add_argument("--out")

    sp = add("spectrum", cmd_spectrum, help="build the Cayley graph and test its spectrum")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--variant", choices=("full", "split"), default="full")
    sp.add_argument("--mode", choices=("dense", "extremal"), default="dense")
    sp.add_argument("--dense-method", choices=("auto", "geev", "normal_split"), default="auto")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--k", type=int, default=6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cap", type=int, default=10**7)
    sp.add_argument("--out")
    sp.add_argument("--graph-out")
    sp.add_argument("--vertex-out")

    sp = add("navigate", cmd_navigate, help="compile a matrix into a shortest word")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--variant", choices=("split", "full"), default="split")
    sp.add_argument("--in", dest="infile")
    sp.add_argument("--out")

    sp = add("cover", cmd_cover, help="Monte-Carlo covering statistics of word nets")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--variant", choices=("full", "split"), default="full")
    sp.add_argument("--lmax", type=int, default=2)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cap", type=int, default=2_000_000)
    sp.add_argument("--out")

    sp = add("supergates", cmd_supergates, help="emit the finite-order pair and its checks")
    sp.add_argument("--syllables", type=int, default=10, metavar="L")
    sp.add_argument("--out")

    return ap


def dispatch(argv) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    ctx = None
    if args.threads:
        from threadpoolctl import threadpool_limits

        ctx = threadpool_limits(limits=args.threads)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (NotInLatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ResourceCapError, PrecisionExceededError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    finally:
        if ctx is not None:
            ctx.unregister()


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
