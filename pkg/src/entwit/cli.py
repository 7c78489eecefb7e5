"""Command-line front end.

Commands: gen, concurrence, detect, oracle, hollow, bench, validate.
Exit codes: 0 success, 2 validation/argument error, 3 size cap, 4 I/O.
Machine outputs (--json stdout and --out files) are canonical JSON or
CSV, contain no timing, and are byte-identical for a fixed --seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bench import FAMILIES, run_bench
from .concurrence import (
    bipartite_concurrence_purity,
    bipartite_concurrence_witness_sum,
    cut_concurrence,
    multipartite_concurrence,
    multipartite_concurrence_purity,
    multipartite_concurrence_witness_sum,
)
from .errors import EntwitError, SizeCapError, StateValidationError
from .separability import (
    hollowizing_unitary,
    negativity,
    overlap_matrix,
    ppt_check,
    pure_state_check,
    sample_detection,
    witness_test,
    wootters_concurrence,
)
from .states import (
    DensityMatrix,
    PureState,
    bell_state,
    density_from_pure,
    ghz_state,
    isotropic_state,
    random_mixed,
    random_product_pure,
    random_pure,
    random_separable_mixture,
    w_state,
    werner_2qubit,
)
from .stateio import dump_json, read_state, write_state
from .witnesses import bipartite_basis_witness, random_bipartite_witness, random_cut_witness

GEN_FAMILIES = (
    "ghz",
    "w",
    "bell",
    "werner",
    "isotropic",
    "random-pure",
    "random-mixed",
    "random-separable",
    "product",
)


def _real(text: str) -> float:
    """Real-number argument; accepts plain floats and fractions like 1/3."""
    try:
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc


def _dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad dims list: {text!r}") from exc
    if not dims:
        raise argparse.ArgumentTypeError("empty dims list")
    return dims


def _grid(text: str) -> list[float]:
    """Comma list (0.4,0.5) or start:stop:step (0.4:1.0:0.1), inclusive."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid must be start:stop:step")
        start, stop, step = (_real(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be positive")
        n = int(round((stop - start) / step))
        return [round(start + i * step, 12) for i in range(n + 1)]
    return [_real(p) for p in text.split(",") if p]


def _emit(doc: dict, args, human_lines: list[str]) -> None:
    if getattr(args, "out", None):
        dump_json(doc, args.out)
    if getattr(args, "json", False):
        print(json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False))
    else:
        for line in human_lines:
            print(line)


def _load_state(path: str):
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"state file not found: {path}")
    return read_state(p)


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    family = args.family
    meta = {"family": family, "seed": args.seed}
    if family == "ghz":
        state = ghz_state(args.n, args.d)
        meta.update(n=args.n, d=args.d)
    elif family == "w":
        state = w_state(args.n)
        meta.update(n=args.n)
    elif family == "bell":
        state = bell_state()
    elif family == "werner":
        state = werner_2qubit(args.p)
        meta.update(p=args.p)
    elif family == "isotropic":
        state = isotropic_state(args.d, args.p)
        meta.update(d=args.d, p=args.p)
    elif family == "random-pure":
        state = random_pure(args.dims, rng)
        meta.update(dims=args.dims)
    elif family == "random-mixed":
        state = random_mixed(args.dims, args.rank, rng=rng)
        meta.update(dims=args.dims, rank=args.rank)
    elif family == "random-separable":
        state = random_separable_mixture(args.dims, args.terms, rng=rng)
        meta.update(dims=args.dims, terms=args.terms)
    elif family == "product":
        state = random_product_pure(args.dims, rng)
        meta.update(dims=args.dims)
    else:
        raise ValueError(f"unknown family {family!r}")
    write_state(state, args.out, meta=meta)
    kind = "pure" if isinstance(state, PureState) else "mixed"
    if not args.json:
        print(f"wrote {kind} state {list(state.dims.dims)} to {args.out} (seed {args.seed})")
    else:
        print(json.dumps({"written": str(args.out), "kind": kind,
                          "dims": list(state.dims.dims), "seed": args.seed},
                         sort_keys=True, separators=(",", ":")))
    return 0


# ---------------------------------------------------------------------------
# concurrence
# ---------------------------------------------------------------------------


def cmd_concurrence(args) -> int:
    state = _load_state(args.state)
    if isinstance(state, DensityMatrix):
        raise StateValidationError(
            "concurrence is a pure-state measure here; quantifying mixed-state "
            "entanglement needs the convex-roof extension, which is out of scope. "
            "Use 'detect' for mixed states."
        )
    psi: PureState = state
    values: dict[str, float] = {}
    if psi.dims.n == 2:
        values["purity"] = bipartite_concurrence_purity(psi)
        if args.method in ("all", "witness-sum"):
            values["witness_sum"] = bipartite_concurrence_witness_sum(psi)
        values["multipartite_purity"] = multipartite_concurrence_purity(psi)
        if args.method in ("all", "witness-sum"):
            values["multipartite_witness_sum"] = multipartite_concurrence_witness_sum(psi)
    else:
        values["cut_sum"] = multipartite_concurrence(psi)
        values["purity"] = multipartite_concurrence_purity(psi)
        if args.method in ("all", "witness-sum"):
            values["witness_sum"] = multipartite_concurrence_witness_sum(psi)
    cuts = {f"cut_{k}": cut_concurrence(psi, k) for k in range(1, psi.dims.n + 1)}
    spread = max(values.values()) - min(values.values())
    doc = {
        "command": "concurrence",
        "state": str(args.state),
        "dims": list(psi.dims.dims),
        "values": values,
        "cut_concurrences": cuts,
        "max_discrepancy": spread,
    }
    lines = [f"{name}: {val:.6f}" for name, val in values.items()]
    lines += [f"{name}: {val:.6f}" for name, val in cuts.items()]
    lines.append(f"max cross-method discrepancy: {spread:.3e}")
    _emit(doc, args, lines)
    return 0


# ---------------------------------------------------------------------------
# detect
# ---------------------------------------------------------------------------


def cmd_detect(args) -> int:
    state = _load_state(args.state)
    t0 = time.perf_counter()
    if isinstance(state, PureState):
        res = pure_state_check(state)
        result = {
            "kind": "pure",
            "verdict": res.verdict,
            "max_overlap": res.max_overlap,
            "worst_witness": res.worst_label,
            "threshold": res.threshold,
        }
        human = [
            f"pure state: complete basis check over {state.dims.dims}",
            f"verdict: {res.verdict} (max overlap {res.max_overlap:.6e}, "
            f"threshold {res.threshold:g}, witness {res.worst_label})",
        ]
    else:
        report = sample_detection(
            state,
            trials=args.trials,
            master_seed=args.seed,
            tol_rel=args.tol,
            tol_abs=args.tol_abs,
            full_stats=args.full_stats,
            workers=args.workers,
            state_id=str(args.state),
        )
        result = {
            "kind": "mixed",
            "verdict": report.verdict,
            "trials": report.trials,
            "evaluated_trials": report.evaluated_trials,
            "violations": report.violations,
            "first_violation_trial": report.first_violation_trial,
            "max_margin": report.max_margin,
            "master_seed": report.master_seed,
            "tolerances": report.tolerances,
        }
        human = [
            f"mixed state: sampled {report.evaluated_trials} random witnesses "
            f"(requested {report.trials}, seed {report.master_seed})",
            f"verdict: {report.verdict} "
            f"(violations {report.violations}, first at trial "
            f"{report.first_violation_trial}, max margin {report.max_margin:.6e})",
        ]
    wall = time.perf_counter() - t0
    doc = {
        "command": "detect",
        "inputs": {
            "state": str(args.state),
            "seed": args.seed,
            "trials": args.trials,
            "tol_rel": args.tol,
            "tol_abs": args.tol_abs,
            "full_stats": args.full_stats,
        },
        "result": result,
    }
    if not args.json:
        human.append(f"wall time: {wall:.3f} s")
    _emit(doc, args, human)
    return 0


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def cmd_oracle(args) -> int:
    state = _load_state(args.state)
    rho = density_from_pure(state) if isinstance(state, PureState) else state
    if rho.dims.n != 2:
        raise ValueError("oracle checks need a bipartite state")
    verdict, min_eig = ppt_check(rho)
    neg = negativity(rho)
    result = {"ppt_verdict": verdict, "min_pt_eigenvalue": min_eig, "negativity": neg}
    lines = [
        f"PPT criterion: {verdict} (min partial-transpose eigenvalue {min_eig:.6f})",
        f"negativity: {neg:.6f}",
    ]
    if rho.dims.dims == (2, 2):
        conc = wootters_concurrence(rho)
        result["wootters_concurrence"] = conc
        lines.append(f"Wootters concurrence: {conc:.6f}")
    doc = {"command": "oracle", "state": str(args.state), "result": result}
    _emit(doc, args, lines)
    return 0


# ---------------------------------------------------------------------------
# hollow
# ---------------------------------------------------------------------------


def _build_operator(args, dims):
    spec = args.operator
    if spec == "random":
        rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(0,)))
        if dims.n == 2:
            return random_bipartite_witness(dims, rng)
        k = args.cut if args.cut else 1
        return random_cut_witness(dims, k, rng)
    if spec.startswith("basis:"):
        if dims.n != 2:
            raise ValueError("basis operators are bipartite; use operator 'random' with --cut")
        body = spec[len("basis:"):]
        try:
            left, right = body.split(":")
            i, i2 = (int(x) for x in left.split(","))
            j, j2 = (int(x) for x in right.split(","))
        except ValueError as exc:
            raise ValueError(
                f"bad basis operator spec {spec!r}; expected basis:i,i':j,j'"
            ) from exc
        return bipartite_basis_witness(dims, i, i2, j, j2)
    raise ValueError(f"unknown operator spec {spec!r}")


def cmd_hollow(args) -> int:
    state = _load_state(args.state)
    rho = density_from_pure(state) if isinstance(state, PureState) else state
    op = _build_operator(args, rho.dims)
    test = witness_test(rho, op)
    s = overlap_matrix(rho, op)
    cert = hollowizing_unitary(
        s, hollow_tol=args.tol, max_iter=args.max_iter, seed=args.seed,
        pad_to=args.pad_to,
    )
    doc = {
        "command": "hollow",
        "state": str(args.state),
        "operator": op.label,
        "condition": {
            "singular_values": [float(x) for x in test.singular_values],
            "margin": test.margin,
            "violated": test.violated,
        },
        "certificate": {
            "converged": cert.converged,
            "max_abs_diagonal": cert.max_abs_diagonal,
            "iterations": cert.iterations,
            "unitary": {
                "re": cert.unitary.real.tolist(),
                "im": cert.unitary.imag.tolist(),
            },
        },
    }
    lines = [
        f"witness: {op.label}",
        f"singular-value condition: margin {test.margin:.6e} "
        f"({'violated: state is entangled' if test.violated else 'holds'})",
        f"hollowization: converged={cert.converged} "
        f"max |diagonal| = {cert.max_abs_diagonal:.6e} "
        f"after {cert.iterations} iterations",
    ]
    _emit(doc, args, lines)
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def cmd_bench(args) -> int:
    rows = run_bench(
        family=args.family,
        grid=args.grid,
        trials=args.trials,
        reps=args.reps,
        seed=args.seed,
        d=args.d,
        workers=args.workers,
    )
    header = [
        "param",
        "oracle",
        "median_first_violation",
        "mean_first_violation",
        "violation_rate",
    ]
    out = Path(args.out)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [
                    repr(row.param),
                    repr(row.oracle),
                    repr(row.median_first_violation),
                    repr(row.mean_first_violation),
                    repr(row.violation_rate),
                ]
            )
    if not args.json:
        print(f"wrote {len(rows)} rows to {args.out}")
        for row in rows:
            print(
                f"  param {row.param:.4f}: oracle {row.oracle:.6f}, "
                f"median first violation {row.median_first_violation:.1f}, "
                f"rate {row.violation_rate:.2f}"
            )
    else:
        print(json.dumps({"written": str(args.out), "rows": len(rows)},
                         sort_keys=True, separators=(",", ":")))
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    state = _load_state(args.state)
    if isinstance(state, PureState):
        info = {
            "kind": "pure",
            "dims": list(state.dims.dims),
            "norm": float(np.linalg.norm(state.vector)),
        }
    else:
        purity = float(np.trace(state.matrix @ state.matrix).real)
        info = {
            "kind": "mixed",
            "dims": list(state.dims.dims),
            "trace": float(np.trace(state.matrix).real),
            "purity": purity,
        }
    doc = {"command": "validate", "state": str(args.state), "valid": True, "info": info}
    lines = [f"valid {info['kind']} state, dims {info['dims']}"]
    if "purity" in info:
        lines.append(f"purity tr(rho^2) = {info['purity']:.6f}")
    _emit(doc, args, lines)
    return 0


# ---------------------------------------------------------------------------
# parser / main
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entwit",
        description="Witness-operator entanglement detection for qudit registers.",
    )
    parser.add_argument("--version", action="version", version=f"entwit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, out_required=False):
        p.add_argument("--seed", type=int, default=0, help="master seed (unsigned 64-bit)")
        p.add_argument("--out", type=str, required=out_required, default=None,
                       help="write the machine-readable report here")
        p.add_argument("--json", action="store_true",
                       help="print canonical JSON to stdout instead of text")

    p = sub.add_parser("gen", help="generate a state file")
    p.add_argument("family", choices=GEN_FAMILIES)
    p.add_argument("--n", type=int, default=3, help="subsystem count (ghz, w)")
    p.add_argument("--d", type=int, default=2, help="local dimension (ghz, isotropic)")
    p.add_argument("--p", type=_real, default=0.5, help="mixing parameter (werner, isotropic)")
    p.add_argument("--dims", type=_dims, default=[2, 2], help="dims list, e.g. 2,3")
    p.add_argument("--rank", type=int, default=None, help="rank (random-mixed)")
    p.add_argument("--terms", type=int, default=4, help="terms per subsystem (random-separable)")
    add_common(p, out_required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("concurrence", help="pure-state concurrence measures")
    p.add_argument("state")
    p.add_argument("--method", choices=("all", "purity", "witness-sum"), default="all")
    add_common(p)
    p.set_defaults(func=cmd_concurrence)

    p = sub.add_parser("detect", help="entanglement detection")
    p.add_argument("state")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--tol", type=_real, default=1e-8,
                   help="relative violation tolerance")
    p.add_argument("--tol-abs", type=_real, default=1e-12,
                   help="absolute violation tolerance floor")
    p.add_argument("--full-stats", action="store_true",
                   help="evaluate every trial instead of stopping at the first violation")
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads; the report is identical for any count")
    add_common(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("oracle", help="PPT and two-qubit concurrence cross-checks")
    p.add_argument("state")
    add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("hollow", help="hollowization certificate for one witness")
    p.add_argument("state")
    p.add_argument("--operator", type=str, default="random",
                   help="'random' or basis:i,i':j,j'")
    p.add_argument("--cut", type=int, default=None,
                   help="cut subsystem for multipartite random operators")
    p.add_argument("--tol", type=_real, default=1e-6, help="hollow tolerance")
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--pad-to", type=int, default=None,
                   help="embed the overlap matrix in a larger decomposition")
    add_common(p)
    p.set_defaults(func=cmd_hollow)

    p = sub.add_parser("bench", help="trials-vs-entanglement benchmark CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--grid", type=_grid, required=True,
                   help="comma list or start:stop:step")
    p.add_argument("--trials", type=int, default=400)
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--d", type=int, default=3, help="local dimension (isotropic, pure)")
    p.add_argument("--workers", type=int, default=1)
    add_common(p, out_required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="validate a state file")
    p.add_argument("state")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (EntwitError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
