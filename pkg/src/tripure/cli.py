"""Command-line interface: gen, marginals, reconstruct, roundtrip, tomo-demo.

Exit codes: 0 success, 2 usage/contract/IO problems, 3 typed algorithm
failures.  Data files are byte-deterministic given the flags; report files
additionally carry wall-clock timings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict

from .errors import AlgorithmError, ContractError
from .harness import batch_stats, run_trials, sample_haar_state
from .reconstruct import ReconstructionConfig, reconstruct_tripartite
from .states import DensityMatrix, Dims, PureState, fidelity, partial_trace
from .serialize import read_matrix_file, write_matrix_file
from .tomography import (
    MAX_GRID_POINTS,
    PROFILES,
    build_profile,
    default_spacings,
    grid_fidelity,
    planar_density,
    reconstruct_grid,
)

ROUNDTRIP_MIN_FIDELITY = 1.0 - 1e-8

_TOLERANCE_FLAGS = (
    "rank_threshold",
    "gap_tol",
    "pair_tol",
    "edge_tol",
    "phase_tol",
    "marginal_tol",
)


def _parse_triple(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _config_from(args) -> ReconstructionConfig:
    overrides = {
        name: getattr(args, name)
        for name in _TOLERANCE_FLAGS
        if getattr(args, name, None) is not None
    }
    return ReconstructionConfig(**overrides)


def _write_report(path, payload: dict) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _cmd_gen(args) -> int:
    dims = Dims(*args.dims)
    state = sample_haar_state(dims, args.seed)
    write_matrix_file(args.out, state)
    return 0


def _cmd_marginals(args) -> int:
    obj = read_matrix_file(getattr(args, "in"))
    if not isinstance(obj, (PureState, DensityMatrix)):
        raise ContractError("input must be a pure_state or density_matrix file")
    reduced = partial_trace(obj, tuple(args.keep))
    write_matrix_file(args.out, reduced)
    return 0


def _cmd_reconstruct(args) -> int:
    t0 = time.perf_counter()
    dims = Dims(*args.dims)
    rho_ab = read_matrix_file(args.ab)
    rho_bc = read_matrix_file(args.bc)
    if not isinstance(rho_ab, DensityMatrix) or not isinstance(rho_bc, DensityMatrix):
        raise ContractError("--ab and --bc must be density_matrix files")
    truth = None
    if args.truth is not None:
        truth = read_matrix_file(args.truth)
        if not isinstance(truth, PureState):
            raise ContractError("--truth must be a pure_state file")
    cfg = _config_from(args)
    t_load = time.perf_counter()
    try:
        report = reconstruct_tripartite(rho_ab, rho_bc, dims, cfg)
    except AlgorithmError as exc:
        t_done = time.perf_counter()
        _write_report(
            args.report,
            {
                "outcome": type(exc).__name__,
                "detail": str(exc),
                "config": asdict(cfg),
                "timings": {
                    "load_s": t_load - t0,
                    "reconstruct_s": t_done - t_load,
                    "total_s": t_done - t0,
                },
            },
        )
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    t_done = time.perf_counter()
    write_matrix_file(args.out, report.state)
    payload = {
        "outcome": "success",
        "marginal_residual_ab": report.marginal_residual_ab,
        "marginal_residual_bc": report.marginal_residual_bc,
        "compatibility_residual": report.compatibility_residual,
        "cycle_residual": report.cycle_residual,
        "genericity_flags": report.genericity_flags,
        "config": asdict(cfg),
        "timings": {
            "load_s": t_load - t0,
            "reconstruct_s": t_done - t_load,
            "total_s": t_done - t0,
        },
    }
    if truth is not None:
        payload["fidelity"] = fidelity(truth, report.state)
    _write_report(args.report, payload)
    return 0


def _cmd_roundtrip(args) -> int:
    t0 = time.perf_counter()
    dims = Dims(*args.dims)
    if args.trials < 1:
        raise ContractError(f"--trials must be >= 1, got {args.trials}")
    cfg = _config_from(args)
    records = run_trials(dims, args.trials, args.seed_base, cfg)
    summary = batch_stats(records)
    elapsed = time.perf_counter() - t0
    _write_report(
        args.report,
        {
            "dims": list(dims.as_tuple()),
            "trials": args.trials,
            "seed_base": args.seed_base,
            "config": asdict(cfg),
            "summary": summary,
            "records": [asdict(r) for r in records],
            "timings": {"total_s": elapsed},
        },
    )
    ok = summary["success_rate"] == 1.0 and (
        summary["fidelity"] is not None
        and summary["fidelity"]["min"] >= ROUNDTRIP_MIN_FIDELITY
    )
    return 0 if ok else 3


def _cmd_tomo_demo(args) -> int:
    t0 = time.perf_counter()
    shape = tuple(args.grid)
    if shape[0] * shape[1] * shape[2] > MAX_GRID_POINTS:
        raise ContractError(
            f"grid has {shape[0] * shape[1] * shape[2]} points, cap is {MAX_GRID_POINTS}"
        )
    cfg = _config_from(args)
    spacings = default_spacings(shape)
    truth = build_profile(args.profile, shape, spacings)
    rho_xy = planar_density(truth, "XY")
    rho_yz = planar_density(truth, "YZ")
    base = {
        "profile": args.profile,
        "grid": list(shape),
        "spacings": list(spacings),
        "config": asdict(cfg),
    }
    try:
        recovered = reconstruct_grid(rho_xy, rho_yz, shape, spacings, cfg)
    except AlgorithmError as exc:
        elapsed = time.perf_counter() - t0
        _write_report(
            args.report,
            {**base, "outcome": type(exc).__name__, "detail": str(exc),
             "timings": {"total_s": elapsed}},
        )
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    fid = grid_fidelity(truth, recovered)
    elapsed = time.perf_counter() - t0
    _write_report(
        args.report,
        {**base, "outcome": "success", "fidelity": fid, "timings": {"total_s": elapsed}},
    )
    return 0


def _add_tolerance_flags(parser: argparse.ArgumentParser) -> None:
    for name in _TOLERANCE_FLAGS:
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tripure",
        description="Reconstruct tripartite pure states from their AB and BC marginals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a Haar-random pure state into a file")
    p.add_argument("--dims", type=_parse_triple, required=True, metavar="dA,dB,dC")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("marginals", help="write a reduced density matrix")
    p.add_argument("--in", dest="in", required=True, metavar="FILE")
    p.add_argument("--keep", required=True, choices=["AB", "BC", "A", "B", "C"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_marginals)

    p = sub.add_parser("reconstruct", help="recover the pure state from rho_AB and rho_BC")
    p.add_argument("--ab", required=True)
    p.add_argument("--bc", required=True)
    p.add_argument("--dims", type=_parse_triple, required=True, metavar="dA,dB,dC")
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.add_argument("--truth", default=None, help="pure_state file to score fidelity against")
    _add_tolerance_flags(p)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("roundtrip", help="batch Haar round-trip verification")
    p.add_argument("--dims", type=_parse_triple, required=True, metavar="dA,dB,dC")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed-base", dest="seed_base", type=int, default=0)
    p.add_argument("--report", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=_cmd_roundtrip)

    p = sub.add_parser("tomo-demo", help="planar-projection demo on a named wavefunction")
    p.add_argument("--grid", type=_parse_triple, required=True, metavar="nx,ny,nz")
    p.add_argument("--profile", required=True, choices=list(PROFILES))
    p.add_argument("--report", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=_cmd_tomo_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AlgorithmError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
