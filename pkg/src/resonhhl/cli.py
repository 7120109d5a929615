"""Command-line entry point: ``resonhhl {train,project,solve,spectrum,verify}``.

Exit codes: 0 ok, 1 failed verification, 2 physics precondition,
3 non-convergence, 4 I/O or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .acceptance import report_json, run_acceptance
from .config import CONFIG_ENV, ConfigError, PhysicsConfigError, RunConfig, load_config
from .ec import ECSubspace, build_subspace, project_target, resonance_candidate, solve_training_set
from .errors import ConvergenceError, FixtureError, PhysicsPreconditionError
from .fixtures import default_fixture_path, load_fixture
from .ihhl import SOLVERS, UPDATE_RULES, SpectrumResult, full_spectrum
from .linalg_core import dense_eigen, is_complex_symmetric, matrix_from_dict, matrix_to_dict
from .physics_alpha import build_hamiltonian, check_angle

log = logging.getLogger("resonhhl")

EXIT_OK, EXIT_VERIFY, EXIT_PHYSICS, EXIT_CONVERGENCE, EXIT_IO = 0, 1, 2, 3, 4


class InputError(Exception):
    """Input file present but unusable (stale metadata, wrong shape)."""


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _physics_meta(cfg: RunConfig) -> dict:
    return {
        "basis": {"size": cfg.basis_size, "b0": cfg.b0, "ratio": cfg.ratio},
        "channel": {"L": cfg.L, "hbar2_over_2mu": cfg.hbar2_over_2mu, "coulomb_strength": cfg.coulomb_strength},
        "potential": {"V0": cfg.V0, "a": cfg.a},
    }


def _read_json(path: Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise FileNotFoundError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


# train

def _train(cfg: RunConfig, out: Path) -> ECSubspace:
    points = solve_training_set(cfg.lambdas(), cfg.basis(), cfg.channel(), cfg.potential())
    sub = build_subspace(points)
    record = {
        "meta": _physics_meta(cfg),
        "points": [
            {"lambda": p.lam, "energy": p.energy, "wavefunction": matrix_to_dict(p.wavefunction.real)}
            for p in points
        ],
        "subspace": {
            "basis": matrix_to_dict(sub.basis_vectors),
            "source_lambdas": list(sub.source_lambdas),
            "warnings": list(sub.warnings),
        },
    }
    _write(out / "training.json", _dumps(record))
    print(f"{'lambda':>10}  {'E_0 [MeV]':>14}")
    for p in points:
        print(f"{p.lam:10.6f}  {p.energy:14.6f}")
    return sub


def cmd_train(cfg: RunConfig, args) -> int:
    _train(cfg, args.out)
    return EXIT_OK


# project

def _load_subspace(cfg: RunConfig, path: Path) -> ECSubspace:
    record = _read_json(path)
    try:
        meta = record["meta"]
        sub = record["subspace"]
        basis = matrix_from_dict(sub["basis"])
    except (KeyError, ValueError) as exc:
        raise InputError(f"malformed training file {path}: {exc}") from exc
    # JSON round trip turns tuples into lists; compare through the same path
    if meta != json.loads(json.dumps(_physics_meta(cfg))):
        raise InputError(f"training file {path} was built with a different basis/channel/potential; rerun train")
    if basis.shape[0] != cfg.basis_size:
        raise InputError(f"training vectors have dimension {basis.shape[0]}, basis has {cfg.basis_size}")
    return ECSubspace(basis, tuple(sub["source_lambdas"]), tuple(sub.get("warnings", ())))


def _project(cfg: RunConfig, sub: ECSubspace, out: Path) -> np.ndarray:
    angle = cfg.angle()
    ec = project_target(sub, cfg.target_lambda, angle, cfg.basis(), cfg.channel(), cfg.potential())
    symmetric = is_complex_symmetric(ec.h_ec)
    angle_ok = check_angle(angle, cfg.reference)
    if not angle_ok:
        log.warning(
            "theta = %g deg does not expose the reference resonance %s (need 2 theta > arctan(|Im E| / Re E))",
            cfg.theta_deg, cfg.reference,
        )
    record = {
        "matrix": matrix_to_dict(ec.h_ec),
        "overlap": matrix_to_dict(ec.n_ec),
        "meta": {
            **_physics_meta(cfg),
            "lambda": cfg.target_lambda,
            "theta_deg": cfg.theta_deg,
            "source_lambdas": list(sub.source_lambdas),
            "complex_symmetric": symmetric,
            "check_angle": angle_ok,
        },
    }
    _write(out / "ec_matrix.json", _dumps(record))
    print(f"EC matrix {ec.h_ec.shape[0]}x{ec.h_ec.shape[1]}, complex symmetric: {symmetric}, check_angle: {angle_ok}")
    return ec.h_ec


def cmd_project(cfg: RunConfig, args) -> int:
    path = args.training or args.out / "training.json"
    _project(cfg, _load_subspace(cfg, path), args.out)
    return EXIT_OK


# solve

def _load_matrix(path: Path) -> np.ndarray:
    record = _read_json(path)
    try:
        m = matrix_from_dict(record.get("matrix", record))
    except ValueError as exc:
        raise InputError(f"malformed matrix file {path}: {exc}") from exc
    if m.shape[0] != m.shape[1]:
        raise InputError(f"matrix in {path} is not square: {m.shape}")
    return m


def _load_seeds(path: Path, n: int) -> list[np.ndarray]:
    try:
        cols = matrix_from_dict(_read_json(path))
    except ValueError as exc:
        raise InputError(f"malformed seed file {path}: {exc}") from exc
    if cols.shape[0] != n:
        raise InputError(f"seed vectors have length {cols.shape[0]}, matrix is {n}x{n}")
    return [cols[:, k] for k in range(cols.shape[1])]


def _pair_with(values: np.ndarray, reference: np.ndarray) -> np.ndarray:
    return np.array([reference[np.argmin(np.abs(reference - v))] for v in values], dtype=complex)


def _spectrum_rows(spec: SpectrumResult, diag: np.ndarray) -> list[dict]:
    paired = _pair_with(spec.eigenvalues, diag)
    # traces are in solve order, the spectrum is sorted: match by final energy
    done = [t for t in spec.traces if t.converged]
    rows = []
    for k, (e, d) in enumerate(zip(spec.eigenvalues, paired)):
        trace = min(done, key=lambda t: abs(t.energies[-1] - e))
        rows.append({
            "index": k,
            "re_ihhl": float(e.real),
            "im_ihhl": float(e.imag),
            "re_diag": float(d.real),
            "im_diag": float(d.imag),
            "abs_diff": float(abs(e - d)),
            "iterations": trace.iterations_used,
        })
    return rows


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(rows[0].keys() if rows else ["index"])
    for r in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in r.values()])
    return buf.getvalue()


def _solve(cfg: RunConfig, h: np.ndarray, seeds, out: Path, fmt: str) -> int:
    spec = full_spectrum(
        h, seeds, epsilon=cfg.epsilon, solver=cfg.solver, update=cfg.update_rule(),
        max_iter=cfg.max_iter, seed=cfg.seed, beta=cfg.beta, hhl_config=cfg.hhl(),
    )
    diag = dense_eigen(h).eigenvalues
    rows = _spectrum_rows(spec, diag)
    summary = {
        "solver": cfg.solver,
        "update": cfg.update,
        "converged": spec.converged,
        "failures": {str(k): v for k, v in spec.failures.items()},
        "ihhl": [[r["re_ihhl"], r["im_ihhl"]] for r in rows],
        "dense": [[float(d.real), float(d.imag)] for d in diag],
        "max_abs_diff": max((r["abs_diff"] for r in rows), default=None),
        "rows": rows,
    }
    if fmt == "json":
        _write(out / "spectrum.json", _dumps(summary))
    else:
        _write(out / "spectrum.csv", _rows_csv(rows))
        _write(out / "dense.csv", _rows_csv(
            [{"index": k, "re": float(d.real), "im": float(d.imag)} for k, d in enumerate(diag)]
        ))
    for k, trace in enumerate(spec.traces):
        if fmt == "json":
            _write(out / f"trace_{k}.json", trace.to_json() + "\n")
        else:
            _write(out / f"trace_{k}.csv", trace.to_csv())

    print(f"{'k':>2}  {'IHHL [MeV]':>26}  {'diagonalization [MeV]':>26}  {'|diff|':>9}  it")
    for r in rows:
        print(
            f"{r['index']:2d}  {r['re_ihhl']:12.5f} {r['im_ihhl']:+12.5f}i  "
            f"{r['re_diag']:12.5f} {r['im_diag']:+12.5f}i  {r['abs_diff']:9.2e}  {r['iterations']}"
        )
    if not spec.converged:
        print(
            f"error: {len(spec.eigenvalues)} of {spec.dim} eigenpairs converged; failures: {spec.failures}",
            file=sys.stderr,
        )
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_solve(cfg: RunConfig, args) -> int:
    seeds = None
    if args.fixture is not None:
        fx = load_fixture(args.fixture)
        h = fx.h
        seeds = [fx.seed_first, fx.seed_second]
    elif args.matrix is not None:
        h = _load_matrix(args.matrix)
    else:
        h = _load_matrix(args.out / "ec_matrix.json")
    if args.seeds is not None:
        seeds = _load_seeds(args.seeds, h.shape[0])
    return _solve(cfg, h, seeds, args.out, args.format)


def cmd_spectrum(cfg: RunConfig, args) -> int:
    """Whole pipeline from the configuration: train, project, solve."""
    sub = _train(cfg, args.out)
    h_ec = _project(cfg, sub, args.out)
    code = _solve(cfg, h_ec, None, args.out, args.format)
    full = dense_eigen(
        build_hamiltonian(cfg.target_lambda, cfg.angle(), cfg.basis(), cfg.channel(), cfg.potential()).matrix
    ).eigenvalues
    e_ec = resonance_candidate(dense_eigen(h_ec).eigenvalues, cfg.reference)
    e_full = resonance_candidate(full, cfg.reference)
    print(f"resonance (EC):         {e_ec.real:.5f} {e_ec.imag:+.5f}i MeV")
    print(f"resonance (full basis): {e_full.real:.5f} {e_full.imag:+.5f}i MeV")
    return code


# verify

def cmd_verify(cfg: RunConfig, args) -> int:
    fixture = args.fixture if args.fixture is not None else default_fixture_path()
    results = run_acceptance(fixture)
    for r in results:
        print(r.line(), file=sys.stderr)
    report = report_json(results)
    print(report)
    if args.out_given:
        _write(args.out / "verify.json", report + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {
    "train": cmd_train,
    "project": cmd_project,
    "solve": cmd_solve,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help=f"key = value file (default: ${CONFIG_ENV})")
    common.add_argument("--solver", choices=SOLVERS, help="linear-solver backend for IHHL")
    common.add_argument("--update", choices=UPDATE_RULES, help="energy update rule (default: chosen per solver)")
    common.add_argument("--out", type=Path, help="output directory (default: .)")
    common.add_argument("--seed", type=int, help="seed for random starting vectors and shot sampling")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="spectrum and trace format")
    common.add_argument(
        "--fixture", nargs="?", const=default_fixture_path(), type=Path,
        help="use the bundled 8x8 test matrix (or the given fixture file)",
    )

    parser = argparse.ArgumentParser(prog="resonhhl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("train", parents=[common], help="ground states at the training couplings")
    p = sub.add_parser("project", parents=[common], help="EC-projected complex-scaled Hamiltonian")
    p.add_argument("--training", type=Path, help="training file (default: OUT/training.json)")
    p = sub.add_parser("solve", parents=[common], help="IHHL spectrum of a matrix file or the fixture")
    p.add_argument("--matrix", type=Path, help="matrix JSON (default: OUT/ec_matrix.json)")
    p.add_argument("--seeds", type=Path, help="starting vectors, one per column, as matrix JSON")
    sub.add_parser("spectrum", parents=[common], help="train, project and solve in one run")
    sub.add_parser("verify", parents=[common], help="run the acceptance suite, JSON report on stdout")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    args.out_given = args.out is not None
    args.out = args.out or Path(".")
    try:
        cfg = load_config(args.config, solver=args.solver, update=args.update, seed=args.seed)
        return COMMANDS[args.command](cfg, args)
    except (PhysicsConfigError, PhysicsPreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (FixtureError, OSError, ConfigError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
