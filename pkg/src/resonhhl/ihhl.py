"""Iterative HHL eigensolver for complex-symmetric (non-Hermitian) matrices.

Each step solves the fixed-point system ``C(E, beta) phi* = phi`` with

    C(E, beta) = (H - (E - beta) I) / beta

through the Hermitian dilation ``A = [[0, C], [C^dagger, 0]]`` and
``b = (phi, 0)``, so the lower half of ``x`` solves ``C x2 = phi``.  Real and
imaginary parts of ``phi`` are solved separately (HHL takes real inputs)
and recombined by linearity.  The energy is then updated from ``phi`` and
``phi*`` and the loop repeats until successive energies agree to ``epsilon``.

Eigenvectors already found are removed from every iterate by c-orthogonal
projection, which is exact deflation for a complex-symmetric ``H``: the
c-orthogonal complement of an eigenvector is invariant under ``H``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    DeflationError,
    DimensionError,
    QuasiNullVectorError,
    SingularMatrixError,
)
from .linalg_core import (
    DEFAULT_TOLERANCES,
    c_normalize,
    c_product,
    hermitian_norm,
    linear_solve,
    matrix_to_dict,
    sort_eigenvalues,
)
from .physics_alpha import ScaledHamiltonian
from .qsim.hhl import HhlConfig, hhl_solve

log = logging.getLogger(__name__)

__all__ = [
    "SOLVERS",
    "UPDATE_RULES",
    "FixedPointOperator",
    "DilatedSystem",
    "IterationTrace",
    "DeflationSet",
    "StepResult",
    "IhhlResult",
    "SpectrumResult",
    "build_c_operator",
    "dilate",
    "make_solver",
    "solve_dilated",
    "deflate",
    "c_rayleigh",
    "ihhl_step",
    "ihhl_solve",
    "full_spectrum",
]

SOLVERS = ("classical", "hhl-ideal", "hhl-circuit")
UPDATE_RULES = ("shift-invert", "rayleigh")

Solver = Literal["classical", "hhl-ideal", "hhl-circuit"]
Update = Literal["shift-invert", "rayleigh"]


def _matrix(h) -> np.ndarray:
    m = h.matrix if isinstance(h, ScaledHamiltonian) else np.asarray(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"need a square matrix, got {m.shape}")
    return m


@dataclass(frozen=True)
class FixedPointOperator:
    matrix: np.ndarray
    energy_shift: complex
    beta: complex

    def __post_init__(self):
        if self.beta == 0:
            raise ValueError("beta must be nonzero")


@dataclass(frozen=True)
class DilatedSystem:
    a_matrix: np.ndarray
    rhs_real: np.ndarray
    rhs_imag: np.ndarray

    @property
    def half(self) -> int:
        return self.a_matrix.shape[0] // 2


@dataclass
class IterationTrace:
    """Energies per iteration (entry 0 is the starting energy)."""

    energies: list[complex] = field(default_factory=list)
    deltas: list[float] = field(default_factory=list)
    vectors: list[np.ndarray] = field(default_factory=list)
    converged: bool = False
    status: str = "running"
    seed: int | None = None
    events: list[str] = field(default_factory=list)

    @property
    def iterations_used(self) -> int:
        return len(self.deltas)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "re_E", "im_E", "abs_dE"])
        for k, e in enumerate(self.energies):
            d = self.deltas[k - 1] if k > 0 else float("nan")
            w.writerow([k, repr(e.real), repr(e.imag), repr(d) if k > 0 else ""])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "energies": [[e.real, e.imag] for e in self.energies],
            "deltas": list(self.deltas),
            "vectors": [matrix_to_dict(v) for v in self.vectors],
            "converged": self.converged,
            "status": self.status,
            "iterations_used": self.iterations_used,
            "seed": self.seed,
            "events": list(self.events),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class DeflationSet:
    eigenvectors: tuple[np.ndarray, ...] = ()
    eigenvalues: tuple[complex, ...] = ()

    def __len__(self) -> int:
        return len(self.eigenvectors)

    def add(self, value: complex, vector) -> "DeflationSet":
        v = c_normalize(np.asarray(vector, dtype=complex))
        return DeflationSet(self.eigenvectors + (v,), self.eigenvalues + (complex(value),))

    def max_overlap(self) -> float:
        worst = 0.0
        for i, u in enumerate(self.eigenvectors):
            for v in self.eigenvectors[i + 1 :]:
                worst = max(worst, abs(c_product(u, v)))
        return worst


@dataclass(frozen=True)
class StepResult:
    phi: np.ndarray  # unit Hermitian norm
    energy: complex
    raw: np.ndarray  # deflated, unnormalized solution
    beta: complex


@dataclass
class IhhlResult:
    eigenvalue: complex
    eigenvector: np.ndarray
    trace: IterationTrace
    residual: float

    @property
    def converged(self) -> bool:
        return self.trace.converged


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, unit Hermitian norm
    traces: list[IterationTrace]
    dim: int
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        """Every eigenpair was found (failed attempts that were retried
        with a fresh seed do not count against this)."""
        return len(self.eigenvalues) == self.dim


def build_c_operator(h, energy: complex, beta: complex = 1.0) -> FixedPointOperator:
    """``C = (H - (E - beta) I) / beta``."""
    m = _matrix(h)
    if beta == 0:
        raise ValueError("beta must be nonzero")
    c = (m - (complex(energy) - beta) * np.eye(m.shape[0])) / beta
    return FixedPointOperator(c, complex(energy), complex(beta))


def dilate(c: FixedPointOperator | np.ndarray, phi) -> DilatedSystem:
    cm = c.matrix if isinstance(c, FixedPointOperator) else np.asarray(c, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    n = cm.shape[0]
    if cm.shape != (n, n) or phi.shape != (n,):
        raise DimensionError(f"operator {cm.shape} and vector {phi.shape} do not match")
    z = np.zeros((n, n), dtype=complex)
    a = np.block([[z, cm], [cm.conj().T, z]])
    pad = np.zeros(n)
    return DilatedSystem(a, np.concatenate([phi.real, pad]), np.concatenate([phi.imag, pad]))


def _pad_pow2(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    size = 1 << max(1, (n - 1).bit_length())
    if size == n:
        return a, b
    ap = np.eye(size, dtype=complex)
    ap[:n, :n] = a
    bp = np.zeros(size, dtype=b.dtype)
    bp[:n] = b
    return ap, bp


def make_solver(kind: Solver = "classical", hhl_config: HhlConfig | None = None) -> Callable:
    """Return ``solve(A, b)`` for a Hermitian dilated matrix and real ``b``."""
    if kind == "classical":
        return lambda a, b: linear_solve(a, b)
    if kind in ("hhl-ideal", "hhl-circuit"):
        base = hhl_config or HhlConfig()
        mode = "ideal" if kind == "hhl-ideal" else "circuit"
        cfg = dataclasses.replace(base, mode=mode)

        def solve(a, b):
            n = a.shape[0]
            ap, bp = _pad_pow2(a, b)
            return hhl_solve(ap, bp, cfg)[:n]

        return solve
    raise ValueError(f"unknown solver {kind!r}; choose from {SOLVERS}")


def solve_dilated(system: DilatedSystem, solve: Callable) -> np.ndarray:
    """Lower half of ``x`` for ``b = (phi, 0)``; the imaginary solve is skipped
    when ``phi`` is real."""
    n = system.half
    x = np.asarray(solve(system.a_matrix, system.rhs_real), dtype=complex)
    if np.any(system.rhs_imag):
        x = x + 1j * np.asarray(solve(system.a_matrix, system.rhs_imag), dtype=complex)
    return x[n:]


def deflate(phi, dset: DeflationSet, tol: float = DEFAULT_TOLERANCES.quasi_null) -> np.ndarray:
    """Remove the components along ``dset`` members using the c-product."""
    out = np.asarray(phi, dtype=complex).copy()
    for v in dset.eigenvectors:
        vv = c_product(v, v)
        if abs(vv) < tol * float(np.vdot(v, v).real):
            raise QuasiNullVectorError("deflation vector has vanishing c-norm; exceptional point")
        out = out - v * (c_product(v, out) / vv)
    return out


def c_rayleigh(h, phi) -> complex:
    m = _matrix(h)
    phi = np.asarray(phi, dtype=complex)
    den = c_product(phi, phi)
    if abs(den) < DEFAULT_TOLERANCES.quasi_null * float(np.vdot(phi, phi).real):
        raise QuasiNullVectorError("c-Rayleigh quotient undefined: (phi|phi) vanishes")
    return c_product(phi, m @ phi) / den


def _shift_invert_energy(phi, raw, energy, beta) -> complex:
    # C phi* = phi with phi an eigenvector gives (phi|phi)/(phi|phi*) = (E_true - E + beta)/beta
    num = c_product(phi, phi)
    den = c_product(phi, raw)
    scale = hermitian_norm(phi) * hermitian_norm(raw)
    if abs(num) < DEFAULT_TOLERANCES.quasi_null * hermitian_norm(phi) ** 2 or abs(den) < 1e-14 * scale:
        raise QuasiNullVectorError("shift-invert energy update hit a vanishing c-product")
    return energy - beta + beta * num / den


def ihhl_step(
    phi,
    energy: complex,
    h,
    solver: Solver | Callable = "classical",
    deflation: DeflationSet = DeflationSet(),
    beta: complex = 1.0,
    update: Update = "shift-invert",
    hhl_config: HhlConfig | None = None,
) -> StepResult:
    m = _matrix(h)
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (m.shape[0],):
        raise DimensionError("iterate does not match the Hamiltonian")
    solve = solver if callable(solver) else make_solver(solver, hhl_config)

    c = build_c_operator(m, energy, beta)
    raw = solve_dilated(dilate(c, phi), solve)
    raw = deflate(raw, deflation)
    if not np.all(np.isfinite(raw)) or hermitian_norm(raw) == 0:
        raise ConvergenceError("linear solve produced an unusable iterate")

    if update == "shift-invert":
        new_e = _shift_invert_energy(phi, raw, complex(energy), complex(beta))
    elif update == "rayleigh":
        new_e = c_rayleigh(m, raw)
    else:
        raise ValueError(f"unknown update rule {update!r}; choose from {UPDATE_RULES}")
    return StepResult(raw / hermitian_norm(raw), complex(new_e), raw, complex(beta))


def default_update(solver) -> Update:
    """Shift-invert, except for the circuit backend whose phase-estimation
    error biases it; the c-Rayleigh quotient is stationary and absorbs that."""
    return "rayleigh" if solver == "hhl-circuit" else "shift-invert"


def ihhl_solve(
    h,
    phi0,
    energy0: complex | None = None,
    epsilon: float = 1e-4,
    deflation: DeflationSet = DeflationSet(),
    max_iter: int = 100,
    solver: Solver = "classical",
    update: Update | None = None,
    beta: complex = 1.0,
    hhl_config: HhlConfig | None = None,
) -> IhhlResult:
    """Iterate until ``|E_{k+1} - E_k| < epsilon``.

    A non-converged run returns with ``trace.converged`` False instead of
    raising; exceptional-point errors propagate.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    m = _matrix(h)
    update = update or default_update(solver)
    solve = make_solver(solver, hhl_config)
    phi = deflate(np.asarray(phi0, dtype=complex), deflation)
    if hermitian_norm(phi) == 0:
        raise ValueError("initial vector is zero (after deflation)")
    phi = phi / hermitian_norm(phi)
    energy = c_rayleigh(m, phi) if energy0 is None else complex(energy0)
    limit = 1e3 * float(np.linalg.norm(m))

    trace = IterationTrace(energies=[energy], vectors=[phi])
    beta = complex(beta)
    for _ in range(max_iter):
        for attempt in range(5):
            try:
                step = ihhl_step(phi, energy, m, solve, deflation, beta, update)
                break
            except SingularMatrixError:
                if attempt == 4:
                    raise
                beta += 0.1
                msg = f"C(E, beta) singular at E={energy:.6g}; beta nudged to {beta:.3g}"
                log.warning(msg)
                trace.events.append(msg)
        delta = abs(step.energy - energy)
        phi, energy = step.phi, step.energy
        trace.energies.append(energy)
        trace.deltas.append(delta)
        trace.vectors.append(phi)
        if not np.isfinite(energy) or abs(energy) > limit:
            trace.status = "diverged"
            break
        if delta < epsilon:
            trace.converged = True
            trace.status = "converged"
            break
    else:
        trace.status = "max_iter"

    residual = hermitian_norm(m @ phi - energy * phi)
    return IhhlResult(energy, phi, trace, residual)


def _random_seed_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def full_spectrum(
    h,
    seeds: Sequence | None = None,
    epsilon: float = 1e-4,
    solver: Solver = "classical",
    update: Update | None = None,
    max_iter: int = 100,
    seed: int = 0,
    beta: complex = 1.0,
    hhl_config: HhlConfig | None = None,
    duplicate_tol: float = 1e-6,
) -> SpectrumResult:
    """All ``N`` eigenpairs by repeated deflated IHHL solves.

    ``seeds`` supplies starting vectors for the first indices; the rest are
    drawn from ``numpy.random.default_rng(seed)``.  A solve that does not
    converge is recorded in ``failures`` and skipped (its vector is not used
    for deflation); a converged eigenvalue within ``duplicate_tol`` of an
    earlier one raises :class:`DeflationError`.
    """
    m = _matrix(h)
    n = m.shape[0]
    seeds = list(seeds or [])
    if len(seeds) > n:
        raise ValueError(f"{len(seeds)} seeds given for a {n}-dimensional problem")
    rng = np.random.default_rng(seed)
    dset = DeflationSet()
    found: list[tuple[complex, np.ndarray]] = []
    traces: list[IterationTrace] = []
    failures: dict[int, str] = {}

    attempts = 0
    while len(found) < n and attempts < 2 * n:
        idx = attempts
        attempts += 1
        phi0 = seeds[idx] if idx < len(seeds) else _random_seed_vector(rng, n)
        try:
            res = ihhl_solve(m, phi0, None, epsilon, dset, max_iter, solver, update, beta, hhl_config)
        except (QuasiNullVectorError, ConvergenceError, SingularMatrixError) as exc:
            failures[idx] = f"{type(exc).__name__}: {exc}"
            continue
        res.trace.seed = seed if idx >= len(seeds) else None
        traces.append(res.trace)
        if not res.converged:
            failures[idx] = f"not converged ({res.trace.status} after {res.trace.iterations_used} iterations)"
            continue
        for e, _ in found:
            if abs(e - res.eigenvalue) < duplicate_tol:
                raise DeflationError(
                    f"eigenvalue {res.eigenvalue:.6g} found twice; deflation failed"
                )
        found.append((res.eigenvalue, res.eigenvector))
        dset = dset.add(res.eigenvalue, res.eigenvector)

    values = np.array([e for e, _ in found], dtype=complex)
    vectors = np.column_stack([v for _, v in found]) if found else np.zeros((n, 0), complex)
    order = sort_eigenvalues(values)
    return SpectrumResult(values[order], vectors[:, order], traces, n, failures)
