"""Harrow-Hassidim-Lloyd linear solver on the statevector simulator.

Register layout (qubit 0 least significant)::

    system: 0 .. m-1        clock: m .. m+n_c-1        ancilla: m+n_c

The clock reads eigenphases of ``exp(i A t)`` in two's complement, so
negative eigenvalues of ``A`` (unavoidable for Hermitian dilations) are
inverted with the right sign.  After uncomputing phase estimation the
ancilla and the clock are post-selected on ``|1>`` and ``|0...0>``; the
surviving system amplitudes are ``(C / ||b||) A^{-1} b`` up to phase-estimation
error, and the simulator reads them out directly, phase included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import DimensionError, PostSelectionError, SingularMatrixError
from ..linalg_core import is_hermitian
from .phase import controlled_powers, evolve_unitary, phase_to_eigenvalue
from .statevector import MAX_QUBITS, QuantumState, Simulator

__all__ = ["HhlConfig", "HhlResult", "gershgorin_bound", "spectral_bound", "hhl_solve", "hhl_circuit"]


def gershgorin_bound(a) -> float:
    """Upper bound on the spectral radius: max absolute row sum."""
    return float(np.max(np.sum(np.abs(a), axis=1)))


def spectral_bound(a, kind: str = "norm") -> float:
    if kind == "norm":
        return float(np.linalg.norm(a, 2))
    if kind == "gershgorin":
        return gershgorin_bound(a)
    raise ValueError(f"unknown spectral bound {kind!r}")


@dataclass(frozen=True)
class HhlConfig:
    clock_qubits: int = 8
    evolution_time: float | None = None  # default pi / (1.1 * spectral bound)
    rotation_constant: float | None = None  # default 2 pi / (2^n_c t)
    mode: Literal["circuit", "ideal"] = "circuit"
    shots: int | None = None  # None: exact amplitudes
    seed: int = 0
    # "norm": exact 2-norm, the tightest alias-free choice; "gershgorin": row-sum bound
    spectral_bound: Literal["norm", "gershgorin"] = "norm"

    def __post_init__(self):
        if self.clock_qubits < 1:
            raise ValueError("clock_qubits must be >= 1")
        if self.mode not in ("circuit", "ideal"):
            raise ValueError(f"unknown HHL mode {self.mode!r}")
        if self.rotation_constant is not None and not self.rotation_constant > 0:
            raise ValueError("rotation_constant must be positive")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be positive")

    def time_for(self, a) -> float:
        bound = spectral_bound(a, self.spectral_bound)
        t = self.evolution_time if self.evolution_time is not None else math.pi / (1.1 * bound)
        # aliasing is governed by the true spectral radius whatever bound picked t
        if t * spectral_bound(a, "norm") >= math.pi:
            raise ValueError(
                f"evolution time {t:.4g} aliases eigenvalues (t * ||A|| >= pi)"
            )
        return t

    def constant_for(self, t: float) -> float:
        c_min = 2 * math.pi / (2**self.clock_qubits * t)
        if self.rotation_constant is None:
            return c_min
        # larger C would leave rotation angles undefined for the smallest readings
        return min(self.rotation_constant, c_min)


@dataclass(frozen=True)
class HhlResult:
    x: np.ndarray
    success_probability: float
    evolution_time: float
    rotation_constant: float
    gates: int


def _ideal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    scale = max(np.max(np.abs(w)), np.finfo(float).tiny)
    if np.min(np.abs(w)) <= 1e-12 * scale:
        raise SingularMatrixError("A is singular; ideal HHL cannot invert it")
    return v @ ((v.conj().T @ b) / w)


def hhl_circuit(a: np.ndarray, b: np.ndarray, cfg: HhlConfig) -> HhlResult:
    dim = a.shape[0]
    m = int(round(math.log2(dim)))
    nc = cfg.clock_qubits
    n = m + nc + 1
    if n > MAX_QUBITS:
        raise ValueError(f"HHL register of {n} qubits exceeds the simulator limit {MAX_QUBITS}")
    t = cfg.time_for(a)
    c = cfg.constant_for(t)
    bnorm = float(np.linalg.norm(b))

    amps = np.zeros(2**n, dtype=complex)
    amps[:dim] = b / bnorm
    sim = Simulator(n, QuantumState(amps, n))
    system = list(range(m))
    clock = list(range(m, m + nc))
    anc = m + nc

    powers = [evolve_unitary(a, t * 2**j) for j in range(nc)]
    for q in clock:
        sim.h(q)
    controlled_powers(sim, powers, system, clock)
    sim.qft(clock, inverse=True)

    lam = phase_to_eigenvalue(np.arange(2**nc), nc, t)
    ratio = np.zeros_like(lam)
    nz = lam != 0
    ratio[nz] = np.clip(c / lam[nz], -1.0, 1.0)
    sim.multiplexed_ry(2 * np.arcsin(ratio), anc, clock)

    sim.qft(clock)
    controlled_powers(sim, powers, system, clock, inverse=True)
    for q in clock:
        sim.h(q)

    # index = sys + 2^m * clock + 2^(m+nc) * anc; keep anc = 1, clock = 0
    kept = sim.amps[2 ** (m + nc) : 2 ** (m + nc) + dim].copy()
    prob = float(np.vdot(kept, kept).real)
    if prob < 1e-12:
        raise PostSelectionError(f"post-selection probability {prob:.3e} below 1e-12")

    if cfg.shots is not None:
        rng = np.random.default_rng(cfg.seed)
        p = np.abs(kept) ** 2 / prob
        counts = rng.multinomial(cfg.shots, p)
        kept = np.sqrt(counts / cfg.shots * prob) * np.exp(1j * np.angle(kept))

    x = kept * bnorm / c
    return HhlResult(x, prob, t, c, len(sim.gates))


def hhl_solve(a, b, cfg: HhlConfig = HhlConfig()) -> np.ndarray:
    """Solve ``A x = b`` for Hermitian ``A`` (dimension a power of two)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"need a square matrix, got {a.shape}")
    dim = a.shape[0]
    if dim < 2 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} must be a power of two; pad the system")
    if b.shape != (dim,):
        raise DimensionError("rhs length does not match A")
    if not is_hermitian(a, rtol=1e-10):
        raise ValueError("HHL needs a Hermitian matrix")
    if not np.any(b):
        raise ValueError("right-hand side is zero")
    b = b.astype(complex)
    if cfg.mode == "ideal":
        return _ideal(a, b)
    return hhl_circuit(a, b, cfg).x
