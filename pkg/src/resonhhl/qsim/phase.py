"""Time evolution and quantum phase estimation."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionError
from ..linalg_core import is_hermitian
from .statevector import QuantumState, Simulator

__all__ = ["evolve_unitary", "is_unitary", "controlled_powers", "qpe"]


def evolve_unitary(h, t: float) -> np.ndarray:
    """Exact ``exp(i H t)`` for Hermitian ``H`` via its eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"need a square matrix, got {h.shape}")
    if not is_hermitian(h, rtol=1e-10):
        raise ValueError("evolve_unitary needs a Hermitian generator")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(1j * w * t)) @ v.conj().T


def is_unitary(u, atol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        u.conj().T @ u, np.eye(u.shape[0]), atol=atol, rtol=0
    )


def controlled_powers(sim: Simulator, powers, system, clock, inverse: bool = False):
    """Apply ``U^(2^j)`` controlled on ``clock[j]``; ``powers[j]`` is that matrix."""
    order = range(len(clock))
    if inverse:
        order = reversed(order)
    for j in order:
        u = powers[j].conj().T if inverse else powers[j]
        sim.apply_unitary(u, system, [clock[j]], label=f"c-U^{2**j}" + ("^dag" if inverse else ""))


def qpe(u, state: QuantumState, clock: int) -> np.ndarray:
    """Run phase estimation of ``u`` on ``state`` with ``clock`` qubits.

    Returns the probability of each clock reading ``k``; an eigenstate with
    eigenphase ``exp(2 pi i k / 2^clock)`` yields a point mass at ``k``.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("qpe needs a unitary matrix")
    m = state.num_qubits
    if u.shape != (2**m, 2**m):
        raise DimensionError("unitary does not act on the given state")
    if clock < 1:
        raise ValueError("need at least one clock qubit")
    n = m + clock
    full = np.zeros(2**n, dtype=complex)
    full[: 2**m] = state.amplitudes
    sim = Simulator(n, QuantumState(full, n))
    system = list(range(m))
    clk = list(range(m, n))
    for q in clk:
        sim.h(q)
    powers = [np.linalg.matrix_power(u, 2**j) for j in range(clock)]
    controlled_powers(sim, powers, system, clk)
    sim.qft(clk, inverse=True)
    return sim.probabilities(clk)


def phase_to_eigenvalue(k, clock: int, t: float) -> np.ndarray:
    """Two's-complement reading of clock value ``k`` as an eigenvalue of the
    generator: readings in the upper half of the register are negative."""
    k = np.asarray(k)
    m = 2**clock
    signed = np.where(k >= m // 2, k - m, k)
    return 2 * math.pi * signed / (m * t)
