"""Eigenvector continuation from bound states to complex-scaled resonances.

Ground states computed at a handful of couplings ``lam_i`` where the system
is bound span a small subspace.  Projecting the complex-scaled Hamiltonian at
the target coupling onto that subspace (with the c-product, since the
operator is complex symmetric) gives a small matrix whose spectrum contains
the resonance.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, UnboundTrainingPointError
from .linalg_core import gram_schmidt, is_complex_symmetric
from .physics_alpha import (
    BUCK_POTENTIAL,
    ChannelSpec,
    PotentialParams,
    RadialBasis,
    ScaledHamiltonian,
    ScalingAngle,
    build_hamiltonian,
)

log = logging.getLogger(__name__)

__all__ = [
    "REFERENCE_RESONANCE",
    "TrainingPoint",
    "ECSubspace",
    "ECMatrices",
    "training_lambdas",
    "solve_training_set",
    "build_subspace",
    "project_target",
    "project_matrix",
    "resonance_candidate",
]

# R-matrix value for the alpha-alpha G-wave resonance, MeV
REFERENCE_RESONANCE = 11.8079 - 1.8085j


@dataclass(frozen=True)
class TrainingPoint:
    lam: float
    energy: float
    wavefunction: np.ndarray

    def __post_init__(self):
        if not self.energy < 0:
            raise UnboundTrainingPointError(
                f"unbound training point: lambda={self.lam} has lowest energy {self.energy:.6g} MeV"
            )
        if np.max(np.abs(np.imag(self.wavefunction)), initial=0.0) > 1e-12:
            raise ValueError("training wavefunctions must be real")


@dataclass(frozen=True)
class ECSubspace:
    basis_vectors: np.ndarray  # columns
    source_lambdas: tuple[float, ...]
    warnings: tuple[str, ...] = ()

    @property
    def dimension(self) -> int:
        return self.basis_vectors.shape[1]

    def gram(self) -> np.ndarray:
        u = self.basis_vectors
        return u.conj().T @ u


@dataclass(frozen=True)
class ECMatrices:
    h_ec: np.ndarray
    n_ec: np.ndarray
    target_lambda: float
    theta: ScalingAngle
    meta: dict = field(default_factory=dict)


def training_lambdas(lo: float = 1.45, hi: float = 1.75, count: int = 8) -> np.ndarray:
    """Uniform grid with both endpoints included."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if count == 1:
        return np.array([float(lo)])
    return lo + (hi - lo) * np.arange(count) / (count - 1)


def _ground_state(h: ScaledHamiltonian) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh(h.matrix.real)
    vec = v[:, 0]
    # sign convention: largest-magnitude component positive
    k = int(np.argmax(np.abs(vec)))
    if vec[k] < 0:
        vec = -vec
    return float(w[0]), vec / np.linalg.norm(vec)


def solve_training_set(
    lambdas: Sequence[float],
    basis: RadialBasis,
    channel: ChannelSpec,
    potential: PotentialParams = BUCK_POTENTIAL,
    workers: int | None = None,
) -> list[TrainingPoint]:
    """Lowest eigenpair of the unscaled Hamiltonian at each coupling.

    Raises :class:`UnboundTrainingPointError` if any lowest eigenvalue is
    non-negative.
    """

    def one(lam: float) -> TrainingPoint:
        h = build_hamiltonian(lam, ScalingAngle(0.0), basis, channel, potential)
        energy, vec = _ground_state(h)
        return TrainingPoint(float(lam), energy, vec.astype(complex))

    lambdas = [float(x) for x in lambdas]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, lambdas))
    return [one(lam) for lam in lambdas]


def build_subspace(points: Sequence[TrainingPoint]) -> ECSubspace:
    if not points:
        raise ValueError("need at least one training point")
    vecs = [p.wavefunction for p in points]
    ortho = gram_schmidt(vecs, product="hermitian")
    notes: tuple[str, ...] = ()
    if len(ortho) < len(vecs):
        msg = f"dropped {len(vecs) - len(ortho)} linearly dependent training vector(s)"
        log.warning(msg)
        notes = (msg,)
    u = np.column_stack(ortho)
    return ECSubspace(u, tuple(p.lam for p in points), notes)


def project_matrix(subspace: ECSubspace, h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """c-product projection ``U^T H U`` and overlap ``U^T U``."""
    u = subspace.basis_vectors
    if h.shape != (u.shape[0], u.shape[0]):
        raise DimensionError(
            f"subspace lives in dimension {u.shape[0]}, Hamiltonian is {h.shape}"
        )
    return u.T @ h @ u, u.T @ u


def project_target(
    subspace: ECSubspace,
    lam_target: float,
    theta,
    basis: RadialBasis,
    channel: ChannelSpec,
    potential: PotentialParams = BUCK_POTENTIAL,
) -> ECMatrices:
    angle = theta if isinstance(theta, ScalingAngle) else ScalingAngle(float(theta))
    h = build_hamiltonian(lam_target, angle, basis, channel, potential)
    h_ec, n_ec = project_matrix(subspace, h.matrix)
    h_ec = 0.5 * (h_ec + h_ec.T)
    if not is_complex_symmetric(h_ec):
        raise ArithmeticError("projected Hamiltonian lost complex symmetry")
    return ECMatrices(h_ec, n_ec, float(lam_target), angle, {"source_lambdas": list(subspace.source_lambdas)})


def resonance_candidate(eigenvalues, reference: complex = REFERENCE_RESONANCE) -> complex:
    """Eigenvalue nearest ``reference`` in the complex plane."""
    w = np.asarray(eigenvalues, dtype=complex)
    return complex(w[np.argmin(np.abs(w - reference))])
