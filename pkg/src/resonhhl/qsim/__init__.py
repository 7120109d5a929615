"""Statevector simulation of phase estimation and the HHL linear solver."""

from .hhl import HhlConfig, HhlResult, gershgorin_bound, hhl_circuit, hhl_solve, spectral_bound
from .pauli import (
    PauliTerm,
    annihilation,
    creation,
    jordan_wigner,
    multiply_terms,
    pauli_decompose,
    pauli_matrix,
    pauli_to_matrix,
    trotter_unitary,
)
from .phase import evolve_unitary, is_unitary, phase_to_eigenvalue, qpe
from .statevector import MAX_QUBITS, QuantumState, Simulator

__all__ = [
    "HhlConfig",
    "HhlResult",
    "MAX_QUBITS",
    "PauliTerm",
    "QuantumState",
    "Simulator",
    "annihilation",
    "creation",
    "evolve_unitary",
    "gershgorin_bound",
    "hhl_circuit",
    "hhl_solve",
    "is_unitary",
    "jordan_wigner",
    "multiply_terms",
    "pauli_decompose",
    "pauli_matrix",
    "pauli_to_matrix",
    "phase_to_eigenvalue",
    "qpe",
    "spectral_bound",
    "trotter_unitary",
]
