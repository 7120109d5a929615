"""Pauli-string algebra, trace decomposition and the Jordan-Wigner map.

A Pauli word is a string over ``IXYZ`` written in tensor-product order: the
leftmost character acts on the most significant qubit, so ``word[-1]`` is
qubit 0.  ``np.kron`` over the characters in order gives the matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from ..errors import DimensionError

__all__ = [
    "PAULI",
    "PauliTerm",
    "pauli_matrix",
    "pauli_decompose",
    "pauli_to_matrix",
    "multiply_words",
    "multiply_terms",
    "simplify",
    "creation",
    "annihilation",
    "jordan_wigner",
    "trotter_unitary",
]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: a * b = phase * c
_PRODUCT = {
    ("I", p): (1, p) for p in "IXYZ"
}
_PRODUCT.update({(p, "I"): (1, p) for p in "IXYZ"})
_PRODUCT.update({(p, p): (1, "I") for p in "XYZ"})
_PRODUCT.update(
    {
        ("X", "Y"): (1j, "Z"),
        ("Y", "X"): (-1j, "Z"),
        ("Y", "Z"): (1j, "X"),
        ("Z", "Y"): (-1j, "X"),
        ("Z", "X"): (1j, "Y"),
        ("X", "Z"): (-1j, "Y"),
    }
)


@dataclass(frozen=True)
class PauliTerm:
    coefficient: complex
    word: str

    def __post_init__(self):
        if not self.word or set(self.word) - set("IXYZ"):
            raise ValueError(f"invalid Pauli word {self.word!r}")

    @property
    def num_qubits(self) -> int:
        return len(self.word)

    def matrix(self) -> np.ndarray:
        return self.coefficient * pauli_matrix(self.word)


def pauli_matrix(word: str) -> np.ndarray:
    return reduce(np.kron, (PAULI[c] for c in word))


def _num_qubits(dim: int) -> int:
    m = int(round(math.log2(dim))) if dim > 0 else -1
    if m < 1 or 2**m != dim:
        raise DimensionError(f"dimension {dim} is not a power of two >= 2")
    return m


def pauli_decompose(h, atol: float = 0.0) -> list[PauliTerm]:
    """Expand ``h`` as ``sum_w c_w P_w`` with ``c_w = Tr(P_w h) / 2^m``.

    Terms with ``|c_w| <= atol`` are dropped (the default keeps every nonzero
    coefficient).
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"need a square matrix, got {h.shape}")
    m = _num_qubits(h.shape[0])
    terms = []
    for letters in itertools.product("IXYZ", repeat=m):
        word = "".join(letters)
        # Tr(P h) = sum_ij P_ji h_ij; P is a signed/phased permutation so einsum is cheap enough
        c = np.einsum("ji,ij->", pauli_matrix(word), h) / 2**m
        if abs(c) > atol and c != 0:
            terms.append(PauliTerm(complex(c), word))
    return terms


def pauli_to_matrix(terms: Sequence[PauliTerm], num_qubits: int | None = None) -> np.ndarray:
    if not terms:
        if num_qubits is None:
            raise ValueError("empty term list needs num_qubits")
        return np.zeros((2**num_qubits, 2**num_qubits), dtype=complex)
    m = terms[0].num_qubits
    if any(t.num_qubits != m for t in terms) or (num_qubits is not None and num_qubits != m):
        raise DimensionError("all Pauli words must act on the same register")
    return sum(t.matrix() for t in terms)


def multiply_words(a: str, b: str) -> tuple[complex, str]:
    if len(a) != len(b):
        raise DimensionError("Pauli words act on different registers")
    phase: complex = 1
    out = []
    for x, y in zip(a, b):
        ph, c = _PRODUCT[(x, y)]
        phase *= ph
        out.append(c)
    return phase, "".join(out)


def simplify(terms: Iterable[PauliTerm], atol: float = 1e-14) -> list[PauliTerm]:
    acc: dict[str, complex] = {}
    for t in terms:
        acc[t.word] = acc.get(t.word, 0) + t.coefficient
    return [PauliTerm(c, w) for w, c in sorted(acc.items()) if abs(c) > atol]


def multiply_terms(left: Sequence[PauliTerm], right: Sequence[PauliTerm]) -> list[PauliTerm]:
    out = []
    for a in left:
        for b in right:
            ph, w = multiply_words(a.word, b.word)
            out.append(PauliTerm(a.coefficient * b.coefficient * ph, w))
    return simplify(out)


def _ladder(j: int, n_modes: int, sign: int) -> list[PauliTerm]:
    if not 0 <= j < n_modes:
        raise IndexError(f"mode {j} outside 0..{n_modes - 1}")
    # qubit q sits at string position n-1-q; Z string on qubits below j
    base = ["I"] * n_modes
    for q in range(j):
        base[n_modes - 1 - q] = "Z"
    xw, yw = base.copy(), base.copy()
    xw[n_modes - 1 - j] = "X"
    yw[n_modes - 1 - j] = "Y"
    return [PauliTerm(0.5, "".join(xw)), PauliTerm(0.5j * sign, "".join(yw))]


def creation(j: int, n_modes: int) -> list[PauliTerm]:
    """``a_j^dagger = (X_j - i Y_j)/2 (x) Z_{j-1} ... Z_0``."""
    return _ladder(j, n_modes, -1)


def annihilation(j: int, n_modes: int) -> list[PauliTerm]:
    """``a_j = (X_j + i Y_j)/2 (x) Z_{j-1} ... Z_0``."""
    return _ladder(j, n_modes, +1)


def jordan_wigner(i: int, j: int, n_modes: int) -> list[PauliTerm]:
    """Pauli expansion of the one-body operator ``a_i^dagger a_j``."""
    return multiply_terms(creation(i, n_modes), annihilation(j, n_modes))


def trotter_unitary(terms: Sequence[PauliTerm], t: float, steps: int = 1) -> np.ndarray:
    """First-order Trotter approximation of ``exp(i H t)`` for Hermitian
    ``H = sum c_w P_w``.  Limited to four qubits; it is a cross-check only."""
    if not terms:
        raise ValueError("no terms")
    m = terms[0].num_qubits
    if m > 4:
        raise ValueError("Trotter cross-check is limited to 4 qubits")
    if any(abs(complex(x.coefficient).imag) > 1e-12 for x in terms):
        raise ValueError("Trotterization needs real coefficients (Hermitian H)")
    dt = t / steps
    eye = np.eye(2**m, dtype=complex)
    step = eye
    for term in terms:
        ang = complex(term.coefficient).real * dt
        # P^2 = I  =>  exp(i a P) = cos a I + i sin a P
        step = (math.cos(ang) * eye + 1j * math.sin(ang) * pauli_matrix(term.word)) @ step
    return np.linalg.matrix_power(step, steps)
