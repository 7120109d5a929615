"""Minimal gate-level statevector simulator.

Qubit ``q`` is bit ``q`` of the basis-state index (qubit 0 least
significant).  Multi-qubit matrices passed to :meth:`Simulator.apply_unitary`
use the same convention over their ``targets`` list: ``targets[0]`` is the
least significant bit of the matrix index.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["MAX_QUBITS", "QuantumState", "Simulator", "ry_matrix"]

MAX_QUBITS = 16

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


def ry_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass
class QuantumState:
    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise ValueError(
                f"{self.num_qubits} qubits need {2**self.num_qubits} amplitudes, "
                f"got {self.amplitudes.shape}"
            )
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state is not normalized (norm {norm:.12f})")

    @classmethod
    def zero(cls, num_qubits: int) -> "QuantumState":
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amps, num_qubits)

    @classmethod
    def from_vector(cls, vec) -> "QuantumState":
        vec = np.asarray(vec, dtype=complex)
        n = int(round(math.log2(vec.size)))
        if 2**n != vec.size:
            raise ValueError("state length must be a power of two")
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("cannot prepare the zero vector")
        return cls(vec / norm, n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


class Simulator:
    """Applies gates in place to a statevector and records a gate list."""

    def __init__(self, num_qubits: int, state: QuantumState | None = None):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(f"simulator supports 1..{MAX_QUBITS} qubits, got {num_qubits}")
        self.n = num_qubits
        state = state or QuantumState.zero(num_qubits)
        if state.num_qubits != num_qubits:
            raise ValueError("state size does not match the register")
        self.amps = state.amplitudes.copy()
        self.gates: list[dict] = []

    # -- bookkeeping -------------------------------------------------------
    def _axis(self, q: int) -> int:
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} outside register of {self.n}")
        return self.n - 1 - q

    def _log(self, gate: str, targets, controls=(), params=None):
        self.gates.append(
            {"gate": gate, "targets": list(targets), "controls": list(controls), "params": params or {}}
        )

    def state(self) -> QuantumState:
        return QuantumState(self.amps.copy(), self.n)

    def to_json(self) -> str:
        return json.dumps({"num_qubits": self.n, "qubit_order": "qubit 0 = least significant", "gates": self.gates})

    # -- primitives --------------------------------------------------------
    def apply_unitary(self, u: np.ndarray, targets, controls=(), label: str = "unitary", log: bool = True):
        targets = list(targets)
        controls = list(controls)
        k = len(targets)
        u = np.asarray(u, dtype=complex)
        if u.shape != (2**k, 2**k):
            raise ValueError(f"matrix of shape {u.shape} does not act on {k} qubit(s)")
        if set(targets) & set(controls) or len(set(targets)) != k:
            raise ValueError("targets and controls must be distinct")

        psi = self.amps.reshape([2] * self.n)
        idx = [slice(None)] * self.n
        ctrl_axes = {self._axis(c) for c in controls}
        for a in ctrl_axes:
            idx[a] = 1
        sub = psi[tuple(idx)]
        remaining = [a for a in range(self.n) if a not in ctrl_axes]
        # most significant target first so the flattened index matches u
        src = [remaining.index(self._axis(t)) for t in reversed(targets)]
        dst = list(range(sub.ndim - k, sub.ndim))
        moved = np.moveaxis(sub, src, dst)
        shape = moved.shape
        out = moved.reshape(-1, 2**k) @ u.T
        sub[...] = np.moveaxis(out.reshape(shape), dst, src)
        if log:
            self._log(label, targets, controls)

    def h(self, q: int):
        self.apply_unitary(_H, [q], label="h")

    def x(self, q: int):
        self.apply_unitary(_X, [q], label="x")

    def ry(self, q: int, angle: float):
        self.apply_unitary(ry_matrix(angle), [q], label="ry", log=False)
        self._log("ry", [q], params={"angle": angle})

    def cp(self, control: int, target: int, phase: float):
        m = np.diag([1.0, np.exp(1j * phase)])
        self.apply_unitary(m, [target], [control], log=False)
        self._log("cp", [target], [control], {"phase": phase})

    def swap(self, a: int, b: int):
        m = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
        self.apply_unitary(m, [a, b], label="swap")

    def multiplexed_ry(self, angles, target: int, controls):
        """RY(angles[k]) on ``target`` for every control-register value ``k``
        (``controls[0]`` least significant)."""
        controls = list(controls)
        angles = np.asarray(angles, dtype=float)
        c = len(controls)
        if angles.shape != (2**c,):
            raise ValueError(f"need {2**c} angles, got {angles.shape}")
        psi = self.amps.reshape([2] * self.n)
        src = [self._axis(q) for q in reversed(controls)] + [self._axis(target)]
        dst = list(range(self.n - c - 1, self.n))
        moved = np.moveaxis(psi, src, dst)
        shape = moved.shape
        flat = moved.reshape(-1, 2**c, 2)
        cos, sin = np.cos(angles / 2), np.sin(angles / 2)
        a0, a1 = flat[..., 0], flat[..., 1]
        new = np.stack([cos * a0 - sin * a1, sin * a0 + cos * a1], axis=-1)
        psi[...] = np.moveaxis(new.reshape(shape), dst, src)
        self._log("multiplexed_ry", [target], controls, {"angles": angles.tolist()})

    # -- composite ---------------------------------------------------------
    def qft(self, qubits, inverse: bool = False):
        """Quantum Fourier transform on ``qubits`` (``qubits[0]`` least
        significant): ``|x> -> sum_k exp(2 pi i x k / M) |k> / sqrt(M)``."""
        qubits = list(qubits)
        n = len(qubits)
        ops = []
        for j in reversed(range(n)):
            ops.append(("h", j, None))
            for k in reversed(range(j)):
                ops.append(("cp", k, j))
        swaps = [(i, n - 1 - i) for i in range(n // 2)]
        if not inverse:
            for op in ops:
                self._qft_op(qubits, op, +1)
            for a, b in swaps:
                self.swap(qubits[a], qubits[b])
        else:
            for a, b in swaps:
                self.swap(qubits[a], qubits[b])
            for op in reversed(ops):
                self._qft_op(qubits, op, -1)

    def _qft_op(self, qubits, op, sign):
        kind, a, b = op
        if kind == "h":
            self.h(qubits[a])
        else:
            self.cp(qubits[a], qubits[b], sign * math.pi / 2 ** (b - a))

    def probabilities(self, qubits) -> np.ndarray:
        """Marginal distribution over the register ``qubits`` (first = LSB)."""
        qubits = list(qubits)
        p = np.abs(self.amps.reshape([2] * self.n)) ** 2
        keep = [self._axis(q) for q in reversed(qubits)]
        other = tuple(a for a in range(self.n) if a not in keep)
        p = p.sum(axis=other) if other else p
        # summing leaves kept axes in ascending-axis order; reorder to `keep`
        order = sorted(keep)
        p = np.transpose(p, [order.index(a) for a in keep])
        return p.reshape(-1)
