"""Dense complex linear algebra used throughout the package.

Vectors are 1-D complex ``numpy`` arrays and matrices are 2-D ones.  Two
pairings appear side by side:

* the Hermitian inner product ``<u, v> = sum(conj(u) * v)``, and
* the c-product ``(u | v) = sum(u * v)``, bilinear with no conjugation, which
  is the natural pairing for complex-symmetric (complex-scaled) operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import (
    DimensionError,
    EigenSolverError,
    QuasiNullVectorError,
    RedundantBasisError,
    SingularMatrixError,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "EigenDecomposition",
    "as_vector",
    "as_matrix",
    "c_product",
    "c_norm",
    "c_normalize",
    "hermitian_norm",
    "gram_schmidt",
    "dense_eigen",
    "linear_solve",
    "generalized_eigen",
    "is_complex_symmetric",
    "is_hermitian",
    "sort_eigenvalues",
    "matrix_to_dict",
    "matrix_from_dict",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds of this module; pass a modified copy to override."""

    eigen_residual: float = 1e-10
    generalized_residual: float = 1e-9
    solve_residual: float = 1e-10
    max_condition: float = 1e12
    quasi_null: float = 1e-10
    orthonormality: float = 1e-12
    dependence: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns paired with eigenvalues
    residual_norms: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def pair(self, k: int) -> tuple[complex, np.ndarray]:
        return complex(self.eigenvalues[k]), self.eigenvectors[:, k]


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite entries")
    return arr


def as_matrix(m, square: bool = False) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a non-empty matrix, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def c_product(u, v) -> complex:
    """Bilinear pairing ``sum(u_i * v_i)`` without complex conjugation."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape} vs {v.shape}")
    return complex(np.sum(u * v))


def hermitian_norm(v) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=complex)))


def c_norm(v) -> complex:
    """Principal square root of ``(v | v)``; may be complex, or zero."""
    return complex(np.sqrt(complex(c_product(v, v))))


def c_normalize(v, tol: float = DEFAULT_TOLERANCES.quasi_null) -> np.ndarray:
    """Scale ``v`` so that ``(v | v) = 1``.

    The quasi-null test is relative to the Hermitian norm, so it does not
    depend on the scale of ``v``.
    """
    v = np.asarray(v, dtype=complex)
    cc = c_product(v, v)
    h2 = float(np.vdot(v, v).real)
    if h2 == 0.0 or abs(cc) < tol * h2:
        raise QuasiNullVectorError(
            f"c-norm vanishes (|(v|v)| = {abs(cc):.3e}, <v,v> = {h2:.3e}); "
            "exceptional point?"
        )
    return v / np.sqrt(cc)


def _pair(product: str):
    if product == "hermitian":
        return lambda u, v: complex(np.vdot(u, v))
    if product == "c-product":
        return c_product
    raise ValueError(f"unknown product {product!r}")


def gram_schmidt(
    vectors: Iterable,
    product: Literal["hermitian", "c-product"] = "hermitian",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[np.ndarray]:
    """Orthonormalize ``vectors`` in order, dropping linearly dependent ones.

    Modified Gram-Schmidt with one full re-orthogonalization pass, which keeps
    the Gram matrix at the identity to ~1e-15 even for the nearly parallel
    ground states used as continuation training data.

    Under the c-product a vector whose c-norm collapses after projection while
    its Hermitian norm does not raises :class:`QuasiNullVectorError`.
    """
    vecs = [np.asarray(v, dtype=complex) for v in vectors]
    if not vecs:
        raise ValueError("gram_schmidt needs at least one vector")
    n = vecs[0].shape
    if any(v.shape != n or v.ndim != 1 for v in vecs):
        raise DimensionError("all vectors must be 1-D with equal length")
    inner = _pair(product)

    out: list[np.ndarray] = []
    for v in vecs:
        scale = hermitian_norm(v)
        if scale == 0.0:
            continue
        w = v.copy()
        for _ in range(2):
            for q in out:
                w = w - q * inner(q, w)
        if hermitian_norm(w) <= tol.dependence * scale:
            continue
        if product == "hermitian":
            out.append(w / hermitian_norm(w))
        else:
            out.append(c_normalize(w, tol=tol.quasi_null))
    return out


def is_hermitian(a, rtol: float = 1e-12) -> bool:
    a = np.asarray(a)
    scale = max(np.linalg.norm(a), 1.0)
    return bool(np.linalg.norm(a - a.conj().T) <= rtol * scale)


def is_complex_symmetric(a, rtol: float = 1e-10) -> bool:
    a = np.asarray(a)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    return bool(np.linalg.norm(a - a.T) <= rtol * scale)


def sort_eigenvalues(values: Sequence[complex]) -> np.ndarray:
    """Index order: ascending real part, ties broken by ascending imaginary part."""
    values = np.asarray(values, dtype=complex)
    return np.lexsort((values.imag, values.real))


def _residuals(h, values, vectors, n=None) -> np.ndarray:
    rhs = vectors if n is None else n @ vectors
    return np.linalg.norm(h @ vectors - rhs * values[None, :], axis=0)


def dense_eigen(h, tol: Tolerances = DEFAULT_TOLERANCES) -> EigenDecomposition:
    """All eigenpairs of a dense square matrix, sorted by ascending real part.

    Eigenvectors have unit Hermitian norm.  Hermitian input goes through the
    Hermitian driver so its eigenvalues come back exactly real.
    """
    h = as_matrix(h, square=True)
    try:
        if is_hermitian(h, rtol=1e-14):
            w, v = np.linalg.eigh(h)
            w = w.astype(complex)
        else:
            w, v = np.linalg.eig(h)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(str(exc)) from exc

    order = sort_eigenvalues(w)
    w, v = w[order], v[:, order]
    v = v / np.linalg.norm(v, axis=0)[None, :]
    res = _residuals(h, w, v)
    scale = max(np.linalg.norm(h), np.finfo(float).tiny)
    if np.any(res > tol.eigen_residual * scale):
        raise EigenSolverError(
            f"eigen residual {res.max() / scale:.3e} exceeds {tol.eigen_residual:.1e}"
        )
    return EigenDecomposition(w, v, res)


def linear_solve(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Solve ``a x = b`` classically; refuses ill-conditioned systems."""
    a = as_matrix(a, square=True)
    b = as_vector(b)
    if b.shape[0] != a.shape[0]:
        raise DimensionError(f"rhs length {b.shape[0]} does not match {a.shape}")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > tol.max_condition:
        raise SingularMatrixError(f"matrix is singular or ill-conditioned (cond={cond:.3e})")
    x = np.linalg.solve(a, b)
    bn = np.linalg.norm(b)
    if bn > 0 and np.linalg.norm(a @ x - b) > tol.solve_residual * bn:
        # one step of iterative refinement before giving up
        x = x + np.linalg.solve(a, b - a @ x)
        if np.linalg.norm(a @ x - b) > tol.solve_residual * bn:
            raise SingularMatrixError("linear solve did not reach the residual bound")
    return x


def generalized_eigen(h, n, tol: Tolerances = DEFAULT_TOLERANCES) -> EigenDecomposition:
    """Solve ``h v = E n v``; ``n`` must be invertible."""
    import scipy.linalg

    h = as_matrix(h, square=True)
    n = as_matrix(n, square=True)
    if h.shape != n.shape:
        raise DimensionError(f"shape mismatch {h.shape} vs {n.shape}")
    cond = np.linalg.cond(n)
    if not np.isfinite(cond) or cond > tol.max_condition:
        raise RedundantBasisError(
            f"overlap matrix is singular (cond={cond:.3e}); redundant basis"
        )
    try:
        w, v = scipy.linalg.eig(h, n)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(str(exc)) from exc
    order = sort_eigenvalues(w)
    w, v = w[order].astype(complex), v[:, order].astype(complex)
    v = v / np.linalg.norm(v, axis=0)[None, :]
    res = _residuals(h, w, v, n)
    scale = max(np.linalg.norm(h), np.finfo(float).tiny)
    if np.any(res > tol.generalized_residual * scale):
        raise EigenSolverError(
            f"generalized residual {res.max() / scale:.3e} exceeds bound"
        )
    return EigenDecomposition(w, v, res)


def matrix_to_dict(m) -> dict:
    """Serialize a matrix (or vector, as a column) to the row-major JSON schema."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr[:, None]
    rows, cols = arr.shape
    flat = arr.reshape(-1)
    return {
        "rows": int(rows),
        "cols": int(cols),
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }


def matrix_from_dict(d: dict, vector: bool = False) -> np.ndarray:
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", [0.0] * len(re)), dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix record: {exc}") from exc
    if rows <= 0 or cols <= 0 or re.size != rows * cols or im.size != rows * cols:
        raise DimensionError(f"entry count does not match {rows}x{cols}")
    arr = (re + 1j * im).reshape(rows, cols)
    if vector:
        if cols != 1:
            raise DimensionError("vector record must have cols == 1")
        return arr[:, 0]
    return arr
