import json

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from resonhhl.errors import DimensionError, QuasiNullVectorError, RedundantBasisError, SingularMatrixError
from resonhhl.linalg_core import (
    c_normalize,
    c_product,
    dense_eigen,
    generalized_eigen,
    gram_schmidt,
    hermitian_norm,
    is_hermitian,
    linear_solve,
    matrix_from_dict,
    matrix_to_dict,
)
from resonhhl.qsim import HhlConfig, hhl_solve
from resonhhl.ihhl import build_c_operator, c_rayleigh, dilate


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# c-product and norms

def test_c_product_unit_vector():
    e1 = np.array([1, 0, 0], dtype=complex)
    assert c_product(e1, e1) == 1


def test_c_product_can_vanish():
    v = np.array([1, 1j])
    assert c_product(v, v) == 0
    with pytest.raises(QuasiNullVectorError):
        c_normalize(v)


def test_c_product_has_no_conjugation():
    u = np.array([1j, 2])
    assert c_product(u, u) == pytest.approx(-1 + 4)


def test_c_product_length_mismatch():
    with pytest.raises(DimensionError):
        c_product(np.ones(2), np.ones(3))


def test_reference_eigenvectors_are_c_orthogonal(fx):
    assert abs(c_product(fx.eigvec_first, fx.eigvec_second)) < 1e-2


def test_hermitian_norm_cases(fx):
    assert hermitian_norm(np.array([3, 4j])) == pytest.approx(5.0)
    assert hermitian_norm(np.zeros(4)) == 0.0
    assert hermitian_norm(fx.eigvec_first) == pytest.approx(1.0, abs=5e-3)


@settings(max_examples=50, deadline=None)
@given(
    arrays(np.complex128, 5, elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)),
    arrays(np.complex128, 5, elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)),
)
def test_c_product_symmetric(u, v):
    # equal up to summation-order rounding
    scale = float(np.sum(np.abs(u) * np.abs(v))) + 1e-300
    assert abs(c_product(u, v) - c_product(v, u)) <= 1e-13 * scale


# orthonormalization

def test_gram_schmidt_simple():
    out = gram_schmidt([np.array([1.0, 0.0]), np.array([1.0, 1.0])])
    assert len(out) == 2
    assert np.allclose(out[0], [1, 0]) and np.allclose(out[1], [0, 1])


def test_gram_schmidt_drops_dependent():
    assert len(gram_schmidt([np.array([1.0, 0.0]), np.array([2.0, 0.0])])) == 1


@pytest.mark.parametrize("product", ["hermitian", "c-product"])
def test_gram_schmidt_identity_gram(rng, product):
    vecs = list(random_complex(rng, 8, 12))
    out = np.column_stack(gram_schmidt(vecs, product=product))
    gram = out.conj().T @ out if product == "hermitian" else out.T @ out
    assert np.max(np.abs(gram - np.eye(8))) < 1e-12


# eigensolvers

def test_dense_eigen_identity():
    assert np.allclose(dense_eigen(np.eye(4)).eigenvalues, 1.0)


def test_dense_eigen_fixture(fx):
    w = dense_eigen(fx.h).eigenvalues
    for ref in fx.e_diag:
        got = w[np.argmin(np.abs(w - ref))]
        assert abs(got.real - ref.real) <= 0.01 and abs(got.imag - ref.imag) <= 0.01


def test_dense_eigen_ordering(fx):
    w = dense_eigen(fx.h).eigenvalues
    assert np.all(np.diff(w.real) >= 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dense_eigen_against_polynomial_roots(rng, n):
    a = random_complex(rng, n, n)
    coeffs = np.poly(a)  # characteristic polynomial
    roots = mpmath.polyroots([mpmath.mpc(c.real, c.imag) for c in coeffs], maxsteps=200, extraprec=60)
    roots = np.array([complex(r) for r in roots])
    w = dense_eigen(a).eigenvalues
    for r in roots:
        assert np.min(np.abs(w - r)) < 1e-8


def test_dense_eigen_residual_and_c_orthogonality(fx):
    dec = dense_eigen(fx.h)
    assert np.all(dec.residual_norms <= 1e-10)
    v = np.column_stack([c_normalize(dec.eigenvectors[:, k]) for k in range(8)])
    off = v.T @ v - np.eye(8)
    assert np.max(np.abs(off)) < 1e-8


def test_dense_eigen_hermitian_real(rng):
    a = random_complex(rng, 6, 6)
    h = a + a.conj().T
    w = dense_eigen(h).eigenvalues
    assert np.max(np.abs(w.imag)) <= 1e-10 * np.linalg.norm(h)


def test_linear_solve_cases():
    b = np.array([1 + 2j, -3.0])
    assert np.allclose(linear_solve(np.eye(2), b), b)
    assert np.allclose(linear_solve(np.diag([1.0, 2.0]), np.ones(2)), [1, 0.5])


def test_linear_solve_singular():
    with pytest.raises(SingularMatrixError):
        linear_solve(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))


@pytest.mark.parametrize("n", [2, 8, 32])
def test_linear_solve_round_trip(rng, n):
    a = random_complex(rng, n, n) + n * np.eye(n)
    b = random_complex(rng, n)
    x = linear_solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(b)


def test_linear_solve_matches_ideal_hhl_on_dilated_fixture(fx):
    phi = fx.seed_first / hermitian_norm(fx.seed_first)
    sys_ = dilate(build_c_operator(fx.h, c_rayleigh(fx.h, phi)), phi)
    x = linear_solve(sys_.a_matrix, sys_.rhs_real)
    y = hhl_solve(sys_.a_matrix, sys_.rhs_real, HhlConfig(mode="ideal"))
    assert np.max(np.abs(x - y)) < 1e-8


def test_generalized_eigen_cases(fx):
    w = generalized_eigen(np.diag([2.0, 6.0]), np.diag([1.0, 2.0])).eigenvalues
    assert np.allclose(np.sort(w.real), [2, 3])
    assert np.allclose(generalized_eigen(fx.h, np.eye(8)).eigenvalues, dense_eigen(fx.h).eigenvalues)


def test_generalized_eigen_redundant_basis():
    with pytest.raises(RedundantBasisError):
        generalized_eigen(np.eye(2), np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_is_hermitian():
    assert is_hermitian(np.array([[1, 1j], [-1j, 2]]))
    assert not is_hermitian(np.array([[1, 1j], [1j, 2]]))


# serialization

def test_json_round_trip_is_lossless(rng):
    m = random_complex(rng, 3, 5)
    back = matrix_from_dict(json.loads(json.dumps(matrix_to_dict(m))))
    assert np.array_equal(m, back)


def test_json_vector_round_trip(fx):
    v = matrix_from_dict(matrix_to_dict(fx.seed_first), vector=True)
    assert np.array_equal(v, fx.seed_first)


def test_json_entry_count_checked():
    with pytest.raises(DimensionError):
        matrix_from_dict({"rows": 2, "cols": 2, "re": [1, 2, 3], "im": [0, 0, 0]})
