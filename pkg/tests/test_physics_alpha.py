import math

import numpy as np
import pytest

from resonhhl.errors import QuadratureError, UndefinedRotationError
from resonhhl.linalg_core import dense_eigen, is_complex_symmetric
from resonhhl.physics_alpha import (
    BUCK_POTENTIAL,
    ChannelSpec,
    PotentialParams,
    RadialBasis,
    ScalingAngle,
    basis_operators,
    build_hamiltonian,
    check_angle,
    default_coulomb_strength,
    default_hbar2_over_2mu,
    gaussian_potential,
    radial_integral,
    verify_matrix_elements,
)

RESONANCE = 11.8079 - 1.8085j
THETA20 = ScalingAngle.from_degrees(20.0)


def test_potential_values():
    assert gaussian_potential(0.0) == pytest.approx(-122.6225)
    assert gaussian_potential(2.132) == pytest.approx(-122.6225 / math.e)
    assert gaussian_potential(2.132) == pytest.approx(-45.1103, abs=1e-4)
    assert abs(gaussian_potential(200.0)) < 1e-300


def test_potential_scales_with_lambda():
    p = BUCK_POTENTIAL.with_lambda(1.5)
    assert gaussian_potential(1.0, p) == pytest.approx(1.5 * gaussian_potential(1.0))


def test_potential_complex_argument():
    r = 1.3 * np.exp(1j * 0.2)
    expected = -122.6225 * np.exp(-(r * r) / 2.132**2)
    assert gaussian_potential(r) == pytest.approx(expected)


def test_default_constants():
    # 4He mass and e^2 from CODATA; hbar^2/2mu with mu = m_alpha / 2
    assert default_hbar2_over_2mu() == pytest.approx(10.4465, abs=1e-3)
    assert default_coulomb_strength() == pytest.approx(4 * 1.439965, abs=1e-5)


@pytest.mark.parametrize(
    "make",
    [
        lambda: PotentialParams(a=0.0),
        lambda: ChannelSpec(L=-1),
        lambda: ChannelSpec(hbar2_over_2mu=0.0),
        lambda: ChannelSpec(coulomb_strength=-1.0),
        lambda: RadialBasis(size=0),
        lambda: RadialBasis(b0=-0.1),
        lambda: RadialBasis(ratio=1.0),
        lambda: ScalingAngle(math.pi / 4),
        lambda: ScalingAngle(-0.1),
    ],
)
def test_invalid_parameters_rejected(make):
    with pytest.raises(ValueError):
        make()


def test_basis_widths_geometric():
    b = RadialBasis(5, 0.3, 1.35)
    assert np.allclose(b.widths, 0.3 * 1.35 ** np.arange(5))
    assert np.all(np.diff(b.widths) > 0)


def test_radial_integral_matches_quadrature():
    from scipy.integrate import quad

    for n, p in [(0, 1.0), (9, 0.7), (10, 2.5)]:
        num, _ = quad(lambda r: r**n * math.exp(-p * r * r), 0, np.inf)
        assert radial_integral(n, p) == pytest.approx(num, rel=1e-10)


def test_hermitian_at_zero_angle(basis, channel):
    h = build_hamiltonian(1.3, ScalingAngle(0.0), basis, channel).matrix
    assert np.linalg.norm(h - h.conj().T) <= 1e-10 * np.linalg.norm(h)
    assert np.max(np.abs(h.imag)) <= 1e-10 * np.linalg.norm(h)


def test_complex_symmetric_when_rotated(basis, channel):
    h = build_hamiltonian(1.0, THETA20, basis, channel).matrix
    assert is_complex_symmetric(h)
    assert not np.allclose(h, h.conj().T)


def test_affine_in_lambda(basis, channel):
    h = lambda lam: build_hamiltonian(lam, THETA20, basis, channel).matrix
    assert np.allclose(h(1.2) + h(1.6), 2 * h(1.4), rtol=0, atol=1e-10)


def test_metadata(basis, channel):
    meta = build_hamiltonian(1.0, THETA20, basis, channel).metadata()
    assert meta["theta_deg"] == pytest.approx(20.0)
    assert meta["basis"]["size"] == 30


def test_closed_forms_match_quadrature_small_basis():
    basis = RadialBasis(6, 0.5, 1.5)
    ch = ChannelSpec()
    worst = verify_matrix_elements(basis, ch, theta=THETA20.theta, rtol=1e-8)
    assert worst < 1e-8


def test_closed_forms_match_gauss_legendre_for_narrow_functions():
    basis = RadialBasis(5, 0.5, 1.4)
    assert verify_matrix_elements(basis, ChannelSpec(), theta=0.1, method="gauss-legendre", rtol=1e-8) < 1e-8


def test_quadrature_mismatch_detected():
    basis = RadialBasis(3, 0.5, 1.5)
    ops = basis_operators(basis, ChannelSpec(), BUCK_POTENTIAL, 0.0)
    ops.kinetic[0, 1] *= 1.01
    ops.kinetic[1, 0] *= 1.01
    with pytest.raises(QuadratureError):
        verify_matrix_elements(basis, ChannelSpec(), ops=ops)


def test_resonance_exposed(basis, channel):
    w = dense_eigen(build_hamiltonian(1.0, THETA20, basis, channel).matrix).eigenvalues
    e = w[np.argmin(np.abs(w - RESONANCE))]
    assert abs(e.real - RESONANCE.real) <= 0.5
    assert abs(e.imag - RESONANCE.imag) <= 0.5


def test_bound_state_independent_of_angle():
    # deeply bound state; needs a basis converged at the 1e-6 MeV level
    basis = RadialBasis(60, 0.1, 1.15)
    ch = ChannelSpec()
    e0 = np.linalg.eigvalsh(build_hamiltonian(1.75, ScalingAngle(0.0), basis, ch).matrix.real)[0]
    for deg in (10.0, 20.0):
        w = dense_eigen(build_hamiltonian(1.75, ScalingAngle.from_degrees(deg), basis, ch).matrix).eigenvalues
        assert np.min(np.abs(w - e0)) <= 1e-6


def test_ground_energy_decreases_with_lambda(basis, channel):
    e = [
        np.linalg.eigvalsh(build_hamiltonian(lam, ScalingAngle(0.0), basis, channel).matrix.real)[0]
        for lam in np.linspace(1.45, 1.75, 5)
    ]
    assert np.all(np.diff(e) < 0)


def test_check_angle_cases():
    assert check_angle(THETA20, RESONANCE)
    assert not check_angle(ScalingAngle.from_degrees(4.0), RESONANCE)
    assert check_angle(ScalingAngle.from_degrees(1.0), 5.0 + 0j)
    with pytest.raises(UndefinedRotationError):
        check_angle(THETA20, -1.0 - 0.5j)
