"""Complex-scaled alpha-alpha radial Hamiltonian in a Gaussian basis.

The relative motion of two alpha particles in partial wave ``L`` is governed
by

    H(lam) = T + lam * V0 * exp(-r^2/a^2) + 4 e^2 / r

Under the rotation ``r -> r e^{i theta}`` the kinetic term picks up
``e^{-2i theta}``, the Coulomb term ``e^{-i theta}`` and the Gaussian is
continued analytically.  Basis functions

    u_k(r) = N_k r^{L+1} exp(-r^2 / (2 b_k^2)),   b_k = b0 * q^k

are real, so the c-product matrix elements are ordinary integrals and every
term has a closed form built from

    I(n, p) = int_0^inf r^n exp(-p r^2) dr = Gamma((n+1)/2) / (2 p^((n+1)/2))

which stays valid for complex ``p`` with ``Re p > 0`` (principal branch).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import constants
from scipy.special import gammaln

from .errors import QuadratureError, UndefinedRotationError
from .linalg_core import is_complex_symmetric

__all__ = [
    "HBARC",
    "ALPHA_MASS",
    "E_SQUARED",
    "default_hbar2_over_2mu",
    "default_coulomb_strength",
    "PotentialParams",
    "ChannelSpec",
    "RadialBasis",
    "ScalingAngle",
    "ScaledHamiltonian",
    "BUCK_POTENTIAL",
    "gaussian_potential",
    "radial_integral",
    "basis_operators",
    "build_hamiltonian",
    "check_angle",
    "quadrature_elements",
    "verify_matrix_elements",
]

HBARC = constants.physical_constants["reduced Planck constant times c in MeV fm"][0]
ALPHA_MASS = constants.physical_constants["alpha particle mass energy equivalent in MeV"][0]
# e^2 = alpha_fs * hbar c, in MeV fm
E_SQUARED = constants.fine_structure * HBARC


def default_hbar2_over_2mu() -> float:
    """hbar^2 / (2 mu) for mu = m_alpha / 2, in MeV fm^2."""
    return HBARC**2 / ALPHA_MASS


def default_coulomb_strength() -> float:
    """Z1 Z2 e^2 = 4 e^2 for two alpha particles, in MeV fm."""
    return 4.0 * E_SQUARED


@dataclass(frozen=True)
class PotentialParams:
    V0: float = -122.6225  # MeV
    a: float = 2.132  # fm
    lam: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"potential range must be positive, got a={self.a}")

    def with_lambda(self, lam: float) -> "PotentialParams":
        return PotentialParams(self.V0, self.a, float(lam))


BUCK_POTENTIAL = PotentialParams()


@dataclass(frozen=True)
class ChannelSpec:
    L: int = 4
    hbar2_over_2mu: float = field(default_factory=default_hbar2_over_2mu)
    coulomb_strength: float = field(default_factory=default_coulomb_strength)

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 0:
            raise ValueError(f"L must be a non-negative integer, got {self.L}")
        if not self.hbar2_over_2mu > 0:
            raise ValueError("hbar2_over_2mu must be positive")
        if not self.coulomb_strength >= 0:
            raise ValueError("coulomb_strength must be non-negative")


@dataclass(frozen=True)
class RadialBasis:
    """Even-tempered Gaussian widths ``b_k = b0 * ratio**k`` (fm)."""

    size: int = 30
    b0: float = 0.3
    ratio: float = 1.35
    kind: str = "gaussian-expansion"

    def __post_init__(self):
        if self.kind != "gaussian-expansion":
            raise ValueError(f"unsupported basis kind {self.kind!r}")
        if self.size < 1:
            raise ValueError("basis size must be >= 1")
        if not self.b0 > 0:
            raise ValueError("b0 must be positive")
        if self.size > 1 and not self.ratio > 1:
            raise ValueError("ratio must exceed 1 so widths strictly increase")

    @property
    def widths(self) -> np.ndarray:
        return self.b0 * self.ratio ** np.arange(self.size)

    @property
    def exponents(self) -> np.ndarray:
        return 1.0 / (2.0 * self.widths**2)


@dataclass(frozen=True)
class ScalingAngle:
    theta: float = 0.0  # radians

    def __post_init__(self):
        if not 0.0 <= self.theta < math.pi / 4:
            raise ValueError(f"scaling angle must lie in [0, pi/4), got {self.theta}")

    @classmethod
    def from_degrees(cls, deg: float) -> "ScalingAngle":
        return cls(math.radians(deg))

    @property
    def degrees(self) -> float:
        return math.degrees(self.theta)


def _angle(theta) -> ScalingAngle:
    return theta if isinstance(theta, ScalingAngle) else ScalingAngle(float(theta))


def gaussian_potential(r, p: PotentialParams = BUCK_POTENTIAL):
    """``lam * V0 * exp(-r^2/a^2)``; complex ``r`` gives the continuation."""
    r = np.asarray(r)
    out = p.lam * p.V0 * np.exp(-(r * r) / p.a**2)
    return out if out.ndim else out[()]


def radial_integral(n: int, p):
    """``int_0^inf r^n exp(-p r^2) dr`` for (complex) ``p`` with ``Re p > 0``."""
    p = np.asarray(p, dtype=complex if np.iscomplexobj(p) else float)
    s = (n + 1) / 2.0
    # gamma(s) / (2 p^s) evaluated via logs to stay finite for tiny p
    return 0.5 * np.exp(gammaln(s) - s * np.log(p))


@dataclass(frozen=True)
class BasisOperators:
    """Matrix elements over the normalized (non-orthogonal) Gaussians."""

    overlap: np.ndarray
    kinetic: np.ndarray
    potential: np.ndarray  # unit-lambda Gaussian, already rotated
    coulomb: np.ndarray
    theta: float

    @cached_property
    def orthonormalizer(self) -> np.ndarray:
        """Real symmetric ``S^{-1/2}``."""
        s, u = np.linalg.eigh(self.overlap)
        if s.min() <= 1e-13 * s.max():
            raise ValueError(
                f"basis overlap is numerically singular (min eigenvalue {s.min():.3e})"
            )
        return (u / np.sqrt(s)) @ u.T


def basis_operators(
    basis: RadialBasis,
    channel: ChannelSpec,
    potential: PotentialParams = BUCK_POTENTIAL,
    theta=0.0,
) -> BasisOperators:
    """Closed-form S, T, V (lam=1) and Coulomb matrices, complex-scaled by theta."""
    th = _angle(theta).theta
    L = channel.L
    alpha = basis.exponents
    ai, aj = np.meshgrid(alpha, alpha, indexing="ij")
    p = ai + aj

    s_raw = radial_integral(2 * L + 2, p)
    norm = 1.0 / np.sqrt(np.diag(s_raw))
    d = np.outer(norm, norm)

    overlap = s_raw * d
    kinetic = channel.hbar2_over_2mu * 2.0 * (2 * L + 3) * (ai * aj / p) * overlap
    rot = np.exp(2j * th) / potential.a**2
    gauss = potential.V0 * radial_integral(2 * L + 2, p + rot) * d
    coulomb = channel.coulomb_strength * radial_integral(2 * L + 1, p) * d
    return BasisOperators(overlap, kinetic, gauss, coulomb, th)


@dataclass(frozen=True)
class ScaledHamiltonian:
    """``H^theta(lam)`` in the orthonormalized real basis (complex symmetric)."""

    matrix: np.ndarray
    lam: float
    theta: ScalingAngle
    basis: RadialBasis | None = None
    channel: ChannelSpec | None = None
    potential: PotentialParams | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def metadata(self) -> dict:
        meta = {"lambda": self.lam, "theta_deg": self.theta.degrees}
        if self.basis is not None:
            meta["basis"] = {"size": self.basis.size, "b0": self.basis.b0, "ratio": self.basis.ratio}
        if self.channel is not None:
            meta["channel"] = {
                "L": self.channel.L,
                "hbar2_over_2mu": self.channel.hbar2_over_2mu,
                "coulomb_strength": self.channel.coulomb_strength,
            }
        if self.potential is not None:
            meta["potential"] = {"V0": self.potential.V0, "a": self.potential.a}
        return meta


def build_hamiltonian(
    lam: float,
    theta,
    basis: RadialBasis,
    channel: ChannelSpec,
    potential: PotentialParams = BUCK_POTENTIAL,
    check_quadrature: bool = False,
) -> ScaledHamiltonian:
    """Assemble ``e^{-2i theta} T + lam V(r e^{i theta}) + e^{-i theta} V_C``.

    The result is expressed in the symmetrically orthonormalized basis, so it
    is complex symmetric and an ordinary eigenproblem.  With
    ``check_quadrature`` every element is recomputed by adaptive quadrature and
    a relative disagreement above 1e-8 raises :class:`QuadratureError`.
    """
    angle = _angle(theta)
    ops = basis_operators(basis, channel, potential, angle)
    if check_quadrature:
        verify_matrix_elements(basis, channel, potential, angle, ops=ops)
    h_raw = (
        np.exp(-2j * angle.theta) * ops.kinetic
        + lam * ops.potential
        + np.exp(-1j * angle.theta) * ops.coulomb
    )
    x = ops.orthonormalizer
    h = x @ h_raw @ x
    h = 0.5 * (h + h.T)  # remove rounding asymmetry from the two products
    if not is_complex_symmetric(h):
        raise ArithmeticError("assembled Hamiltonian is not complex symmetric")
    return ScaledHamiltonian(h, float(lam), angle, basis, channel, potential.with_lambda(lam))


def check_angle(theta, energy: complex) -> bool:
    """True when ``2 theta > arctan(|Im E| / Re E)``, i.e. the rotated continuum
    has swept past the resonance at ``energy``."""
    energy = complex(energy)
    if energy.real <= 0:
        raise UndefinedRotationError(
            f"resonance criterion needs Re(E) > 0, got {energy.real}"
        )
    return 2.0 * _angle(theta).theta > math.atan(abs(energy.imag) / energy.real)


def _u(r, b, L):
    return r ** (L + 1) * np.exp(-(r * r) / (2 * b * b))


def _neg_u_second(r, b, L):
    # -u'' + L(L+1)/r^2 u for the unnormalized Gaussian
    al = 1.0 / (2 * b * b)
    return (2 * al * (2 * L + 3) * r ** (L + 1) - 4 * al * al * r ** (L + 3)) * np.exp(-al * r * r)


def quadrature_elements(
    i: int,
    j: int,
    basis: RadialBasis,
    channel: ChannelSpec,
    potential: PotentialParams = BUCK_POTENTIAL,
    theta=0.0,
    method: str = "adaptive",
) -> dict[str, complex]:
    """Numerically integrate the three operator terms between basis functions.

    Integration runs along the real axis with the rotated integrand.  The
    ``"gauss-legendre"`` method is the fixed 200-point rule on [0, 60] fm and is
    only meaningful when both functions are negligible beyond 60 fm.
    """
    from scipy.integrate import IntegrationWarning, quad

    th = _angle(theta).theta
    L = channel.L
    b = basis.widths
    bi, bj = b[i], b[j]
    ni = 1.0 / math.sqrt(float(radial_integral(2 * L + 2, 1.0 / bi**2)))
    nj = 1.0 / math.sqrt(float(radial_integral(2 * L + 2, 1.0 / bj**2)))
    rot = np.exp(2j * th)

    integrands = {
        "overlap": lambda r: _u(r, bi, L) * _u(r, bj, L),
        "kinetic": lambda r: channel.hbar2_over_2mu * _u(r, bi, L) * _neg_u_second(r, bj, L),
        "potential": lambda r: potential.V0
        * _u(r, bi, L)
        * _u(r, bj, L)
        * np.exp(-(r * r) * rot / potential.a**2),
        "coulomb": lambda r: channel.coulomb_strength * _u(r, bi, L) * _u(r, bj, L) / r,
    }
    # characteristic length of the product; the integrand lives within ~10 of these
    w = 1.0 / math.sqrt(1.0 / (2 * bi * bi) + 1.0 / (2 * bj * bj))

    out = {}
    for name, f in integrands.items():
        if method == "adaptive":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", IntegrationWarning)
                re = quad(lambda s: np.real(f(s * w)) * w, 0, 12, epsabs=0, epsrel=1e-13, limit=200)[0]
                im = 0.0
                if name == "potential" and th != 0.0:
                    im = quad(lambda s: np.imag(f(s * w)) * w, 0, 12, epsabs=0, epsrel=1e-13, limit=200)[0]
            val = re + 1j * im
        elif method == "gauss-legendre":
            x, wt = np.polynomial.legendre.leggauss(200)
            r = 30.0 * (x + 1.0)
            val = complex(np.sum(wt * f(r)) * 30.0)
        else:
            raise ValueError(f"unknown quadrature method {method!r}")
        out[name] = val * ni * nj
    return out


def verify_matrix_elements(
    basis: RadialBasis,
    channel: ChannelSpec,
    potential: PotentialParams = BUCK_POTENTIAL,
    theta=0.0,
    rtol: float = 1e-8,
    method: str = "adaptive",
    pairs=None,
    ops: BasisOperators | None = None,
) -> float:
    """Compare closed-form elements against quadrature; returns the worst
    relative deviation and raises :class:`QuadratureError` above ``rtol``.

    Deviations are measured relative to ``sqrt(|X_ii X_jj|)`` so elements
    between very different widths, which are tiny, are judged on the scale of
    the operator rather than on their own magnitude.
    """
    ops = ops or basis_operators(basis, channel, potential, theta)
    mats = {
        "overlap": ops.overlap,
        "kinetic": ops.kinetic,
        "potential": ops.potential,
        "coulomb": ops.coulomb,
    }
    if pairs is None:
        n = basis.size
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
    worst = 0.0
    for i, j in pairs:
        num = quadrature_elements(i, j, basis, channel, potential, theta, method)
        for name, m in mats.items():
            scale = math.sqrt(abs(m[i, i] * m[j, j])) or 1.0
            dev = abs(num[name] - m[i, j]) / scale
            worst = max(worst, dev)
            if dev > rtol:
                raise QuadratureError(
                    f"{name}[{i},{j}]: closed form {m[i, j]:.12g} vs quadrature "
                    f"{num[name]:.12g} (relative deviation {dev:.2e})"
                )
    return worst
