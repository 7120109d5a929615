"""Resonance energies of complex-scaled Hamiltonians by iterative HHL.

The pipeline: build a complex-scaled alpha-alpha Hamiltonian in a Gaussian
basis, reduce it with eigenvector continuation, then extract its complex
eigenvalues with a fixed-point iteration whose linear solves run on a
simulated HHL circuit.
"""

from .ec import (
    REFERENCE_RESONANCE,
    ECSubspace,
    TrainingPoint,
    build_subspace,
    project_matrix,
    project_target,
    resonance_candidate,
    solve_training_set,
    training_lambdas,
)
from .errors import *  # noqa: F401,F403
from .fixtures import Fixture, load_fixture
from .ihhl import (
    DeflationSet,
    IhhlResult,
    IterationTrace,
    SpectrumResult,
    build_c_operator,
    dilate,
    full_spectrum,
    ihhl_solve,
    ihhl_step,
)
from .linalg_core import (
    c_norm,
    c_product,
    dense_eigen,
    generalized_eigen,
    gram_schmidt,
    hermitian_norm,
    linear_solve,
)
from .physics_alpha import (
    BUCK_POTENTIAL,
    ChannelSpec,
    PotentialParams,
    RadialBasis,
    ScaledHamiltonian,
    ScalingAngle,
    build_hamiltonian,
    check_angle,
)
from .qsim import HhlConfig, hhl_solve

__version__ = "0.1.0"
