"""Essential spectra of Bergman-Toeplitz operators on periodic planar domains.

The library computes Floquet band structures for Toeplitz operators with
periodic radial symbols on a disc-plus-ligament periodic domain, and
synthesizes symbols whose essential spectrum approximates a prescribed
finite set of real numbers.
"""

from .geometry import CellGeometry, QuadratureRule, build_disc_quadrature, build_cell_quadrature, contains
from .symbols import (
    RadialProfile,
    TargetSpec,
    IllConditionedError,
    synthesize_profile,
    eval_disc_symbol,
    eval_cell_symbol,
    eval_periodic_symbol,
)
from .disc_spectrum import (
    DiscSpectrum,
    moment_eigenvalue,
    compute_disc_spectrum,
    disc_galerkin_matrix,
    spectral_gap,
)
from .quasi_bergman import TwistedBasis, raw_mode, build_basis, project, twist, projector_distance
from .band_solver import (
    BandStructure,
    SpectrumReport,
    toeplitz_matrix,
    compute_bands,
    essential_spectrum,
    gap_report,
    h_convergence_study,
    almost_eigen_check,
)
from .floquet import CellField, FloquetField, floquet_forward, floquet_inverse, quasimode_synthesize
from .conformal import ConformalPair, identity_pair, rotation_pair, moebius_pair, rect_exp_pair, transplant, transplant_symbol, spectral_equivalence_check
from .pipeline import RunConfig, RunResult, run_prescribed_spectrum

__version__ = "0.1.0"
