"""Numerical toolkit for two non-Hermitian SSH chains.

The non-reciprocal chain (chiral, no PT symmetry) and the chain with a
staggered imaginary potential (PT symmetric): spectra under periodic and open
boundaries, exceptional points, winding numbers, the complex Berry phase,
PT-breaking thresholds and the non-Hermitian skin effect.
"""
__version__ = "0.1.0"

from .errors import BandTouchingError, EigenSolverError, NumericalError, TransitionLineError
from .model import (
    ModelKind,
    ModelParams,
    bloch_matrix,
    check_symmetries,
    d_vector,
    dispersion,
    imaginary_potential,
    k_grid,
    make_params,
    non_reciprocal,
    open_chain_hamiltonian,
)
from .spectral import (
    classify_reality,
    eig_general,
    gap_classify,
    obc_spectrum,
    pbc_spectrum,
    zero_modes,
)
from .topology import (
    complex_berry_phase,
    ep_geometry_h1,
    phi_imag_closure,
    reality_interval,
    winding_nu,
    winding_nu_h2,
    winding_nu_oracle,
    winding_nu_prime,
    winding_nu_prime_oracle,
)
from .skin import localization_profile, nhse_verdict

__all__ = [
    "BandTouchingError", "EigenSolverError", "NumericalError", "TransitionLineError",
    "ModelKind", "ModelParams", "bloch_matrix", "check_symmetries", "d_vector",
    "dispersion", "imaginary_potential", "k_grid", "make_params", "non_reciprocal",
    "open_chain_hamiltonian", "classify_reality", "eig_general", "gap_classify",
    "obc_spectrum", "pbc_spectrum", "zero_modes", "complex_berry_phase",
    "ep_geometry_h1", "phi_imag_closure", "reality_interval", "winding_nu",
    "winding_nu_h2", "winding_nu_oracle", "winding_nu_prime", "winding_nu_prime_oracle",
    "localization_profile", "nhse_verdict",
]
