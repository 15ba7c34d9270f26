"""Tiling and spectral sets in Z_{p^m} x Z_{p^m} with the symplectic form."""
from .construct import (
    Certificate,
    complement_for_spectral,
    construct_complement,
    construct_spectrum,
    periodic_replacement,
    spectrum_for_tile,
)
from .cyclotomic import is_vanishing_sum, phi_prime_power
from .errors import AlreadyPeriodic, InternalInconsistency, NotConstructible, PaperContradiction
from .group import Element, GroupContext, Subgroup, Subset, Symplectomorphism, enumerate_subgroups
from .oracle import find_spectra, find_tiling_complements, lemma_check, verify_fuglede
from .sets import difference_set, is_periodic, is_spectral_pair, is_tiling_pair, zero_set
from .structure import INF, build_catalog, profile_zero_set

__version__ = "0.1.0"

__all__ = [
    "AlreadyPeriodic",
    "Certificate",
    "Element",
    "GroupContext",
    "INF",
    "InternalInconsistency",
    "NotConstructible",
    "PaperContradiction",
    "Subgroup",
    "Subset",
    "Symplectomorphism",
    "build_catalog",
    "complement_for_spectral",
    "construct_complement",
    "construct_spectrum",
    "difference_set",
    "enumerate_subgroups",
    "find_spectra",
    "find_tiling_complements",
    "is_periodic",
    "is_spectral_pair",
    "is_tiling_pair",
    "is_vanishing_sum",
    "lemma_check",
    "periodic_replacement",
    "phi_prime_power",
    "profile_zero_set",
    "spectrum_for_tile",
    "verify_fuglede",
    "zero_set",
]
