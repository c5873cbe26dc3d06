"""Finite sections of exchangeable and stationary chains of Gaussian states."""

from .chains import (Band, BandedSpec, ExchangeableSpec, FiniteSection, MixtureStatus,
                     ToeplitzMixtureSpec, banded_is_g_chain, direct_section_check,
                     exchangeable_is_g_chain, leading_section, materialize, mixture_is_g_chain,
                     restrict, separability_certificate)
from .entanglement import (FamilyParams, Verdict, chain_pair_verdicts, lemma52_window, lemma_gamma,
                           partial_transpose, ppt_test, simon_test)
from .entropy_rate import (EntropyTrace, QuadratureReport, entropy_sequence,
                           exchangeable_entropy_exact, exchangeable_rate, kms_rate,
                           rate_gap_bound, spectral_measure_distance, symbol, toeplitz_spectrum,
                           truncate_weights)
from .errors import (GChainError, InvalidArgumentError, NumericFailureError, ResourceLimitError,
                     SectionInvalidError, SpecParseError)
from .gmatrix import (Tolerances, entropy_function, is_g_matrix, symplectic_form,
                      symplectic_spectrum, von_neumann_entropy)

__version__ = "0.1.0"
