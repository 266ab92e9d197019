"""Entanglement entropy of bipartite pure continuous-variable states.

Gaussian states are handled in closed form (:mod:`cventropy.gaussian`,
:mod:`cventropy.circuits`), beam-split Fock states through an exact
generating function (:mod:`cventropy.nongauss`), and both are checked against
a truncated Fock-space oracle (:mod:`cventropy.fock_oracle`).
"""

from .circuits import (
    CircuitParams,
    bs_squeeze_coeffs,
    circuit_coeffs,
    entropy_closed_form,
    reduced_from_circuit,
    special_case_entropy,
    tmsv_entropy,
)
from .gaussian import (
    GaussianCoeffState,
    ReducedGaussian,
    entropy_gaussian,
    is_separable,
    partition_function,
    reduce,
)
from .nongauss import FockPair, bs_fock_entropy, bs_fock_spectrum

__version__ = "0.1.0"
