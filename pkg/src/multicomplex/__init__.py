"""Multicomplex numbers: arithmetic, the canonical idempotent representation,
ideals, matrices and Hilbert-module spectral theory."""
from .core import (
    ConjugationMask,
    Multicomplex,
    approx_eq,
    compose_masks,
    conjugate,
    mul_standard,
    one,
    real,
    unit,
    zero,
)
from .errors import (
    FlavorError,
    IndexRangeError,
    LevelError,
    MulticomplexError,
    NotSelfAdjointError,
    NullConeError,
    ShapeError,
    SingularMatrixError,
)
from .hilbert import Ket, scalar_product, spectral_decompose
from .ideal import Flavor, IdealSpec
from .idempotent import (
    IdempotentRep,
    Multiperplex,
    enumerate_conjugate_orbit,
    epsilon,
    from_idempotent,
    gamma,
    gamma_prime,
    invert,
    mnorm,
    mul_fast,
    to_idempotent,
)
from .linalg import McMatrix, det, invert_matrix
from .parser import ParseError, parse, parse_and_eval

__version__ = "0.1.0"
