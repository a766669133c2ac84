"""Bicomplex Wiener algebra: scalars, matrices, Laurent series, spectral
factorization, rational realizations and superoscillatory approximation."""

from . import bicomplex, errors, io, linalg, realization, series, spectral, superosc
from .bicomplex import (
    E1,
    E2,
    ONE,
    ZERO,
    Bicomplex,
    BoundaryPoint,
    HyperbolicNorm,
    boundary_value,
    conjugate,
    from_idempotent,
    idempotent_decompose,
    inverse,
    is_hyperbolic_positive,
    norm,
)
from .errors import *  # noqa: F401,F403
from .linalg import (
    BCMatrix,
    SharpStructure,
    bc_operator_norm,
    channel_unitary,
    embed_sharp,
    extract_sharp,
    is_positive,
    is_sharp_symmetric,
    sharp_conjugate,
    similarity_conjugate,
    star_adjoint,
)
from .realization import (
    PartialFractions,
    PolePart,
    Realization,
    RieszProjector,
    build_realization,
    eval_realization,
    fourier_coefficients,
    fourier_from_realization,
    riesz_projection,
    sharp_symmetrize_realization,
    spectral_density_realization,
    spectral_fourier_coeffs,
    stein_solve,
)
from .series import (
    BCLaurentSeries,
    ChannelSeries,
    coefficients_from_samples,
    evaluate,
    merge_channels,
    multiply,
    project,
    split_channels,
    tail_mass,
    wiener_norm,
)
from .spectral import (
    FactorOptions,
    SeriesResult,
    factor_uniqueness_unitary,
    invert,
    sharp_route_factorize,
    spectral_factorize,
)
from .superosc import (
    BCSuperoscParams,
    SuperoscParams,
    approximate_series,
    approximation_error,
    bc_superosc_eval,
    superosc_coeffs,
    superosc_eval,
)

__version__ = "0.1.0"
