"""Truncated multivariate power series over C, with the distribution algebra
of coefficient extractors, a law-checking harness and a small term language."""

from .multiindex import (
    MultiIndex,
    binom_componentwise,
    count_indices,
    enumerate_indices,
    multinomial,
    position_of,
)
from .series import (
    DEGREE_CAP_ENV,
    FiniteSpace,
    TruncatedSeries,
    coefficient_distance,
    max_degree_cap,
)
from .multilinear import SymmetricMultilinear, from_monomial, polarize
from .calculus import (
    CurriedSeries,
    compose,
    compose_naive,
    curry,
    derivative_series,
    jacobian_at,
    split_slot_reference,
    uncurry,
)
from .exponential import (
    DistBasis,
    Distribution,
    LinearOperator,
    TensorBasis,
    VectorBasis,
    bang_linear,
    bang_map,
    cocontraction,
    codereliction,
    codereliction_operator,
    comultiplication,
    contraction,
    convolve,
    counit,
    coweakening,
    delta_taylor_check,
    dirac,
    monoidal_product,
    monoidal_product_inverse,
    operator_to_series,
    series_to_operator,
    swap_operator,
    theta,
    weakening,
)
from .laws import LawConfig, LawReport, law_names, run_law, run_suite

__version__ = "0.1.0"

__all__ = [
    "MultiIndex",
    "binom_componentwise",
    "count_indices",
    "enumerate_indices",
    "multinomial",
    "position_of",
    "DEGREE_CAP_ENV",
    "FiniteSpace",
    "TruncatedSeries",
    "coefficient_distance",
    "max_degree_cap",
    "SymmetricMultilinear",
    "from_monomial",
    "polarize",
    "CurriedSeries",
    "compose",
    "compose_naive",
    "curry",
    "derivative_series",
    "jacobian_at",
    "split_slot_reference",
    "uncurry",
    "DistBasis",
    "Distribution",
    "LinearOperator",
    "TensorBasis",
    "VectorBasis",
    "bang_linear",
    "bang_map",
    "cocontraction",
    "codereliction",
    "codereliction_operator",
    "comultiplication",
    "contraction",
    "convolve",
    "counit",
    "coweakening",
    "delta_taylor_check",
    "dirac",
    "monoidal_product",
    "monoidal_product_inverse",
    "operator_to_series",
    "series_to_operator",
    "swap_operator",
    "theta",
    "weakening",
    "LawConfig",
    "LawReport",
    "law_names",
    "run_law",
    "run_suite",
    "__version__",
]
