"""Exact-arithmetic toolkit for sharp exponential bounds on step-function
mean oscillation: sunrise decompositions, certified BMO norms, and the
distribution-side constants of the John-Nirenberg inequality."""

from .numerics import (
    DEFAULT_BITS,
    MAX_BITS,
    DomainError,
    Enclosure,
    EnclosureOverflow,
    PrecisionExhausted,
    Rational,
    exp_enclosure,
    log_enclosure,
    pow_enclosure,
)
from .stepfn import Interval, IntervalUnion, StepFunction
from .oscillation import BmoEnclosure, bmo_norm, mean_osc, positive_part_osc
from .sunrise import sunrise_decompose
from .jn_decomp import (
    DecompositionLayers,
    DecompositionParams,
    StoppingMeasureError,
    decompose,
    psi,
    verify_pointwise,
)
from .bounds import (
    TailBoundConstants,
    c_seq,
    check_envelope,
    constants,
    eta,
    mu,
    nu,
    nu_prime_bracket,
    phi,
    phi_oracle,
    piecewise_bound_27,
    tail_bound,
    xi_crossover,
)
from .extremal import case1_osc, case2_osc, make_extremal, sharpness_check

__all__ = [
    "DEFAULT_BITS",
    "MAX_BITS",
    "BmoEnclosure",
    "DecompositionLayers",
    "DecompositionParams",
    "DomainError",
    "Enclosure",
    "EnclosureOverflow",
    "Interval",
    "IntervalUnion",
    "PrecisionExhausted",
    "Rational",
    "StepFunction",
    "StoppingMeasureError",
    "TailBoundConstants",
    "bmo_norm",
    "c_seq",
    "case1_osc",
    "case2_osc",
    "check_envelope",
    "constants",
    "decompose",
    "eta",
    "exp_enclosure",
    "log_enclosure",
    "make_extremal",
    "mean_osc",
    "mu",
    "nu",
    "nu_prime_bracket",
    "phi",
    "phi_oracle",
    "piecewise_bound_27",
    "positive_part_osc",
    "pow_enclosure",
    "psi",
    "sharpness_check",
    "sunrise_decompose",
    "tail_bound",
    "verify_pointwise",
    "xi_crossover",
]

__version__ = "0.1.0"
