"""Stabiliser codes, entanglement measures and AME states on mixed-dimensional qudit spaces."""

from ._config import override, settings
from .codes import (
    CodeParams,
    DistanceResult,
    KLReport,
    SingletonVerdict,
    dimensional_distance,
    is_pure,
    kl_check,
    singleton_check,
    singleton_max_K,
)
from .constructions import FIXTURES, fixture, purify, purify_to_ame
from .cyclotomic import Cyclotomic, PhaseExp
from .entanglement import AMEReport, EMResult, ame_distance, delta, em_r, is_ame, schmidt_check
from .errors import *  # noqa: F401,F403
from .hilbert import (
    DensityOperator,
    Dims,
    StateVector,
    Subsystem,
    flat_index,
    inner_product,
    partial_trace,
    purity,
    subsystems_with_dim,
    tensor,
    unflatten,
)
from .operators import (
    GenPermOperator,
    LocalOperator,
    WeylLabel,
    apply,
    dimwt,
    genperm_compose,
    genperm_from_spec,
    genperm_trace,
    nice_error_basis,
    weyl,
)
from .stabiliser import CodeSpace, StabiliserGroup, close_group, code_basis, code_dimension, projector, stabilises

__version__ = "0.1.0"
