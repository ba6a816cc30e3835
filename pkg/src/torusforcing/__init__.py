"""Exact forcing numbers of perfect matchings on quadriculated tori T(n, m, r)."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    BudgetExceeded,
    DegenerateInstance,
    NoPerfectMatching,
    NotAMatching,
    SearchExhausted,
    TorusError,
)
from .forcing import forcing_number, max_forcing_number, predicted_max_forcing  # noqa: F401
from .matching import PerfectMatching, enumerate_matchings, find_alternating_cycle, is_forcing_set  # noqa: F401
from .torus import TorusParams, build_torus, classify, star_map, star_params, torus  # noqa: F401
