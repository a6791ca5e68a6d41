"""Python access to the infospec C++ core."""

import json as _json

from ._infospec import (
    InputError,
    PropertyFailure,
    R_e,
    R_e_star,
    SizeError,
    __version__,
    brute_force_g,
    finite_n_rate,
    g_curve,
    han_kobayashi_exponent,
    hoeffding_exponent,
    kl_divergence,
    pure_state_g,
    quantum_psi,
    quantum_relative_entropy,
)
from ._infospec import selftest as _selftest


def selftest(seed, trials=50, corrupt=False):
    """Run the property suite and return the report as a dict."""
    return _json.loads(_selftest(seed, trials, corrupt))


__all__ = [
    "InputError",
    "PropertyFailure",
    "R_e",
    "R_e_star",
    "SizeError",
    "__version__",
    "brute_force_g",
    "finite_n_rate",
    "g_curve",
    "han_kobayashi_exponent",
    "hoeffding_exponent",
    "kl_divergence",
    "pure_state_g",
    "quantum_psi",
    "quantum_relative_entropy",
    "selftest",
]
