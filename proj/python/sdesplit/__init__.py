"""Order conditions and Monte Carlo verification for splitting integrators
of split stochastic differential equation systems.

Thin convenience layer over the compiled core in ``_sdesplit``: report-style
results come back as parsed dictionaries instead of JSON strings.
"""

import json

import _sdesplit as _core

builtin_names = _core.builtin_names
builtin_scheme = _core.builtin_scheme
validate_scheme = _core.validate_scheme
conditions = _core.conditions
shuffle = _core.shuffle
quasishuffle = _core.quasishuffle
rho = _core.rho
theta = _core.theta
integral_identity = _core.integral_identity
expected_stratonovich = _core.expected_stratonovich
expected_ito = _core.expected_ito
lyndon_words = _core.lyndon_words
selfcheck = _core.selfcheck
run_cli = _core.run_cli
local_error = _core.local_error


def analyze_strong(scheme, max_weight2=6):
    """Strong order report as a dict; ``scheme`` is JSON text or 'builtin:NAME'."""
    return json.loads(_core.analyze_strong(scheme, max_weight2))


def analyze_weak(scheme, max_sigma=3):
    """Weak order report as a dict; ``scheme`` is JSON text or 'builtin:NAME'."""
    return json.loads(_core.analyze_weak(scheme, max_sigma))


__all__ = [
    "builtin_names",
    "builtin_scheme",
    "validate_scheme",
    "conditions",
    "shuffle",
    "quasishuffle",
    "rho",
    "theta",
    "integral_identity",
    "expected_stratonovich",
    "expected_ito",
    "lyndon_words",
    "selfcheck",
    "run_cli",
    "local_error",
    "analyze_strong",
    "analyze_weak",
]
