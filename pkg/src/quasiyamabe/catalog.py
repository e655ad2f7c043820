"""Named soliton instances used by the command line and the test-suite.

Each entry pairs a catalog metric with a potential and default constants
``(m, rho)``.  Constant-curvature metrics with constant potential are trivial
solitons with ``rho = R``; the RANDOMPOLY and conformal entries carry a
generic potential and exist for the algebraic identities.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .construct import integrate_profile, profile_to_instance
from .errors import ConfigError
from .fields import (METRIC_CATALOG, FieldSpec, constant_scalar, expression_scalar,
                     log_potential, random_scalar)
from .soliton import INFINITY, SolitonInstance, SolitonParams

# (metric name, potential kind, m, rho)
_TABLE = {
    "HALF_STEADY": ("FLAT3", "log", 2.0, 0.0),
    "FLAT3": ("FLAT3", "zero", INFINITY, 0.0),
    "FLAT4": ("FLAT4", "zero", INFINITY, 0.0),
    "FLAT5": ("FLAT5", "zero", INFINITY, 0.0),
    "POLAR3": ("POLAR3", "zero", INFINITY, 0.0),
    "SPHERE3": ("SPHERE3", "zero", 1.0, 6.0),
    "SPHERE4": ("SPHERE4", "zero", 1.0, 12.0),
    "HYP3": ("HYP3", "zero", 1.0, -6.0),
    "PRODUCT4": ("PRODUCT4", "zero", 1.0, 2.0),
    "CONF3": ("CONF3", "random", 2.0, 0.0),
    "CONF4": ("CONF4", "random", 2.0, 0.0),
    "RANDOMPOLY3": ("RANDOMPOLY3", "random", 2.0, 0.0),
    "RANDOMPOLY4": ("RANDOMPOLY4", "random", 2.0, 0.0),
    "RANDOMPOLY5": ("RANDOMPOLY5", "random", 2.0, 0.0),
}

# warped-product witnesses: (n, m, rho, q)
PROFILE_INSTANCES = {
    "WARP3": (3, 1.0, 1.0, 0.5),
    "WARP4": (4, INFINITY, 1.0, 0.5),
    "WARP5": (5, 2.0, -1.0, 0.5),
}
PROFILE_R_MAX = 1.5


def names() -> list[str]:
    return sorted(list(_TABLE) + list(PROFILE_INSTANCES))


@lru_cache(maxsize=None)
def warp_profile(name: str):
    n, m, rho, q = PROFILE_INSTANCES[name]
    return integrate_profile(n, m, rho, q, PROFILE_R_MAX)


def _potential(kind: str, metric: FieldSpec, m: float) -> FieldSpec:
    n = metric.dim
    if kind == "log":
        return log_potential(m, n)
    if kind == "random":
        return random_scalar(n, seed=1)
    return constant_scalar(n, 0.0, box=metric.box)


def build(name: str, f: str | None = None, m: float | None = None,
          rho: float | None = None) -> SolitonInstance:
    """Instance ``name`` with optional overrides of the potential and constants.

    ``f`` is an expression in x1..xn evaluated on the metric's domain box.
    """
    if name in PROFILE_INSTANCES:
        base = profile_to_instance(warp_profile(name), name=name)
        metric, potential, params = base.metric, base.potential, base.params
    elif name in _TABLE:
        mname, kind, m0, rho0 = _TABLE[name]
        metric = METRIC_CATALOG[mname]()
        params = SolitonParams(m0, rho0)
        potential = _potential(kind, metric, m0)
    else:
        raise ConfigError(f"unknown catalog instance {name!r}; known: {', '.join(names())}")
    if f is not None:
        potential = expression_scalar(f, metric.dim, box=metric.box)
    params = SolitonParams(params.m if m is None else m, params.rho if rho is None else rho)
    return SolitonInstance(metric, potential, params, name)


def parse_m(value) -> float:
    """Accept a number or INFINITY/inf (any case) for the constant m."""
    if isinstance(value, str):
        if value.strip().lower() in ("infinity", "inf", "+inf"):
            return INFINITY
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(f"m must be a number or INFINITY, got {value!r}") from None
    m = float(value)
    if m == 0.0 or math.isnan(m) or m == -math.inf:
        raise ConfigError("m must be nonzero")
    return m
