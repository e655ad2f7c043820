"""Numerical verification engine for quasi Yamabe gradient solitons.

A Riemannian metric and a potential are evaluated as order-3 jets, curvature
is assembled from them in a coordinate chart, and the soliton identities,
level-set geometry and weighted integral identities are checked as
residuals.  Rotationally symmetric solitons are built by integrating the
warped-product reduction.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, CriticalPoint, GeometryError, NotPositiveDefinite,
                     OutOfDomain, OutOfProfileRange, PhiNonPositive, ProfileTooShort,
                     WrongDimension)
from .jets import Jet, MetricJet3, ScalarJet3, fd_jet
from .fields import (METRIC_CATALOG, FieldSpec, evaluate_metric_jet,
                     evaluate_scalar_jet, expression_metric, expression_scalar)
from .curvature import CurvaturePack, curvature_pack
from .soliton import (INFINITY, ResidualReport, SolitonInstance, SolitonParams,
                      lemma21_residuals, prop22_residual, prop23_norm_check, soliton_residual,
                      weighted_L)
from .levelset import AdaptedFrame, LevelSetReport, adapted_frame, levelset_report
from .construct import (Profile, integrate_profile, profile_to_instance,
                        soliton_ode_rhs, theorem12_chain_check)
from .quadrature import QuadratureGrid, lemma31_quadrature_check

__all__ = [
    "__version__",
    "curvature_pack",
    "soliton_residual",
    "levelset_report",
    "soliton_ode_rhs",
    "ConfigError",
    "CriticalPoint",
    "GeometryError",
    "NotPositiveDefinite",
    "OutOfDomain",
    "OutOfProfileRange",
    "PhiNonPositive",
    "ProfileTooShort",
    "WrongDimension",
    "Jet",
    "MetricJet3",
    "ScalarJet3",
    "fd_jet",
    "METRIC_CATALOG",
    "FieldSpec",
    "evaluate_metric_jet",
    "evaluate_scalar_jet",
    "expression_metric",
    "expression_scalar",
    "CurvaturePack",
    "INFINITY",
    "ResidualReport",
    "SolitonInstance",
    "SolitonParams",
    "lemma21_residuals",
    "prop22_residual",
    "prop23_norm_check",
    "weighted_L",
    "AdaptedFrame",
    "LevelSetReport",
    "adapted_frame",
    "Profile",
    "integrate_profile",
    "profile_to_instance",
    "theorem12_chain_check",
    "QuadratureGrid",
    "lemma31_quadrature_check",
]
