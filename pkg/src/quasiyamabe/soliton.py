"""Pointwise identities for quasi Yamabe gradient solitons.

A soliton instance is a metric ``g``, a potential ``f`` and constants
``(m, rho)``; the defining relation is

    (R - rho) g_ij = f_ij - (1/m) f_i f_j,

with ``m = INFINITY`` dropping every ``1/m`` term (the classical Yamabe case).
Every check here returns a residual that vanishes when the corresponding
identity holds; the purely algebraic ones (D-tensor traces, the |D|^2 frame
formula, the Ricci identity) hold for arbitrary ``(g, f)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .curvature import (CurvaturePack, covariant_hessian, curvature_pack,
                        third_covariant_scalar)
from .errors import CriticalPoint, WrongDimension
from .fields import FieldSpec, evaluate_metric_jet, evaluate_scalar_jet

INFINITY = math.inf

SOLITON_TOL = 1e-6
IDENTITY_TOL = 1e-9
TRACE_TOL = 1e-11
RICCI_IDENTITY_TOL = 1e-8
GRADIENT_FLOOR = 1e-8

_es = np.einsum


@dataclass(frozen=True)
class SolitonParams:
    m: float
    rho: float

    def __post_init__(self):
        m = float(self.m)
        if m == 0.0 or math.isnan(m) or m == -math.inf:
            raise ValueError("m must be nonzero (finite, or INFINITY)")

    @property
    def classical(self) -> bool:
        return math.isinf(self.m)

    @property
    def inv_m(self) -> float:
        return 0.0 if self.classical else 1.0 / self.m


@dataclass(frozen=True)
class SolitonInstance:
    metric: FieldSpec
    potential: FieldSpec
    params: SolitonParams
    name: str = ""

    def __post_init__(self):
        if self.metric.dim != self.potential.dim:
            raise WrongDimension("metric and potential live in different dimensions")

    @property
    def dim(self) -> int:
        return self.metric.dim

    @property
    def box(self) -> tuple:
        return tuple((max(a[0], b[0]), min(a[1], b[1]))
                     for a, b in zip(self.metric.box, self.potential.box))

    def at(self, p) -> "PointState":
        return PointState(self, np.asarray(p, dtype=float))

    def describe(self) -> dict:
        m = self.params.m
        return {"name": self.name, "dim": self.dim, "metric": self.metric.describe(),
                "potential": self.potential.describe(),
                "m": "INFINITY" if math.isinf(m) else m, "rho": self.params.rho}


class PointState:
    """Lazily evaluated geometry of an instance at a batch of points."""

    def __init__(self, inst: SolitonInstance, points: np.ndarray):
        self.inst = inst
        self.points = points

    @cached_property
    def cp(self) -> CurvaturePack:
        return curvature_pack(evaluate_metric_jet(self.inst.metric, self.points))

    @cached_property
    def sj(self):
        return evaluate_scalar_jet(self.inst.potential, self.points)

    @property
    def n(self) -> int:
        return self.inst.dim

    @property
    def df(self) -> np.ndarray:
        return self.sj.grad

    @cached_property
    def df_up(self) -> np.ndarray:
        return _es("...ij,...j->...i", self.cp.ginv, self.sj.grad)

    @cached_property
    def grad_norm2(self) -> np.ndarray:
        return _es("...i,...i->...", self.df, self.df_up)

    @cached_property
    def hess(self) -> np.ndarray:
        return covariant_hessian(self.sj, self.cp)

    @cached_property
    def third(self) -> np.ndarray:
        return third_covariant_scalar(self.sj, self.cp)

    @property
    def R_rho(self) -> np.ndarray:
        return self.cp.scalar - self.inst.params.rho

    def regular_mask(self) -> np.ndarray:
        return np.sqrt(self.grad_norm2) > GRADIENT_FLOOR * (1.0 + np.abs(self.sj.value))

    def require_regular(self) -> None:
        if not np.all(self.regular_mask()):
            raise CriticalPoint("|grad f| below the regular-point floor")


def _state(inst, p) -> PointState:
    return p if isinstance(p, PointState) else inst.at(p)


@dataclass(frozen=True)
class ResidualReport:
    name: str
    value: float
    tolerance: float
    passed: bool
    point: list
    frobenius: float = float("nan")
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "value": _num(self.value), "tolerance": _num(self.tolerance),
               "pass": bool(self.passed), "point": [_num(x) for x in self.point]}
        if not math.isnan(self.frobenius):
            out["frobenius"] = _num(self.frobenius)
        if self.detail:
            out["detail"] = self.detail
        return out


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def report(name: str, residual, points, tolerance: float, reduce_axes: int = 0, **detail) -> ResidualReport:
    """Reduce a batched residual tensor to its worst point.

    ``residual`` has shape ``batch + T`` where ``T`` spans the last
    ``reduce_axes`` axes; the value is the max-abs over everything and the
    Frobenius norm is taken at the worst point.
    """
    res = np.abs(np.asarray(residual, dtype=float))
    pts = np.asarray(points, dtype=float)
    batch = pts.shape[:-1]
    per_point = res.reshape(batch + (-1,)) if reduce_axes else res.reshape(batch + (1,))
    flat = per_point.reshape(-1, per_point.shape[-1])
    worst_point = int(np.argmax(flat.max(axis=1))) if flat.size else 0
    value = float(flat.max()) if flat.size else 0.0
    frob = float(np.sqrt(np.sum(flat[worst_point] ** 2))) if flat.size else 0.0
    where = pts.reshape(-1, pts.shape[-1])[worst_point].tolist()
    return ResidualReport(name, value, tolerance, bool(value <= tolerance), where, frob, dict(detail))


# -- the defining equation and its first consequences ------------------

def soliton_residual(inst: SolitonInstance, p) -> np.ndarray:
    """E_ij = f_ij - (1/m) f_i f_j - (R - rho) g_ij."""
    st = _state(inst, p)
    inv_m = inst.params.inv_m
    return (st.hess - inv_m * _es("...i,...j->...ij", st.df, st.df)
            - st.R_rho[..., None, None] * st.cp.g)


def soliton_report(inst, p, tol: float = SOLITON_TOL) -> ResidualReport:
    st = _state(inst, p)
    return report("soliton_equation", soliton_residual(inst, st), st.points, tol, 2)


def lemma21_arrays(inst, p):
    """The three derived residuals per point (scalar, covector, covector)."""
    st = _state(inst, p)
    n, inv_m = st.n, inst.params.inv_m
    lap = _es("...ij,...ij->...", st.cp.ginv, st.hess)
    trace_eq = n * st.R_rho - (lap - inv_m * st.grad_norm2)
    d_grad2 = 2.0 * _es("...ij,...j->...i", st.hess, st.df_up)
    grad_eq = (d_grad2 - 2.0 * st.R_rho[..., None] * st.df
               - 2.0 * inv_m * st.grad_norm2[..., None] * st.df)
    ric_df = _es("...ij,...j->...i", st.cp.ricci, st.df_up)
    scalar_eq = (st.cp.grad_scalar - inv_m * st.R_rho[..., None] * st.df + ric_df / (n - 1))
    return trace_eq, grad_eq, scalar_eq


def lemma21_residuals(inst, p, tol: float = SOLITON_TOL) -> tuple[ResidualReport, ...]:
    st = _state(inst, p)
    a, b, c = lemma21_arrays(inst, st)
    return (report("lemma21_trace", a, st.points, tol),
            report("lemma21_grad_norm", b, st.points, tol, 1),
            report("lemma21_scalar_gradient", c, st.points, tol, 1))


# -- the D-tensor ---------------------------------------------------------

@dataclass(frozen=True)
class DTensor:
    d: np.ndarray


def d_tensor_array(st: PointState) -> np.ndarray:
    n = st.n
    g, ric, R, df = st.cp.g, st.cp.ricci, st.cp.scalar, st.df
    ric_df = _es("...il,...l->...i", ric, st.df_up)
    c1, c2 = 1.0 / (n - 2), 1.0 / ((n - 1) * (n - 2))
    # D_ijk = A_ijk - A_jik
    a = (c1 * _es("...kj,...i->...ijk", ric, df)
         + c2 * _es("...i,...jk->...ijk", ric_df, g)
         - c2 * R[..., None, None, None] * _es("...kj,...i->...ijk", g, df))
    return a - np.swapaxes(a, -3, -2)


def d_tensor(inst, p) -> DTensor:
    return DTensor(d_tensor_array(_state(inst, p)))


def d_traces(inst, p) -> tuple[np.ndarray, np.ndarray]:
    """(g^ij D_ijk, g^ik D_ijk)."""
    st = _state(inst, p)
    d = d_tensor_array(st)
    return (_es("...ij,...ijk->...k", st.cp.ginv, d), _es("...ik,...ijk->...j", st.cp.ginv, d))


def d_structure_report(inst, p, tol: float = TRACE_TOL) -> ResidualReport:
    st = _state(inst, p)
    d = d_tensor_array(st)
    t1, t2 = d_traces(inst, st)
    anti = d + np.swapaxes(d, -3, -2)
    worst = np.concatenate([np.abs(t1), np.abs(t2), np.abs(anti).reshape(anti.shape[:-3] + (-1,))], axis=-1)
    return report("d_tensor_structure", worst, st.points, tol, 1,
                  antisymmetry=float(np.abs(anti).max()))


def weyl_contracted(st: PointState) -> np.ndarray:
    """W_ijkl f^l."""
    return _es("...ijkl,...l->...ijk", st.cp.weyl, st.df_up)


def prop22_residual(inst, p, tol: float = SOLITON_TOL) -> ResidualReport:
    """max |D_ijk - W_ijkl f^l|."""
    st = _state(inst, p)
    d = d_tensor_array(st)
    wf = weyl_contracted(st)
    return report("prop22_d_equals_weyl_grad", d - wf, st.points, tol, 3,
                  max_abs_d=float(np.abs(d).max()), max_abs_weyl_grad=float(np.abs(wf).max()))


def d_norm2_direct(st: PointState) -> np.ndarray:
    d = d_tensor_array(st)
    G = st.cp.ginv
    return _es("...ijk,...abc,...ia,...jb,...kc->...", d, d, G, G, G, optimize=True)


def d_norm2_frame(st: PointState, frame: np.ndarray) -> np.ndarray:
    """Adapted-frame expression for |D|^2 (Ricci in the frame e_1 = grad f / |grad f|)."""
    n = st.n
    ric_f = _es("...ai,...ij,...bj->...ab", frame, st.cp.ricci, frame)
    R = st.cp.scalar
    r11 = ric_f[..., 0, 0]
    mixed = np.sum(ric_f[..., 0, 1:] ** 2, axis=-1)
    iso = ((R - r11) / (n - 1))[..., None, None] * np.eye(n - 1)
    dev = np.sum((ric_f[..., 1:, 1:] - iso) ** 2, axis=(-1, -2))
    return (2.0 * st.grad_norm2 / ((n - 1) * (n - 2) ** 2)) * ((n - 2) * mixed + (n - 1) * dev)


def prop23_norm_check(inst, p, tol: float = IDENTITY_TOL) -> ResidualReport:
    """Relative difference between the direct |D|^2 and the adapted-frame formula."""
    from .levelset import frame_vectors

    st = _state(inst, p)
    st.require_regular()
    direct = d_norm2_direct(st)
    framed = d_norm2_frame(st, frame_vectors(st))
    scale = np.maximum(np.maximum(np.abs(direct), np.abs(framed)), 1e-300)
    rel = np.where((direct == 0) & (framed == 0), 0.0, np.abs(direct - framed) / scale)
    # tiny |D|^2 are dominated by rounding; compare absolutely below 1e-14
    rel = np.where(scale < 1e-14, np.abs(direct - framed), rel)
    return report("prop23_d_norm_frame_formula", rel, st.points, tol,
                  direct=float(np.max(direct)), frame=float(np.max(framed)))


def ricci_identity_report(inst, p, tol: float = RICCI_IDENTITY_TOL) -> ResidualReport:
    """max |f_kji - f_kij - f^l R_lkji| (holds for any f)."""
    st = _state(inst, p)
    t = st.third
    res = t - np.swapaxes(t, -1, -2) - _es("...l,...lkji->...kji", st.df_up, st.cp.riemann)
    return report("ricci_identity", res, st.points, tol, 3)


# -- the weighted operator ------------------------------------------------

def laplacian(st: PointState, u: FieldSpec) -> np.ndarray:
    sj = evaluate_scalar_jet(u, st.points)
    return _es("...ij,...ij->...", st.cp.ginv, covariant_hessian(sj, st.cp))


def weighted_L(inst, u: FieldSpec, p) -> np.ndarray:
    """L(u) = e^{f/m} div(e^{-f/m} grad u) = Lap u - (1/m) <grad f, grad u>."""
    st = _state(inst, p)
    sj = evaluate_scalar_jet(u, st.points)
    lap = _es("...ij,...ij->...", st.cp.ginv, covariant_hessian(sj, st.cp))
    return lap - inst.params.inv_m * _es("...i,...i->...", st.df_up, sj.grad)


def theorem12_coefficient(n: int) -> float:
    """(n - 2) / (2 (n - 1)): the coefficient left after integrating L(R - rho)."""
    return (n - 2) / (2.0 * (n - 1))
