"""Geometry of the level sets of the potential.

At a regular point the adapted frame is the g-orthonormal frame with
``e_1 = grad f / |grad f|``; ``e_2..e_n`` then span the tangent space of the
level set through the point.  Frame vectors are stored as rows of chart
components.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import WrongDimension
from .soliton import (SOLITON_TOL, PointState, ResidualReport, SolitonInstance,
                      _state, report)

_es = np.einsum


@dataclass(frozen=True)
class AdaptedFrame:
    vectors: np.ndarray  # (..., n, n), row i = e_i

    def gram(self, g: np.ndarray) -> np.ndarray:
        return _es("...ai,...ij,...bj->...ab", self.vectors, g, self.vectors)


def _g_dot(g, u, v):
    return _es("...ij,...i,...j->...", g, u, v)


def frame_vectors(st: PointState) -> np.ndarray:
    """Gram-Schmidt frame seeded with e_1 = grad f/|grad f|.

    The remaining vectors come from the coordinate basis with the basis
    vector of largest |g(e_1, d_i)| dropped.  Two orthogonalization passes
    keep the Gram matrix at the identity to rounding.
    """
    st.require_regular()
    g = st.cp.g
    n = st.n
    batch = g.shape[:-2]
    e1 = st.df_up / np.sqrt(st.grad_norm2)[..., None]
    # g(e_1, d_i) = f_i / |grad f|
    drop = np.argmax(np.abs(st.df), axis=-1)
    idx = np.arange(n)
    keep = np.sort(np.where(idx[None, :] == np.reshape(drop, (-1, 1)), n, idx[None, :]), axis=1)[:, :n - 1]
    keep = keep.reshape(batch + (n - 1,))
    basis = np.eye(n)[keep]  # (..., n-1, n)
    vecs = [e1]
    for a in range(n - 1):
        v = basis[..., a, :]
        for _ in range(2):
            for w in vecs:
                v = v - _g_dot(g, v, w)[..., None] * w
        v = v / np.sqrt(_g_dot(g, v, v))[..., None]
        vecs.append(v)
    return np.stack(vecs, axis=-2)


def adapted_frame(inst: SolitonInstance, p) -> AdaptedFrame:
    return AdaptedFrame(frame_vectors(_state(inst, p)))


@dataclass(frozen=True)
class LevelSetReport:
    h: np.ndarray | None = None
    H: np.ndarray | None = None
    ric_mixed: np.ndarray | None = None
    ric_tangent_dev: np.ndarray | None = None
    lam: np.ndarray | None = None
    mu: np.ndarray | None = None
    sect: np.ndarray | None = None
    sect_closed_form: np.ndarray | None = None

    def merged(self, other: "LevelSetReport") -> "LevelSetReport":
        kw = {k: (getattr(other, k) if getattr(other, k) is not None else getattr(self, k))
              for k in self.__dataclass_fields__}
        return LevelSetReport(**kw)

    def to_dict(self) -> dict:
        out = {}
        for k in self.__dataclass_fields__:
            v = getattr(self, k)
            if v is not None:
                out[k] = np.asarray(v).tolist()
        return out


def _frame_and_state(inst, p):
    st = _state(inst, p)
    return st, frame_vectors(st)


def _tangent_hessian(st, frame):
    e_t = frame[..., 1:, :]
    return _es("...ai,...ij,...bj->...ab", e_t, st.hess, e_t) / np.sqrt(st.grad_norm2)[..., None, None]


def second_fundamental_form(inst, p) -> LevelSetReport:
    """h_ab = f_ab / |grad f| on the tangent frame vectors, and H = trace h."""
    st, frame = _frame_and_state(inst, p)
    h = _tangent_hessian(st, frame)
    return LevelSetReport(h=h, H=np.trace(h, axis1=-2, axis2=-1))


def ricci_eigenstructure(inst, p) -> LevelSetReport:
    st, frame = _frame_and_state(inst, p)
    n = st.n
    ric_f = _es("...ai,...ij,...bj->...ab", frame, st.cp.ricci, frame)
    lam = ric_f[..., 0, 0]
    mu = (st.cp.scalar - lam) / (n - 1)
    dev = np.abs(ric_f[..., 1:, 1:] - mu[..., None, None] * np.eye(n - 1)).max(axis=(-1, -2))
    return LevelSetReport(ric_mixed=ric_f[..., 0, 1:], ric_tangent_dev=dev, lam=lam, mu=mu)


def tangent_pairs(n: int):
    return list(itertools.combinations(range(1, n), 2))


def level_sectional(inst, p) -> LevelSetReport:
    """Gauss equation R^S_abab = R_abab + h_aa h_bb - h_ab^2 over all tangent planes."""
    st, frame = _frame_and_state(inst, p)
    n = st.n
    h = _tangent_hessian(st, frame)
    rf = _es("...ijkl,...ai,...bj,...ck,...dl->...abcd", st.cp.riemann, frame, frame, frame, frame,
             optimize=True)
    sect = []
    for a, b in tangent_pairs(n):
        ha, hb = a - 1, b - 1
        sect.append(rf[..., a, b, a, b] + h[..., ha, ha] * h[..., hb, hb] - h[..., ha, hb] ** 2)
    sect = np.stack(sect, axis=-1)
    closed = None
    if n == 3:
        r11 = _es("...i,...ij,...j->...", frame[..., 0, :], st.cp.ricci, frame[..., 0, :])
        closed = st.cp.scalar / 2.0 - r11 + st.R_rho ** 2 / st.grad_norm2
    return LevelSetReport(sect=sect, sect_closed_form=closed)


def levelset_report(inst, p) -> LevelSetReport:
    st = _state(inst, p)
    out = second_fundamental_form(inst, st)
    out = out.merged(ricci_eigenstructure(inst, st))
    return out.merged(level_sectional(inst, st))


def weyl_restricted_check(inst, p, tol: float = SOLITON_TOL) -> ResidualReport:
    """Largest frame component among W(e_i, e_j, e_k, e_1) and W(e_a, e_b, e_c, e_d)."""
    st = _state(inst, p)
    if st.n != 4:
        raise WrongDimension("restricted Weyl check is defined for n = 4")
    frame = frame_vectors(st)
    wf = _es("...ijkl,...ai,...bj,...ck,...dl->...abcd", st.cp.weyl, frame, frame, frame, frame,
             optimize=True)
    normal = np.abs(wf[..., 0]).max(axis=(-1, -2, -3))
    tangent = np.abs(wf[..., 1:, 1:, 1:, 1:]).max(axis=(-1, -2, -3, -4))
    return report("weyl_restricted", np.maximum(normal, tangent), st.points, tol,
                  normal=float(normal.max()), tangent=float(tangent.max()))


# -- per-level constancy suites ---------------------------------------------

def _spread(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(x.max() - x.min()) if x.size else 0.0


def prop24_checks(inst, level_points, tol: float = SOLITON_TOL) -> list[ResidualReport]:
    """Items (1)-(5) on points sampled from one level set.

    ``level_points`` has shape (k, n) and is assumed to lie on a single level
    of f.  Constancy claims become spreads over the samples.
    """
    st = _state(inst, level_points)
    n = st.n
    lv = levelset_report(inst, st)
    pts = st.points
    out = [
        report("prop24_1_grad_norm_constant", _spread(st.grad_norm2), pts[0], tol),
        report("prop24_1_scalar_constant", _spread(st.cp.scalar), pts[0], tol),
        report("prop24_2_mixed_ricci", lv.ric_mixed, pts, tol, 1),
    ]
    iso = lv.h - (lv.H / (n - 1))[..., None, None] * np.eye(n - 1)
    out.append(report("prop24_3_umbilic", iso, pts, tol, 2))
    mean_curv = lv.H - (n - 1) * st.R_rho / np.sqrt(st.grad_norm2)
    out.append(report("prop24_4_mean_curvature", mean_curv, pts, tol))
    out.append(report("prop24_4_mean_curvature_constant", _spread(lv.H), pts[0], tol))
    out.append(report("prop24_5_tangent_ricci_isotropic", lv.ric_tangent_dev, pts, tol))
    out.append(report("prop24_5_eigenvalues_constant",
                      max(_spread(lv.lam), _spread(lv.mu)), pts[0], tol))
    return out


def prop25_checks(inst, level_points, tol: float = SOLITON_TOL) -> list[ResidualReport]:
    """Constant sectional curvature of the level set (plus the n = 3 closed form)."""
    st = _state(inst, level_points)
    lv = level_sectional(inst, st)
    pts = st.points
    out = [report("prop25_level_sectional_spread", _spread(lv.sect), pts[0], tol,
                  mean=float(np.mean(lv.sect)))]
    if lv.sect_closed_form is not None:
        out.append(report("prop25_gauss_closed_form", lv.sect[..., 0] - lv.sect_closed_form, pts, tol))
    if st.n == 4:
        out.append(weyl_restricted_check(inst, st, tol))
    return out


def project_to_level(inst: SolitonInstance, anchor, count: int = 8, seed: int = 0,
                     radius: float = 0.15, iterations: int = 40) -> np.ndarray:
    """Random points on the level set of f through ``anchor``.

    Perturbations of the anchor are pulled back onto {f = f(anchor)} by
    Newton steps along the Euclidean gradient of f.  Points that leave the
    domain box or fail to converge are dropped, so fewer than ``count``
    points may come back.
    """
    from .fields import evaluate_scalar_jet

    rng = np.random.default_rng(seed)
    box = np.asarray(inst.box, dtype=float)
    anchor = np.asarray(anchor, dtype=float)
    c = float(evaluate_scalar_jet(inst.potential, anchor[None]).value[0])
    width = box[:, 1] - box[:, 0]
    pts = anchor + radius * width * rng.uniform(-1.0, 1.0, size=(count, inst.dim))
    pts[0] = anchor
    pts = np.clip(pts, box[:, 0], box[:, 1])
    alive = np.ones(count, dtype=bool)
    for _ in range(iterations):
        sj = evaluate_scalar_jet(inst.potential, pts[alive])
        g2 = np.sum(sj.grad ** 2, axis=-1)
        ok = g2 > 0
        step = np.where(ok[:, None], ((sj.value - c) / np.where(ok, g2, 1.0))[:, None] * sj.grad, 0.0)
        new = pts[alive] - step
        inside = np.all((new >= box[:, 0]) & (new <= box[:, 1]), axis=-1) & ok
        idx = np.nonzero(alive)[0]
        pts[idx[inside]] = new[inside]
        alive[idx[~inside]] = False
        if not alive.any():
            break
    if not alive.any():
        return pts[:0]
    sj = evaluate_scalar_jet(inst.potential, pts[alive])
    good = np.abs(sj.value - c) <= 1e-13 * (1.0 + abs(c))
    return pts[alive][good]
